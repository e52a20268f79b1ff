#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lcem/corpus_io.hpp"
#include "lcem/kmeans.hpp"

namespace lcem {

struct FilterSpec {
  std::size_t min_type_frequency = 10;
  std::optional<std::size_t> max_occurrences_per_type;
};

void validate(const FilterSpec& spec);

/// Rows of a dataset whose (language, surface) type is frequent enough.
struct FilteredDataset {
  ValidatedDataset source;
  /// Original dataset row for each retained row, ascending.
  std::vector<std::size_t> retained_rows;

  std::size_t rows() const { return retained_rows.size(); }
  RowMatrix<float> matrix() const;
  const TokenRecord& token(std::size_t retained) const {
    return source.tokens().entries[retained_rows[retained]];
  }
  std::set<std::string> languages() const;
};

FilteredDataset filter_types(const ValidatedDataset& dataset, const FilterSpec& spec);

enum class Regime { PerLanguage, Mixed };

std::string_view to_string(Regime regime);
Regime parse_regime(std::string_view text);

struct Concept {
  std::size_t id = 0;
  /// Original dataset rows; empty for concepts read back from a concept file.
  std::vector<std::size_t> member_rows;
  /// language -> surface -> token occurrences in this concept.
  std::map<std::string, std::map<std::string, std::size_t>> types;
  std::size_t size_tokens = 0;
  std::size_t size_types = 0;

  std::size_t tokens_in(const std::string& language) const;
  std::size_t types_in(const std::string& language) const;

  friend bool operator==(const Concept&, const Concept&) = default;
};

struct ConceptSet {
  std::vector<Concept> concepts;
  int layer = 0;
  Regime regime = Regime::PerLanguage;
  std::string dataset_id;
  /// Clustering summary; not serialized.
  double inertia = 0.0;
  int iterations = 0;

  std::set<std::string> languages() const;
  const Concept* find(std::size_t id) const;
};

Clustering<float> cluster(const FilteredDataset& dataset, const ClusteringSpec& spec);

ConceptSet build_concepts(const Clustering<float>& clustering, const FilteredDataset& dataset,
                          Regime regime);

using LayerLoader = std::function<EmbeddingMatrix(int layer)>;

inline const std::vector<int> kDefaultLayers = {0, 1, 3, 6, 9, 12};

/// Filter, cluster and build concepts for every requested layer. Layers run
/// concurrently on up to `jobs` threads; failures are rethrown as LayerError.
std::map<int, ConceptSet> discover(const TokenTable& tokens, const LayerLoader& load_layer,
                                   const FilterSpec& filter_spec,
                                   const ClusteringSpec& clustering_spec, Regime regime,
                                   const std::vector<int>& layers = kDefaultLayers,
                                   unsigned jobs = 1, const std::string& dataset_id = {});

std::map<int, ConceptSet> discover(const TokenTable& tokens,
                                   const std::map<int, std::filesystem::path>& layer_files,
                                   const FilterSpec& filter_spec,
                                   const ClusteringSpec& clustering_spec, Regime regime,
                                   const std::vector<int>& layers = kDefaultLayers,
                                   unsigned jobs = 1, const std::string& dataset_id = {});

inline constexpr char kConceptHeader[] = "#lcem-concepts v1";

std::string format_concepts(const ConceptSet& set);
ConceptSet parse_concepts(const std::string& text);
void write_concepts(const std::filesystem::path& path, const ConceptSet& set);
ConceptSet load_concepts(const std::filesystem::path& path);

}  // namespace lcem
