#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lcem/concepts.hpp"
#include "lcem/lexicon.hpp"
#include "lcem/metrics.hpp"

namespace lcem {

struct LayerFiles {
  std::filesystem::path tokens;
  std::map<int, std::filesystem::path> embeddings;
};

enum class DictionaryMethod { Ibm1, Alignments };

/// Everything one pipeline invocation needs. Relative paths in the config
/// document resolve against the document's directory.
struct RunConfig {
  std::map<std::string, LayerFiles> languages;
  std::optional<LayerFiles> mixed;
  std::vector<int> layers = kDefaultLayers;
  std::string source_language;
  std::string target_language;

  std::optional<std::filesystem::path> corpus_source;
  std::optional<std::filesystem::path> corpus_target;
  std::optional<std::filesystem::path> alignments;
  /// External dictionary; when unset the metrics read <out>/dict.tsv.
  std::optional<std::filesystem::path> dictionary;
  DictionaryMethod dictionary_method = DictionaryMethod::Ibm1;
  int em_iterations = kDefaultEmIterations;

  FilterSpec filter;
  ClusteringSpec clustering;
  AlignParams align;
  OverlapParams overlap;
  Regime regime = Regime::PerLanguage;
  std::filesystem::path out_dir = "out";
  unsigned jobs = 1;
};

/// Parses a config document. Throws Error(Config) on schema problems.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

std::filesystem::path concept_file(const RunConfig& config, Regime regime, int layer,
                                   const std::string& language = {});
std::filesystem::path dictionary_file(const RunConfig& config);

void run_cluster(const RunConfig& config, std::ostream& log);
void run_dict(const RunConfig& config, std::ostream& log);

struct MetricRequest {
  Metric metric = Metric::Calign;
  std::optional<SweepAxis> axis;
  std::vector<double> values;
  bool svg = false;
};

void run_metric(const RunConfig& config, const MetricRequest& request, std::ostream& log);

struct ExportRequest {
  std::vector<std::size_t> ids;
  int layer = 0;
  std::string language;
};

void run_export(const RunConfig& config, const ExportRequest& request, std::ostream& out);

}  // namespace lcem
