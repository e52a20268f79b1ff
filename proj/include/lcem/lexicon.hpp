#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lcem/corpus_io.hpp"

namespace lcem {

struct Translation {
  std::string target;
  double probability = 0.0;

  friend bool operator==(const Translation&, const Translation&) = default;
};

/// Directional lexicon p(target | source). Each source's candidates sum to
/// one and are ordered by probability descending, then target bytes.
struct TranslationTable {
  std::map<std::string, std::vector<Translation>> entries;
  std::string source_language;
  std::string target_language;

  const std::vector<Translation>* find(const std::string& source) const;
  friend bool operator==(const TranslationTable&, const TranslationTable&) = default;
};

using TranslationWeights = std::map<std::string, std::map<std::string, double>>;

/// Normalizes non-negative weights per source into a table. Zero weights are
/// dropped, as are sources left without mass.
TranslationTable make_table(const TranslationWeights& weights, std::string source_language,
                            std::string target_language);

inline constexpr int kDefaultEmIterations = 5;

/// IBM Model 1 with a NULL source word, uniform start over co-occurring
/// pairs. Expected counts are gathered over fixed sentence chunks and merged
/// in chunk order, so the table does not depend on `jobs`.
TranslationTable estimate_ibm1(const ParallelCorpus& corpus,
                               int iterations = kDefaultEmIterations, unsigned jobs = 1);

/// Relative frequency of aligned (source, target) word pairs.
TranslationTable count_from_alignments(const ParallelCorpus& corpus,
                                       const AlignmentSet& alignments);

TranslationTable parse_dictionary(const std::string& body, std::string source_language = {},
                                  std::string target_language = {});
TranslationTable load_dictionary(const std::filesystem::path& path,
                                 std::string source_language = {},
                                 std::string target_language = {});
std::string format_dictionary(const TranslationTable& table);
void write_dictionary(const std::filesystem::path& path, const TranslationTable& table);

std::vector<std::string> nbest(const TranslationTable& table, const std::string& word,
                               std::size_t n);

bool is_equivalent(const TranslationTable& table, const std::string& source_word,
                   const std::string& target_word, std::size_t n);

/// Merges entries whose surfaces differ only in ASCII case.
TranslationTable fold_case(const TranslationTable& table);

}  // namespace lcem
