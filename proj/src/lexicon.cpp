#include "lcem/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <utility>

#include "lcem/error.hpp"
#include "lcem/parallel.hpp"
#include "text_io.hpp"

namespace lcem {
namespace {

constexpr std::size_t kChunkPairs = 256;
constexpr std::size_t kChunksPerWave = 64;

class Vocabulary {
 public:
  std::uint32_t intern(const std::string& word) {
    auto [it, inserted] = ids_.emplace(word, static_cast<std::uint32_t>(words_.size()));
    if (inserted) words_.push_back(word);
    return it->second;
  }
  const std::string& word(std::uint32_t id) const { return words_[id]; }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> words_;
};

struct IdPair {
  std::vector<std::uint32_t> source;  // position 0 is NULL
  std::vector<std::uint32_t> target;
};

/// Co-occurring target ids per source id, sorted; the translation
/// probabilities live in a parallel flat array.
struct CooccurrenceIndex {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> targets;

  std::size_t slot(std::uint32_t source, std::uint32_t target) const {
    const auto begin = targets.begin() + static_cast<std::ptrdiff_t>(offsets[source]);
    const auto end = targets.begin() + static_cast<std::ptrdiff_t>(offsets[source + 1]);
    return static_cast<std::size_t>(std::lower_bound(begin, end, target) - targets.begin());
  }
};

CooccurrenceIndex build_index(const std::vector<IdPair>& pairs, std::size_t source_vocab) {
  std::vector<std::uint64_t> keys;
  for (const auto& pair : pairs) {
    for (auto s : pair.source) {
      for (auto t : pair.target) keys.push_back(std::uint64_t{s} << 32 | t);
    }
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  CooccurrenceIndex index;
  index.offsets.assign(source_vocab + 1, 0);
  index.targets.reserve(keys.size());
  for (auto key : keys) {
    ++index.offsets[(key >> 32) + 1];
    index.targets.push_back(static_cast<std::uint32_t>(key & 0xFFFFFFFFu));
  }
  for (std::size_t s = 0; s < source_vocab; ++s) index.offsets[s + 1] += index.offsets[s];
  return index;
}

bool probability_order(const Translation& a, const Translation& b) {
  if (a.probability != b.probability) return a.probability > b.probability;
  return a.target < b.target;
}

}  // namespace

const std::vector<Translation>* TranslationTable::find(const std::string& source) const {
  const auto it = entries.find(source);
  return it == entries.end() ? nullptr : &it->second;
}

TranslationTable make_table(const TranslationWeights& weights, std::string source_language,
                            std::string target_language) {
  TranslationTable table;
  table.source_language = std::move(source_language);
  table.target_language = std::move(target_language);
  for (const auto& [source, targets] : weights) {
    double total = 0.0;
    for (const auto& [target, weight] : targets) {
      if (weight > 0.0) total += weight;
    }
    if (!(total > 0.0)) continue;
    std::vector<Translation> row;
    row.reserve(targets.size());
    for (const auto& [target, weight] : targets) {
      if (weight > 0.0) row.push_back({target, weight / total});
    }
    std::sort(row.begin(), row.end(), probability_order);
    table.entries.emplace(source, std::move(row));
  }
  return table;
}

TranslationTable estimate_ibm1(const ParallelCorpus& corpus, int iterations, unsigned jobs) {
  if (corpus.pairs.empty()) throw Error(ErrorCode::EmptyCorpus, "parallel corpus has no pairs");
  if (iterations < 1) throw Error(ErrorCode::InvalidArgument, "iterations must be at least 1");

  Vocabulary source_vocab;
  Vocabulary target_vocab;
  source_vocab.intern("");  // NULL
  std::vector<IdPair> pairs;
  pairs.reserve(corpus.pairs.size());
  for (const auto& pair : corpus.pairs) {
    IdPair ids;
    ids.source.push_back(0);
    for (const auto& w : pair.source_tokens) ids.source.push_back(source_vocab.intern(w));
    for (const auto& w : pair.target_tokens) ids.target.push_back(target_vocab.intern(w));
    pairs.push_back(std::move(ids));
  }

  const CooccurrenceIndex index = build_index(pairs, source_vocab.size());
  std::vector<double> prob(index.targets.size());
  for (std::size_t s = 0; s < source_vocab.size(); ++s) {
    const std::size_t width = index.offsets[s + 1] - index.offsets[s];
    for (std::size_t i = index.offsets[s]; i < index.offsets[s + 1]; ++i) {
      prob[i] = 1.0 / static_cast<double>(width);
    }
  }

  const std::size_t chunks = (pairs.size() + kChunkPairs - 1) / kChunkPairs;
  std::vector<double> counts(prob.size());
  for (int iteration = 0; iteration < iterations; ++iteration) {
    std::fill(counts.begin(), counts.end(), 0.0);
    for (std::size_t wave = 0; wave < chunks; wave += kChunksPerWave) {
      const std::size_t wave_chunks = std::min(kChunksPerWave, chunks - wave);
      std::vector<std::vector<std::pair<std::size_t, double>>> partial(wave_chunks);
      parallel_for(wave_chunks, jobs, [&](std::size_t c) {
        const std::size_t begin = (wave + c) * kChunkPairs;
        const std::size_t end = std::min(begin + kChunkPairs, pairs.size());
        auto& out = partial[c];
        std::vector<std::size_t> slots;
        for (std::size_t p = begin; p < end; ++p) {
          const auto& pair = pairs[p];
          for (auto t : pair.target) {
            slots.clear();
            double norm = 0.0;
            for (auto s : pair.source) {
              slots.push_back(index.slot(s, t));
              norm += prob[slots.back()];
            }
            for (auto slot : slots) out.emplace_back(slot, prob[slot] / norm);
          }
        }
      });
      for (const auto& chunk : partial) {
        for (const auto& [slot, value] : chunk) counts[slot] += value;
      }
    }
    for (std::size_t s = 0; s < source_vocab.size(); ++s) {
      double total = 0.0;
      for (std::size_t i = index.offsets[s]; i < index.offsets[s + 1]; ++i) total += counts[i];
      if (total <= 0.0) continue;
      for (std::size_t i = index.offsets[s]; i < index.offsets[s + 1]; ++i) {
        prob[i] = counts[i] / total;
      }
    }
  }

  TranslationWeights weights;
  for (std::uint32_t s = 1; s < source_vocab.size(); ++s) {
    auto& row = weights[source_vocab.word(s)];
    for (std::size_t i = index.offsets[s]; i < index.offsets[s + 1]; ++i) {
      row[target_vocab.word(index.targets[i])] = prob[i];
    }
  }
  return make_table(weights, corpus.source_language, corpus.target_language);
}

TranslationTable count_from_alignments(const ParallelCorpus& corpus,
                                       const AlignmentSet& alignments) {
  if (alignments.links.size() != corpus.pairs.size()) {
    throw Error(ErrorCode::LineCountMismatch, "alignment set does not match corpus size");
  }
  TranslationWeights weights;
  for (std::size_t p = 0; p < corpus.pairs.size(); ++p) {
    const auto& pair = corpus.pairs[p];
    for (const auto& [i, j] : alignments.links[p]) {
      if (i >= pair.source_tokens.size() || j >= pair.target_tokens.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "link outside sentence pair " + std::to_string(p));
      }
      weights[pair.source_tokens[i]][pair.target_tokens[j]] += 1.0;
    }
  }
  return make_table(weights, corpus.source_language, corpus.target_language);
}

TranslationTable parse_dictionary(const std::string& body, std::string source_language,
                                  std::string target_language) {
  TranslationWeights weights;
  const auto lines = text::split_lines(body);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto fields = text::split_whitespace(lines[i]);
    if (fields.empty()) continue;
    const std::string where = "line " + std::to_string(i + 1);
    double probability = 0.0;
    if (fields.size() != 3 || !text::parse_number(fields[2], probability) ||
        std::isnan(probability)) {
      throw Error(ErrorCode::MalformedLine, where + ": expected 'source target probability'");
    }
    if (!(probability > 0.0) || std::isinf(probability)) {
      throw Error(ErrorCode::NonPositiveProbability, where + ": " + fields[2]);
    }
    weights[fields[0]][fields[1]] += probability;
  }
  return make_table(weights, ascii_lower(std::move(source_language)),
                    ascii_lower(std::move(target_language)));
}

TranslationTable load_dictionary(const std::filesystem::path& path, std::string source_language,
                                 std::string target_language) {
  return parse_dictionary(text::read_file(path), std::move(source_language),
                          std::move(target_language));
}

std::string format_dictionary(const TranslationTable& table) {
  std::string out;
  for (const auto& [source, row] : table.entries) {
    for (const auto& translation : row) {
      out += source;
      out += '\t';
      out += translation.target;
      out += '\t';
      out += text::format_double(translation.probability);
      out += '\n';
    }
  }
  return out;
}

void write_dictionary(const std::filesystem::path& path, const TranslationTable& table) {
  text::write_file(path, format_dictionary(table));
}

std::vector<std::string> nbest(const TranslationTable& table, const std::string& word,
                               std::size_t n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be at least 1");
  std::vector<std::string> out;
  if (const auto* row = table.find(word)) {
    const std::size_t take = std::min(n, row->size());
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back((*row)[i].target);
  }
  return out;
}

bool is_equivalent(const TranslationTable& table, const std::string& source_word,
                   const std::string& target_word, std::size_t n) {
  const auto* row = table.find(source_word);
  if (row == nullptr) return false;
  const std::size_t take = std::min(n, row->size());
  for (std::size_t i = 0; i < take; ++i) {
    if ((*row)[i].target == target_word) return true;
  }
  return false;
}

TranslationTable fold_case(const TranslationTable& table) {
  TranslationWeights weights;
  for (const auto& [source, row] : table.entries) {
    auto& folded = weights[ascii_lower(source)];
    for (const auto& translation : row) {
      folded[ascii_lower(translation.target)] += translation.probability;
    }
  }
  return make_table(weights, table.source_language, table.target_language);
}

}  // namespace lcem
