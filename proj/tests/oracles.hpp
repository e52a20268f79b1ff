#pragma once

// Brute-force reference computations and random instance generators used by
// the unit and acceptance suites. Nothing here calls into the metric code
// paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lcem/concepts.hpp"
#include "lcem/lexicon.hpp"
#include "lcem/metrics.hpp"

namespace lcem::testing {

using Occurrence = std::pair<std::string, std::string>;  // (language, surface)

inline Concept concept_from(std::size_t id, const std::vector<Occurrence>& occurrences) {
  Concept c;
  c.id = id;
  for (const auto& [language, surface] : occurrences) ++c.types[language][surface];
  c.size_tokens = occurrences.size();
  for (const auto& [language, surfaces] : c.types) c.size_types += surfaces.size();
  return c;
}

inline Concept mono_concept(std::size_t id, const std::string& language,
                            const std::vector<std::string>& words) {
  std::vector<Occurrence> occ;
  for (const auto& w : words) occ.emplace_back(language, w);
  return concept_from(id, occ);
}

/// T(w_s, w_t): w_t sits among the first n candidates of w_s, found by a
/// full scan of the stored candidate list.
inline bool oracle_translates(const TranslationTable& table, const std::string& ws,
                              const std::string& wt, std::size_t n) {
  for (const auto& [source, row] : table.entries) {
    if (source != ws) continue;
    for (std::size_t rank = 0; rank < row.size(); ++rank) {
      if (row[rank].target == wt) return rank < n;
    }
  }
  return false;
}

inline std::vector<std::string> all_types(const Concept& c) {
  std::vector<std::string> out;
  for (const auto& [language, surfaces] : c.types) {
    for (const auto& [surface, count] : surfaces) out.push_back(surface);
  }
  return out;
}

inline std::size_t oracle_aligned_count(const Concept& s, const Concept& t,
                                        const TranslationTable& table, std::size_t n) {
  std::size_t count = 0;
  const auto target_words = all_types(t);
  for (const auto& ws : all_types(s)) {
    std::size_t inner = 0;
    for (const auto& wt : target_words) inner += oracle_translates(table, ws, wt, n) ? 1 : 0;
    if (inner > 0) ++count;
  }
  return count;
}

struct OracleAlignment {
  double calign = 0.0;
  std::vector<AlignedPair> pairs;
  std::size_t eligible = 0;
};

inline OracleAlignment oracle_calign(const ConceptSet& source, const ConceptSet& target,
                                     const TranslationTable& table, const AlignParams& p) {
  OracleAlignment out;
  for (const auto& s : source.concepts) {
    const std::size_t s_types = all_types(s).size();
    if (!(s_types > p.min_types)) continue;
    ++out.eligible;
    std::optional<AlignedPair> best;
    for (const auto& t : target.concepts) {
      const std::size_t t_types = all_types(t).size();
      if (!(t_types > p.min_types)) continue;
      const double larger = static_cast<double>(std::max(s_types, t_types));
      const double diff = std::abs(static_cast<double>(s_types) - static_cast<double>(t_types));
      if (diff / larger > p.max_size_ratio) continue;
      const double fraction =
          static_cast<double>(oracle_aligned_count(s, t, table, p.n_best)) / static_cast<double>(s_types);
      if (!(fraction >= p.theta_a)) continue;
      if (!best || fraction > best->fraction || (fraction == best->fraction && t.id < best->target_id)) {
        best = AlignedPair{s.id, t.id, fraction};
      }
    }
    if (best) out.pairs.push_back(*best);
  }
  if (out.eligible > 0) out.calign = static_cast<double>(out.pairs.size()) / static_cast<double>(out.eligible);
  return out;
}

struct MixedInstance {
  ConceptSet set;
  std::vector<std::vector<Occurrence>> occurrences;  // parallel to set.concepts
};

struct OracleOverlap {
  double colap = 0.0;
  std::vector<std::size_t> overlapping;
  std::size_t eligible = 0;
};

/// Recounts languages straight from each concept's occurrence list.
inline OracleOverlap oracle_colap(const MixedInstance& instance, const OverlapParams& p) {
  std::set<std::string> languages(p.languages.begin(), p.languages.end());
  if (languages.empty()) {
    for (const auto& occ : instance.occurrences) {
      for (const auto& [language, surface] : occ) languages.insert(language);
    }
  }
  OracleOverlap out;
  for (std::size_t i = 0; i < instance.occurrences.size(); ++i) {
    const auto& occ = instance.occurrences[i];
    const std::set<Occurrence> types(occ.begin(), occ.end());
    if (!(types.size() > p.min_types)) continue;
    ++out.eligible;
    std::size_t clearing = 0;
    for (const auto& language : languages) {
      std::size_t part = 0;
      std::size_t whole = 0;
      if (p.type_level) {
        for (const auto& t : types) part += t.first == language ? 1 : 0;
        whole = types.size();
      } else {
        for (const auto& o : occ) part += o.first == language ? 1 : 0;
        whole = occ.size();
      }
      if (static_cast<double>(part) / static_cast<double>(whole) >= p.theta_o) ++clearing;
    }
    const bool overlapping = p.strict_all_languages
                                 ? clearing == languages.size() && clearing >= p.min_languages
                                 : clearing >= p.min_languages;
    if (overlapping) out.overlapping.push_back(instance.set.concepts[i].id);
  }
  if (out.eligible > 0) out.colap = static_cast<double>(out.overlapping.size()) / static_cast<double>(out.eligible);
  return out;
}

// ---- generators ------------------------------------------------------------

inline std::string word(const std::string& prefix, std::size_t i) { return prefix + std::to_string(i); }

inline std::vector<std::size_t> sample_distinct(std::mt19937_64& rng, std::size_t pool, std::size_t count) {
  std::vector<std::size_t> all(pool);
  for (std::size_t i = 0; i < pool; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(count, pool));
  return all;
}

struct AlignInstance {
  ConceptSet source;
  ConceptSet target;
  TranslationTable table;
  AlignParams params;
};

/// Random source/target concept sets over "s<i>"/"t<i>" vocabularies with a
/// noisy dictionary where s<i> usually, but not always, ranks t<i> high.
inline AlignInstance random_align_instance(std::mt19937_64& rng, std::size_t max_concepts = 50,
                                           std::size_t max_types = 30, std::size_t vocab = 60) {
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  AlignInstance inst;
  inst.source.regime = inst.target.regime = Regime::PerLanguage;
  inst.source.layer = inst.target.layer = static_cast<int>(uniform(0, 12));

  const std::size_t n_source = uniform(1, max_concepts);
  const std::size_t n_target = uniform(1, max_concepts);
  std::vector<std::vector<std::size_t>> source_words;
  for (std::size_t c = 0; c < n_source; ++c) {
    auto ids = sample_distinct(rng, vocab, uniform(1, max_types));
    source_words.push_back(ids);
    std::vector<std::string> words;
    for (auto i : ids) words.push_back(word("s", i));
    inst.source.concepts.push_back(mono_concept(c * 3 + 1, "xx", words));
  }
  for (std::size_t c = 0; c < n_target; ++c) {
    std::vector<std::size_t> ids;
    if (unit(rng) < 0.6) {
      // Mostly a translation of some source concept, with edits.
      const auto& base = source_words[uniform(0, n_source - 1)];
      for (auto i : base) {
        if (unit(rng) < 0.85) ids.push_back(i);
      }
      for (std::size_t extra = uniform(0, 3); extra > 0; --extra) ids.push_back(uniform(0, vocab - 1));
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
      if (ids.size() > max_types) ids.resize(max_types);
      if (ids.empty()) ids.push_back(uniform(0, vocab - 1));
    } else {
      ids = sample_distinct(rng, vocab, uniform(1, max_types));
    }
    std::vector<std::string> words;
    for (auto i : ids) words.push_back(word("t", i));
    // Target ids deliberately not in insertion order.
    inst.target.concepts.push_back(mono_concept((n_target - c) * 2, "yy", words));
  }

  TranslationWeights weights;
  for (std::size_t i = 0; i < vocab; ++i) {
    if (unit(rng) < 0.05) continue;  // out-of-dictionary word
    auto& row = weights[word("s", i)];
    row[word("t", i)] = unit(rng) + 0.05;
    for (std::size_t extra = uniform(0, 14); extra > 0; --extra) {
      // Coarse weights so probability ties occur.
      row[word("t", uniform(0, vocab - 1))] = 0.05 * static_cast<double>(uniform(1, 20));
    }
  }
  inst.table = make_table(weights, "xx", "yy");

  const double thetas[] = {0.3, 0.5, 0.6, 0.7, 0.75, 0.8, 0.85, 0.9, 1.0};
  inst.params.theta_a = thetas[uniform(0, 8)];
  inst.params.n_best = uniform(1, 20);
  inst.params.min_types = uniform(0, 8);
  const double ratios[] = {0.0, 0.2, 0.4, 0.6, 0.9};
  inst.params.max_size_ratio = ratios[uniform(0, 4)];
  return inst;
}

inline MixedInstance random_mixed_instance(std::mt19937_64& rng, std::size_t max_concepts = 50,
                                           std::size_t max_tokens = 60, std::size_t languages = 3) {
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  MixedInstance inst;
  inst.set.regime = Regime::Mixed;
  const std::size_t n = uniform(1, max_concepts);
  for (std::size_t c = 0; c < n; ++c) {
    // Language mix: a dominant language plus random others.
    const std::size_t tokens = uniform(1, max_tokens);
    std::vector<double> weights(languages);
    for (auto& w : weights) w = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    weights[uniform(0, languages - 1)] += static_cast<double>(uniform(0, 3));
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    std::vector<Occurrence> occ;
    for (std::size_t t = 0; t < tokens; ++t) {
      const std::size_t lang = pick(rng);
      occ.emplace_back(word("l", lang), word("w", uniform(0, 25)));
    }
    inst.set.concepts.push_back(concept_from(c, occ));
    inst.occurrences.push_back(std::move(occ));
  }
  return inst;
}

/// Well-separated isotropic Gaussian blobs; returns points and true labels.
inline std::pair<RowMatrix<float>, std::vector<std::size_t>> gaussian_blobs(
    std::mt19937_64& rng, std::size_t blobs, std::size_t points, std::size_t dim,
    double sigma, double separation) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  RowMatrix<double> centers(static_cast<Eigen::Index>(blobs), static_cast<Eigen::Index>(dim));
  centers.setZero();
  // Axis-aligned centers: pairwise distance is separation * sqrt(2).
  for (std::size_t b = 0; b < blobs; ++b) centers(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b % dim)) = separation * static_cast<double>(1 + b / dim);
  RowMatrix<float> out(static_cast<Eigen::Index>(points), static_cast<Eigen::Index>(dim));
  std::vector<std::size_t> labels(points);
  for (std::size_t i = 0; i < points; ++i) {
    labels[i] = i % blobs;
    for (std::size_t d = 0; d < dim; ++d) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = static_cast<float>(
          centers(static_cast<Eigen::Index>(labels[i]), static_cast<Eigen::Index>(d)) + sigma * gauss(rng));
    }
  }
  return {out, labels};
}

/// Best agreement between predicted and true labels over all label maps
/// (exhaustive over permutations; intended for small k).
inline double permutation_accuracy(const std::vector<std::size_t>& predicted,
                                   const std::vector<std::size_t>& truth, std::size_t k) {
  std::vector<std::size_t> perm(k);
  for (std::size_t i = 0; i < k; ++i) perm[i] = i;
  std::size_t best = 0;
  do {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += perm[predicted[i]] == truth[i] ? 1 : 0;
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(truth.size());
}

}  // namespace lcem::testing
