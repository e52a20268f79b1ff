#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lcem/concepts.hpp"
#include "lcem/lexicon.hpp"

namespace lcem {

struct AlignParams {
  /// Fraction of source types that need a translation in the target concept.
  double theta_a = 0.8;
  std::size_t n_best = 10;
  /// Concepts need strictly more types than this.
  std::size_t min_types = 5;
  /// Largest allowed |s - t| / max(s, t) over type counts.
  double max_size_ratio = 0.4;
  bool case_fold = false;
};

struct OverlapParams {
  double theta_o = 0.3;
  std::size_t min_languages = 2;
  std::size_t min_types = 5;
  /// Count types instead of token occurrences per language.
  bool type_level = false;
  /// Require every considered language to clear theta_o.
  bool strict_all_languages = false;
  /// Languages considered; empty means every language in the concept set.
  std::vector<std::string> languages;
};

void validate(const AlignParams& params);
void validate(const OverlapParams& params);

struct AlignedPair {
  std::size_t source_id = 0;
  std::size_t target_id = 0;
  double fraction = 0.0;

  friend bool operator==(const AlignedPair&, const AlignedPair&) = default;
};

struct AlignmentReport {
  double calign = 0.0;
  /// One entry per aligned source concept, in source concept order.
  std::vector<AlignedPair> aligned_pairs;
  std::size_t eligible_source_count = 0;

  friend bool operator==(const AlignmentReport&, const AlignmentReport&) = default;
};

struct OverlapReport {
  double colap = 0.0;
  std::vector<std::size_t> overlapping_ids;
  /// Eligible concept id -> language -> fraction of the concept.
  std::map<std::size_t, std::map<std::string, double>> per_concept_language_fractions;
  std::size_t eligible_count = 0;

  friend bool operator==(const OverlapReport&, const OverlapReport&) = default;
};

std::size_t aligned_type_count(const Concept& source, const Concept& target,
                               const TranslationTable& table, std::size_t n_best);

bool is_theta_aligned(const Concept& source, const Concept& target,
                      const TranslationTable& table, const AlignParams& params);

AlignmentReport calign(const ConceptSet& source, const ConceptSet& target,
                       const TranslationTable& table, const AlignParams& params);

bool is_overlapping(const Concept& concept_, const OverlapParams& params,
                    const std::vector<std::string>& languages);
bool is_overlapping(const Concept& concept_, const OverlapParams& params);

OverlapReport colap(const ConceptSet& concepts, const OverlapParams& params);

enum class Metric { Calign, Colap };
enum class SweepAxis { ThetaA, ThetaO, NBest, MinTypes };

std::string_view to_string(Metric metric);
std::string_view to_string(SweepAxis axis);
Metric parse_metric(std::string_view text);
SweepAxis parse_axis(std::string_view text);

struct AlignLayer {
  ConceptSet source;
  ConceptSet target;
};

struct SweepInputs {
  std::map<int, AlignLayer> align_layers;
  const TranslationTable* table = nullptr;
  std::map<int, ConceptSet> mixed_layers;
};

struct SweepPoint {
  int layer = 0;
  double param = 0.0;
  double value = 0.0;
  std::optional<AlignmentReport> alignment;
  std::optional<OverlapReport> overlap;
};

struct SweepCurve {
  Metric metric = Metric::Calign;
  SweepAxis axis = SweepAxis::ThetaA;
  std::vector<double> values;
  AlignParams align_params;
  OverlapParams overlap_params;
  /// Ordered by layer, then parameter value.
  std::vector<SweepPoint> points;
};

/// Recomputes `metric` for every layer at each value of `axis`, all other
/// parameters taken from the base params. Values must be ascending.
SweepCurve sweep(const SweepInputs& inputs, Metric metric, SweepAxis axis,
                 const std::vector<double>& values, const AlignParams& align_params = {},
                 const OverlapParams& overlap_params = {});

}  // namespace lcem
