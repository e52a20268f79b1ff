#include "lcem/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lcem/error.hpp"

namespace lcem {
namespace {

const std::map<std::string, std::size_t> kNoTypes;

const std::map<std::string, std::size_t>& types_of(const Concept& concept_,
                                                   const std::string& language) {
  const auto it = concept_.types.find(language);
  return it == concept_.types.end() ? kNoTypes : it->second;
}

/// Language a monolingual concept is written in, checked against `expected`
/// when that is known.
std::string concept_language(const Concept& concept_, const std::string& expected,
                             const char* side) {
  if (concept_.types.size() > 1) {
    throw Error(ErrorCode::LanguageMismatch,
                std::string(side) + " concept " + std::to_string(concept_.id) +
                    " spans several languages");
  }
  if (concept_.types.empty()) return expected;
  const std::string& language = concept_.types.begin()->first;
  if (!expected.empty() && language != expected) {
    throw Error(ErrorCode::LanguageMismatch,
                std::string(side) + " concept " + std::to_string(concept_.id) + " is '" +
                    language + "', dictionary expects '" + expected + "'");
  }
  return language;
}

bool eligible(const Concept& concept_, std::size_t min_types) {
  return concept_.size_types > min_types;
}

bool sizes_compatible(const Concept& source, const Concept& target, double max_ratio) {
  const auto s = static_cast<double>(source.size_types);
  const auto t = static_cast<double>(target.size_types);
  const double larger = std::max(s, t);
  if (larger == 0.0) return true;
  return std::abs(s - t) / larger <= max_ratio;
}

std::size_t covered_types(const std::map<std::string, std::size_t>& source_types,
                          const std::map<std::string, std::size_t>& target_types,
                          const TranslationTable& table, std::size_t n_best) {
  std::size_t covered = 0;
  for (const auto& [word, count] : source_types) {
    const auto* row = table.find(word);
    if (row == nullptr) continue;
    const std::size_t take = std::min(n_best, row->size());
    for (std::size_t i = 0; i < take; ++i) {
      if (target_types.contains((*row)[i].target)) {
        ++covered;
        break;
      }
    }
  }
  return covered;
}

Concept fold_concept(const Concept& concept_) {
  Concept folded;
  folded.id = concept_.id;
  folded.member_rows = concept_.member_rows;
  folded.size_tokens = concept_.size_tokens;
  for (const auto& [language, surfaces] : concept_.types) {
    auto& out = folded.types[language];
    for (const auto& [surface, count] : surfaces) out[ascii_lower(surface)] += count;
    folded.size_types += out.size();
  }
  return folded;
}

ConceptSet fold_concepts(const ConceptSet& set) {
  ConceptSet folded = set;
  for (auto& concept_ : folded.concepts) concept_ = fold_concept(concept_);
  return folded;
}

void check_per_language(const ConceptSet& set, const char* side) {
  if (set.regime != Regime::PerLanguage) {
    throw Error(ErrorCode::RegimeMismatch,
                std::string(side) + " concepts come from mixed-language discovery");
  }
}

AlignmentReport calign_checked(const ConceptSet& source, const ConceptSet& target,
                               const TranslationTable& table, const AlignParams& params) {
  std::string source_language = table.source_language;
  std::string target_language = table.target_language;
  for (const auto& c : source.concepts) source_language = concept_language(c, source_language, "source");
  for (const auto& c : target.concepts) target_language = concept_language(c, target_language, "target");

  std::vector<const Concept*> targets;
  for (const auto& c : target.concepts) {
    if (eligible(c, params.min_types)) targets.push_back(&c);
  }

  const auto count = static_cast<std::ptrdiff_t>(source.concepts.size());
  std::vector<std::optional<AlignedPair>> best(source.concepts.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const Concept& s = source.concepts[static_cast<std::size_t>(i)];
    if (!eligible(s, params.min_types)) continue;
    const auto& s_types = types_of(s, source_language);
    auto& slot = best[static_cast<std::size_t>(i)];
    for (const Concept* t : targets) {
      if (!sizes_compatible(s, *t, params.max_size_ratio)) continue;
      const std::size_t covered =
          covered_types(s_types, types_of(*t, target_language), table, params.n_best);
      const double fraction = static_cast<double>(covered) / static_cast<double>(s.size_types);
      if (fraction < params.theta_a) continue;
      if (!slot || fraction > slot->fraction ||
          (fraction == slot->fraction && t->id < slot->target_id)) {
        slot = AlignedPair{s.id, t->id, fraction};
      }
    }
  }

  AlignmentReport report;
  for (std::size_t i = 0; i < source.concepts.size(); ++i) {
    if (eligible(source.concepts[i], params.min_types)) ++report.eligible_source_count;
    if (best[i]) report.aligned_pairs.push_back(*best[i]);
  }
  if (report.eligible_source_count > 0) {
    report.calign = static_cast<double>(report.aligned_pairs.size()) /
                    static_cast<double>(report.eligible_source_count);
  }
  return report;
}

}  // namespace

void validate(const AlignParams& params) {
  if (!(params.theta_a > 0.0 && params.theta_a <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "theta_a must lie in (0, 1]");
  }
  if (params.n_best < 1) throw Error(ErrorCode::InvalidArgument, "n_best must be at least 1");
  if (!(params.max_size_ratio >= 0.0 && params.max_size_ratio < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "max_size_ratio must lie in [0, 1)");
  }
}

void validate(const OverlapParams& params) {
  if (!(params.theta_o > 0.0 && params.theta_o <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "theta_o must lie in (0, 1]");
  }
  if (params.min_languages < 2) {
    throw Error(ErrorCode::InvalidArgument, "min_languages must be at least 2");
  }
}

std::size_t aligned_type_count(const Concept& source, const Concept& target,
                               const TranslationTable& table, std::size_t n_best) {
  const std::string s_lang = concept_language(source, table.source_language, "source");
  const std::string t_lang = concept_language(target, table.target_language, "target");
  return covered_types(types_of(source, s_lang), types_of(target, t_lang), table, n_best);
}

bool is_theta_aligned(const Concept& source, const Concept& target,
                      const TranslationTable& table, const AlignParams& params) {
  validate(params);
  if (params.case_fold) {
    return is_theta_aligned(fold_concept(source), fold_concept(target), fold_case(table),
                            AlignParams{params.theta_a, params.n_best, params.min_types,
                                        params.max_size_ratio, false});
  }
  const std::size_t covered = aligned_type_count(source, target, table, params.n_best);
  if (!eligible(source, params.min_types) || !eligible(target, params.min_types)) return false;
  if (!sizes_compatible(source, target, params.max_size_ratio)) return false;
  return static_cast<double>(covered) / static_cast<double>(source.size_types) >= params.theta_a;
}

AlignmentReport calign(const ConceptSet& source, const ConceptSet& target,
                       const TranslationTable& table, const AlignParams& params) {
  validate(params);
  if (source.layer != target.layer) {
    throw Error(ErrorCode::LayerMismatch, "source layer " + std::to_string(source.layer) +
                                              " vs target layer " + std::to_string(target.layer));
  }
  check_per_language(source, "source");
  check_per_language(target, "target");
  if (params.case_fold) {
    return calign_checked(fold_concepts(source), fold_concepts(target), fold_case(table),
                          params);
  }
  return calign_checked(source, target, table, params);
}

namespace {

std::map<std::string, double> language_fractions(const Concept& concept_,
                                                 const OverlapParams& params,
                                                 const std::vector<std::string>& languages) {
  std::map<std::string, double> fractions;
  const auto whole = static_cast<double>(params.type_level ? concept_.size_types
                                                           : concept_.size_tokens);
  for (const auto& language : languages) {
    const auto part = static_cast<double>(params.type_level ? concept_.types_in(language)
                                                            : concept_.tokens_in(language));
    fractions[language] = whole > 0.0 ? part / whole : 0.0;
  }
  return fractions;
}

bool overlapping_from(const std::map<std::string, double>& fractions,
                      const OverlapParams& params) {
  std::size_t clearing = 0;
  for (const auto& [language, fraction] : fractions) {
    if (fraction >= params.theta_o) ++clearing;
  }
  if (params.strict_all_languages && clearing != fractions.size()) return false;
  return clearing >= params.min_languages;
}

}  // namespace

bool is_overlapping(const Concept& concept_, const OverlapParams& params,
                    const std::vector<std::string>& languages) {
  return overlapping_from(language_fractions(concept_, params, languages), params);
}

bool is_overlapping(const Concept& concept_, const OverlapParams& params) {
  if (!params.languages.empty()) return is_overlapping(concept_, params, params.languages);
  std::vector<std::string> languages;
  for (const auto& [language, surfaces] : concept_.types) languages.push_back(language);
  return is_overlapping(concept_, params, languages);
}

OverlapReport colap(const ConceptSet& concepts, const OverlapParams& params) {
  validate(params);
  if (concepts.regime != Regime::Mixed) {
    throw Error(ErrorCode::RegimeMismatch, "overlap needs mixed-language concepts");
  }
  std::vector<std::string> languages = params.languages;
  if (languages.empty()) {
    const auto present = concepts.languages();
    languages.assign(present.begin(), present.end());
  }

  const auto count = static_cast<std::ptrdiff_t>(concepts.concepts.size());
  std::vector<std::map<std::string, double>> fractions(concepts.concepts.size());
  std::vector<char> overlapping(concepts.concepts.size(), 0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto& c = concepts.concepts[static_cast<std::size_t>(i)];
    if (!eligible(c, params.min_types)) continue;
    fractions[static_cast<std::size_t>(i)] = language_fractions(c, params, languages);
    overlapping[static_cast<std::size_t>(i)] =
        overlapping_from(fractions[static_cast<std::size_t>(i)], params) ? 1 : 0;
  }

  OverlapReport report;
  for (std::size_t i = 0; i < concepts.concepts.size(); ++i) {
    const auto& c = concepts.concepts[i];
    if (!eligible(c, params.min_types)) continue;
    ++report.eligible_count;
    report.per_concept_language_fractions[c.id] = std::move(fractions[i]);
    if (overlapping[i]) report.overlapping_ids.push_back(c.id);
  }
  if (report.eligible_count > 0) {
    report.colap = static_cast<double>(report.overlapping_ids.size()) /
                   static_cast<double>(report.eligible_count);
  }
  return report;
}

std::string_view to_string(Metric metric) {
  return metric == Metric::Calign ? "calign" : "colap";
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::ThetaA: return "theta_a";
    case SweepAxis::ThetaO: return "theta_o";
    case SweepAxis::NBest: return "n_best";
    case SweepAxis::MinTypes: return "min_types";
  }
  return "theta_a";
}

Metric parse_metric(std::string_view text) {
  if (text == "calign") return Metric::Calign;
  if (text == "colap") return Metric::Colap;
  throw Error(ErrorCode::InvalidArgument, "unknown metric '" + std::string(text) + "'");
}

SweepAxis parse_axis(std::string_view text) {
  if (text == "theta_a" || text == "theta-a") return SweepAxis::ThetaA;
  if (text == "theta_o" || text == "theta-o") return SweepAxis::ThetaO;
  if (text == "n_best" || text == "n-best") return SweepAxis::NBest;
  if (text == "min_types" || text == "min-types") return SweepAxis::MinTypes;
  throw Error(ErrorCode::InvalidArgument, "unknown sweep axis '" + std::string(text) + "'");
}

namespace {

std::size_t as_count(double value, SweepAxis axis) {
  if (!(value >= 0.0) || value != std::floor(value)) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(to_string(axis)) + " values must be non-negative integers");
  }
  return static_cast<std::size_t>(value);
}

}  // namespace

SweepCurve sweep(const SweepInputs& inputs, Metric metric, SweepAxis axis,
                 const std::vector<double>& values, const AlignParams& align_params,
                 const OverlapParams& overlap_params) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one value");
  if (!std::is_sorted(values.begin(), values.end())) {
    throw Error(ErrorCode::InvalidArgument, "sweep values must be ascending");
  }
  const bool axis_fits = axis == SweepAxis::MinTypes ||
                         (metric == Metric::Calign &&
                          (axis == SweepAxis::ThetaA || axis == SweepAxis::NBest)) ||
                         (metric == Metric::Colap && axis == SweepAxis::ThetaO);
  if (!axis_fits) {
    throw Error(ErrorCode::InvalidArgument, std::string(to_string(axis)) +
                                                " is not a parameter of " +
                                                std::string(to_string(metric)));
  }
  if (metric == Metric::Calign && inputs.table == nullptr) {
    throw Error(ErrorCode::InvalidArgument, "alignment sweep needs a translation table");
  }

  SweepCurve curve;
  curve.metric = metric;
  curve.axis = axis;
  curve.values = values;
  curve.align_params = align_params;
  curve.overlap_params = overlap_params;

  if (metric == Metric::Calign) {
    for (const auto& [layer, sets] : inputs.align_layers) {
      for (double value : values) {
        AlignParams params = align_params;
        if (axis == SweepAxis::ThetaA) params.theta_a = value;
        if (axis == SweepAxis::NBest) params.n_best = as_count(value, axis);
        if (axis == SweepAxis::MinTypes) params.min_types = as_count(value, axis);
        try {
          auto report = calign(sets.source, sets.target, *inputs.table, params);
          curve.points.push_back({layer, value, report.calign, std::move(report), std::nullopt});
        } catch (const Error& e) {
          throw LayerError(layer, e);
        }
      }
    }
  } else {
    for (const auto& [layer, set] : inputs.mixed_layers) {
      for (double value : values) {
        OverlapParams params = overlap_params;
        if (axis == SweepAxis::ThetaO) params.theta_o = value;
        if (axis == SweepAxis::MinTypes) params.min_types = as_count(value, axis);
        try {
          auto report = colap(set, params);
          curve.points.push_back({layer, value, report.colap, std::nullopt, std::move(report)});
        } catch (const Error& e) {
          throw LayerError(layer, e);
        }
      }
    }
  }
  return curve;
}

}  // namespace lcem
