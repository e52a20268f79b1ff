#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lcem/concepts.hpp"
#include "lcem/metrics.hpp"

namespace lcem {

/// JSON document for a metric run. `single_run` drops the sweep axis.
nlohmann::json report_json(const SweepCurve& curve, bool single_run);

/// Flat "layer,param,value" rows; value is the metric in percent.
std::string report_csv(const SweepCurve& curve);

/// Line chart with one polyline per parameter value, x = layer, y = percent.
std::string report_svg(const SweepCurve& curve, const std::string& title);

/// Word lists per language for the requested concept ids.
std::string export_concepts(const ConceptSet& set, const std::vector<std::size_t>& ids);

using ExportedTypes = std::map<std::size_t, std::map<std::string, std::set<std::string>>>;

/// Reads an export listing back into concept id -> language -> surfaces.
ExportedTypes parse_export(const std::string& listing);

}  // namespace lcem
