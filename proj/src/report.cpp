#include "lcem/report.hpp"

#include <algorithm>
#include <cstdio>

#include "lcem/error.hpp"
#include "text_io.hpp"

namespace lcem {
namespace {

double percent(double fraction) { return fraction * 100.0; }

nlohmann::json params_json(const SweepCurve& curve) {
  if (curve.metric == Metric::Calign) {
    const auto& p = curve.align_params;
    return {{"theta_a", p.theta_a},
            {"n_best", p.n_best},
            {"min_types", p.min_types},
            {"max_size_ratio", p.max_size_ratio},
            {"case_fold", p.case_fold}};
  }
  const auto& p = curve.overlap_params;
  return {{"theta_o", p.theta_o},
          {"min_languages", p.min_languages},
          {"min_types", p.min_types},
          {"type_level", p.type_level},
          {"strict_all_languages", p.strict_all_languages},
          {"languages", p.languages}};
}

std::string fixed(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

std::string xml_escape(const std::string& raw) {
  std::string out;
  for (char c : raw) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

nlohmann::json report_json(const SweepCurve& curve, bool single_run) {
  nlohmann::json doc;
  doc["metric"] = std::string(to_string(curve.metric));
  doc["params"] = params_json(curve);
  if (single_run) {
    doc["sweep_axis"] = nullptr;
  } else {
    doc["sweep_axis"] = std::string(to_string(curve.axis));
    doc["sweep_values"] = curve.values;
  }
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& point : curve.points) {
    nlohmann::json entry{{"layer", point.layer},
                         {"param", point.param},
                         {"value", point.value},
                         {"percent", percent(point.value)}};
    if (point.alignment) {
      entry["eligible"] = point.alignment->eligible_source_count;
      nlohmann::json aligned = nlohmann::json::array();
      for (const auto& pair : point.alignment->aligned_pairs) {
        aligned.push_back(
            {{"source", pair.source_id}, {"target", pair.target_id}, {"fraction", pair.fraction}});
      }
      entry["aligned"] = std::move(aligned);
    }
    if (point.overlap) {
      entry["eligible"] = point.overlap->eligible_count;
      const std::set<std::size_t> overlapping(point.overlap->overlapping_ids.begin(),
                                              point.overlap->overlapping_ids.end());
      nlohmann::json concepts = nlohmann::json::array();
      for (const auto& [id, fractions] : point.overlap->per_concept_language_fractions) {
        concepts.push_back(
            {{"id", id}, {"overlapping", overlapping.contains(id)}, {"fractions", fractions}});
      }
      entry["concepts"] = std::move(concepts);
    }
    layers.push_back(std::move(entry));
  }
  doc["layers"] = std::move(layers);
  return doc;
}

std::string report_csv(const SweepCurve& curve) {
  std::string out = "layer,param,value\n";
  for (const auto& point : curve.points) {
    out += std::to_string(point.layer);
    out += ',';
    out += text::format_double(point.param);
    out += ',';
    out += text::format_double(percent(point.value));
    out += '\n';
  }
  return out;
}

std::string report_svg(const SweepCurve& curve, const std::string& title) {
  constexpr double kWidth = 640, kHeight = 400;
  constexpr double kLeft = 60, kRight = 150, kTop = 40, kBottom = 50;
  constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                      "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  std::set<int> layer_set;
  for (const auto& point : curve.points) layer_set.insert(point.layer);
  const std::vector<int> layers(layer_set.begin(), layer_set.end());
  const int lo = layers.empty() ? 0 : layers.front();
  const int hi = layers.empty() ? 1 : layers.back();
  auto x_of = [&](int layer) {
    return hi == lo ? kLeft + plot_w / 2 : kLeft + plot_w * (layer - lo) / double(hi - lo);
  };
  auto y_of = [&](double pct) { return kTop + plot_h * (1.0 - pct / 100.0); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth) + "\" height=\"" +
         fixed(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fixed(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\">" +
         xml_escape(title) + "</text>\n";
  svg += "<line x1=\"" + fixed(kLeft) + "\" y1=\"" + fixed(kTop + plot_h) + "\" x2=\"" +
         fixed(kLeft + plot_w) + "\" y2=\"" + fixed(kTop + plot_h) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fixed(kLeft) + "\" y1=\"" + fixed(kTop) + "\" x2=\"" + fixed(kLeft) +
         "\" y2=\"" + fixed(kTop + plot_h) + "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 100; tick += 20) {
    svg += "<text x=\"" + fixed(kLeft - 6) + "\" y=\"" + fixed(y_of(tick) + 4) +
           "\" text-anchor=\"end\">" + std::to_string(tick) + "</text>\n";
    svg += "<line x1=\"" + fixed(kLeft) + "\" y1=\"" + fixed(y_of(tick)) + "\" x2=\"" +
           fixed(kLeft + plot_w) + "\" y2=\"" + fixed(y_of(tick)) +
           "\" stroke=\"#dddddd\"/>\n";
  }
  for (int layer : layers) {
    svg += "<text x=\"" + fixed(x_of(layer)) + "\" y=\"" + fixed(kTop + plot_h + 18) +
           "\" text-anchor=\"middle\">" + std::to_string(layer) + "</text>\n";
  }
  svg += "<text x=\"" + fixed(kLeft + plot_w / 2) + "\" y=\"" + fixed(kHeight - 10) +
         "\" text-anchor=\"middle\">layer</text>\n";
  svg += "<text x=\"16\" y=\"" + fixed(kTop + plot_h / 2) + "\" transform=\"rotate(-90 16 " +
         fixed(kTop + plot_h / 2) + ")\" text-anchor=\"middle\">" +
         std::string(to_string(curve.metric)) + " (%)</text>\n";

  for (std::size_t v = 0; v < curve.values.size(); ++v) {
    const double value = curve.values[v];
    const char* color = kPalette[v % std::size(kPalette)];
    std::string points;
    for (const auto& point : curve.points) {
      if (point.param != value) continue;
      if (!points.empty()) points += ' ';
      points += fixed(x_of(point.layer)) + "," + fixed(y_of(percent(point.value)));
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
    const double legend_y = kTop + 16.0 * static_cast<double>(v);
    svg += "<line x1=\"" + fixed(kWidth - kRight + 10) + "\" y1=\"" + fixed(legend_y) +
           "\" x2=\"" + fixed(kWidth - kRight + 30) + "\" y2=\"" + fixed(legend_y) +
           "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fixed(kWidth - kRight + 36) + "\" y=\"" + fixed(legend_y + 4) + "\">" +
           std::string(to_string(curve.axis)) + "=" + text::format_double(value) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::string export_concepts(const ConceptSet& set, const std::vector<std::size_t>& ids) {
  std::string out;
  for (std::size_t id : ids) {
    const Concept* concept_ = set.find(id);
    if (concept_ == nullptr) {
      throw Error(ErrorCode::UnknownConceptId, "no concept " + std::to_string(id) +
                                                   " at layer " + std::to_string(set.layer));
    }
    out += "concept " + std::to_string(id) + " (layer " + std::to_string(set.layer) + ", " +
           std::string(to_string(set.regime)) + ", " + std::to_string(concept_->size_tokens) +
           " tokens, " + std::to_string(concept_->size_types) + " types)\n";
    for (const auto& [language, surfaces] : concept_->types) {
      out += "  " + language + ":";
      for (const auto& [surface, count] : surfaces) out += " " + surface;
      out += '\n';
    }
  }
  return out;
}

ExportedTypes parse_export(const std::string& listing) {
  ExportedTypes out;
  std::map<std::string, std::set<std::string>>* current = nullptr;
  for (const auto line : text::split_lines(listing)) {
    if (line.starts_with("concept ")) {
      std::size_t id = 0;
      const auto rest = line.substr(8);
      if (!text::parse_number(rest.substr(0, rest.find(' ')), id)) {
        throw Error(ErrorCode::MalformedLine, "bad concept header '" + std::string(line) + "'");
      }
      current = &out[id];
    } else if (line.starts_with("  ") && current != nullptr) {
      const auto colon = line.find(':');
      if (colon == std::string_view::npos) {
        throw Error(ErrorCode::MalformedLine, "bad language line '" + std::string(line) + "'");
      }
      auto& surfaces = (*current)[std::string(line.substr(2, colon - 2))];
      for (auto& word : text::split_whitespace(line.substr(colon + 1))) {
        surfaces.insert(std::move(word));
      }
    } else if (!line.empty()) {
      throw Error(ErrorCode::MalformedLine, "unexpected line '" + std::string(line) + "'");
    }
  }
  return out;
}

}  // namespace lcem
