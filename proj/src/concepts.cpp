#include "lcem/concepts.hpp"

#include <algorithm>
#include <utility>

#include "lcem/error.hpp"
#include "lcem/parallel.hpp"
#include "text_io.hpp"

namespace lcem {

void validate(const FilterSpec& spec) {
  if (spec.min_type_frequency < 1) {
    throw Error(ErrorCode::InvalidArgument, "min_type_frequency must be at least 1");
  }
  if (spec.max_occurrences_per_type && *spec.max_occurrences_per_type < spec.min_type_frequency) {
    throw Error(ErrorCode::InvalidArgument,
                "max_occurrences_per_type must be at least min_type_frequency");
  }
}

RowMatrix<float> FilteredDataset::matrix() const {
  const auto& data = source.embeddings().data;
  RowMatrix<float> out(static_cast<Eigen::Index>(retained_rows.size()), data.cols());
  for (std::size_t i = 0; i < retained_rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = data.row(static_cast<Eigen::Index>(retained_rows[i]));
  }
  return out;
}

std::set<std::string> FilteredDataset::languages() const {
  std::set<std::string> out;
  for (std::size_t row : retained_rows) out.insert(source.tokens().entries[row].language);
  return out;
}

FilteredDataset filter_types(const ValidatedDataset& dataset, const FilterSpec& spec) {
  validate(spec);
  using TypeKey = std::pair<std::string_view, std::string_view>;
  const auto& entries = dataset.tokens().entries;

  std::map<TypeKey, std::size_t> counts;
  for (const auto& record : entries) ++counts[{record.language, record.surface}];

  FilteredDataset filtered{dataset, {}};
  std::map<TypeKey, std::size_t> kept;
  for (const auto& record : entries) {
    const TypeKey key{record.language, record.surface};
    if (counts[key] < spec.min_type_frequency) continue;
    auto& taken = kept[key];
    if (spec.max_occurrences_per_type && taken >= *spec.max_occurrences_per_type) continue;
    ++taken;
    filtered.retained_rows.push_back(record.row);
  }
  if (filtered.retained_rows.empty()) {
    throw Error(ErrorCode::EmptyAfterFilter,
                "no type occurs at least " + std::to_string(spec.min_type_frequency) + " times");
  }
  return filtered;
}

std::string_view to_string(Regime regime) {
  return regime == Regime::Mixed ? "mixed" : "per-language";
}

Regime parse_regime(std::string_view text) {
  if (text == "per-language") return Regime::PerLanguage;
  if (text == "mixed") return Regime::Mixed;
  throw Error(ErrorCode::InvalidArgument, "unknown regime '" + std::string(text) + "'");
}

std::size_t Concept::tokens_in(const std::string& language) const {
  const auto it = types.find(language);
  if (it == types.end()) return 0;
  std::size_t total = 0;
  for (const auto& [surface, count] : it->second) total += count;
  return total;
}

std::size_t Concept::types_in(const std::string& language) const {
  const auto it = types.find(language);
  return it == types.end() ? 0 : it->second.size();
}

std::set<std::string> ConceptSet::languages() const {
  std::set<std::string> out;
  for (const auto& concept_ : concepts) {
    for (const auto& [language, surfaces] : concept_.types) out.insert(language);
  }
  return out;
}

const Concept* ConceptSet::find(std::size_t id) const {
  for (const auto& concept_ : concepts) {
    if (concept_.id == id) return &concept_;
  }
  return nullptr;
}

Clustering<float> cluster(const FilteredDataset& dataset, const ClusteringSpec& spec) {
  return kmeans(dataset.matrix(), spec);
}

ConceptSet build_concepts(const Clustering<float>& clustering, const FilteredDataset& dataset,
                          Regime regime) {
  if (clustering.assignments.size() != dataset.rows()) {
    throw Error(ErrorCode::RowCountMismatch, "clustering was not produced from this dataset");
  }
  if (regime == Regime::PerLanguage && dataset.languages().size() > 1) {
    throw Error(ErrorCode::RegimeMismatch,
                "per-language discovery needs a single-language dataset");
  }

  const auto k = static_cast<std::size_t>(clustering.centroids.rows());
  std::vector<Concept> by_cluster(k);
  for (std::size_t i = 0; i < dataset.rows(); ++i) {
    auto& target = by_cluster[clustering.assignments[i]];
    const auto& record = dataset.token(i);
    target.member_rows.push_back(dataset.retained_rows[i]);
    ++target.types[record.language][record.surface];
  }

  ConceptSet set;
  set.layer = dataset.source.layer();
  set.regime = regime;
  set.dataset_id = dataset.source.id();
  for (auto& concept_ : by_cluster) {
    if (concept_.member_rows.empty()) continue;
    concept_.id = set.concepts.size();
    concept_.size_tokens = concept_.member_rows.size();
    for (const auto& [language, surfaces] : concept_.types) concept_.size_types += surfaces.size();
    set.concepts.push_back(std::move(concept_));
  }
  return set;
}

std::map<int, ConceptSet> discover(const TokenTable& tokens, const LayerLoader& load_layer,
                                   const FilterSpec& filter_spec,
                                   const ClusteringSpec& clustering_spec, Regime regime,
                                   const std::vector<int>& layers, unsigned jobs,
                                   const std::string& dataset_id) {
  validate(filter_spec);
  validate(clustering_spec);
  std::vector<ConceptSet> results(layers.size());
  parallel_for(layers.size(), jobs, [&](std::size_t i) {
    const int layer = layers[i];
    try {
      EmbeddingMatrix embeddings = load_layer(layer);
      if (embeddings.layer != layer) {
        throw Error(ErrorCode::LayerMismatch,
                    "embedding file declares layer " + std::to_string(embeddings.layer));
      }
      auto dataset = validate_bundle(std::move(embeddings), tokens, dataset_id);
      auto filtered = filter_types(dataset, filter_spec);
      if (regime == Regime::PerLanguage && filtered.languages().size() > 1) {
        throw Error(ErrorCode::RegimeMismatch,
                    "per-language discovery needs a single-language dataset");
      }
      const auto clustering = cluster(filtered, clustering_spec);
      results[i] = build_concepts(clustering, filtered, regime);
      results[i].inertia = clustering.inertia;
      results[i].iterations = clustering.iterations_run;
    } catch (const Error& e) {
      throw LayerError(layer, e);
    }
  });

  std::map<int, ConceptSet> out;
  for (std::size_t i = 0; i < layers.size(); ++i) out[layers[i]] = std::move(results[i]);
  return out;
}

std::map<int, ConceptSet> discover(const TokenTable& tokens,
                                   const std::map<int, std::filesystem::path>& layer_files,
                                   const FilterSpec& filter_spec,
                                   const ClusteringSpec& clustering_spec, Regime regime,
                                   const std::vector<int>& layers, unsigned jobs,
                                   const std::string& dataset_id) {
  auto loader = [&](int layer) {
    const auto it = layer_files.find(layer);
    if (it == layer_files.end()) {
      throw Error(ErrorCode::Io, "no embedding file configured for layer " + std::to_string(layer));
    }
    return load_embeddings(it->second);
  };
  return discover(tokens, LayerLoader(loader), filter_spec, clustering_spec, regime, layers,
                  jobs, dataset_id);
}

std::string format_concepts(const ConceptSet& set) {
  std::string out = kConceptHeader;
  out += '\n';
  if (!set.dataset_id.empty()) {
    out += "#dataset\t" + set.dataset_id + '\n';
  }
  const std::string layer = std::to_string(set.layer);
  const std::string regime(to_string(set.regime));
  for (const auto& concept_ : set.concepts) {
    out += std::to_string(concept_.id);
    out += '\t';
    out += layer;
    out += '\t';
    out += regime;
    for (const auto& [language, surfaces] : concept_.types) {
      for (const auto& [surface, count] : surfaces) {
        out += '\t';
        out += language;
        out += ':';
        out += surface;
        out += ' ';
        out += std::to_string(count);
      }
    }
    out += '\n';
  }
  return out;
}

ConceptSet parse_concepts(const std::string& body) {
  const auto lines = text::split_lines(body);
  if (lines.empty() || lines.front() != kConceptHeader) {
    throw Error(ErrorCode::MalformedHeader, "concept file must start with '#lcem-concepts v1'");
  }
  ConceptSet set;
  bool first = true;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto line = lines[i];
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(i + 1) + ": ";
    if (line.front() == '#') {
      const auto fields = text::split_on(line, '\t');
      if (fields.size() == 2 && fields[0] == "#dataset") set.dataset_id = std::string(fields[1]);
      continue;
    }
    const auto fields = text::split_on(line, '\t');
    if (fields.size() < 4) {
      throw Error(ErrorCode::MalformedConceptFile, where + "a concept needs at least one member");
    }
    Concept concept_;
    int layer = 0;
    if (!text::parse_number(fields[0], concept_.id) || !text::parse_number(fields[1], layer)) {
      throw Error(ErrorCode::MalformedConceptFile, where + "bad id or layer");
    }
    Regime regime;
    try {
      regime = parse_regime(fields[2]);
    } catch (const Error&) {
      throw Error(ErrorCode::MalformedConceptFile, where + "bad regime");
    }
    if (first) {
      set.layer = layer;
      set.regime = regime;
      first = false;
    } else if (layer != set.layer || regime != set.regime) {
      throw Error(ErrorCode::MalformedConceptFile, where + "layer or regime differs from file");
    }
    for (std::size_t f = 3; f < fields.size(); ++f) {
      const auto member = fields[f];
      const auto colon = member.find(':');
      const auto space = member.rfind(' ');
      std::size_t count = 0;
      if (colon == std::string_view::npos || colon == 0 || space == std::string_view::npos ||
          space <= colon + 1 || !text::parse_number(member.substr(space + 1), count) ||
          count == 0) {
        throw Error(ErrorCode::MalformedConceptFile,
                    where + "bad member '" + std::string(member) + "'");
      }
      std::string language(member.substr(0, colon));
      std::string surface(member.substr(colon + 1, space - colon - 1));
      auto [it, inserted] = concept_.types[language].emplace(std::move(surface), count);
      if (!inserted) throw Error(ErrorCode::MalformedConceptFile, where + "repeated member");
      concept_.size_tokens += count;
      ++concept_.size_types;
    }
    if (set.find(concept_.id) != nullptr) {
      throw Error(ErrorCode::MalformedConceptFile, where + "repeated concept id");
    }
    set.concepts.push_back(std::move(concept_));
  }
  return set;
}

void write_concepts(const std::filesystem::path& path, const ConceptSet& set) {
  text::write_file(path, format_concepts(set));
}

ConceptSet load_concepts(const std::filesystem::path& path) {
  try {
    return parse_concepts(text::read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Io) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace lcem
