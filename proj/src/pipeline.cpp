#include "lcem/pipeline.hpp"

#include <fstream>

#include "lcem/error.hpp"
#include "lcem/report.hpp"
#include "text_io.hpp"

namespace lcem {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

[[noreturn]] void config_error(const std::string& message) {
  throw Error(ErrorCode::Config, message);
}

template <typename T>
T field(const json& object, const char* key, T fallback) {
  const auto it = object.find(key);
  if (it == object.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    config_error(std::string("field '") + key + "' has the wrong type");
  }
}

fs::path resolve(const fs::path& base, const json& value, const char* what) {
  if (!value.is_string()) config_error(std::string(what) + " must be a path string");
  const fs::path path = value.get<std::string>();
  return path.is_absolute() ? path : base / path;
}

LayerFiles parse_layer_files(const json& doc, const fs::path& base, const std::string& what) {
  if (!doc.is_object()) config_error(what + " must be an object");
  LayerFiles files;
  if (!doc.contains("tokens")) config_error(what + " needs a 'tokens' path");
  files.tokens = resolve(base, doc["tokens"], "tokens");
  const auto embeddings = doc.find("embeddings");
  if (embeddings == doc.end() || !embeddings->is_object()) {
    config_error(what + " needs an 'embeddings' object mapping layer -> path");
  }
  for (const auto& [key, value] : embeddings->items()) {
    int layer = 0;
    if (!text::parse_number(key, layer) || layer < 0) {
      config_error(what + ": bad layer key '" + key + "'");
    }
    files.embeddings[layer] = resolve(base, value, "embedding path");
  }
  return files;
}

void require_file(const fs::path& path, const std::string& what) {
  if (!fs::is_regular_file(path)) config_error(what + " not found: " + path.string());
}

void require_layer_files(const LayerFiles& files, const std::vector<int>& layers,
                         const std::string& what) {
  require_file(files.tokens, what + " token file");
  for (int layer : layers) {
    const auto it = files.embeddings.find(layer);
    if (it == files.embeddings.end()) {
      config_error("layer " + std::to_string(layer) + ": no " + what + " embedding file configured");
    }
    require_file(it->second, "layer " + std::to_string(layer) + ": " + what + " embedding file");
  }
}

void write_text(const fs::path& path, const std::string& body) {
  text::write_file(path, body);
}

void log_concepts(std::ostream& log, const std::string& label,
                  const std::map<int, ConceptSet>& sets) {
  for (const auto& [layer, set] : sets) {
    log << "layer " << layer << " [" << label << "]: " << set.concepts.size()
        << " concepts, inertia " << text::format_double(set.inertia) << " after "
        << set.iterations << " iterations\n";
  }
}

}  // namespace

RunConfig parse_config(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) config_error("config must be a JSON object");
  RunConfig config;

  if (const auto it = doc.find("languages"); it != doc.end()) {
    if (!it->is_object()) config_error("'languages' must be an object");
    for (const auto& [language, files] : it->items()) {
      config.languages[ascii_lower(language)] =
          parse_layer_files(files, base_dir, "language '" + language + "'");
    }
  }
  if (const auto it = doc.find("mixed"); it != doc.end() && !it->is_null()) {
    config.mixed = parse_layer_files(*it, base_dir, "mixed");
  }
  config.layers = field(doc, "layers", config.layers);
  if (config.layers.empty()) config_error("'layers' must not be empty");
  config.source_language = ascii_lower(field<std::string>(doc, "source_language", ""));
  config.target_language = ascii_lower(field<std::string>(doc, "target_language", ""));

  if (const auto it = doc.find("corpus"); it != doc.end() && !it->is_null()) {
    if (!it->contains("source") || !it->contains("target")) {
      config_error("'corpus' needs 'source' and 'target' paths");
    }
    config.corpus_source = resolve(base_dir, (*it)["source"], "corpus source");
    config.corpus_target = resolve(base_dir, (*it)["target"], "corpus target");
  }
  if (const auto it = doc.find("alignments"); it != doc.end() && !it->is_null()) {
    config.alignments = resolve(base_dir, *it, "alignments");
  }
  if (const auto it = doc.find("dictionary"); it != doc.end() && !it->is_null()) {
    config.dictionary = resolve(base_dir, *it, "dictionary");
  }
  const auto method = field<std::string>(doc, "dictionary_method", "ibm1");
  if (method == "ibm1") {
    config.dictionary_method = DictionaryMethod::Ibm1;
  } else if (method == "alignments") {
    config.dictionary_method = DictionaryMethod::Alignments;
  } else {
    config_error("dictionary_method must be 'ibm1' or 'alignments'");
  }
  config.em_iterations = field(doc, "em_iterations", config.em_iterations);

  if (const auto it = doc.find("filter"); it != doc.end()) {
    config.filter.min_type_frequency =
        field(*it, "min_type_frequency", config.filter.min_type_frequency);
    if (it->contains("max_occurrences_per_type") && !(*it)["max_occurrences_per_type"].is_null()) {
      config.filter.max_occurrences_per_type =
          field<std::size_t>(*it, "max_occurrences_per_type", 0);
    }
  }
  if (const auto it = doc.find("clustering"); it != doc.end()) {
    config.clustering.k = field(*it, "k", config.clustering.k);
    config.clustering.max_iterations =
        field(*it, "max_iterations", config.clustering.max_iterations);
    config.clustering.tolerance = field(*it, "tolerance", config.clustering.tolerance);
  }
  config.clustering.seed = field(doc, "seed", config.clustering.seed);
  if (const auto it = doc.find("align"); it != doc.end()) {
    auto& p = config.align;
    p.theta_a = field(*it, "theta_a", p.theta_a);
    p.n_best = field(*it, "n_best", p.n_best);
    p.min_types = field(*it, "min_types", p.min_types);
    p.max_size_ratio = field(*it, "max_size_ratio", p.max_size_ratio);
    p.case_fold = field(*it, "case_fold", p.case_fold);
  }
  if (const auto it = doc.find("overlap"); it != doc.end()) {
    auto& p = config.overlap;
    p.theta_o = field(*it, "theta_o", p.theta_o);
    p.min_languages = field(*it, "min_languages", p.min_languages);
    p.min_types = field(*it, "min_types", p.min_types);
    p.type_level = field(*it, "type_level", p.type_level);
    p.strict_all_languages = field(*it, "strict_all_languages", p.strict_all_languages);
    p.languages = field(*it, "languages", p.languages);
  }
  try {
    config.regime = parse_regime(field<std::string>(doc, "regime", "per-language"));
  } catch (const Error& e) {
    config_error(e.what());
  }
  if (const auto it = doc.find("out"); it != doc.end() && !it->is_null()) {
    config.out_dir = resolve(base_dir, *it, "out");
  } else {
    config.out_dir = base_dir / "out";
  }
  config.jobs = field(doc, "jobs", config.jobs);
  return config;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    config_error(path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

fs::path concept_file(const RunConfig& config, Regime regime, int layer,
                      const std::string& language) {
  const std::string suffix = "L" + std::to_string(layer) + ".txt";
  if (regime == Regime::Mixed) return config.out_dir / ("concepts-" + suffix);
  return config.out_dir / ("concepts-" + language + "-" + suffix);
}

fs::path dictionary_file(const RunConfig& config) {
  return config.dictionary ? *config.dictionary : config.out_dir / "dict.tsv";
}

void run_cluster(const RunConfig& config, std::ostream& log) {
  try {
    validate(config.filter);
    validate(config.clustering);
  } catch (const Error& e) {
    config_error(e.what());
  }
  auto discover_into = [&](const LayerFiles& files, Regime regime, const std::string& label) {
    require_layer_files(files, config.layers, label);
    const TokenTable tokens = load_tokens(files.tokens);
    auto sets = discover(tokens, files.embeddings, config.filter, config.clustering, regime,
                         config.layers, config.jobs, label);
    fs::create_directories(config.out_dir);
    for (const auto& [layer, set] : sets) {
      write_concepts(concept_file(config, regime, layer, label), set);
    }
    log_concepts(log, label, sets);
  };

  if (config.regime == Regime::Mixed) {
    if (!config.mixed) config_error("mixed regime needs a 'mixed' input block");
    discover_into(*config.mixed, Regime::Mixed, "mixed");
  } else {
    if (config.languages.empty()) config_error("per-language regime needs 'languages' inputs");
    for (const auto& [language, files] : config.languages) {
      discover_into(files, Regime::PerLanguage, language);
    }
  }
}

void run_dict(const RunConfig& config, std::ostream& log) {
  if (!config.corpus_source || !config.corpus_target) config_error("no 'corpus' configured");
  require_file(*config.corpus_source, "corpus source");
  require_file(*config.corpus_target, "corpus target");
  if (config.source_language.empty() || config.target_language.empty()) {
    config_error("'source_language' and 'target_language' are required");
  }
  const auto corpus = load_corpus(*config.corpus_source, *config.corpus_target,
                                  config.source_language, config.target_language);
  TranslationTable table;
  if (config.dictionary_method == DictionaryMethod::Alignments) {
    if (!config.alignments) config_error("alignment counting needs an 'alignments' path");
    require_file(*config.alignments, "alignments");
    table = count_from_alignments(corpus, load_alignments(*config.alignments, corpus));
  } else {
    if (config.em_iterations < 1) config_error("em_iterations must be at least 1");
    table = estimate_ibm1(corpus, config.em_iterations, config.jobs);
  }
  fs::create_directories(config.out_dir);
  const fs::path path = config.out_dir / "dict.tsv";
  write_dictionary(path, table);
  log << "dictionary " << config.source_language << "->" << config.target_language << ": "
      << table.entries.size() << " source words from " << corpus.pairs.size()
      << " sentence pairs -> " << path.string() << "\n";
}

void run_metric(const RunConfig& config, const MetricRequest& request, std::ostream& log) {
  try {
    validate(config.align);
    validate(config.overlap);
  } catch (const Error& e) {
    config_error(e.what());
  }
  const bool single = !request.axis.has_value();
  const SweepAxis axis = request.axis.value_or(
      request.metric == Metric::Calign ? SweepAxis::ThetaA : SweepAxis::ThetaO);
  std::vector<double> values = request.values;
  if (single) {
    values = {request.metric == Metric::Calign ? config.align.theta_a : config.overlap.theta_o};
  }
  if (values.empty()) config_error("sweep needs --values");

  SweepInputs inputs;
  TranslationTable table;
  if (request.metric == Metric::Calign) {
    if (config.source_language.empty() || config.target_language.empty()) {
      config_error("'source_language' and 'target_language' are required");
    }
    table = load_dictionary(dictionary_file(config), config.source_language,
                            config.target_language);
    inputs.table = &table;
    for (int layer : config.layers) {
      inputs.align_layers[layer] = AlignLayer{
          load_concepts(concept_file(config, Regime::PerLanguage, layer, config.source_language)),
          load_concepts(concept_file(config, Regime::PerLanguage, layer, config.target_language))};
    }
  } else {
    for (int layer : config.layers) {
      inputs.mixed_layers[layer] = load_concepts(concept_file(config, Regime::Mixed, layer));
    }
  }

  const SweepCurve curve =
      sweep(inputs, request.metric, axis, values, config.align, config.overlap);
  const std::string name(to_string(request.metric));
  fs::create_directories(config.out_dir);
  write_text(config.out_dir / (name + ".json"), report_json(curve, single).dump(2) + "\n");
  write_text(config.out_dir / (name + ".csv"), report_csv(curve));
  if (request.svg) {
    write_text(config.out_dir / "curves.svg", report_svg(curve, name + " by layer"));
  }
  for (const auto& point : curve.points) {
    log << name << " layer " << point.layer << " " << to_string(axis) << "="
        << text::format_double(point.param) << ": " << text::format_double(point.value * 100.0)
        << "%\n";
  }
}

void run_export(const RunConfig& config, const ExportRequest& request, std::ostream& out) {
  std::string language = request.language.empty() ? config.source_language : request.language;
  const Regime regime = config.regime;
  if (regime == Regime::PerLanguage && language.empty()) {
    config_error("export of per-language concepts needs a language");
  }
  const ConceptSet set = load_concepts(concept_file(config, regime, request.layer, language));
  const std::string listing = export_concepts(set, request.ids);
  std::string name = "export-L" + std::to_string(request.layer);
  if (regime == Regime::PerLanguage) name += "-" + language;
  fs::create_directories(config.out_dir);
  write_text(config.out_dir / (name + ".txt"), listing);
  out << listing;
}

}  // namespace lcem
