// lcem: latent concept discovery and cross-lingual alignment/overlap metrics.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcem/error.hpp"
#include "lcem/pipeline.hpp"

namespace {

constexpr int kConfigExit = 2;
constexpr int kDataExit = 3;

struct Overrides {
  std::string config_path;
  std::optional<unsigned> jobs;
  std::optional<std::uint64_t> seed;
  std::optional<double> theta_a;
  std::optional<double> theta_o;
  std::optional<std::size_t> n_best;
  std::optional<std::size_t> k;
  std::optional<std::string> regime;
  std::optional<std::string> out;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Run configuration (JSON)")->required();
    cmd->add_option("--jobs", jobs, "Concurrent layers / worker threads");
    cmd->add_option("--seed", seed, "Clustering seed");
    cmd->add_option("--theta-a", theta_a, "Alignment threshold");
    cmd->add_option("--theta-o", theta_o, "Overlap threshold");
    cmd->add_option("--n-best", n_best, "Translations per source word");
    cmd->add_option("--k", k, "Cluster count");
    cmd->add_option("--regime", regime, "per-language | mixed");
    cmd->add_option("--out", out, "Output directory");
  }

  lcem::RunConfig load() const {
    auto config = lcem::load_config(config_path);
    if (jobs) config.jobs = *jobs;
    if (seed) config.clustering.seed = *seed;
    if (theta_a) config.align.theta_a = *theta_a;
    if (theta_o) config.overlap.theta_o = *theta_o;
    if (n_best) config.align.n_best = *n_best;
    if (k) config.clustering.k = *k;
    if (regime) {
      try {
        config.regime = lcem::parse_regime(*regime);
      } catch (const lcem::Error& e) {
        throw lcem::Error(lcem::ErrorCode::Config, e.what());
      }
    }
    if (out) config.out_dir = *out;
    return config;
  }
};

std::optional<lcem::SweepAxis> axis_option(const std::string& text) {
  if (text.empty()) return std::nullopt;
  try {
    return lcem::parse_axis(text);
  } catch (const lcem::Error& e) {
    throw lcem::Error(lcem::ErrorCode::Config, e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Latent concept discovery and cross-lingual concept metrics"};
  app.require_subcommand(1);

  Overrides overrides;

  auto* cluster = app.add_subcommand("cluster", "Discover concepts per layer");
  overrides.attach(cluster);

  auto* dict = app.add_subcommand("dict", "Build the translation dictionary");
  overrides.attach(dict);
  bool from_alignments = false;
  std::optional<int> em_iterations;
  dict->add_flag("--from-alignments", from_alignments, "Count supplied Pharaoh alignments");
  dict->add_option("--iterations", em_iterations, "IBM Model 1 EM iterations");

  lcem::MetricRequest metric_request;
  std::string axis_text;
  std::string metric_text = "calign";
  auto add_metric_options = [&](CLI::App* cmd) {
    overrides.attach(cmd);
    cmd->add_option("--sweep", axis_text, "Sweep axis: theta_a | theta_o | n_best | min_types");
    cmd->add_option("--values", metric_request.values, "Sweep values, ascending")
        ->delimiter(',');
    cmd->add_flag("--svg", metric_request.svg, "Also write curves.svg");
  };
  auto* calign = app.add_subcommand("calign", "Concept alignment between two languages");
  add_metric_options(calign);
  auto* colap = app.add_subcommand("colap", "Concept overlap in mixed-language concepts");
  add_metric_options(colap);
  auto* sweep = app.add_subcommand("sweep", "Metric curves over a parameter axis");
  add_metric_options(sweep);
  sweep->add_option("--metric", metric_text, "calign | colap");

  lcem::ExportRequest export_request;
  auto* export_cmd = app.add_subcommand("export", "List member words of concepts");
  overrides.attach(export_cmd);
  export_cmd->add_option("--ids", export_request.ids, "Concept ids")->delimiter(',')->required();
  export_cmd->add_option("--layer", export_request.layer, "Layer");
  export_cmd->add_option("--language", export_request.language, "Language (per-language sets)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigExit;
  }

  try {
    lcem::RunConfig config = overrides.load();
    if (cluster->parsed()) {
      lcem::run_cluster(config, std::cout);
    } else if (dict->parsed()) {
      if (from_alignments) config.dictionary_method = lcem::DictionaryMethod::Alignments;
      if (em_iterations) config.em_iterations = *em_iterations;
      lcem::run_dict(config, std::cout);
    } else if (export_cmd->parsed()) {
      lcem::run_export(config, export_request, std::cout);
    } else {
      if (calign->parsed()) metric_request.metric = lcem::Metric::Calign;
      if (colap->parsed()) metric_request.metric = lcem::Metric::Colap;
      if (sweep->parsed()) {
        try {
          metric_request.metric = lcem::parse_metric(metric_text);
        } catch (const lcem::Error& e) {
          throw lcem::Error(lcem::ErrorCode::Config, e.what());
        }
        if (axis_text.empty()) {
          throw lcem::Error(lcem::ErrorCode::Config, "sweep needs --sweep AXIS");
        }
      }
      metric_request.axis = axis_option(axis_text);
      lcem::run_metric(config, metric_request, std::cout);
    }
  } catch (const lcem::Error& e) {
    std::cerr << "lcem: " << e.what() << "\n";
    return e.code() == lcem::ErrorCode::Config ? kConfigExit : kDataExit;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "lcem: " << e.what() << "\n";
    return kDataExit;
  }
  return 0;
}
