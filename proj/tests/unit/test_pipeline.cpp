// Drives the lcem executable end to end on the bundled toy dataset.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include "lcem/concepts.hpp"
#include "lcem/lexicon.hpp"
#include "lcem/pipeline.hpp"
#include "lcem/report.hpp"
#include "unit/test_helpers.hpp"

using namespace lcem;
using lcem::testing::read_text;
using lcem::testing::TempDir;
using lcem::testing::write_text;

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args, const fs::path& log) {
  const std::string command =
      std::string(LCEM_CLI_PATH) + " " + args + " > '" + log.string() + "' 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string toy_args(const std::string& subcommand, const TempDir& out) {
  return subcommand + " --config '" + std::string(LCEM_TOY_DIR) + "/config.json' --out '" +
         out.path().string() + "'";
}

}  // namespace

TEST_CASE("cluster writes one concept file per language and layer") {
  TempDir out("cli");
  REQUIRE(run_cli(toy_args("cluster", out) + " --k 4", out / "log") == 0);
  for (const char* lang : {"en", "de"}) {
    for (int layer : {0, 6, 12}) {
      const auto set = load_concepts(out.path() / ("concepts-" + std::string(lang) + "-L" +
                                                   std::to_string(layer) + ".txt"));
      CHECK(set.concepts.size() == 4);
      CHECK(set.layer == layer);
    }
  }
  CHECK(read_text(out / "log").find("inertia") != std::string::npos);
}

TEST_CASE("cluster with more clusters than rows is a data error") {
  TempDir out("cli");
  CHECK(run_cli(toy_args("cluster", out) + " --k 100000", out / "log") == 3);
  CHECK(read_text(out / "log").find("TooFewRows") != std::string::npos);
}

TEST_CASE("cluster reruns with the same seed are byte-identical") {
  TempDir a("cli");
  TempDir b("cli");
  REQUIRE(run_cli(toy_args("cluster", a) + " --regime mixed --seed 5 --jobs 3", a / "log") == 0);
  REQUIRE(run_cli(toy_args("cluster", b) + " --regime mixed --seed 5", b / "log") == 0);
  for (int layer : {0, 6, 12}) {
    const std::string name = "concepts-L" + std::to_string(layer) + ".txt";
    CHECK(read_text(a / name) == read_text(b / name));
  }
}

TEST_CASE("dict subcommand") {
  TempDir dir("cli");
  SUBCASE("copy corpus yields an identity-dominant table") {
    write_text(dir / "src.txt", "a b c\nb c d\nc d a\nd a b\na c\n");
    write_text(dir / "tgt.txt", "a b c\nb c d\nc d a\nd a b\na c\n");
    write_text(dir / "config.json",
               R"({"source_language":"xx","target_language":"yy",
                   "corpus":{"source":"src.txt","target":"tgt.txt"},"out":"out"})");
    REQUIRE(run_cli("dict --config '" + (dir / "config.json").string() + "'", dir / "log") == 0);
    const auto table = load_dictionary(dir.path() / "out" / "dict.tsv");
    for (const char* w : {"a", "b", "c", "d"}) CHECK(nbest(table, w, 1) == std::vector<std::string>{w});
  }
  SUBCASE("missing corpus file is a config error") {
    write_text(dir / "config.json",
               R"({"source_language":"xx","target_language":"yy",
                   "corpus":{"source":"nope.txt","target":"nope.txt"}})");
    CHECK(run_cli("dict --config '" + (dir / "config.json").string() + "'", dir / "log") == 2);
  }
  SUBCASE("relative frequencies from Pharaoh alignments") {
    TempDir out("cli");
    REQUIRE(run_cli(toy_args("dict", out) + " --from-alignments", out / "log") == 0);
    const auto table = load_dictionary(out.path() / "dict.tsv");
    CHECK(table.entries.at("red") == std::vector<Translation>{{"rot", 1.0}});
    CHECK(table.entries.size() == 48);
  }
}

TEST_CASE("calign on twin concept sets reports 100 percent") {
  TempDir dir("cli");
  fs::create_directories(dir.path() / "out");
  std::string en = "#lcem-concepts v1\n";
  std::string de = "#lcem-concepts v1\n";
  std::string dict;
  for (int c = 0; c < 3; ++c) {
    en += std::to_string(c) + "\t0\tper-language";
    de += std::to_string(c) + "\t0\tper-language";
    for (int w = 0; w < 6; ++w) {
      const std::string word = "w" + std::to_string(c * 6 + w);
      en += "\ten:" + word + " 2";
      de += "\tde:" + word + " 3";
      dict += word + "\t" + word + "\t1\n";
    }
    en += "\n";
    de += "\n";
  }
  write_text(dir.path() / "out" / "concepts-en-L0.txt", en);
  write_text(dir.path() / "out" / "concepts-de-L0.txt", de);
  write_text(dir / "dict.tsv", dict);
  write_text(dir / "config.json",
             R"({"layers":[0],"source_language":"en","target_language":"de","dictionary":"dict.tsv"})");
  REQUIRE(run_cli("calign --svg --config '" + (dir / "config.json").string() + "'", dir / "log") == 0);
  const auto doc = nlohmann::json::parse(read_text(dir.path() / "out" / "calign.json"));
  CHECK(doc["layers"][0]["percent"].get<double>() == 100.0);
  CHECK(doc["layers"][0]["percent"].dump() == "100.0");
  CHECK(read_text(dir.path() / "out" / "calign.csv") == "layer,param,value\n0,0.8,100\n");
  CHECK(fs::exists(dir.path() / "out" / "curves.svg"));

  // The same per-language file handed to colap is rejected.
  fs::copy_file(dir.path() / "out" / "concepts-en-L0.txt", dir.path() / "out" / "concepts-L0.txt");
  CHECK(run_cli("colap --config '" + (dir / "config.json").string() + "'", dir / "log") == 3);
  CHECK(read_text(dir / "log").find("RegimeMismatch") != std::string::npos);
}

TEST_CASE("sweep over the toy pipeline and concept export") {
  TempDir out("cli");
  REQUIRE(run_cli(toy_args("cluster", out), out / "log") == 0);
  REQUIRE(run_cli(toy_args("dict", out), out / "log") == 0);
  REQUIRE(run_cli(toy_args("sweep", out) + " --metric calign --sweep theta_a --values 0.7,0.8,0.9 --svg",
                  out / "log") == 0);
  const auto csv = read_text(out / "calign.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 3);

  CHECK(run_cli(toy_args("calign", out) + " --sweep n_best --values 5,10,20", out / "log") == 0);
  CHECK(run_cli(toy_args("sweep", out) + " --metric colap --sweep n_best --values 1", out / "log") == 3);

  REQUIRE(run_cli(toy_args("export", out) + " --ids 0 --layer 12 --language de", out / "log") == 0);
  const auto listing = read_text(out / "log");
  const auto parsed = parse_export(listing);
  const auto set = load_concepts(out.path() / "concepts-de-L12.txt");
  std::set<std::string> words;
  for (const auto& [surface, count] : set.find(0)->types.at("de")) words.insert(surface);
  CHECK(parsed.at(0).at("de") == words);

  CHECK(run_cli(toy_args("export", out) + " --ids 9999 --layer 12", out / "log") == 3);
  CHECK(read_text(out / "log").find("UnknownConceptId") != std::string::npos);
}

TEST_CASE("config and usage errors exit with 2") {
  TempDir dir("cli");
  write_text(dir / "bad.json", "{ not json");
  CHECK(run_cli("cluster --config '" + (dir / "bad.json").string() + "'", dir / "log") == 2);
  CHECK(run_cli("frobnicate", dir / "log") == 2);
  CHECK(run_cli("cluster", dir / "log") == 2);
  CHECK(run_cli(toy_args("cluster", dir) + " --regime sideways", dir / "log") == 2);
  write_text(dir / "nolayer.json",
             R"({"layers":[0,9],"languages":{"en":{"tokens":")" + std::string(LCEM_TOY_DIR) +
                 R"(/en.tokens","embeddings":{"0":")" + std::string(LCEM_TOY_DIR) + R"(/en-L0.lcem"}}}})");
  CHECK(run_cli("cluster --config '" + (dir / "nolayer.json").string() + "'", dir / "log") == 2);
  CHECK(read_text(dir / "log").find("layer 9") != std::string::npos);
}

TEST_CASE("config parsing fills defaults and resolves paths") {
  const auto config = parse_config(nlohmann::json::parse(R"({"dictionary":"d.tsv","regime":"mixed"})"), "/base");
  CHECK(config.layers == kDefaultLayers);
  CHECK(config.clustering.k == 600);
  CHECK(config.filter.min_type_frequency == 10);
  CHECK(config.align.theta_a == 0.8);
  CHECK(config.align.n_best == 10);
  CHECK(config.overlap.theta_o == 0.3);
  CHECK(config.regime == Regime::Mixed);
  CHECK(dictionary_file(config) == fs::path("/base/d.tsv"));
  CHECK(lcem::testing::error_code_of([] { parse_config(nlohmann::json::parse(R"({"layers":"x"})"), "."); }) ==
        ErrorCode::Config);
}
