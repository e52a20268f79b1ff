#include <doctest.h>

#include <map>
#include <random>

#include "lcem/concepts.hpp"
#include "unit/test_helpers.hpp"

using namespace lcem;
using lcem::testing::error_code_of;
using lcem::testing::TempDir;

namespace {

struct Token {
  std::string surface;
  std::string language;
};

ValidatedDataset dataset_of(const std::vector<Token>& tokens, std::uint64_t seed, int layer = 0,
                            Eigen::Index dim = 4) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> gauss(0.0f, 1.0f);
  EmbeddingMatrix m;
  m.layer = layer;
  m.data.resize(static_cast<Eigen::Index>(tokens.size()), dim);
  for (Eigen::Index i = 0; i < m.data.size(); ++i) m.data.data()[i] = gauss(rng);
  TokenTable t;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    t.entries.push_back({i, tokens[i].surface, static_cast<std::int64_t>(i), 0, tokens[i].language});
  }
  return validate_bundle(std::move(m), std::move(t), "test");
}

std::vector<Token> repeated(const std::string& surface, const std::string& language, std::size_t n) {
  return std::vector<Token>(n, Token{surface, language});
}

std::vector<Token> concat(std::vector<std::vector<Token>> parts) {
  std::vector<Token> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace

TEST_CASE("frequency filter keeps frequent types and drops rare ones") {
  const auto dataset = dataset_of(concat({repeated("the", "en", 50), repeated("zeitgeist", "en", 3)}), 1);
  const auto filtered = filter_types(dataset, FilterSpec{10, std::nullopt});
  CHECK(filtered.rows() == 50);
  for (std::size_t i = 0; i < filtered.rows(); ++i) CHECK(filtered.token(i).surface == "the");
}

TEST_CASE("types are (language, surface) pairs") {
  // "rot" occurs 6x in de and 6x in en: neither type reaches 10.
  const auto dataset = dataset_of(concat({repeated("rot", "de", 6), repeated("rot", "en", 6),
                                          repeated("Rot", "de", 12)}), 2);
  const auto filtered = filter_types(dataset, FilterSpec{10, std::nullopt});
  CHECK(filtered.rows() == 12);
  CHECK(filtered.token(0).surface == "Rot");
}

TEST_CASE("filter with cap matches a brute-force recount") {
  std::mt19937_64 rng(3);
  const char* langs[] = {"en", "de"};
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Token> tokens;
    const std::size_t n = 50 + rng() % 400;
    for (std::size_t i = 0; i < n; ++i) {
      tokens.push_back({"w" + std::to_string(rng() % 25), langs[rng() % 2]});
    }
    const auto dataset = dataset_of(tokens, rng());
    const std::size_t min = 1 + rng() % 15;
    std::optional<std::size_t> cap;
    if (rng() % 2) cap = min + rng() % 10;

    std::map<std::pair<std::string, std::string>, std::size_t> counts;
    for (const auto& t : tokens) ++counts[{t.language, t.surface}];
    std::size_t expected = 0;
    for (const auto& [type, count] : counts) {
      if (count >= min) expected += cap ? std::min(count, *cap) : count;
    }

    if (expected == 0) {
      CHECK(error_code_of([&] { filter_types(dataset, FilterSpec{min, cap}); }) ==
            ErrorCode::EmptyAfterFilter);
      continue;
    }
    const auto filtered = filter_types(dataset, FilterSpec{min, cap});
    CHECK(filtered.rows() == expected);
    CHECK(std::is_sorted(filtered.retained_rows.begin(), filtered.retained_rows.end()));
    if (cap) {
      // Lowest row indices win.
      std::map<std::pair<std::string, std::string>, std::size_t> first_seen;
      std::vector<std::size_t> want;
      for (std::size_t r = 0; r < tokens.size(); ++r) {
        const auto key = std::make_pair(tokens[r].language, tokens[r].surface);
        if (counts[key] >= min && first_seen[key]++ < *cap) want.push_back(r);
      }
      CHECK(filtered.retained_rows == want);
    }
  }
}

TEST_CASE("filter spec validation") {
  const auto dataset = dataset_of(repeated("a", "en", 3), 1);
  CHECK(error_code_of([&] { filter_types(dataset, FilterSpec{0, std::nullopt}); }) == ErrorCode::InvalidArgument);
  CHECK(error_code_of([&] { filter_types(dataset, FilterSpec{5, 2}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("mixed concept keeps types per language") {
  const auto dataset = dataset_of({{"red", "en"}, {"rot", "de"}}, 4);
  const auto filtered = filter_types(dataset, FilterSpec{1, std::nullopt});
  Clustering<float> clustering;
  clustering.centroids = RowMatrix<float>::Zero(1, 4);
  clustering.assignments = {0, 0};
  const auto set = build_concepts(clustering, filtered, Regime::Mixed);
  REQUIRE(set.concepts.size() == 1);
  const auto& c = set.concepts[0];
  CHECK(c.types.at("en").count("red") == 1);
  CHECK(c.types.at("de").count("rot") == 1);
  CHECK(c.size_tokens == 2);
  CHECK(c.size_types == 2);
  CHECK(set.regime == Regime::Mixed);
  CHECK(set.dataset_id == "test");
}

TEST_CASE("concept sets partition the filtered rows") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Token> tokens;
    for (int i = 0; i < 300; ++i) tokens.push_back({"w" + std::to_string(rng() % 12), "en"});
    const auto dataset = dataset_of(tokens, rng());
    const auto filtered = filter_types(dataset, FilterSpec{10, std::nullopt});
    const std::size_t k = 1 + rng() % 20;
    const auto set = build_concepts(cluster(filtered, ClusteringSpec{k, rng(), 100, 1e-4}), filtered,
                                    Regime::PerLanguage);
    std::vector<std::size_t> all;
    std::size_t tokens_total = 0;
    for (const auto& c : set.concepts) {
      CHECK(c.types.size() == 1);
      CHECK(c.types.begin()->first == "en");
      CHECK(c.size_tokens == c.member_rows.size());
      std::size_t recount = 0;
      for (const auto& [surface, count] : c.types.at("en")) recount += count;
      CHECK(recount == c.size_tokens);
      tokens_total += c.size_tokens;
      all.insert(all.end(), c.member_rows.begin(), c.member_rows.end());
    }
    std::sort(all.begin(), all.end());
    CHECK(all == filtered.retained_rows);
    CHECK(tokens_total == filtered.rows());
  }
}

TEST_CASE("per-language regime rejects multilingual data") {
  const auto dataset = dataset_of({{"red", "en"}, {"rot", "de"}}, 4);
  const auto filtered = filter_types(dataset, FilterSpec{1, std::nullopt});
  Clustering<float> clustering;
  clustering.centroids = RowMatrix<float>::Zero(1, 4);
  clustering.assignments = {0, 0};
  CHECK(error_code_of([&] { build_concepts(clustering, filtered, Regime::PerLanguage); }) ==
        ErrorCode::RegimeMismatch);
}

TEST_CASE("discover runs every requested layer") {
  std::vector<Token> tokens;
  for (int i = 0; i < 200; ++i) tokens.push_back({"w" + std::to_string(i % 10), "en"});
  const auto base = dataset_of(tokens, 6);
  auto loader = [&](int layer) {
    if (layer == 9) throw Error(ErrorCode::Io, "missing file");
    EmbeddingMatrix m = base.embeddings();
    m.layer = layer;
    m.data *= static_cast<float>(layer + 1);
    return m;
  };

  const auto sets = discover(base.tokens(), LayerLoader(loader), FilterSpec{}, ClusteringSpec{5, 1, 100, 1e-4},
                             Regime::PerLanguage, {0, 3}, 2, "toy");
  REQUIRE(sets.size() == 2);
  CHECK(sets.count(0) == 1);
  CHECK(sets.at(3).layer == 3);
  for (const auto& [layer, set] : sets) {
    std::size_t total = 0;
    for (const auto& c : set.concepts) total += c.size_tokens;
    CHECK(total == 200);
  }

  try {
    discover(base.tokens(), LayerLoader(loader), FilterSpec{}, ClusteringSpec{5, 1, 100, 1e-4},
             Regime::PerLanguage, {0, 9}, 1);
    FAIL("expected a layer error");
  } catch (const LayerError& e) {
    CHECK(e.layer() == 9);
    CHECK(std::string(e.what()).find("layer 9") != std::string::npos);
  }
}

TEST_CASE("discover reports a missing layer file by layer") {
  TempDir dir("disc");
  std::vector<Token> tokens;
  for (int i = 0; i < 40; ++i) tokens.push_back({"w" + std::to_string(i % 4), "en"});
  auto dataset = dataset_of(tokens, 7);
  write_embeddings(dir / "L0.lcem", dataset.embeddings());
  const std::map<int, std::filesystem::path> files = {{0, dir / "L0.lcem"}, {9, dir / "L9.lcem"}};
  try {
    discover(dataset.tokens(), files, FilterSpec{}, ClusteringSpec{2, 1, 100, 1e-4},
             Regime::PerLanguage, {0, 9});
    FAIL("expected a layer error");
  } catch (const LayerError& e) {
    CHECK(e.layer() == 9);
  }
}

TEST_CASE("concept file round trip") {
  ConceptSet set;
  set.layer = 6;
  set.regime = Regime::Mixed;
  set.dataset_id = "mixed";
  Concept a;
  a.id = 0;
  a.types["en"] = {{"red", 3}, {"a:b c", 1}};
  a.types["de"] = {{"rot", 2}};
  a.size_tokens = 6;
  a.size_types = 3;
  Concept b;
  b.id = 4;
  b.types["ar"] = {{"أحمر", 5}};
  b.size_tokens = 5;
  b.size_types = 1;
  set.concepts = {a, b};

  const auto text = format_concepts(set);
  CHECK(text.rfind("#lcem-concepts v1\n", 0) == 0);
  const auto back = parse_concepts(text);
  CHECK(back.layer == 6);
  CHECK(back.regime == Regime::Mixed);
  CHECK(back.dataset_id == "mixed");
  CHECK(back.concepts == set.concepts);

  CHECK(error_code_of([] { parse_concepts("#lcem-concepts v1\n0\t1\tmixed\ten:x\n"); }) ==
        ErrorCode::MalformedConceptFile);
  CHECK(error_code_of([] { parse_concepts("0\t1\tmixed\ten:x 1\n"); }) == ErrorCode::MalformedHeader);
  CHECK(error_code_of([] {
          parse_concepts("#lcem-concepts v1\n0\t1\tmixed\ten:x 1\n1\t2\tmixed\ten:y 1\n");
        }) == ErrorCode::MalformedConceptFile);
}
