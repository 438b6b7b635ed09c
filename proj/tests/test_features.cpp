#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "doctest.h"

#include "argmine/error.hpp"
#include "argmine/features.hpp"
#include "support/docs.hpp"
#include "support/synthetic.hpp"

using namespace argmine;

namespace {

FeatureConfig config_of(const char* sets, int window = 4) {
  FeatureConfig c;
  c.sets = FeatureSets::parse(sets);
  c.window = window;
  c.min_count = 1;
  return c;
}

bool has_prefix(const FeatureVector& v, const std::string& p) {
  for (const auto& [name, value] : v) {
    if (name.rfind(p, 0) == 0) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("feature set selection") {
  CHECK(FeatureSets::parse("01234").to_string() == "01234");
  CHECK(FeatureSets::parse("40").to_string() == "04");
  CHECK_FALSE(FeatureSets::parse("0").contextual());
  CHECK_THROWS_AS(FeatureSets::parse(""), ConfigError);
  CHECK_THROWS_AS(FeatureSets::parse("5"), ConfigError);
  CHECK_THROWS_AS(FeatureSets::parse("00"), ConfigError);
}

TEST_CASE("ngrams and vocabulary") {
  const std::vector<std::string> toks{"a", "b", "a"};
  const auto g = ngrams(toks);
  CHECK(std::set<std::string>(g.begin(), g.end()) == std::set<std::string>{"a", "b", "a b", "b a", "a b a"});

  Corpus c;
  c.documents.push_back(docs::make("d", {{"A", "b", "a"}}));
  const std::vector<std::size_t> ids{0};
  const auto v1 = build_vocabulary(c, ids, 1);
  std::set<std::string> keys1;
  for (const auto& [k, n] : v1.entries()) keys1.insert(k);
  CHECK(keys1 == std::set<std::string>{"a", "b", "a b", "b a", "a b a"});
  const auto v2 = build_vocabulary(c, ids, 2);
  CHECK(v2.size() == 1);
  CHECK(v2.contains("a"));
  CHECK(Vocabulary::open().contains("anything"));
}

TEST_CASE("vocabulary never sees test-only n-grams") {
  synth::Options o;
  o.documents = 12;
  auto c = synth::make_corpus(o);
  c.documents.push_back(docs::make("extra", {{"zzunique", "."}}));
  std::vector<std::size_t> train;
  for (std::size_t i = 0; i < 12; ++i) train.push_back(i);
  const auto v = build_vocabulary(c, train, 1);
  CHECK_FALSE(v.contains("zzunique"));
}

TEST_CASE("embeddings") {
  SUBCASE("plain rows") {
    std::istringstream in("u 1 2 3\nv 0.5 -1 4\n");
    const auto t = read_embeddings(in);
    CHECK(t.size() == 2);
    CHECK(t.dimension() == 3);
    const std::vector<std::string> toks{"u", "v", "zz"};
    CHECK(sentence_embedding(toks, t) == std::vector<double>{1.5, 1.0, 7.0});
  }
  SUBCASE("header skipped") {
    std::istringstream in("2 3\nu 1 2 3\nv 0 0 1\n");
    const auto t = read_embeddings(in);
    CHECK(t.size() == 2);
    CHECK(t.dimension() == 3);
  }
  SUBCASE("duplicate word keeps one entry and warns") {
    std::istringstream in("u 1 2 3\nu 4 5 6\n");
    const auto t = read_embeddings(in);
    CHECK(t.size() == 1);
    CHECK(t.warnings.size() == 1);
    CHECK(*t.find("u") == std::vector<float>{4, 5, 6});
  }
  SUBCASE("ragged row") {
    std::istringstream in("u 1 2 3\nv 1 2\n");
    CHECK_THROWS_AS(read_embeddings(in), ParseError);
  }
  SUBCASE("no known word is a zero vector; sums are linear") {
    const auto t = synth::make_embeddings(5, 40, 2);
    const std::vector<std::string> none{"qq", "rr"};
    CHECK(sentence_embedding(none, t) == std::vector<double>(5, 0.0));
    const std::vector<std::string> s1{"w1", "w2"}, s2{"w3", "."}, both{"w1", "w2", "w3", "."};
    const auto a = sentence_embedding(s1, t), b = sentence_embedding(s2, t), ab = sentence_embedding(both, t);
    for (std::size_t k = 0; k < 5; ++k) CHECK(ab[k] == doctest::Approx(a[k] + b[k]).epsilon(1e-12));
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_embeddings("/nonexistent/emb.txt"), IoError);
  }
}

TEST_CASE("LDA separates disjoint vocabularies") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> w(0, 19);
  std::vector<std::vector<std::string>> texts;
  for (int d = 0; d < 40; ++d) {
    const std::string stem = d % 2 ? "cat" : "dog";
    std::vector<std::string> t;
    for (int i = 0; i < 30; ++i) t.push_back(stem + std::to_string(w(rng)));
    texts.push_back(t);
  }
  LdaConfig cfg;
  cfg.topics = 2;
  cfg.iterations = 200;
  cfg.seed = 9;
  const auto m = train_lda(texts, cfg);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto top = m.top_words(k, 10);
    REQUIRE(top.size() == 10);
    std::size_t cats = 0;
    for (const auto& x : top) cats += x.rfind("cat", 0) == 0;
    CHECK(std::max(cats, 10 - cats) >= 9);
  }
  const std::vector<std::string> probe{"cat1", "cat2", "dog3", "unseen"};
  const auto theta = m.infer(probe);
  double sum = 0.0;
  for (double x : theta) sum += x;
  CHECK(std::abs(sum - 1.0) < 1e-9);
  CHECK(m.infer(probe) == theta);
  const auto again = train_lda(texts, cfg);
  CHECK(again.top_words(0, 10) == m.top_words(0, 10));

  const auto path = std::filesystem::temp_directory_path() / "argmine_lda_test.json";
  m.save(path);
  const auto loaded = TopicModel::load(path);
  CHECK(loaded.infer(probe) == theta);

  cfg.topics = 1;
  CHECK_THROWS_AS(train_lda(texts, cfg), ConfigError);
}

TEST_CASE("extract_features") {
  const auto d = docs::make("d", {{"Kids", "learn", "."}, {"They", "grow", "."}, {"Schools", "help", "."}});
  Corpus c;
  c.documents.push_back(d);
  const std::vector<std::size_t> ids{0};
  const auto vocab = build_vocabulary(c, ids, 1);
  FeatureResources r;
  r.vocabulary = &vocab;

  SUBCASE("lexical features are current-sentence binaries") {
    const auto v = extract_features(d, 1, config_of("0"), r);
    CHECK(v.count("FS0_ng=they grow"));
    CHECK_FALSE(v.count("FS0_ng=kids"));
    for (const auto& [name, value] : v) CHECK(value == 1.0);
  }
  SUBCASE("no minus features at the document start") {
    const auto v = extract_features(d, 0, config_of("1"), r);
    CHECK_FALSE(has_prefix(v, "minus"));
    CHECK(v.count("plus2Sent_FS1_relPosDocument"));
    CHECK(v.at("FS1_first1=Kids") == 1.0);
    CHECK(v.at("FS1_relPosDocument") == 0.0);
    CHECK(v.at("plus2Sent_FS1_relPosDocument") == 1.0);
  }
  SUBCASE("window symmetry") {
    const auto all = extract_document(d, config_of("1", 4), r);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto v = assemble(all, i, 4);
      for (std::size_t j = 0; j < 3; ++j) {
        const int k = static_cast<int>(j) - static_cast<int>(i);
        const std::string name = position_prefix(k) + "FS1_relPosDocument";
        REQUIRE(v.count(name));
        CHECK(v.at(name) == doctest::Approx(j / 2.0));
      }
    }
    CHECK(position_prefix(0).empty());
    CHECK(position_prefix(-2) == "minus2Sent_");
    CHECK(position_prefix(3) == "plus3Sent_");
  }
  SUBCASE("embeddings of out-of-vocabulary words") {
    EmbeddingTable t;
    t.insert("zz", std::vector<float>(300, 1.0f));
    r.embeddings = &t;
    const auto v = extract_features(d, 0, config_of("4", 0), r);
    CHECK(v.size() == 300);
    for (const auto& [name, value] : v) CHECK(value == 0.0);
  }
  SUBCASE("topic proportions and sentiment with prefixes") {
    std::vector<std::vector<std::string>> texts{{"kids", "learn"}, {"schools", "help"}, {"they", "grow"}};
    LdaConfig cfg;
    cfg.topics = 30;
    cfg.iterations = 20;
    const auto m = train_lda(texts, cfg);
    r.topics = &m;
    LayerStore layers;
    layers["d"].sentiment = std::vector<std::array<double, 5>>{
        {0.1, 0.23, 0.5, 0.1, 0.07}, {0, 0, 1, 0, 0}, {0.2, 0.2, 0.2, 0.2, 0.2}};
    r.layers = &layers;
    const auto v = extract_features(d, 2, config_of("2"), r);
    std::size_t topics_here = 0;
    for (const auto& [name, value] : v) topics_here += name.rfind("FS2_topic", 0) == 0;
    CHECK(topics_here == 30);
    CHECK(v.at("minus2Sent_FS2_sentimentNegative") == doctest::Approx(0.23));
  }
  SUBCASE("missing resources") {
    CHECK_THROWS_AS(extract_features(d, 0, config_of("0"), FeatureResources{}), ConfigError);
    CHECK_THROWS_AS(extract_features(d, 0, config_of("4"), r), ConfigError);
    CHECK_THROWS_AS(extract_features(d, 0, config_of("2"), r), ConfigError);
    CHECK_THROWS_AS(extract_features(d, 5, config_of("1"), r), ConfigError);
  }
  SUBCASE("absent layers degrade") {
    const auto f = extract_document(d, config_of("13"), r);
    CHECK(f.degraded.count("FS1:pos"));
    CHECK(f.degraded.count("FS3:srl"));
  }
  SUBCASE("layers of the wrong length") {
    LayerStore layers;
    layers["d"].depth = std::vector<int>{1, 2};
    r.layers = &layers;
    CHECK_THROWS_AS(extract_features(d, 0, config_of("1"), r), ValidationError);
  }
}

TEST_CASE("layer sidecar features") {
  const auto d = docs::make("d", {{"Kids", "learn", "."}, {"They", "grow", "."}});
  const auto store = parse_layers(R"({"d": {
    "pos": ["NNS", "VBP", ".", "PRP", "VBP", "."],
    "syntax": {"depth": [3, 2], "productions": [["S->NP VP"], []], "subclauses": [0, 1]},
    "srl": [["agent=kids"], []],
    "coref": [{"in_chain": true, "next_distance": 1, "links": 1}, {"in_chain": true, "prev_distance": 1}],
    "discourse": [[], [{"type": "implicit", "connective": "because"}]]}})");
  FeatureResources r;
  r.layers = &store;
  const auto v = extract_features(d, 1, config_of("13", 1), r);
  CHECK(v.at("FS1_depTreeDepth") == 2.0);
  CHECK(v.at("minus1Sent_FS1_depTreeDepth") == 3.0);
  CHECK(v.at("FS1_subClauses") == 1.0);
  CHECK(v.at("minus1Sent_FS1_prod=S->NP VP") == 1.0);
  CHECK(v.at("FS1_pos=PRP") == 1.0);
  CHECK(v.at("minus1Sent_FS3_srl=agent=kids") == 1.0);
  CHECK(v.at("FS3_corefInChain") == 1.0);
  CHECK(v.at("FS3_discType=implicit") == 1.0);
  CHECK(v.at("FS3_discConnective=because") == 1.0);
  CHECK_THROWS_AS(parse_layers("[1,2]"), ParseError);
  CHECK_THROWS_AS(parse_layers(R"({"d": {"sentiment": [[1,2]]}})"), ParseError);
}

TEST_CASE("parallel extraction equals the serial reference") {
  synth::Options o;
  o.documents = 25;
  const auto c = synth::make_corpus(o);
  std::vector<std::size_t> ids(c.documents.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  const auto vocab = build_vocabulary(c, ids, 2);
  const auto emb = synth::make_embeddings(8, o.vocabulary, 1);
  FeatureResources r;
  r.vocabulary = &vocab;
  r.embeddings = &emb;
  const auto cfg = config_of("014");
  const auto a = extract_corpus(c, ids, cfg, r);
  const auto b = reference::extract_corpus(c, ids, cfg, r);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].sentences.size() == b[i].sentences.size());
    for (std::size_t s = 0; s < a[i].sentences.size(); ++s) {
      CHECK(assemble(a[i], s, 4) == assemble(b[i], s, 4));
      for (const auto& [name, value] : assemble(a[i], s, 4)) {
        CHECK(std::isfinite(value));
        if (name.find("relPos") != std::string::npos) {
          CHECK(value >= 0.0);
          CHECK(value <= 1.0);
        }
      }
    }
  }
}
