#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "argmine/corpus.hpp"
#include "argmine/encoding.hpp"
#include "argmine/error.hpp"
#include "support/docs.hpp"
#include "support/synthetic.hpp"

using namespace argmine;
using docs::span;
using CT = ComponentType;

namespace {

const char* kMinimal = R"({
  "name": "mini", "version": "1",
  "documents": [{
    "id": "d1", "topic": "redshirting", "register": "comment",
    "text": "Kids need time. They grow.",
    "paragraphs": [{"start": 0, "end": 26}],
    "sentences": [{"start": 0, "end": 15}, {"start": 16, "end": 26}],
    "tokens": [{"start": 0, "end": 4}, {"start": 5, "end": 9}, {"start": 10, "end": 14}, {"start": 14, "end": 15},
               {"start": 16, "end": 20}, {"start": 21, "end": 25}, {"start": 25, "end": 26}],
    "annotations": [],
    "gold": {"annotator": "gold", "spans": [{"type": "claim", "dimension": "logos", "first_token": 0, "last_token": 3}]}
  }]
})";

std::string with(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

}  // namespace

TEST_CASE("minimal corpus parses with derived fields") {
  const auto c = parse_corpus_string(kMinimal);
  REQUIRE(c.documents.size() == 1);
  const auto& d = c.documents[0];
  CHECK(d.topic == Topic::kRedshirting);
  CHECK(d.gold->spans.size() == 1);
  CHECK(d.sentences[1].first_token == 4);
  CHECK(d.sentences[1].last_token == 6);
  CHECK(d.token_text(2) == "time");
}

TEST_CASE("malformed JSON reports line and column") {
  try {
    parse_corpus_string("{\n  \"name\": \"x\",\n  oops\n}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() > 0);
  }
}

TEST_CASE("schema violations name document and field") {
  SUBCASE("span past the last token") {
    const auto bad = with(kMinimal, "\"last_token\": 3", "\"last_token\": 7");
    try {
      parse_corpus_string(bad);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("d1") != std::string::npos);
      CHECK(msg.find("gold.spans[0]") != std::string::npos);
    }
  }
  SUBCASE("unknown topic") {
    CHECK_THROWS_AS(parse_corpus_string(with(kMinimal, "redshirting", "gardening")), ValidationError);
  }
  SUBCASE("unknown key") {
    CHECK_THROWS_AS(parse_corpus_string(with(kMinimal, "\"annotations\": []", "\"annotations\": [], \"extra\": 1")),
                    ValidationError);
  }
  SUBCASE("duplicate ids") {
    auto c = parse_corpus_string(kMinimal);
    c.documents.push_back(c.documents[0]);
    CHECK_THROWS_AS(parse_corpus_string(serialize_corpus_string(c)), ValidationError);
  }
}

TEST_CASE("serialization is canonical and round-trips") {
  synth::Options o;
  o.documents = 12;
  o.persuasive = true;
  o.aligned = false;
  auto c = synth::make_corpus(o);
  c.documents[1].gold->spans[0].summary = "kids first";
  c.documents[1].gold->implicit_claim_stance = "pro";
  const auto a = serialize_corpus_string(c);
  const auto b = serialize_corpus_string(c);
  CHECK(a == b);
  const auto back = parse_corpus_string(a);
  CHECK(back == c);
  CHECK(serialize_corpus_string(back) == a);
  CHECK(a.find(" \n") == std::string::npos);
  CHECK(a.find('\r') == std::string::npos);
}

TEST_CASE("empty corpus round trip") {
  Corpus c;
  c.name = "empty";
  c.version = "0";
  CHECK(parse_corpus_string(serialize_corpus_string(c)) == c);
}

TEST_CASE("file round trip and unwritable path") {
  const auto dir = std::filesystem::temp_directory_path() / "argmine_corpus_test";
  std::filesystem::create_directories(dir);
  auto c = parse_corpus_string(kMinimal);
  serialize_corpus(c, dir / "c.json");
  CHECK(parse_corpus(dir / "c.json") == c);
  CHECK_THROWS_AS(serialize_corpus(c, dir / "missing" / "sub" / "c.json"), IoError);
  CHECK_THROWS_AS(parse_corpus(dir / "nope.json"), IoError);
}

TEST_CASE("non-ASCII offsets are code points") {
  auto d = docs::make("u", {{"Ça", "va"}});
  CHECK(d.text == "Ça va");
  CHECK(d.tokens[0].end == 2);
  CHECK(d.tokens[0].byte_end == 3);
  CHECK(d.token_text(1) == "va");
}

TEST_CASE("validate_document findings") {
  auto d = docs::make("v", {docs::words(4), docs::words(4)});
  SUBCASE("disjoint claim and premise") {
    d.annotations.push_back(docs::set("a", {span(CT::kClaim, 0, 2), span(CT::kPremise, 3, 6)}));
    CHECK(validate_document(d).empty());
  }
  SUBCASE("overlapping premises") {
    d.annotations.push_back(docs::set("a", {span(CT::kPremise, 0, 3), span(CT::kPremise, 2, 5)}));
    const auto f = validate_document(d);
    CHECK(error_count(f) == 1);
  }
  SUBCASE("refutation without rebuttal warns") {
    d.annotations.push_back(docs::set("a", {span(CT::kRefutation, 0, 3)}));
    const auto f = validate_document(d);
    REQUIRE(f.size() == 1);
    CHECK(f[0].severity == Severity::kWarning);
  }
  SUBCASE("dimension mismatch") {
    auto s = span(CT::kAppealToEmotion, 0, 1);
    s.dimension = Dimension::kLogos;
    d.annotations.push_back(docs::set("a", {s}));
    CHECK(error_count(validate_document(d)) == 1);
  }
  SUBCASE("pathos may overlap logos") {
    d.annotations.push_back(docs::set("a", {span(CT::kClaim, 0, 3), span(CT::kAppealToEmotion, 1, 2)}));
    CHECK(validate_document(d).empty());
  }
  SUBCASE("implicit flag only on claims") {
    auto s = span(CT::kPremise, 0, 1);
    s.implicit = true;
    d.annotations.push_back(docs::set("a", {s}));
    CHECK(error_count(validate_document(d)) == 1);
  }
}

TEST_CASE("gold majority") {
  auto d = docs::make("g", {docs::words(6), docs::words(4)});
  SUBCASE("three identical sets") {
    const auto s = docs::set("x", {span(CT::kClaim, 0, 2), span(CT::kPremise, 3, 7)});
    for (const char* who : {"a", "b", "c"}) {
      auto c = s;
      c.annotator = who;
      d.annotations.push_back(c);
    }
    const auto g = build_gold_majority(d);
    CHECK(g.gold.spans == s.spans);
    CHECK(g.unresolved.empty());
  }
  SUBCASE("two premise votes beat one backing") {
    d.annotations = {docs::set("a", {span(CT::kPremise, 0, 4)}), docs::set("b", {span(CT::kPremise, 0, 4)}),
                     docs::set("c", {span(CT::kBacking, 0, 4)})};
    const auto g = build_gold_majority(d);
    REQUIRE(g.gold.spans.size() == 1);
    CHECK(g.gold.spans[0].type == CT::kPremise);
    CHECK(g.gold.spans[0].first_token == 0);
    CHECK(g.gold.spans[0].last_token == 4);
  }
  SUBCASE("claim 0-3 and 0-5 against nothing") {
    d.annotations = {docs::set("a", {span(CT::kClaim, 0, 3)}), docs::set("b", {span(CT::kClaim, 0, 5)}),
                     docs::set("c", {})};
    const auto g = build_gold_majority(d);
    REQUIRE(g.gold.spans.size() == 1);
    CHECK(g.gold.spans[0].last_token == 3);
    CHECK(g.unresolved.empty());
  }
  SUBCASE("three-way split is unresolved") {
    d.annotations = {docs::set("a", {span(CT::kClaim, 0, 1)}), docs::set("b", {span(CT::kPremise, 0, 1)}),
                     docs::set("c", {})};
    const auto g = build_gold_majority(d);
    CHECK(g.gold.spans.empty());
    REQUIRE(g.unresolved.size() == 1);
    CHECK(g.unresolved[0].first_token == 0);
    CHECK(g.unresolved[0].last_token == 1);
  }
  SUBCASE("agreed starts keep adjacent components apart") {
    const auto s = docs::set("x", {span(CT::kPremise, 0, 2), span(CT::kPremise, 3, 5)});
    for (const char* who : {"a", "b", "c"}) {
      auto c = s;
      c.annotator = who;
      d.annotations.push_back(c);
    }
    CHECK(build_gold_majority(d).gold.spans.size() == 2);
  }
  SUBCASE("fewer than three sets") {
    d.annotations = {docs::set("a", {}), docs::set("b", {})};
    CHECK_THROWS_AS(build_gold_majority(d), ValidationError);
  }
}

TEST_CASE("gold output is always valid") {
  synth::Options o;
  o.documents = 40;
  o.noise = 0.5;
  o.aligned = false;
  const auto c = synth::make_corpus(o);
  for (auto d : c.documents) {
    d.gold = build_gold_majority(d).gold;
    CHECK(error_count(validate_document(d)) == 0);
  }
}

TEST_CASE("statistics") {
  SUBCASE("empty corpus") {
    const auto s = corpus_statistics(Corpus{});
    CHECK(s.document_count == 0);
    CHECK(s.token_count == 0);
    CHECK(s.sentence_count == 0);
  }
  SUBCASE("additivity") {
    synth::Options o;
    o.documents = 10;
    const auto all = synth::make_corpus(o);
    Corpus a, b;
    a.documents.assign(all.documents.begin(), all.documents.begin() + 4);
    b.documents.assign(all.documents.begin() + 4, all.documents.end());
    const auto sa = corpus_statistics(a), sb = corpus_statistics(b), s = corpus_statistics(all);
    CHECK(s.document_count == sa.document_count + sb.document_count);
    CHECK(s.token_count == sa.token_count + sb.token_count);
    CHECK(s.sentence_count == sa.sentence_count + sb.sentence_count);
    REQUIRE(s.class_distribution);
    for (const auto& [label, n] : *s.class_distribution) {
      const auto get = [&](const CorpusStatistics& x) {
        auto it = x.class_distribution->find(label);
        return it == x.class_distribution->end() ? std::size_t{0} : it->second;
      };
      CHECK(n == get(sa) + get(sb));
    }
    for (const auto& [topic, regs] : s.documents) {
      for (const auto& [reg, n] : regs) {
        std::size_t parts = 0;
        for (const auto* x : {&sa, &sb}) {
          auto t = x->documents.find(topic);
          if (t == x->documents.end()) continue;
          auto r = t->second.find(reg);
          if (r != t->second.end()) parts += r->second;
        }
        CHECK(n == parts);
      }
    }
  }
  SUBCASE("missing gold omits class distribution") {
    synth::Options o;
    o.documents = 3;
    o.gold = false;
    const auto s = corpus_statistics(synth::make_corpus(o));
    CHECK_FALSE(s.class_distribution);
    CHECK_FALSE(s.notices.empty());
  }
  SUBCASE("mean and sample deviation") {
    Corpus c;
    c.documents.push_back(docs::make("a", {docs::words(2)}));
    c.documents.push_back(docs::make("b", {docs::words(4)}));
    const auto s = corpus_statistics(c);
    CHECK(s.tokens_per_document.mean == doctest::Approx(3.0));
    CHECK(s.tokens_per_document.stddev == doctest::Approx(std::sqrt(2.0)));
  }
}
