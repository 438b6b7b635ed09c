#include <sstream>

#include "doctest.h"

#include "argmine/encoding.hpp"
#include "argmine/error.hpp"
#include "support/docs.hpp"
#include "support/synthetic.hpp"

using namespace argmine;
using docs::span;
using CT = ComponentType;
using B = BioLabel;

TEST_CASE("sentence_approximate") {
  SUBCASE("premise continuing from the previous sentence") {
    auto d = docs::make("d", {docs::words(3), docs::words(3)});
    const auto l = sentence_approximate(d, docs::set("a", {span(CT::kPremise, 1, 5)}));
    CHECK(l.labels == std::vector<B>{B::kPremiseB, B::kPremiseI});
  }
  SUBCASE("no logos spans") {
    auto d = docs::make("d", {docs::words(3), docs::words(2)});
    const auto l = sentence_approximate(d, docs::set("a", {span(CT::kAppealToEmotion, 0, 4)}));
    CHECK(l.labels == std::vector<B>{B::kO, B::kO});
  }
  SUBCASE("longest component wins") {
    auto d = docs::make("d", {docs::words(14)});
    const auto l = sentence_approximate(d, docs::set("a", {span(CT::kClaim, 0, 4), span(CT::kPremise, 5, 12)}));
    CHECK(l.labels == std::vector<B>{B::kPremiseB});
  }
  SUBCASE("equal sizes go to the earliest start") {
    auto d = docs::make("d", {docs::words(6)});
    const auto l = sentence_approximate(d, docs::set("a", {span(CT::kBacking, 3, 5), span(CT::kClaim, 0, 2)}));
    CHECK(l.labels == std::vector<B>{B::kClaimB});
  }
}

TEST_CASE("expand_to_tokens") {
  auto d = docs::make("d", {docs::words(4), docs::words(3)});
  CHECK(expand_to_tokens(d, {"d", {B::kClaimB, B::kPremiseI}}) ==
        std::vector<B>{B::kClaimB, B::kClaimI, B::kClaimI, B::kClaimI, B::kPremiseI, B::kPremiseI, B::kPremiseI});
  CHECK(expand_to_tokens(d, {"d", {B::kO, B::kO}}) == std::vector<B>(7, B::kO));
  CHECK_THROWS(expand_to_tokens(d, {"d", {B::kO}}));
}

TEST_CASE("tokens_from_annotation") {
  auto d = docs::make("d", {docs::words(6)});
  CHECK(tokens_from_annotation(d, docs::set("a", {span(CT::kClaim, 2, 4)})) ==
        std::vector<B>{B::kO, B::kO, B::kClaimB, B::kClaimI, B::kClaimI, B::kO});
  CHECK(tokens_from_annotation(d, docs::set("a", {span(CT::kPremise, 0, 2), span(CT::kPremise, 3, 5)})) ==
        std::vector<B>{B::kPremiseB, B::kPremiseI, B::kPremiseI, B::kPremiseB, B::kPremiseI, B::kPremiseI});
  CHECK(tokens_from_annotation(d, docs::set("a", {})) == std::vector<B>(6, B::kO));
}

TEST_CASE("token_macro_f1") {
  const std::vector<B> gold{B::kO, B::kO, B::kClaimB, B::kClaimI};
  const std::vector<B> pred{B::kO, B::kClaimB, B::kClaimI, B::kClaimI};
  const auto e = token_macro_f1(gold, pred);
  CHECK(e.scores.accuracy == doctest::Approx(0.5));
  // Claim-I: tp 1, fp 1, fn 0.
  CHECK(e.scores.per_class[static_cast<int>(B::kClaimI)].f1 == doctest::Approx(2.0 / 3.0));
  // O: tp 1, fn 1 -> 2/3; Claim-B: tp 0 -> 0; eight absent classes -> 0.
  CHECK(e.scores.macro_f1 == doctest::Approx((2.0 / 3.0 + 2.0 / 3.0) / 11.0));
  CHECK(token_macro_f1(gold, gold).scores.accuracy == 1.0);
  CHECK_THROWS_AS(token_macro_f1(gold, std::vector<B>{B::kO}), ConfigError);
}

TEST_CASE("oracle_eval") {
  SUBCASE("sentence-aligned corpus is lossless") {
    synth::Options o;
    o.documents = 15;
    const auto r = oracle_eval(synth::make_corpus(o));
    CHECK(r.evaluation.scores.accuracy == 1.0);
    CHECK(r.evaluation.scores.macro_f1 == 1.0);
  }
  SUBCASE("claim over two of four tokens") {
    Corpus c;
    auto d = docs::make("d", {docs::words(4)});
    d.gold = docs::set("gold", {span(CT::kClaim, 1, 2)});
    c.documents.push_back(d);
    // Gold O,Claim-B,Claim-I,O against Claim-B,Claim-I,Claim-I,Claim-I: only token 2 matches.
    const auto r = oracle_eval(c);
    CHECK(r.evaluation.scores.accuracy == doctest::Approx(0.25));
  }
  SUBCASE("missing gold") {
    Corpus c;
    c.documents.push_back(docs::make("d", {docs::words(2)}));
    CHECK_THROWS(oracle_eval(c));
  }
}

TEST_CASE("expanded approximation re-encodes to the same tokens") {
  synth::Options o;
  o.documents = 30;
  o.aligned = false;
  const auto c = synth::make_corpus(o);
  for (const auto& d : c.documents) {
    const auto l = sentence_approximate(d, *d.gold);
    REQUIRE(l.labels.size() == d.sentences.size());
    auto tokens = expand_to_tokens(d, l);
    REQUIRE(tokens.size() == d.tokens.size());
    AnnotationSet back;
    for (std::size_t t = 0; t < tokens.size();) {
      if (tokens[t] == B::kO) {
        ++t;
        continue;
      }
      const auto type = *component_of(tokens[t]);
      std::size_t e = t;
      while (e + 1 < tokens.size() && is_inside(tokens[e + 1]) && component_of(tokens[e + 1]) == type) ++e;
      back.spans.push_back(span(type, t, e));
      // A span continuing from nowhere re-reads with a begin tag.
      tokens[t] = begin_label(type);
      t = e + 1;
    }
    CHECK(tokens_from_annotation(d, back) == tokens);
    CHECK(expand_to_tokens(d, sentence_approximate(d, back)) == tokens);
  }
}

TEST_CASE("token dump round trip") {
  std::vector<TokenPrediction> p{{"a", {B::kO, B::kClaimB}, {B::kClaimB, B::kClaimI}}, {"b", {}, {B::kO}}};
  std::stringstream ss;
  write_token_dump(ss, p);
  const auto back = read_token_dump(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0].gold == p[0].gold);
  CHECK(back[0].predicted == p[0].predicted);
  CHECK(back[1].gold.empty());
  CHECK(back[1].predicted == p[1].predicted);
  std::stringstream bad("doc_id\ttoken_index\tgold_label\tpredicted_label\na\t0\tO\tNope\n");
  CHECK_THROWS_AS(read_token_dump(bad), ParseError);
}
