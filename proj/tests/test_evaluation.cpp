#include <cmath>
#include <random>

#include "doctest.h"

#include "argmine/error.hpp"
#include "argmine/evaluation.hpp"
#include "oracles/oracles.hpp"

using namespace argmine;
using B = BioLabel;

namespace {

Segmentation random_segmentation(std::mt19937_64& rng, std::size_t length, double rate) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Segmentation s{length, {}};
  for (std::size_t p = 1; p < length; ++p) {
    if (u(rng) < rate) s.boundaries.push_back(p);
  }
  return s;
}

}  // namespace

TEST_CASE("segmentation_from_labels") {
  const std::vector<B> all_o(5, B::kO);
  CHECK(segmentation_from_labels(all_o).boundaries.empty());
  const std::vector<B> a{B::kO, B::kO, B::kClaimB, B::kClaimI, B::kO};
  CHECK(segmentation_from_labels(a) == Segmentation{5, {2, 4}});
  const std::vector<B> b{B::kPremiseB, B::kPremiseI, B::kPremiseB};
  CHECK(segmentation_from_labels(b).boundaries == std::vector<std::size_t>{2});
  const std::vector<B> c{B::kClaimI, B::kPremiseI, B::kO};
  CHECK(segmentation_from_labels(c).boundaries == std::vector<std::size_t>{1, 2});
  CHECK(segmentation_from_labels(std::vector<B>{}).length == 0);
}

TEST_CASE("boundary similarity examples") {
  const Segmentation five{10, {5}}, none{10, {}};
  CHECK(boundary_similarity(five, none) == 0.0);
  CHECK(boundary_similarity(none, none) == 1.0);
  CHECK(boundary_similarity(five, five) == 1.0);
  // One near miss at distance 1 with window 2: cost 1/2 over one edit.
  CHECK(boundary_similarity(Segmentation{10, {5}}, Segmentation{10, {6}}) == doctest::Approx(0.5));
  const auto e = boundary_edits(Segmentation{10, {2, 5}}, Segmentation{10, {2, 8}});
  CHECK(e.matches == 1);
  CHECK(e.additions == 2);
  CHECK(e.transpositions == 0);
  CHECK_THROWS_AS(boundary_edits(Segmentation{10, {}}, Segmentation{9, {}}), ConfigError);
  CHECK_THROWS_AS(boundary_edits(five, none, 0), ConfigError);
  CHECK_THROWS_AS(boundary_edits(Segmentation{10, {12}}, none), ValidationError);
  CHECK_THROWS_AS(boundary_edits(Segmentation{10, {5, 3}}, none), ValidationError);
}

TEST_CASE("boundary similarity properties against the oracle") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> len(2, 20), win(1, 3);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = len(rng), w = win(rng);
    const auto a = random_segmentation(rng, n, 0.3), b = random_segmentation(rng, n, 0.3);
    const double ab = boundary_similarity(a, b, w), ba = boundary_similarity(b, a, w);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK(boundary_similarity(a, a, w) == 1.0);
    if (a != b) CHECK(ab < 1.0);
    const auto expected = oracle::boundary_similarity(a.boundaries, b.boundaries, w);
    CHECK(std::abs(ab - expected.similarity) < 1e-9);
    const auto e = boundary_edits(a, b, w);
    CHECK(e.additions == expected.additions);
    CHECK(e.transpositions == expected.transpositions);
  }
}

TEST_CASE("pooled edits") {
  BoundaryEdits total;
  total += boundary_edits(Segmentation{10, {5}}, Segmentation{10, {5}});
  total += boundary_edits(Segmentation{10, {5}}, Segmentation{10, {}});
  CHECK(total.matches == 1);
  CHECK(total.additions == 1);
  CHECK(boundary_similarity(total) == doctest::Approx(0.5));
}

TEST_CASE("liddell exact test") {
  // 2 * 0.5^10 = 0.001953125, quoted as 0.00195 at three significant digits.
  CHECK(std::abs(liddell_p_value(10, 0) - 2.0 * std::pow(0.5, 10)) < 1e-6);
  CHECK(std::round(liddell_p_value(10, 0) * 1e5) / 1e5 == doctest::Approx(0.00195));
  CHECK(std::abs(liddell_p_value(10, 0) - oracle::matched_pairs_p(10, 0)) < 1e-12);
  CHECK(liddell_p_value(5, 5) == 1.0);
  CHECK(liddell_p_value(0, 0) == 1.0);
  for (std::size_t a = 0; a < 30; ++a) {
    for (std::size_t b = 0; b < 30; b += 3) {
      CHECK(liddell_p_value(a, b) == doctest::Approx(liddell_p_value(b, a)).epsilon(1e-12));
      CHECK(std::abs(liddell_p_value(a, b) - oracle::matched_pairs_p(a, b)) < 1e-9);
    }
  }
  for (std::size_t a = 1; a < 40; ++a) CHECK(liddell_p_value(a + 1, 0) < liddell_p_value(a, 0));

  const std::vector<B> gold{B::kO, B::kClaimB, B::kClaimI, B::kO};
  const std::vector<B> pa{B::kO, B::kClaimB, B::kO, B::kO};
  CHECK(liddell_exact_test(gold, pa, pa).p_value == 1.0);
  const std::vector<B> pb{B::kClaimB, B::kO, B::kO, B::kO};
  const auto r = liddell_exact_test(gold, pa, pb);
  CHECK(r.a_only == 2);
  CHECK(r.b_only == 0);
  CHECK(r.p_value == doctest::Approx(0.5));
  CHECK_THROWS_AS(liddell_exact_test(gold, pa, std::vector<B>{B::kO}), ConfigError);
}
