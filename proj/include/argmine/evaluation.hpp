#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "argmine/labels.hpp"

namespace argmine {

// Boundary positions inside a continuum of `length` units. A boundary at p
// separates unit p-1 from unit p.
struct Segmentation {
  std::size_t length = 0;
  std::vector<std::size_t> boundaries;  // strictly increasing, in (0, length)

  bool operator==(const Segmentation&) const = default;
};

// Boundaries where the component run changes; *-B always opens a new run.
Segmentation segmentation_from_labels(std::span<const BioLabel> tokens);

// Minimal boundary edit set between two segmentations.
struct BoundaryEdits {
  std::size_t matches = 0;
  std::size_t additions = 0;
  std::size_t transpositions = 0;
  double transposition_cost = 0.0;  // sum of distance / window

  BoundaryEdits& operator+=(const BoundaryEdits& o);
};

// Boundaries at the same position match; a pair of unmatched boundaries at
// distance d <= window may be transposed at cost d / window; every remaining
// boundary is an addition at cost 1. The edit set minimizes total cost, ties
// going to more transpositions. Throws ConfigError on a length mismatch or
// an invalid window, ValidationError on an out-of-range boundary.
BoundaryEdits boundary_edits(const Segmentation& a, const Segmentation& b, std::size_t window = 2);

// 1 - cost / (additions + transpositions + matches); 1 when neither side
// has boundaries.
double boundary_similarity(const BoundaryEdits& edits);
double boundary_similarity(const Segmentation& a, const Segmentation& b, std::size_t window = 2);

struct LiddellResult {
  std::size_t a_only = 0;  // A correct, B wrong (n10)
  std::size_t b_only = 0;  // B correct, A wrong (n01)
  double p_value = 1.0;
};

// Two-sided exact matched-pairs binomial test on discordant counts.
double liddell_p_value(std::size_t n10, std::size_t n01);
// Token correctness is exact label match. Throws ConfigError on length
// mismatch.
LiddellResult liddell_exact_test(std::span<const BioLabel> gold, std::span<const BioLabel> pred_a,
                                 std::span<const BioLabel> pred_b);

}  // namespace argmine
