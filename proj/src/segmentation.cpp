#include <algorithm>
#include <limits>

#include "argmine/error.hpp"
#include "argmine/evaluation.hpp"

namespace argmine {

Segmentation segmentation_from_labels(std::span<const BioLabel> tokens) {
  Segmentation s;
  s.length = tokens.size();
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto prev = component_of(tokens[i - 1]);
    const auto cur = component_of(tokens[i]);
    if (is_begin(tokens[i]) || prev != cur) s.boundaries.push_back(i);
  }
  return s;
}

BoundaryEdits& BoundaryEdits::operator+=(const BoundaryEdits& o) {
  matches += o.matches;
  additions += o.additions;
  transpositions += o.transpositions;
  transposition_cost += o.transposition_cost;
  return *this;
}

namespace {

void check(const Segmentation& s, const char* side) {
  for (std::size_t i = 0; i < s.boundaries.size(); ++i) {
    const auto b = s.boundaries[i];
    if (b == 0 || b >= s.length) {
      throw ValidationError(std::string("segmentation ") + side + ": boundary " + std::to_string(b) +
                            " outside (0, " + std::to_string(s.length) + ")");
    }
    if (i > 0 && b <= s.boundaries[i - 1]) {
      throw ValidationError(std::string("segmentation ") + side + ": boundaries not strictly increasing");
    }
  }
}

// Lexicographic objective: total cost in units of 1/window, then more
// transpositions.
struct Cost {
  std::uint64_t scaled = 0;
  std::size_t transpositions = 0;
  std::size_t distance = 0;

  bool better_than(const Cost& o) const {
    if (scaled != o.scaled) return scaled < o.scaled;
    return transpositions > o.transpositions;
  }
};

}  // namespace

BoundaryEdits boundary_edits(const Segmentation& a, const Segmentation& b, std::size_t window) {
  if (a.length != b.length) {
    throw ConfigError("segmentations cover different lengths (" + std::to_string(a.length) + " vs " +
                      std::to_string(b.length) + ")");
  }
  if (window == 0) throw ConfigError("boundary similarity window must be positive");
  check(a, "a");
  check(b, "b");

  BoundaryEdits e;
  std::vector<std::size_t> ua, ub;
  std::set_difference(a.boundaries.begin(), a.boundaries.end(), b.boundaries.begin(), b.boundaries.end(),
                      std::back_inserter(ua));
  std::set_difference(b.boundaries.begin(), b.boundaries.end(), a.boundaries.begin(), a.boundaries.end(),
                      std::back_inserter(ub));
  e.matches = a.boundaries.size() - ua.size();

  // Optimal matchings on a line never cross, so a prefix DP suffices.
  const std::size_t n = ua.size(), m = ub.size();
  const auto w = static_cast<std::uint64_t>(window);
  std::vector<Cost> dp((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> Cost& { return dp[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      if (i == 0 && j == 0) continue;
      Cost best{std::numeric_limits<std::uint64_t>::max(), 0, 0};
      if (i > 0) {
        Cost c = at(i - 1, j);
        c.scaled += w;
        if (c.better_than(best)) best = c;
      }
      if (j > 0) {
        Cost c = at(i, j - 1);
        c.scaled += w;
        if (c.better_than(best)) best = c;
      }
      if (i > 0 && j > 0) {
        const auto d = ua[i - 1] > ub[j - 1] ? ua[i - 1] - ub[j - 1] : ub[j - 1] - ua[i - 1];
        if (d <= window) {
          Cost c = at(i - 1, j - 1);
          c.scaled += d;
          c.transpositions += 1;
          c.distance += d;
          if (c.better_than(best)) best = c;
        }
      }
      at(i, j) = best;
    }
  }
  const Cost& final_cost = at(n, m);
  e.transpositions = final_cost.transpositions;
  e.additions = n + m - 2 * final_cost.transpositions;
  e.transposition_cost = static_cast<double>(final_cost.distance) / static_cast<double>(window);
  return e;
}

double boundary_similarity(const BoundaryEdits& e) {
  const std::size_t involved = e.additions + e.transpositions + e.matches;
  if (involved == 0) return 1.0;
  return 1.0 - (static_cast<double>(e.additions) + e.transposition_cost) / static_cast<double>(involved);
}

double boundary_similarity(const Segmentation& a, const Segmentation& b, std::size_t window) {
  return boundary_similarity(boundary_edits(a, b, window));
}

}  // namespace argmine
