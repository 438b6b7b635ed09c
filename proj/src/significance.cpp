#include <algorithm>
#include <cmath>

#include "argmine/error.hpp"
#include "argmine/evaluation.hpp"

namespace argmine {

double liddell_p_value(std::size_t n10, std::size_t n01) {
  const std::size_t n = n10 + n01;
  if (n == 0) return 1.0;
  const std::size_t hi = std::max(n10, n01);
  const double dn = static_cast<double>(n);
  const double log_half_n = dn * std::log(0.5);
  // Upper tail summed from the smallest term up for accuracy.
  double tail = 0.0;
  for (std::size_t k = n + 1; k-- > hi;) {
    const double dk = static_cast<double>(k);
    const double log_term = std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0) + log_half_n;
    tail += std::exp(log_term);
  }
  return std::min(1.0, 2.0 * tail);
}

LiddellResult liddell_exact_test(std::span<const BioLabel> gold, std::span<const BioLabel> pred_a,
                                 std::span<const BioLabel> pred_b) {
  if (gold.size() != pred_a.size() || gold.size() != pred_b.size()) {
    throw ConfigError("significance test inputs differ in length");
  }
  LiddellResult r;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool a = pred_a[i] == gold[i];
    const bool b = pred_b[i] == gold[i];
    if (a && !b) ++r.a_only;
    if (b && !a) ++r.b_only;
  }
  r.p_value = liddell_p_value(r.a_only, r.b_only);
  return r;
}

}  // namespace argmine
