#include "argmine/metrics.hpp"

#include "argmine/error.hpp"

namespace argmine {

void ConfusionMatrix::add(std::span<const BioLabel> gold, std::span<const BioLabel> predicted) {
  if (gold.size() != predicted.size()) {
    throw ConfigError("label sequences differ in length: " + std::to_string(gold.size()) + " vs " +
                      std::to_string(predicted.size()));
  }
  for (std::size_t i = 0; i < gold.size(); ++i) add(gold[i], predicted[i]);
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  for (std::size_t g = 0; g < kNumBioLabels; ++g) {
    for (std::size_t p = 0; p < kNumBioLabels; ++p) counts_[g][p] += other.counts_[g][p];
  }
  return *this;
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t n = 0;
  for (const auto& row : counts_) {
    for (auto c : row) n += c;
  }
  return n;
}

TokenScores score(const ConfusionMatrix& m) {
  TokenScores s;
  const auto& c = m.counts();
  std::uint64_t correct = 0;
  for (std::size_t k = 0; k < kNumBioLabels; ++k) {
    std::uint64_t gold_k = 0, pred_k = 0;
    for (std::size_t j = 0; j < kNumBioLabels; ++j) {
      gold_k += c[k][j];
      pred_k += c[j][k];
    }
    const auto tp = static_cast<double>(c[k][k]);
    correct += c[k][k];
    auto& cs = s.per_class[k];
    cs.precision = pred_k ? tp / static_cast<double>(pred_k) : 0.0;
    cs.recall = gold_k ? tp / static_cast<double>(gold_k) : 0.0;
    cs.f1 = (cs.precision + cs.recall) > 0.0
                ? 2.0 * cs.precision * cs.recall / (cs.precision + cs.recall)
                : 0.0;
    s.macro_f1 += cs.f1;
  }
  s.macro_f1 /= static_cast<double>(kNumBioLabels);
  s.tokens = m.total();
  s.accuracy = s.tokens ? static_cast<double>(correct) / static_cast<double>(s.tokens) : 0.0;
  return s;
}

TokenEvaluation token_macro_f1(std::span<const BioLabel> gold, std::span<const BioLabel> predicted) {
  TokenEvaluation e;
  e.confusion.add(gold, predicted);
  e.scores = score(e.confusion);
  return e;
}

}  // namespace argmine
