#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "argmine/labels.hpp"

namespace argmine {

// Gold x predicted token counts over the 11 BIO classes.
class ConfusionMatrix {
 public:
  using Row = std::array<std::uint64_t, kNumBioLabels>;

  void add(BioLabel gold, BioLabel predicted, std::uint64_t n = 1) {
    counts_[index_of(gold)][index_of(predicted)] += n;
  }
  void add(std::span<const BioLabel> gold, std::span<const BioLabel> predicted);
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);

  std::uint64_t at(BioLabel gold, BioLabel predicted) const {
    return counts_[index_of(gold)][index_of(predicted)];
  }
  const std::array<Row, kNumBioLabels>& counts() const { return counts_; }
  std::uint64_t total() const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::array<Row, kNumBioLabels> counts_{};
};

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Scores derived from a confusion matrix. Classes with no predictions get
// precision 0; classes absent from gold and prediction get F1 0 and still
// count in the 11-way macro average.
struct TokenScores {
  std::array<ClassScores, kNumBioLabels> per_class{};
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  std::uint64_t tokens = 0;
};

TokenScores score(const ConfusionMatrix& m);

struct TokenEvaluation {
  ConfusionMatrix confusion;
  TokenScores scores;
};

// Throws ConfigError on length mismatch.
TokenEvaluation token_macro_f1(std::span<const BioLabel> gold, std::span<const BioLabel> predicted);

}  // namespace argmine
