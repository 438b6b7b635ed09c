#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "argmine/corpus.hpp"

namespace argmine {

// A document as a set of binary n-gram features.
struct DocInstance {
  std::string doc_id;
  std::optional<bool> label;           // true = persuasive
  std::vector<std::string> features;   // sorted, unique
};

DocInstance make_instance(const Document& doc, int max_n = 3);

struct ClassifierConfig {
  std::size_t epochs = 10;
  std::uint64_t seed = 1;
  bool shuffle = true;
  bool averaging = true;
  int max_n = 3;
};

struct LinearTextClassifier {
  std::map<std::string, double> weights;
  double bias = 0.0;
  int max_n = 3;

  double score(std::span<const std::string> features) const;
};

struct Classification {
  bool persuasive = false;
  double score = 0.0;
};

// Document-level averaged perceptron. Throws ConfigError unless both
// classes occur.
LinearTextClassifier train_doc_classifier(std::span<const DocInstance> instances, const ClassifierConfig& config);
LinearTextClassifier train_doc_classifier(const Corpus& corpus, std::span<const std::size_t> train_docs,
                                          const ClassifierConfig& config);

// Positive score means persuasive; a zero score is non-persuasive.
Classification classify(const LinearTextClassifier& model, const DocInstance& instance);
Classification classify(const LinearTextClassifier& model, const Document& doc);

struct BinaryEvaluation {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  double f1_persuasive = 0.0;
  double f1_non_persuasive = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
};

// F1 of a class without predicted or gold positives is 0.
BinaryEvaluation evaluate_binary(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn, std::uint64_t tn);
BinaryEvaluation evaluate_binary(const std::vector<bool>& gold, const std::vector<bool>& predicted);
BinaryEvaluation evaluate_docs(const LinearTextClassifier& model, const Corpus& corpus,
                               std::span<const std::size_t> test_docs);

struct PersuasiveCrossval {
  BinaryEvaluation evaluation;  // from the summed fold counts
  std::size_t folds = 0;
  std::size_t documents = 0;
  std::size_t positives = 0;
  std::uint64_t seed = 0;
};

// k-fold CV over the documents carrying a persuasiveness label: seeded
// shuffle, contiguous folds, folds trained in parallel.
PersuasiveCrossval crossval_doc_classifier(const Corpus& corpus, std::size_t k, const ClassifierConfig& config);

}  // namespace argmine
