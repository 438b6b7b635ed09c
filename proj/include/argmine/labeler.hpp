#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "argmine/corpus.hpp"
#include "argmine/encoding.hpp"
#include "argmine/features.hpp"

namespace argmine {

// Interns base feature names to dense ids.
class FeatureSpace {
 public:
  std::uint32_t intern(const std::string& name);
  std::optional<std::uint32_t> find(const std::string& name) const;
  const std::string& name(std::uint32_t id) const { return names_.at(id); }
  std::size_t size() const { return names_.size(); }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> names_;
};

struct EncodedSentence {
  std::vector<std::pair<std::uint32_t, float>> lexical;
  std::vector<std::pair<std::uint32_t, float>> contextual;
};

struct EncodedDocument {
  std::string doc_id;
  std::vector<EncodedSentence> sentences;
  std::vector<BioLabel> gold;  // sentence labels; empty when unknown
};

// Maps base names through `space`. With grow = false unknown features are
// dropped (they have no weight).
EncodedDocument encode(const DocumentFeatures& features, FeatureSpace& space, bool grow);

using LabelScores = std::array<double, kNumBioLabels>;
using TransitionMatrix = std::array<LabelScores, kNumBioLabels>;

// First-order Viterbi over emission scores (row i = position i, only the
// first `n_labels` columns used) and transition scores. Ties resolve to the
// lower label index.
std::vector<std::size_t> viterbi(std::span<const LabelScores> emissions, const TransitionMatrix& transitions,
                                 std::size_t n_labels = kNumBioLabels);
double sequence_score(std::span<const LabelScores> emissions, const TransitionMatrix& transitions,
                      std::span<const std::size_t> labels);

struct TrainingConfig {
  std::size_t epochs = 10;
  std::uint64_t seed = 1;
  bool shuffle = true;
  bool averaging = true;
};

struct TrainingMetadata {
  std::size_t epochs = 0;
  std::uint64_t seed = 0;
  bool shuffle = true;
  bool averaging = true;
  std::size_t documents = 0;
  std::vector<std::size_t> errors_per_epoch;  // sequences with a mistake
  std::size_t embedding_dimension = 0;
  std::size_t topics = 0;
  std::string topic_model_file;
};

class LinearChainModel {
 public:
  // Emission weights are keyed by (base feature, window offset).
  static std::uint64_t key(std::uint32_t base, int offset) {
    return (static_cast<std::uint64_t>(base) << 8) | static_cast<std::uint64_t>(offset + 128);
  }

  FeatureConfig feature_config;
  FeatureSpace space;
  std::unordered_map<std::uint64_t, LabelScores> emission;
  TransitionMatrix transition{};
  TrainingMetadata metadata;

  std::vector<LabelScores> emission_scores(const EncodedDocument& doc) const;
  std::vector<BioLabel> decode(const EncodedDocument& doc) const;
  // Weight of a full (prefixed) feature name, 0 when unknown.
  double weight(const std::string& full_name, BioLabel label) const;
};

// Splits "minus2Sent_FS2_topic03" into (-2, "FS2_topic03").
std::pair<int, std::string> split_feature_name(const std::string& full_name);

// Decodes named feature vectors (one per sentence).
std::vector<BioLabel> viterbi_decode(const LinearChainModel& model, std::span<const FeatureVector> sequence);

// Averaged structured perceptron over encoded documents with gold labels.
// Throws ConfigError when the feature space is empty.
LinearChainModel train_perceptron(std::vector<EncodedDocument> docs, FeatureSpace space,
                                  const FeatureConfig& feature_config, const TrainingConfig& config);

// Extracts features for the training documents (gold sentence labels from
// the sentence approximation of Document::gold) and trains.
LinearChainModel train(const Corpus& corpus, std::span<const std::size_t> train_docs,
                       const FeatureConfig& feature_config, const FeatureResources& resources,
                       const TrainingConfig& config);

struct DocumentPrediction {
  SentenceLabeling sentences;
  std::vector<BioLabel> tokens;
};

// Throws ConfigError when `config` / `resources` do not match the model.
DocumentPrediction predict_document(const LinearChainModel& model, const Document& doc,
                                    const FeatureConfig& config, const FeatureResources& resources);

inline constexpr int kModelFormatVersion = 1;

void save_model(const LinearChainModel& model, const std::filesystem::path& path);
std::string model_to_json(const LinearChainModel& model);
LinearChainModel load_model(const std::filesystem::path& path);
LinearChainModel model_from_json(std::string_view text);

}  // namespace argmine
