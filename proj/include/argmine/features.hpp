#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "argmine/corpus.hpp"

namespace argmine {

// Selected feature sets, written as the digit string "01234" and friends.
struct FeatureSets {
  std::array<bool, 5> enabled{};

  static FeatureSets parse(std::string_view digits);  // throws ConfigError
  std::string to_string() const;
  bool has(int k) const { return enabled.at(static_cast<std::size_t>(k)); }
  bool contextual() const { return has(1) || has(2) || has(3) || has(4); }
  bool operator==(const FeatureSets&) const = default;
};

struct FeatureConfig {
  FeatureSets sets;
  int window = 4;
  std::size_t min_count = 2;
  bool lowercase_lookup = true;

  bool operator==(const FeatureConfig&) const = default;
};

// Name -> value; binary features are 1.0 when present and absent otherwise.
using FeatureVector = std::map<std::string, double>;

// --- lexical n-grams -------------------------------------------------------

// Word 1-, 2- and 3-grams (space-joined) of a token sequence.
std::vector<std::string> ngrams(std::span<const std::string> tokens, int max_n = 3);

class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::map<std::string, std::size_t> counts, std::size_t min_count);

  // Accepts every n-gram; used at prediction time, where n-grams without a
  // trained weight score zero anyway.
  static Vocabulary open();

  bool contains(const std::string& ngram) const { return open_ || counts_.count(ngram) > 0; }
  bool is_open() const { return open_; }
  std::size_t size() const { return counts_.size(); }
  std::size_t min_count() const { return min_count_; }
  const std::map<std::string, std::size_t>& entries() const { return counts_; }

 private:
  std::map<std::string, std::size_t> counts_;
  std::size_t min_count_ = 1;
  bool open_ = false;
};

// Lowercased token sequence of one sentence.
std::vector<std::string> lowered_tokens(const Document& doc, std::size_t sentence);

Vocabulary build_vocabulary(const Corpus& corpus, std::span<const std::size_t> train_docs,
                            std::size_t min_count);

// --- word embeddings -------------------------------------------------------

class EmbeddingTable {
 public:
  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  const std::vector<float>* find(const std::string& word) const;
  void insert(const std::string& word, std::vector<float> vec);  // throws on dim mismatch

  std::vector<std::string> warnings;

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::vector<float>> vectors_;
};

// Text word-vector format: optional "<count> <dim>" header, then one word and
// dim floats per line. Duplicate words keep the last row, with a warning.
EmbeddingTable load_embeddings(const std::filesystem::path& path);
EmbeddingTable read_embeddings(std::istream& in);

// Elementwise sum of the vectors of in-table tokens; zero vector otherwise.
std::vector<double> sentence_embedding(std::span<const std::string> tokens, const EmbeddingTable& table);

// --- topic model -----------------------------------------------------------

struct LdaConfig {
  std::size_t topics = 30;
  double alpha = -1.0;  // < 0 means 50 / topics
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::size_t inference_iterations = 50;
  std::uint64_t seed = 1;

  double effective_alpha() const { return alpha < 0.0 ? 50.0 / static_cast<double>(topics) : alpha; }
};

class TopicModel {
 public:
  TopicModel() = default;
  TopicModel(LdaConfig config, std::vector<std::string> words,
             std::vector<std::vector<std::uint32_t>> word_topic,
             std::vector<std::vector<double>> training_theta);

  std::size_t topics() const { return config_.topics; }
  std::size_t vocabulary_size() const { return words_.size(); }
  const LdaConfig& config() const { return config_; }

  // Topic proportions for unseen text by Gibbs sampling with the trained
  // topic-word counts fixed; the sampler seed is derived from the model seed
  // and the text, so inference is a pure function. Sums to 1.
  std::vector<double> infer(std::span<const std::string> tokens) const;
  // Proportions of training document d.
  const std::vector<double>& training_proportions(std::size_t d) const { return training_theta_.at(d); }
  // Most probable words of a topic.
  std::vector<std::string> top_words(std::size_t topic, std::size_t n) const;

  void save(const std::filesystem::path& path) const;
  static TopicModel load(const std::filesystem::path& path);

 private:
  LdaConfig config_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::uint32_t> word_ids_;
  std::vector<std::vector<std::uint32_t>> word_topic_;  // [word][topic]
  std::vector<std::uint64_t> topic_totals_;
  std::vector<std::vector<double>> training_theta_;
};

// Tokens kept for topic modelling: lowercased, containing a letter.
std::vector<std::string> topic_tokens(std::span<const std::string> tokens);

// Collapsed Gibbs sampling, single chain. Throws ConfigError on an empty
// vocabulary or fewer than 2 topics.
TopicModel train_lda(const std::vector<std::vector<std::string>>& texts, const LdaConfig& config);

// --- precomputed linguistic layers ------------------------------------------

struct CorefInfo {
  bool in_chain = false;
  std::vector<std::string> transitions;
  std::optional<int> prev_distance;
  std::optional<int> next_distance;
  int links = 0;
};

struct DiscourseRelation {
  std::string type;  // "explicit" | "implicit"
  std::string connective;
  bool attribution = false;
};

struct DocumentLayers {
  std::optional<std::vector<std::string>> pos;                   // per token
  std::optional<std::vector<std::array<double, 5>>> sentiment;   // per sentence
  std::optional<std::vector<int>> depth;                         // per sentence
  std::optional<std::vector<std::vector<std::string>>> productions;
  std::optional<std::vector<int>> subclauses;
  std::optional<std::vector<std::vector<std::string>>> srl;
  std::optional<std::vector<CorefInfo>> coref;
  std::optional<std::vector<std::vector<DiscourseRelation>>> discourse;
};

using LayerStore = std::map<std::string, DocumentLayers>;

LayerStore load_layers(const std::filesystem::path& path);
LayerStore parse_layers(std::string_view json_text);
// Throws ValidationError when a layer's length disagrees with the document.
void check_layers(const Document& doc, const DocumentLayers& layers);

// --- extraction --------------------------------------------------------------

struct FeatureResources {
  const Vocabulary* vocabulary = nullptr;
  const EmbeddingTable* embeddings = nullptr;
  const TopicModel* topics = nullptr;
  const LayerStore* layers = nullptr;
};

using NamedValue = std::pair<std::string, double>;

// Unprefixed features of one sentence: lexical ones are used for the
// sentence itself only, contextual ones (FS1-FS4) are replicated over the
// window with position prefixes.
struct SentenceFeatures {
  std::vector<NamedValue> lexical;
  std::vector<NamedValue> contextual;
};

struct DocumentFeatures {
  std::string doc_id;
  std::vector<SentenceFeatures> sentences;
  std::set<std::string> degraded;  // optional inputs that were absent
};

// "" for offset 0, "minus2Sent_", "plus1Sent_", ...
std::string position_prefix(int offset);

// Throws ConfigError when a selected set lacks its required resource.
void check_resources(const FeatureConfig& config, const FeatureResources& resources);

DocumentFeatures extract_document(const Document& doc, const FeatureConfig& config,
                                  const FeatureResources& resources);
FeatureVector assemble(const DocumentFeatures& features, std::size_t sentence, int window);
FeatureVector extract_features(const Document& doc, std::size_t sentence, const FeatureConfig& config,
                               const FeatureResources& resources);

// Extraction over many documents; parallel over documents.
std::vector<DocumentFeatures> extract_corpus(const Corpus& corpus, std::span<const std::size_t> docs,
                                             const FeatureConfig& config, const FeatureResources& resources);
namespace reference {
std::vector<DocumentFeatures> extract_corpus(const Corpus& corpus, std::span<const std::size_t> docs,
                                             const FeatureConfig& config, const FeatureResources& resources);
}

}  // namespace argmine
