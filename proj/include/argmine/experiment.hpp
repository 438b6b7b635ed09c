#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "argmine/agreement.hpp"
#include "argmine/corpus.hpp"
#include "argmine/encoding.hpp"
#include "argmine/evaluation.hpp"
#include "argmine/features.hpp"
#include "argmine/labeler.hpp"
#include "argmine/metrics.hpp"

namespace argmine {

// One train/test run inside a scenario.
struct FoldTask {
  std::string name;  // "fold-3", "homeschooling/fold-0", "heldout-redshirting"
  std::uint64_t seed = 0;
  std::vector<std::size_t> train;  // document indices
  std::vector<std::size_t> test;
};

// What a learner reports back for one run.
struct FoldOutput {
  std::vector<std::vector<BioLabel>> tokens;  // per test document
  std::vector<std::size_t> resource_fit;      // documents any resource was fitted on
  std::set<std::string> degraded;
};

class Learner {
 public:
  virtual ~Learner() = default;
  virtual std::string name() const = 0;
  virtual FoldOutput run(const Corpus& corpus, const FoldTask& task, const FeatureConfig& config) const = 0;
};

struct PerceptronOptions {
  TrainingConfig training;  // seed is replaced by the run seed
  LdaConfig lda;            // seed is replaced by the run seed
  const EmbeddingTable* embeddings = nullptr;
  const LayerStore* layers = nullptr;
  // Pretrained topic model used instead of fitting one per run.
  const TopicModel* topic_cache = nullptr;
};

std::unique_ptr<Learner> make_perceptron_learner(PerceptronOptions options);
// Sentence approximation of the gold spans.
std::unique_ptr<Learner> make_oracle_learner();
// Every token O.
std::unique_ptr<Learner> make_majority_learner();
// Uniformly random sentence labels from the run seed.
std::unique_ptr<Learner> make_random_learner();

struct RunRecord {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  std::vector<std::string> resource_fit_ids;
  ConfusionMatrix confusion;
};

struct EvalReport {
  std::string label;  // "all", a topic, or "aggregated"
  ConfusionMatrix confusion;
  TokenScores scores;
  std::optional<double> alpha_u;              // predictions vs gold, joint logos types
  std::optional<double> boundary_similarity;  // pooled over documents
  std::vector<RunRecord> runs;
};

struct ScenarioOptions {
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  std::size_t boundary_window = 2;
  std::size_t alpha_permutations = 20;  // 0 skips alpha_u
  bool parallel = true;
};

struct ScenarioResult {
  std::string scenario;  // "all", "in-domain", "cross-domain"
  std::string learner;
  FeatureConfig config;
  ScenarioOptions options;
  std::vector<EvalReport> parts;  // per topic; empty for "all"
  EvalReport aggregated;
  std::vector<TokenPrediction> predictions;  // corpus order
  std::set<std::string> degraded;
  std::vector<std::string> notices;
};

// Seeded document order, k contiguous test folds. Throws ConfigError when
// k < 2 or k exceeds the document count.
std::vector<FoldTask> crossval_tasks(const Corpus& corpus, std::span<const std::size_t> docs, std::size_t k,
                                     std::uint64_t seed, const std::string& prefix = "");

// Runs tasks (in parallel unless options.parallel is false) and sums their
// confusion matrices. Documents must carry gold.
ScenarioResult run_tasks(const Corpus& corpus, const std::vector<FoldTask>& tasks, const Learner& learner,
                         const FeatureConfig& config, const ScenarioOptions& options);

std::vector<ScenarioResult> run_crossval(const Corpus& corpus, std::span<const FeatureConfig> configs,
                                         const Learner& learner, const ScenarioOptions& options);
// Per-topic CV; topics with fewer than k documents are skipped with a
// notice. The aggregated row comes from the summed matrices.
std::vector<ScenarioResult> run_indomain(const Corpus& corpus, std::span<const FeatureConfig> configs,
                                         const Learner& learner, const ScenarioOptions& options);
// Train on all other topics, test on each topic in turn. Throws ConfigError
// with fewer than two topics.
std::vector<ScenarioResult> run_crossdomain(const Corpus& corpus, std::span<const FeatureConfig> configs,
                                            const Learner& learner, const ScenarioOptions& options);

// Metrics of a set of (gold, predicted) token sequences.
EvalReport evaluate_predictions(const Corpus& corpus, const std::vector<TokenPrediction>& predictions,
                                const ScenarioOptions& options, const std::string& label = "all");

// Pooled human annotators vs gold: token matrix over every annotation set,
// boundary similarity, and alpha_u among the annotators shared by all
// documents (absent when fewer than two are shared).
EvalReport human_vs_gold(const Corpus& corpus, const ScenarioOptions& options);

struct LeakageAudit {
  bool ok = true;
  std::vector<std::string> problems;
};

// Checks that test documents never appear in training or resource fitting,
// that every document is tested once per scenario part, and for the
// cross-domain scenario that training never includes the held-out topic.
LeakageAudit audit_leakage(const Corpus& corpus, const ScenarioResult& result);

// Paired token-level significance between two runs over the same corpus.
LiddellResult compare_runs(const ScenarioResult& a, const ScenarioResult& b);

// Joint logos alpha_u of token label sequences vs gold.
std::optional<double> prediction_alpha_u(const std::vector<TokenPrediction>& predictions, std::size_t n_perm,
                                         std::uint64_t seed);

}  // namespace argmine
