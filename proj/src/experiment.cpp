#include "argmine/experiment.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <random>

#include "argmine/error.hpp"
#include "argmine/parallel.hpp"

namespace argmine {
namespace {

void shuffle(std::vector<std::size_t>& v, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = v.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(v[i - 1], v[pick(rng)]);
  }
}

std::vector<std::string> ids_of(const Corpus& corpus, std::span<const std::size_t> docs) {
  std::vector<std::string> out;
  out.reserve(docs.size());
  for (std::size_t d : docs) out.push_back(corpus.documents.at(d).id);
  return out;
}

std::vector<BioLabel> gold_tokens(const Document& doc) {
  if (!doc.gold) throw ConfigError("document " + doc.id + " has no gold annotation");
  return tokens_from_annotation(doc, *doc.gold);
}

std::vector<std::size_t> gold_documents(const Corpus& corpus) {
  std::vector<std::size_t> out;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    if (!corpus.documents[d].gold) throw ConfigError("document " + corpus.documents[d].id + " has no gold annotation");
    out.push_back(d);
  }
  return out;
}

std::vector<Unit> units_from_tokens(std::span<const BioLabel> tokens) {
  std::vector<Unit> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto type = component_of(tokens[i]);
    if (!type) continue;
    const bool starts = i == 0 || is_begin(tokens[i]) || component_of(tokens[i - 1]) != type;
    if (starts) {
      out.push_back({i, i, static_cast<int>(*type)});
    } else {
      out.back().last = i;
    }
  }
  return out;
}

// ---- learners ---------------------------------------------------------------

class PerceptronLearner : public Learner {
 public:
  explicit PerceptronLearner(PerceptronOptions o) : options_(o) {}
  std::string name() const override { return "perceptron"; }

  FoldOutput run(const Corpus& corpus, const FoldTask& task, const FeatureConfig& config) const override {
    FoldOutput out;
    FeatureResources res;
    res.embeddings = options_.embeddings;
    res.layers = options_.layers;
    Vocabulary vocab;
    TopicModel topics;
    bool fitted = false;
    if (config.sets.has(0)) {
      vocab = build_vocabulary(corpus, task.train, config.min_count);
      res.vocabulary = &vocab;
      fitted = true;
    }
    if (config.sets.has(2)) {
      if (options_.topic_cache) {
        res.topics = options_.topic_cache;
      } else {
        std::vector<std::vector<std::string>> texts;
        for (std::size_t d : task.train) {
          const auto& doc = corpus.documents[d];
          std::vector<std::string> toks;
          for (std::size_t t = 0; t < doc.tokens.size(); ++t) toks.emplace_back(doc.token_text(t));
          texts.push_back(topic_tokens(toks));
        }
        LdaConfig lda = options_.lda;
        lda.seed = task.seed;
        topics = train_lda(texts, lda);
        res.topics = &topics;
        fitted = true;
      }
    }
    if (fitted) out.resource_fit = task.train;

    const auto train_features = extract_corpus(corpus, task.train, config, res);
    FeatureSpace space;
    std::vector<EncodedDocument> encoded;
    for (std::size_t k = 0; k < train_features.size(); ++k) {
      const auto& doc = corpus.documents[task.train[k]];
      out.degraded.insert(train_features[k].degraded.begin(), train_features[k].degraded.end());
      auto e = encode(train_features[k], space, true);
      e.gold = sentence_approximate(doc, *doc.gold).labels;
      encoded.push_back(std::move(e));
    }
    TrainingConfig tc = options_.training;
    tc.seed = task.seed;
    const auto model = train_perceptron(std::move(encoded), std::move(space), config, tc);

    // Unseen n-grams carry no weight, so test extraction need not filter.
    const Vocabulary open = Vocabulary::open();
    if (res.vocabulary) res.vocabulary = &open;
    const auto test_features = extract_corpus(corpus, task.test, config, res);
    FeatureSpace lookup = model.space;
    for (std::size_t k = 0; k < test_features.size(); ++k) {
      const auto& doc = corpus.documents[task.test[k]];
      out.degraded.insert(test_features[k].degraded.begin(), test_features[k].degraded.end());
      SentenceLabeling labeling{doc.id, model.decode(encode(test_features[k], lookup, false))};
      out.tokens.push_back(expand_to_tokens(doc, labeling));
    }
    return out;
  }

 private:
  PerceptronOptions options_;
};

class OracleLearner : public Learner {
 public:
  std::string name() const override { return "oracle"; }
  FoldOutput run(const Corpus& corpus, const FoldTask& task, const FeatureConfig&) const override {
    FoldOutput out;
    for (std::size_t d : task.test) {
      const auto& doc = corpus.documents[d];
      if (!doc.gold) throw ConfigError("document " + doc.id + " has no gold annotation");
      out.tokens.push_back(expand_to_tokens(doc, sentence_approximate(doc, *doc.gold)));
    }
    return out;
  }
};

class MajorityLearner : public Learner {
 public:
  std::string name() const override { return "majority"; }
  FoldOutput run(const Corpus& corpus, const FoldTask& task, const FeatureConfig&) const override {
    FoldOutput out;
    for (std::size_t d : task.test) out.tokens.emplace_back(corpus.documents[d].tokens.size(), BioLabel::kO);
    return out;
  }
};

class RandomLearner : public Learner {
 public:
  std::string name() const override { return "random"; }
  FoldOutput run(const Corpus& corpus, const FoldTask& task, const FeatureConfig&) const override {
    FoldOutput out;
    for (std::size_t d : task.test) {
      const auto& doc = corpus.documents[d];
      std::mt19937_64 rng(mix_seed(task.seed, d));
      std::uniform_int_distribution<std::size_t> pick(0, kNumBioLabels - 1);
      SentenceLabeling l{doc.id, {}};
      for (std::size_t s = 0; s < doc.sentences.size(); ++s) l.labels.push_back(bio_from_index(pick(rng)));
      out.tokens.push_back(expand_to_tokens(doc, l));
    }
    return out;
  }
};

// ---- execution --------------------------------------------------------------

struct Execution {
  std::vector<RunRecord> runs;
  std::map<std::size_t, TokenPrediction> predictions;  // by document index
  std::set<std::string> degraded;
};

Execution execute(const Corpus& corpus, const std::vector<FoldTask>& tasks, const Learner& learner,
                  const FeatureConfig& config, bool parallel) {
  const auto n = static_cast<std::int64_t>(tasks.size());
  std::vector<FoldOutput> outputs(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) if (parallel && n > 1)
  for (std::int64_t t = 0; t < n; ++t) {
    try {
      outputs[static_cast<std::size_t>(t)] = learner.run(corpus, tasks[static_cast<std::size_t>(t)], config);
    } catch (...) {
      errors[static_cast<std::size_t>(t)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Execution ex;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto& task = tasks[t];
    auto& out = outputs[t];
    if (out.tokens.size() != task.test.size()) {
      throw ConfigError("learner returned " + std::to_string(out.tokens.size()) + " predictions for " +
                        std::to_string(task.test.size()) + " test documents in run " + task.name);
    }
    RunRecord rec;
    rec.name = task.name;
    rec.seed = task.seed;
    rec.train_ids = ids_of(corpus, task.train);
    rec.test_ids = ids_of(corpus, task.test);
    rec.resource_fit_ids = ids_of(corpus, out.resource_fit);
    for (std::size_t k = 0; k < task.test.size(); ++k) {
      const auto& doc = corpus.documents[task.test[k]];
      TokenPrediction p{doc.id, gold_tokens(doc), std::move(out.tokens[k])};
      if (p.predicted.size() != p.gold.size()) {
        throw ConfigError("prediction for " + doc.id + " has " + std::to_string(p.predicted.size()) +
                          " tokens, document has " + std::to_string(p.gold.size()));
      }
      rec.confusion.add(p.gold, p.predicted);
      ex.predictions.insert_or_assign(task.test[k], std::move(p));
    }
    ex.degraded.insert(out.degraded.begin(), out.degraded.end());
    ex.runs.push_back(std::move(rec));
  }
  return ex;
}

std::vector<TokenPrediction> in_order(const std::map<std::size_t, TokenPrediction>& m) {
  std::vector<TokenPrediction> out;
  out.reserve(m.size());
  for (const auto& [d, p] : m) out.push_back(p);
  return out;
}

std::vector<Topic> topics_present(const Corpus& corpus, std::span<const std::size_t> docs) {
  std::vector<Topic> out;
  for (Topic t : kAllTopics) {
    if (std::any_of(docs.begin(), docs.end(), [&](std::size_t d) { return corpus.documents[d].topic == t; })) {
      out.push_back(t);
    }
  }
  return out;
}

std::vector<std::size_t> docs_of(const Corpus& corpus, std::span<const std::size_t> docs, Topic t) {
  std::vector<std::size_t> out;
  for (std::size_t d : docs) {
    if (corpus.documents[d].topic == t) out.push_back(d);
  }
  return out;
}

// Builds per-topic parts and the summed aggregate from a finished execution.
ScenarioResult assemble(const Corpus& corpus, const std::string& scenario, const Learner& learner,
                        const FeatureConfig& config, const ScenarioOptions& options, Execution ex,
                        const std::vector<std::pair<Topic, std::vector<std::size_t>>>& part_runs) {
  ScenarioResult r;
  r.scenario = scenario;
  r.learner = learner.name();
  r.config = config;
  r.options = options;
  r.degraded = ex.degraded;
  r.predictions = in_order(ex.predictions);
  for (const auto& [topic, run_indices] : part_runs) {
    std::vector<TokenPrediction> preds;
    for (const auto& [d, p] : ex.predictions) {
      if (corpus.documents[d].topic == topic) preds.push_back(p);
    }
    auto part = evaluate_predictions(corpus, preds, options, std::string(to_string(topic)));
    for (std::size_t i : run_indices) part.runs.push_back(ex.runs[i]);
    r.parts.push_back(std::move(part));
  }
  r.aggregated = evaluate_predictions(corpus, r.predictions, options, part_runs.empty() ? "all" : "aggregated");
  if (part_runs.empty()) r.aggregated.runs = ex.runs;
  return r;
}

}  // namespace

std::unique_ptr<Learner> make_perceptron_learner(PerceptronOptions options) {
  return std::make_unique<PerceptronLearner>(options);
}
std::unique_ptr<Learner> make_oracle_learner() { return std::make_unique<OracleLearner>(); }
std::unique_ptr<Learner> make_majority_learner() { return std::make_unique<MajorityLearner>(); }
std::unique_ptr<Learner> make_random_learner() { return std::make_unique<RandomLearner>(); }

std::vector<FoldTask> crossval_tasks(const Corpus& corpus, std::span<const std::size_t> docs, std::size_t k,
                                     std::uint64_t seed, const std::string& prefix) {
  (void)corpus;
  if (k < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (k > docs.size()) {
    throw ConfigError(std::to_string(k) + " folds requested for " + std::to_string(docs.size()) + " documents");
  }
  std::vector<std::size_t> order(docs.begin(), docs.end());
  shuffle(order, seed);
  std::vector<FoldTask> tasks;
  const std::size_t n = order.size();
  for (std::size_t f = 0; f < k; ++f) {
    FoldTask t;
    t.name = prefix + "fold-" + std::to_string(f);
    t.seed = mix_seed(seed, f);
    const std::size_t lo = f * n / k, hi = (f + 1) * n / k;
    t.test.assign(order.begin() + static_cast<std::ptrdiff_t>(lo), order.begin() + static_cast<std::ptrdiff_t>(hi));
    for (std::size_t i = 0; i < n; ++i) {
      if (i < lo || i >= hi) t.train.push_back(order[i]);
    }
    std::sort(t.train.begin(), t.train.end());
    std::sort(t.test.begin(), t.test.end());
    tasks.push_back(std::move(t));
  }
  return tasks;
}

ScenarioResult run_tasks(const Corpus& corpus, const std::vector<FoldTask>& tasks, const Learner& learner,
                         const FeatureConfig& config, const ScenarioOptions& options) {
  return assemble(corpus, "all", learner, config, options, execute(corpus, tasks, learner, config, options.parallel),
                  {});
}

std::vector<ScenarioResult> run_crossval(const Corpus& corpus, std::span<const FeatureConfig> configs,
                                         const Learner& learner, const ScenarioOptions& options) {
  const auto docs = gold_documents(corpus);
  const auto tasks = crossval_tasks(corpus, docs, options.folds, options.seed);
  std::vector<ScenarioResult> out;
  for (const auto& config : configs) out.push_back(run_tasks(corpus, tasks, learner, config, options));
  return out;
}

std::vector<ScenarioResult> run_indomain(const Corpus& corpus, std::span<const FeatureConfig> configs,
                                         const Learner& learner, const ScenarioOptions& options) {
  const auto docs = gold_documents(corpus);
  std::vector<FoldTask> tasks;
  std::vector<std::pair<Topic, std::vector<std::size_t>>> parts;
  std::vector<std::string> notices;
  for (Topic t : topics_present(corpus, docs)) {
    const auto topic_docs = docs_of(corpus, docs, t);
    if (topic_docs.size() < options.folds) {
      notices.push_back("topic " + std::string(to_string(t)) + " skipped: " + std::to_string(topic_docs.size()) +
                        " documents for " + std::to_string(options.folds) + " folds");
      continue;
    }
    auto topic_tasks = crossval_tasks(corpus, topic_docs, options.folds, options.seed, std::string(to_string(t)) + "/");
    std::vector<std::size_t> idx;
    for (auto& task : topic_tasks) {
      idx.push_back(tasks.size());
      tasks.push_back(std::move(task));
    }
    parts.emplace_back(t, std::move(idx));
  }
  if (tasks.empty()) throw ConfigError("no topic has enough documents for " + std::to_string(options.folds) + " folds");
  std::vector<ScenarioResult> out;
  for (const auto& config : configs) {
    auto r = assemble(corpus, "in-domain", learner, config, options,
                      execute(corpus, tasks, learner, config, options.parallel), parts);
    r.notices = notices;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ScenarioResult> run_crossdomain(const Corpus& corpus, std::span<const FeatureConfig> configs,
                                            const Learner& learner, const ScenarioOptions& options) {
  const auto docs = gold_documents(corpus);
  const auto topics = topics_present(corpus, docs);
  if (topics.size() < 2) throw ConfigError("cross-domain evaluation needs at least two topics");
  std::vector<FoldTask> tasks;
  std::vector<std::pair<Topic, std::vector<std::size_t>>> parts;
  for (Topic t : topics) {
    FoldTask task;
    task.name = "heldout-" + std::string(to_string(t));
    task.seed = mix_seed(options.seed, static_cast<std::uint64_t>(t));
    for (std::size_t d : docs) (corpus.documents[d].topic == t ? task.test : task.train).push_back(d);
    parts.emplace_back(t, std::vector<std::size_t>{tasks.size()});
    tasks.push_back(std::move(task));
  }
  std::vector<ScenarioResult> out;
  for (const auto& config : configs) {
    out.push_back(assemble(corpus, "cross-domain", learner, config, options,
                           execute(corpus, tasks, learner, config, options.parallel), parts));
  }
  return out;
}

std::optional<double> prediction_alpha_u(const std::vector<TokenPrediction>& predictions, std::size_t n_perm,
                                         std::uint64_t seed) {
  if (n_perm == 0) return std::nullopt;
  std::vector<DocumentUnits> docs;
  std::size_t total = 0;
  for (const auto& p : predictions) {
    if (p.gold.size() != p.predicted.size()) throw ConfigError("prediction for " + p.doc_id + " lacks gold tokens");
    docs.push_back({p.doc_id, p.gold.size(), {units_from_tokens(p.gold), units_from_tokens(p.predicted)}});
    total += p.gold.size();
  }
  if (total == 0) return std::nullopt;
  try {
    return corpus_alpha_u(docs, category_ids(kLogosTypes), n_perm, seed).value;
  } catch (const UndefinedMetric&) {
    return std::nullopt;
  }
}

EvalReport evaluate_predictions(const Corpus& corpus, const std::vector<TokenPrediction>& predictions,
                                const ScenarioOptions& options, const std::string& label) {
  (void)corpus;
  EvalReport r;
  r.label = label;
  BoundaryEdits edits;
  for (const auto& p : predictions) {
    if (p.gold.size() != p.predicted.size()) throw ConfigError("prediction for " + p.doc_id + " lacks gold tokens");
    r.confusion.add(p.gold, p.predicted);
    edits += boundary_edits(segmentation_from_labels(p.gold), segmentation_from_labels(p.predicted),
                            options.boundary_window);
  }
  r.scores = score(r.confusion);
  if (!predictions.empty()) r.boundary_similarity = boundary_similarity(edits);
  r.alpha_u = prediction_alpha_u(predictions, options.alpha_permutations, options.seed);
  return r;
}

EvalReport human_vs_gold(const Corpus& corpus, const ScenarioOptions& options) {
  EvalReport r;
  r.label = "human";
  BoundaryEdits edits;
  std::optional<std::set<std::string>> shared;
  std::vector<std::size_t> docs;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const auto& doc = corpus.documents[d];
    if (!doc.gold) continue;
    docs.push_back(d);
    const auto gold = gold_tokens(doc);
    const auto gold_seg = segmentation_from_labels(gold);
    std::set<std::string> ids;
    for (const auto& set : doc.annotations) {
      const auto tokens = tokens_from_annotation(doc, set);
      r.confusion.add(gold, tokens);
      edits += boundary_edits(gold_seg, segmentation_from_labels(tokens), options.boundary_window);
      ids.insert(set.annotator);
    }
    if (!shared) {
      shared = ids;
    } else {
      std::set<std::string> keep;
      std::set_intersection(shared->begin(), shared->end(), ids.begin(), ids.end(), std::inserter(keep, keep.end()));
      shared = std::move(keep);
    }
  }
  r.scores = score(r.confusion);
  if (!docs.empty()) r.boundary_similarity = boundary_similarity(edits);
  if (shared && shared->size() >= 2 && options.alpha_permutations > 0) {
    try {
      const std::vector<std::string> ids(shared->begin(), shared->end());
      r.alpha_u = corpus_alpha_u(corpus, ids, kLogosTypes, options.alpha_permutations, options.seed).value;
    } catch (const UndefinedMetric&) {
    }
  }
  return r;
}

LeakageAudit audit_leakage(const Corpus& corpus, const ScenarioResult& result) {
  LeakageAudit audit;
  auto problem = [&](std::string s) {
    audit.ok = false;
    audit.problems.push_back(std::move(s));
  };
  std::vector<const RunRecord*> runs;
  for (const auto& part : result.parts) {
    for (const auto& run : part.runs) runs.push_back(&run);
  }
  for (const auto& run : result.aggregated.runs) runs.push_back(&run);

  std::map<std::string, std::size_t> tested;
  std::set<std::string> seen;
  for (const RunRecord* run : runs) {
    const std::set<std::string> test(run->test_ids.begin(), run->test_ids.end());
    for (const auto& id : run->train_ids) {
      if (test.count(id)) problem(run->name + ": test document " + id + " used for training");
      seen.insert(id);
    }
    for (const auto& id : run->resource_fit_ids) {
      if (test.count(id)) problem(run->name + ": test document " + id + " used to fit resources");
    }
    for (const auto& id : run->test_ids) {
      ++tested[id];
      seen.insert(id);
    }
    if (result.scenario == "cross-domain") {
      std::set<Topic> test_topics;
      for (const auto& id : run->test_ids) {
        if (const auto* d = corpus.find(id)) test_topics.insert(d->topic);
      }
      for (const auto& id : run->train_ids) {
        const auto* d = corpus.find(id);
        if (d && test_topics.count(d->topic)) {
          problem(run->name + ": training document " + id + " belongs to the held-out topic");
        }
      }
    }
  }
  for (const auto& id : seen) {
    const auto it = tested.find(id);
    const std::size_t n = it == tested.end() ? 0 : it->second;
    if (n != 1) problem("document " + id + " tested " + std::to_string(n) + " times");
  }
  return audit;
}

LiddellResult compare_runs(const ScenarioResult& a, const ScenarioResult& b) {
  if (a.predictions.size() != b.predictions.size()) throw ConfigError("runs cover different documents");
  std::vector<BioLabel> gold, pa, pb;
  for (std::size_t i = 0; i < a.predictions.size(); ++i) {
    const auto& x = a.predictions[i];
    const auto& y = b.predictions[i];
    if (x.doc_id != y.doc_id || x.gold != y.gold) throw ConfigError("runs cover different documents");
    gold.insert(gold.end(), x.gold.begin(), x.gold.end());
    pa.insert(pa.end(), x.predicted.begin(), x.predicted.end());
    pb.insert(pb.end(), y.predicted.begin(), y.predicted.end());
  }
  return liddell_exact_test(gold, pa, pb);
}

}  // namespace argmine
