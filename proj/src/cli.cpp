#include "argmine/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "argmine/agreement.hpp"
#include "argmine/corpus.hpp"
#include "argmine/encoding.hpp"
#include "argmine/error.hpp"
#include "argmine/evaluation.hpp"
#include "argmine/experiment.hpp"
#include "argmine/features.hpp"
#include "argmine/labeler.hpp"
#include "argmine/parallel.hpp"
#include "argmine/persuasiveness.hpp"
#include "argmine/report.hpp"

namespace argmine {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

struct Options {
  std::string corpus;
  std::string features = "0";
  int window = 4;
  std::size_t min_count = 2;
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  std::size_t epochs = 10;
  std::string embeddings;
  std::string layers;
  std::string lda_cache;
  std::size_t topics = 30;
  std::size_t lda_iterations = 1000;
  std::string scenario = "all";
  std::string out;
  std::string metadata;
  int workers = 0;
  std::string metric = "alpha-u";
  std::string category = "all";
  std::string annotators;
  std::size_t n_perm = 100;
  std::string format = "md";
  std::string model;
  std::string predictions;
  std::string learner = "perceptron";
  std::size_t boundary_window = 2;
  std::size_t alpha_permutations = 20;
  std::string topic;
  std::string register_kind;
  bool no_average = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  out << content;
  if (!out) throw IoError("failed writing " + p.string());
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Accumulates what a run needs to be reproduced.
class RunMetadata {
 public:
  RunMetadata(std::string command, const CLI::App& sub) : command_(std::move(command)) {
    for (const CLI::Option* o : sub.get_options()) {
      const auto name = o->get_single_name();
      if (name.empty() || name == "help") continue;
      if (o->count() > 0) {
        const auto& res = o->results();
        config_[name] = res.size() == 1 ? json(res.front()) : json(res);
      } else {
        config_[name] = o->get_default_str();
      }
    }
  }

  void resource(const std::string& role, const std::string& path) {
    if (path.empty()) return;
    resources_[role] = {{"path", path}, {"fnv1a64", file_fingerprint(path)}};
  }
  void seed(const std::string& name, std::uint64_t s) { seeds_[name] = s; }
  void degraded(const std::set<std::string>& d) { degraded_.insert(d.begin(), d.end()); }
  void output(const std::string& path) { outputs_.push_back(path); }
  void note(const std::string& n) { notes_.push_back(n); }

  void write(const fs::path& path) const {
    json j;
    j["command"] = command_;
    j["config"] = config_;
    j["seeds"] = seeds_;
    j["resources"] = resources_;
    j["degraded_features"] = std::vector<std::string>(degraded_.begin(), degraded_.end());
    j["outputs"] = outputs_;
    j["notes"] = notes_;
    j["workers"] = worker_count();
    j["timestamp"] = utc_timestamp();
    write_file(path, j.dump(1, '\t') + "\n");
  }

 private:
  std::string command_;
  json config_ = json::object();
  json seeds_ = json::object();
  json resources_ = json::object();
  std::set<std::string> degraded_;
  std::vector<std::string> outputs_;
  std::vector<std::string> notes_;
};

fs::path metadata_path(const Options& o, bool out_is_dir) {
  if (!o.metadata.empty()) return o.metadata;
  if (o.out.empty()) return "argmine_run_metadata.json";
  if (out_is_dir) return fs::path(o.out) / "run_metadata.json";
  return o.out + ".meta.json";
}

// Writes to --out or stdout.
void emit(const Options& o, std::ostream& out, const std::string& content, RunMetadata& md) {
  if (o.out.empty()) {
    out << content;
  } else {
    write_file(o.out, content);
    md.output(o.out);
  }
}

Corpus load_corpus(const Options& o, RunMetadata& md) {
  if (o.corpus.empty()) throw ConfigError("--corpus is required");
  md.resource("corpus", o.corpus);
  return parse_corpus(o.corpus);
}

std::vector<FeatureConfig> feature_configs(const Options& o) {
  if (o.window < 0) throw ConfigError("--window must be >= 0");
  std::vector<FeatureConfig> out;
  for (const auto& s : split(o.features, ',')) {
    FeatureConfig c;
    c.sets = FeatureSets::parse(s);
    c.window = o.window;
    c.min_count = o.min_count;
    out.push_back(c);
  }
  if (out.empty()) throw ConfigError("--features selects no feature set");
  return out;
}

std::vector<ComponentType> categories(const std::string& name) {
  if (name == "all" || name == "joint") return {kLogosTypes.begin(), kLogosTypes.end()};
  const auto t = parse_component_type(name);
  if (!t) throw ConfigError("unknown category '" + name + "'");
  return {*t};
}

std::vector<std::string> shared_annotators(const Corpus& corpus) {
  std::optional<std::set<std::string>> shared;
  for (const auto& d : corpus.documents) {
    std::set<std::string> ids;
    for (const auto& a : d.annotations) ids.insert(a.annotator);
    if (!shared) {
      shared = ids;
    } else {
      std::set<std::string> keep;
      std::set_intersection(shared->begin(), shared->end(), ids.begin(), ids.end(), std::inserter(keep, keep.end()));
      shared = keep;
    }
  }
  return shared ? std::vector<std::string>(shared->begin(), shared->end()) : std::vector<std::string>{};
}

// Resources that do not depend on the training fold.
struct SharedResources {
  std::optional<EmbeddingTable> embeddings;
  std::optional<LayerStore> layers;
  std::optional<TopicModel> topics;
};

SharedResources load_shared(const Options& o, RunMetadata& md, std::ostream& err) {
  SharedResources r;
  if (!o.embeddings.empty()) {
    md.resource("embeddings", o.embeddings);
    r.embeddings = load_embeddings(o.embeddings);
    for (const auto& w : r.embeddings->warnings) err << "warning: " << w << "\n";
  }
  if (!o.layers.empty()) {
    md.resource("layers", o.layers);
    r.layers = load_layers(o.layers);
  }
  if (!o.lda_cache.empty()) {
    md.resource("lda_cache", o.lda_cache);
    r.topics = TopicModel::load(o.lda_cache);
  }
  return r;
}

LdaConfig lda_config(const Options& o) {
  LdaConfig c;
  c.topics = o.topics;
  c.iterations = o.lda_iterations;
  c.seed = o.seed;
  return c;
}

std::unique_ptr<Learner> make_learner(const Options& o, const SharedResources& r) {
  if (o.learner == "perceptron") {
    PerceptronOptions p;
    p.training.epochs = o.epochs;
    p.training.averaging = !o.no_average;
    p.lda = lda_config(o);
    p.embeddings = r.embeddings ? &*r.embeddings : nullptr;
    p.layers = r.layers ? &*r.layers : nullptr;
    p.topic_cache = r.topics ? &*r.topics : nullptr;
    return make_perceptron_learner(p);
  }
  if (o.learner == "oracle") return make_oracle_learner();
  if (o.learner == "majority") return make_majority_learner();
  if (o.learner == "random") return make_random_learner();
  throw ConfigError("unknown learner '" + o.learner + "'");
}

ScenarioOptions scenario_options(const Options& o) {
  ScenarioOptions s;
  s.folds = o.folds;
  s.seed = o.seed;
  s.boundary_window = o.boundary_window;
  s.alpha_permutations = o.alpha_permutations;
  return s;
}

std::vector<ScenarioResult> run_scenario(const Options& o, const Corpus& corpus, std::span<const FeatureConfig> configs,
                                         const Learner& learner) {
  const auto so = scenario_options(o);
  if (o.scenario == "all") return run_crossval(corpus, configs, learner, so);
  if (o.scenario == "in-domain") return run_indomain(corpus, configs, learner, so);
  if (o.scenario == "cross-domain") return run_crossdomain(corpus, configs, learner, so);
  throw ConfigError("unknown scenario '" + o.scenario + "' (expected all, in-domain or cross-domain)");
}

// ---- commands ---------------------------------------------------------------

int cmd_validate(const Options& o, RunMetadata& md, std::ostream& out) {
  Corpus corpus;
  try {
    corpus = load_corpus(o, md);
  } catch (const ValidationError& e) {
    out << "error: " << e.what() << "\n1 errors\n";
    return kExitValidation;
  } catch (const ParseError& e) {
    out << "error: " << e.what() << "\n1 errors\n";
    return kExitValidation;
  }
  std::size_t warnings = 0;
  for (const auto& d : corpus.documents) {
    for (const auto& f : validate_document(d)) {
      if (f.severity == Severity::kWarning) {
        ++warnings;
        out << "warning: " << f.doc_id << ": " << f.field << ": " << f.message << "\n";
      }
    }
  }
  out << corpus.documents.size() << " documents, 0 errors, " << warnings << " warnings\n";
  return kExitOk;
}

int cmd_stats(const Options& o, RunMetadata& md, std::ostream& out) {
  const auto corpus = load_corpus(o, md);
  const auto s = corpus_statistics(corpus);
  json j;
  json docs = json::object();
  for (const auto& [topic, regs] : s.documents) {
    json r = json::object();
    for (const auto& [reg, n] : regs) r[std::string(to_string(reg))] = n;
    docs[std::string(to_string(topic))] = r;
  }
  auto summary = [](const Summary& x) {
    return json{{"count", x.count}, {"total", x.total}, {"mean", x.mean}, {"stddev", x.stddev}};
  };
  j["documents"] = docs;
  j["document_count"] = s.document_count;
  j["token_count"] = s.token_count;
  j["sentence_count"] = s.sentence_count;
  j["tokens_per_document"] = summary(s.tokens_per_document);
  j["sentences_per_document"] = summary(s.sentences_per_document);
  if (s.class_distribution) {
    json c = json::object();
    std::size_t total = 0;
    for (const auto& [label, n] : *s.class_distribution) {
      c[std::string(to_string(label))] = n;
      total += n;
    }
    j["class_distribution"] = c;
    j["class_distribution_total"] = total;
  } else {
    j["class_distribution"] = nullptr;
  }
  j["notices"] = s.notices;
  emit(o, out, j.dump(1, '\t') + "\n", md);
  return kExitOk;
}

int cmd_gold(const Options& o, RunMetadata& md, std::ostream& out, std::ostream& err) {
  auto corpus = load_corpus(o, md);
  json unresolved = json::object();
  for (auto& d : corpus.documents) {
    auto g = build_gold_majority(d);
    d.gold = std::move(g.gold);
    if (!g.unresolved.empty()) {
      json a = json::array();
      for (const auto& u : g.unresolved) {
        a.push_back({{"dimension", std::string(to_string(u.dimension))},
                     {"first_token", u.first_token},
                     {"last_token", u.last_token}});
      }
      unresolved[d.id] = a;
    }
  }
  if (o.out.empty()) {
    out << serialize_corpus_string(corpus);
  } else {
    serialize_corpus(corpus, o.out);
    md.output(o.out);
  }
  err << corpus.documents.size() << " documents, " << unresolved.size() << " with unresolved regions\n";
  if (!unresolved.empty()) md.note("unresolved regions: " + unresolved.dump());
  return kExitOk;
}

json prob_confusion_json(const ProbConfusion& p) {
  json rows = json::array();
  for (const auto& r : p.rows) rows.push_back(r ? json(*r) : json(nullptr));
  return {{"labels", p.labels}, {"rows", rows}};
}

int cmd_agreement(const Options& o, RunMetadata& md, std::ostream& out) {
  const auto corpus = load_corpus(o, md);
  json j;
  j["metric"] = o.metric;
  if (o.metric == "alpha-u") {
    const auto types = categories(o.category);
    auto ids = o.annotators.empty() ? shared_annotators(corpus) : split(o.annotators, ',');
    if (ids.size() < 2) throw ConfigError("alpha-u needs at least two annotators shared by the documents");
    md.seed("alpha_u", o.seed);
    const auto r = corpus_alpha_u(corpus, ids, types, o.n_perm, o.seed);
    j["category"] = o.category;
    j["annotators"] = ids;
    j["mean"] = r.value;
    j["std_error"] = r.std_error;
    j["stddev"] = r.stddev;
    j["n_permutations"] = r.n_permutations;
    j["documents"] = r.documents;
    j["seed"] = o.seed;
  } else if (o.metric == "fleiss-kappa") {
    std::vector<std::vector<std::string>> items;
    for (const auto& d : corpus.documents) {
      if (!d.persuasive || d.persuasive->votes.empty()) continue;
      std::vector<std::string> votes;
      for (const auto& [who, v] : d.persuasive->votes) votes.push_back(v ? "persuasive" : "non-persuasive");
      items.push_back(std::move(votes));
    }
    if (items.empty()) throw ConfigError("no persuasiveness votes in the corpus");
    j["value"] = fleiss_kappa(items);
    j["items"] = items.size();
  } else if (o.metric == "prob-confusion") {
    const auto ids = o.annotators.empty() ? shared_annotators(corpus) : split(o.annotators, ',');
    j["annotators"] = ids;
    j["matrix"] = prob_confusion_json(prob_confusion_matrix(corpus, ids, categories(o.category)));
  } else if (o.metric == "correlates") {
    SubsetFilter f;
    if (!o.topic.empty()) {
      f.topic = parse_topic(o.topic);
      if (!f.topic) throw ConfigError("unknown topic '" + o.topic + "'");
    }
    if (!o.register_kind.empty()) {
      f.register_kind = parse_register(o.register_kind);
      if (!f.register_kind) throw ConfigError("unknown register '" + o.register_kind + "'");
    }
    const auto t = disagreement_correlates(corpus, f, categories(o.category));
    json cells = json::array();
    for (const auto& c : t.cells) {
      cells.push_back({{"measure", c.measure}, {"r", c.r ? json(*c.r) : json(nullptr)}, {"error", c.error}});
    }
    j["documents"] = t.documents;
    j["correlations"] = cells;
    j["notices"] = t.notices;
  } else {
    throw ConfigError("unknown metric '" + o.metric + "' (expected alpha-u, fleiss-kappa, prob-confusion, correlates)");
  }
  emit(o, out, j.dump(1, '\t') + "\n", md);
  return kExitOk;
}

int cmd_train(const Options& o, RunMetadata& md, std::ostream& out, std::ostream& err) {
  if (o.out.empty()) throw ConfigError("train needs --out for the model file");
  const auto corpus = load_corpus(o, md);
  const auto configs = feature_configs(o);
  if (configs.size() != 1) throw ConfigError("train takes a single feature-set combination");
  const auto& config = configs.front();
  const auto shared = load_shared(o, md, err);
  std::vector<std::size_t> docs;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    if (corpus.documents[d].gold) docs.push_back(d);
  }
  if (docs.empty()) throw ConfigError("no document carries a gold annotation");

  FeatureResources res;
  Vocabulary vocab;
  TopicModel topics;
  if (config.sets.has(0)) {
    vocab = build_vocabulary(corpus, docs, config.min_count);
    res.vocabulary = &vocab;
  }
  if (config.sets.has(2)) {
    if (shared.topics) {
      topics = *shared.topics;
    } else {
      std::vector<std::vector<std::string>> texts;
      for (std::size_t d : docs) {
        const auto& doc = corpus.documents[d];
        std::vector<std::string> toks;
        for (std::size_t t = 0; t < doc.tokens.size(); ++t) toks.emplace_back(doc.token_text(t));
        texts.push_back(topic_tokens(toks));
      }
      topics = train_lda(texts, lda_config(o));
      md.seed("lda", o.seed);
    }
    res.topics = &topics;
  }
  if (config.sets.has(4)) res.embeddings = shared.embeddings ? &*shared.embeddings : nullptr;
  res.layers = shared.layers ? &*shared.layers : nullptr;

  TrainingConfig tc;
  tc.epochs = o.epochs;
  tc.seed = o.seed;
  tc.averaging = !o.no_average;
  md.seed("training", o.seed);
  const auto features = extract_corpus(corpus, docs, config, res);
  FeatureSpace space;
  std::vector<EncodedDocument> encoded;
  for (std::size_t k = 0; k < features.size(); ++k) {
    md.degraded(features[k].degraded);
    auto e = encode(features[k], space, true);
    e.gold = sentence_approximate(corpus.documents[docs[k]], *corpus.documents[docs[k]].gold).labels;
    encoded.push_back(std::move(e));
  }
  auto model = train_perceptron(std::move(encoded), std::move(space), config, tc);
  if (res.embeddings) model.metadata.embedding_dimension = res.embeddings->dimension();
  if (res.topics) {
    model.metadata.topics = res.topics->topics();
    const fs::path topic_file = o.out + ".topics.json";
    topics.save(topic_file);
    model.metadata.topic_model_file = topic_file.filename().string();
    md.output(topic_file.string());
  }
  save_model(model, o.out);
  md.output(o.out);
  out << "trained on " << docs.size() << " documents, " << model.space.size() << " base features, errors per epoch:";
  for (auto e : model.metadata.errors_per_epoch) out << ' ' << e;
  out << "\n";
  return kExitOk;
}

int cmd_predict(const Options& o, RunMetadata& md, std::ostream& out, std::ostream& err) {
  if (o.model.empty()) throw ConfigError("predict needs --model");
  const auto corpus = load_corpus(o, md);
  md.resource("model", o.model);
  const auto model = load_model(o.model);
  const auto shared = load_shared(o, md, err);
  const auto& sets = model.feature_config.sets;
  FeatureResources res;
  if (shared.embeddings) res.embeddings = &*shared.embeddings;
  if (shared.layers) res.layers = &*shared.layers;
  TopicModel topics;
  if (sets.has(2)) {
    if (shared.topics) {
      topics = *shared.topics;
    } else {
      if (model.metadata.topic_model_file.empty()) throw ConfigError("model lacks its topic model file");
      const auto p = fs::path(o.model).parent_path() / model.metadata.topic_model_file;
      md.resource("topic_model", p.string());
      topics = TopicModel::load(p);
    }
    res.topics = &topics;
  }
  if (sets.has(4) && !res.embeddings) throw ConfigError("model uses feature set 4; pass --embeddings");
  std::vector<TokenPrediction> preds(corpus.documents.size());
  std::vector<std::exception_ptr> errors(corpus.documents.size());
  std::vector<std::set<std::string>> degraded(corpus.documents.size());
  const auto n = static_cast<std::int64_t>(corpus.documents.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& doc = corpus.documents[static_cast<std::size_t>(i)];
    try {
      auto p = predict_document(model, doc, model.feature_config, res);
      preds[static_cast<std::size_t>(i)] = {doc.id, doc.gold ? tokens_from_annotation(doc, *doc.gold)
                                                             : std::vector<BioLabel>{},
                                            std::move(p.tokens)};
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::ostringstream dump;
  write_token_dump(dump, preds);
  emit(o, out, dump.str(), md);
  return kExitOk;
}

int cmd_eval(const Options& o, RunMetadata& md, std::ostream& out) {
  if (o.predictions.empty()) throw ConfigError("eval needs --predictions");
  md.resource("predictions", o.predictions);
  const auto preds = read_token_dump(o.predictions);
  for (const auto& p : preds) {
    if (p.gold.empty() && !p.predicted.empty()) throw ConfigError("document " + p.doc_id + " has no gold labels");
  }
  auto so = scenario_options(o);
  const auto report = evaluate_predictions(Corpus{}, preds, so, "all");
  emit(o, out, eval_report_json(report), md);
  return kExitOk;
}

void write_predictions(const fs::path& dir, const ScenarioResult& r, RunMetadata& md) {
  const auto path = dir / ("predictions-" + r.scenario + "-" + r.config.sets.to_string() + ".tsv");
  std::ostringstream s;
  write_token_dump(s, r.predictions);
  write_file(path, s.str());
  md.output(path.string());
}

int cmd_xval(const Options& o, RunMetadata& md, std::ostream& out, std::ostream& err) {
  if (o.out.empty()) throw ConfigError("xval needs --out for the output directory");
  const auto corpus = load_corpus(o, md);
  const auto configs = feature_configs(o);
  const auto shared = load_shared(o, md, err);
  const auto learner = make_learner(o, shared);
  md.seed("scenario", o.seed);
  const auto results = run_scenario(o, corpus, configs, *learner);
  const fs::path dir = o.out;
  write_file(dir / "metrics.json", results_json(results));
  md.output((dir / "metrics.json").string());
  for (const auto& r : results) {
    md.degraded(r.degraded);
    write_predictions(dir, r, md);
    for (const auto& p : r.parts) {
      out << r.scenario << ' ' << r.config.sets.to_string() << ' ' << p.label << ": macro-F1 " << std::fixed
          << std::setprecision(3) << p.scores.macro_f1 << " accuracy " << p.scores.accuracy << "\n";
    }
    out << r.scenario << ' ' << r.config.sets.to_string() << ' ' << r.aggregated.label << ": macro-F1 " << std::fixed
        << std::setprecision(3) << r.aggregated.scores.macro_f1 << " accuracy " << r.aggregated.scores.accuracy
        << "\n";
    for (const auto& n : r.notices) err << "notice: " << n << "\n";
  }
  return kExitOk;
}

int cmd_persuasive(const Options& o, RunMetadata& md, std::ostream& out) {
  const auto corpus = load_corpus(o, md);
  ClassifierConfig c;
  c.epochs = o.epochs;
  c.seed = o.seed;
  c.averaging = !o.no_average;
  md.seed("persuasive", o.seed);
  md.note("document classifier: binary 1-3 gram features, " + std::to_string(o.folds) + "-fold cross-validation");
  const auto r = crossval_doc_classifier(corpus, o.folds, c);
  const auto& e = r.evaluation;
  json j = {{"folds", r.folds},
            {"seed", r.seed},
            {"documents", r.documents},
            {"positives", r.positives},
            {"ngram_range", {1, 3}},
            {"macro_f1", e.macro_f1},
            {"accuracy", e.accuracy},
            {"f1_persuasive", e.f1_persuasive},
            {"f1_non_persuasive", e.f1_non_persuasive},
            {"confusion", {{"tp", e.tp}, {"fp", e.fp}, {"fn", e.fn}, {"tn", e.tn}}}};
  emit(o, out, j.dump(1, '\t') + "\n", md);
  return kExitOk;
}

int cmd_report(const Options& o, RunMetadata& md, std::ostream& out, std::ostream& err) {
  if (o.out.empty()) throw ConfigError("report needs --out for the output directory");
  const auto format = parse_report_format(o.format);
  if (!format) throw ConfigError("unknown format '" + o.format + "' (expected json, md or html)");
  const auto corpus = load_corpus(o, md);
  const auto configs = feature_configs(o);
  const auto shared = load_shared(o, md, err);
  const auto learner = make_learner(o, shared);
  md.seed("scenario", o.seed);
  ReportInput in;
  in.corpus = &corpus;
  in.results = run_scenario(o, corpus, configs, *learner);
  const FeatureConfig base = configs.front();
  const auto baseline = run_scenario(o, corpus, std::span(&base, 1), *make_majority_learner());
  in.comparison.push_back(comparison_row("baseline (all O)", baseline.front().aggregated));
  const ScenarioResult* best = nullptr;
  for (const auto& r : in.results) {
    md.degraded(r.degraded);
    in.comparison.push_back(comparison_row("system " + r.config.sets.to_string(), r.aggregated));
    if (!best || r.aggregated.scores.macro_f1 > best->aggregated.scores.macro_f1) best = &r;
  }
  const auto human = human_vs_gold(corpus, scenario_options(o));
  in.comparison.push_back(comparison_row("human", human));
  if (best) in.predictions = best->predictions;

  const fs::path dir = o.out;
  const char* ext = *format == ReportFormat::kHtml ? "html" : *format == ReportFormat::kJson ? "json" : "md";
  const auto report_path = dir / (std::string("report.") + ext);
  write_file(report_path, render_report(in, *format));
  md.output(report_path.string());
  write_file(dir / "metrics.json", results_json(in.results));
  md.output((dir / "metrics.json").string());
  out << "wrote " << report_path.string() << "\n";
  return kExitOk;
}

}  // namespace

std::string file_fingerprint(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Argument mining toolkit: corpus tools, agreement, sequence labeling and experiments", "argmine"};
  app.set_config("--config", "", "Read options from a key = value file; sections name subcommands");
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  auto corpus_opt = [&](CLI::App* s) { s->add_option("--corpus", o.corpus, "Corpus JSON file")->required(); };
  auto out_opt = [&](CLI::App* s, const char* what) { s->add_option("--out", o.out, what); };
  auto common = [&](CLI::App* s) {
    s->add_option("--workers", o.workers, "Worker threads (0 = all processors)")->check(CLI::NonNegativeNumber);
    s->add_option("--metadata", o.metadata, "Run-metadata file (default: beside --out)");
  };
  auto feature_opts = [&](CLI::App* s) {
    s->add_option("--features", o.features, "Feature-set combinations, e.g. 0 or 0,01234");
    s->add_option("--window", o.window, "Context window C in sentences")->check(CLI::NonNegativeNumber);
    s->add_option("--min-count", o.min_count, "Minimum n-gram frequency in the training fold");
    s->add_option("--epochs", o.epochs, "Perceptron epochs")->check(CLI::PositiveNumber);
    s->add_option("--seed", o.seed, "Global seed");
    s->add_option("--embeddings", o.embeddings, "Word-vector text file (feature set 4)");
    s->add_option("--layers", o.layers, "Precomputed linguistic layers JSON (feature sets 1-3)");
    s->add_option("--lda-cache", o.lda_cache, "Pretrained topic model JSON (feature set 2)");
    s->add_option("--topics", o.topics, "Topic count when fitting LDA")->check(CLI::Range(2, 1000));
    s->add_option("--lda-iterations", o.lda_iterations, "Gibbs sweeps when fitting LDA")->check(CLI::PositiveNumber);
    s->add_flag("--no-average", o.no_average, "Use final rather than averaged perceptron weights");
  };
  auto scenario_opts = [&](CLI::App* s) {
    s->add_option("--scenario", o.scenario, "all, in-domain or cross-domain")
        ->check(CLI::IsMember({"all", "in-domain", "cross-domain"}));
    s->add_option("--folds", o.folds, "Cross-validation folds")->check(CLI::Range(std::size_t{2}, std::size_t{1000000}));
    s->add_option("--learner", o.learner, "perceptron, oracle, majority or random")
        ->check(CLI::IsMember({"perceptron", "oracle", "majority", "random"}));
    s->add_option("--boundary-window", o.boundary_window, "Boundary-similarity transposition window")
        ->check(CLI::PositiveNumber);
    s->add_option("--alpha-permutations", o.alpha_permutations, "Concatenation orders for alpha_U of predictions");
  };

  auto* validate = app.add_subcommand("validate", "Check a corpus file against the data model");
  corpus_opt(validate);
  common(validate);

  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  corpus_opt(stats);
  out_opt(stats, "Output JSON file");
  common(stats);

  auto* gold = app.add_subcommand("gold", "Build gold annotations by majority vote");
  corpus_opt(gold);
  out_opt(gold, "Output corpus file");
  common(gold);

  auto* agreement = app.add_subcommand("agreement", "Inter-annotator agreement");
  corpus_opt(agreement);
  out_opt(agreement, "Output JSON file");
  common(agreement);
  agreement->add_option("--metric", o.metric, "alpha-u, fleiss-kappa, prob-confusion or correlates")
      ->check(CLI::IsMember({"alpha-u", "fleiss-kappa", "prob-confusion", "correlates"}));
  agreement->add_option("--category", o.category, "Component type or 'all' for the joint value");
  agreement->add_option("--annotators", o.annotators, "Comma-separated annotator ids ('gold' allowed)");
  agreement->add_option("--n-perm", o.n_perm, "Random concatenation orders")->check(CLI::PositiveNumber);
  agreement->add_option("--seed", o.seed, "Seed for the concatenation orders");
  agreement->add_option("--topic", o.topic, "Restrict correlates to a topic");
  agreement->add_option("--register", o.register_kind, "Restrict correlates to a register");

  auto* train = app.add_subcommand("train", "Train a sequence labeler on all gold documents");
  corpus_opt(train);
  out_opt(train, "Model file");
  common(train);
  feature_opts(train);

  auto* predict = app.add_subcommand("predict", "Label documents with a trained model");
  corpus_opt(predict);
  out_opt(predict, "Token-label dump (TSV)");
  common(predict);
  predict->add_option("--model", o.model, "Model file")->required();
  predict->add_option("--embeddings", o.embeddings, "Word-vector text file");
  predict->add_option("--layers", o.layers, "Precomputed linguistic layers JSON");
  predict->add_option("--lda-cache", o.lda_cache, "Topic model overriding the one saved with the model");

  auto* eval = app.add_subcommand("eval", "Score a token-label dump");
  eval->add_option("--predictions", o.predictions, "Token-label dump (TSV)")->required();
  out_opt(eval, "Output JSON file");
  common(eval);
  eval->add_option("--boundary-window", o.boundary_window, "Boundary-similarity transposition window")
      ->check(CLI::PositiveNumber);
  eval->add_option("--alpha-permutations", o.alpha_permutations, "Concatenation orders for alpha_U");
  eval->add_option("--seed", o.seed, "Seed for the concatenation orders");

  auto* xval = app.add_subcommand("xval", "Run an evaluation scenario");
  corpus_opt(xval);
  out_opt(xval, "Output directory");
  common(xval);
  feature_opts(xval);
  scenario_opts(xval);

  auto* persuasive = app.add_subcommand("persuasive", "Cross-validate the persuasiveness classifier");
  corpus_opt(persuasive);
  out_opt(persuasive, "Output JSON file");
  common(persuasive);
  persuasive->add_option("--folds", o.folds, "Cross-validation folds")->check(CLI::Range(std::size_t{2}, std::size_t{1000000}));
  persuasive->add_option("--seed", o.seed, "Seed");
  persuasive->add_option("--epochs", o.epochs, "Perceptron epochs")->check(CLI::PositiveNumber);
  persuasive->add_flag("--no-average", o.no_average, "Use final rather than averaged weights");

  auto* report = app.add_subcommand("report", "Run a scenario and render metric tables with side-by-side output");
  corpus_opt(report);
  out_opt(report, "Output directory");
  common(report);
  feature_opts(report);
  scenario_opts(report);
  report->add_option("--format", o.format, "json, md or html")->check(CLI::IsMember({"json", "md", "html"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.back()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const auto subs = app.get_subcommands();
    err << "error: " << e.what() << "\n\n" << (subs.empty() ? app.help() : subs.back()->help());
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  set_worker_count(o.workers);
  RunMetadata md(name, *sub);
  const bool dir_output = name == "xval" || name == "report";
  try {
    int code = kExitOk;
    if (name == "validate") code = cmd_validate(o, md, out);
    else if (name == "stats") code = cmd_stats(o, md, out);
    else if (name == "gold") code = cmd_gold(o, md, out, err);
    else if (name == "agreement") code = cmd_agreement(o, md, out);
    else if (name == "train") code = cmd_train(o, md, out, err);
    else if (name == "predict") code = cmd_predict(o, md, out, err);
    else if (name == "eval") code = cmd_eval(o, md, out);
    else if (name == "xval") code = cmd_xval(o, md, out, err);
    else if (name == "persuasive") code = cmd_persuasive(o, md, out);
    else if (name == "report") code = cmd_report(o, md, out, err);
    md.write(metadata_path(o, dir_output));
    return code;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace argmine
