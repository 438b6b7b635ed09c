#include "argmine/persuasiveness.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_map>

#include "argmine/error.hpp"
#include "argmine/features.hpp"
#include "argmine/parallel.hpp"
#include "argmine/utf8.hpp"

namespace argmine {

DocInstance make_instance(const Document& doc, int max_n) {
  DocInstance out;
  out.doc_id = doc.id;
  if (doc.persuasive) out.label = doc.persuasive->label;
  std::vector<std::string> all;
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const auto toks = lowered_tokens(doc, s);
    auto grams = ngrams(toks, max_n);
    all.insert(all.end(), std::make_move_iterator(grams.begin()), std::make_move_iterator(grams.end()));
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  out.features = std::move(all);
  return out;
}

double LinearTextClassifier::score(std::span<const std::string> features) const {
  double s = bias;
  for (const auto& f : features) {
    auto it = weights.find(f);
    if (it != weights.end()) s += it->second;
  }
  return s;
}

LinearTextClassifier train_doc_classifier(std::span<const DocInstance> instances, const ClassifierConfig& config) {
  if (config.epochs < 1) throw ConfigError("training needs at least one epoch");
  std::size_t pos = 0, neg = 0;
  for (const auto& d : instances) {
    if (!d.label) throw ConfigError("document " + d.doc_id + " has no persuasiveness label");
    (*d.label ? pos : neg) += 1;
  }
  if (pos == 0 || neg == 0) throw ConfigError("classifier training needs both classes; got a single class");

  struct Avg {
    double w = 0.0;
    double u = 0.0;
  };
  std::unordered_map<std::string, Avg> weights;
  Avg bias;
  double c = 1.0;
  std::vector<std::size_t> order(instances.size());
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    if (config.shuffle) {
      std::mt19937_64 rng(mix_seed(config.seed, epoch));
      for (std::size_t k = order.size(); k > 1; --k) {
        std::uniform_int_distribution<std::size_t> pick(0, k - 1);
        std::swap(order[k - 1], order[pick(rng)]);
      }
    }
    for (std::size_t i : order) {
      const auto& d = instances[i];
      const double y = *d.label ? 1.0 : -1.0;
      double s = bias.w;
      for (const auto& f : d.features) {
        auto it = weights.find(f);
        if (it != weights.end()) s += it->second.w;
      }
      if (y * s <= 0.0) {
        for (const auto& f : d.features) {
          auto& a = weights[f];
          a.w += y;
          a.u += c * y;
        }
        bias.w += y;
        bias.u += c * y;
      }
      c += 1.0;
    }
  }
  auto final_weight = [&](const Avg& a) { return config.averaging ? a.w - a.u / c : a.w; };
  LinearTextClassifier model;
  model.max_n = config.max_n;
  model.bias = final_weight(bias);
  for (const auto& [f, a] : weights) {
    const double w = final_weight(a);
    if (w != 0.0) model.weights.emplace(f, w);
  }
  return model;
}

LinearTextClassifier train_doc_classifier(const Corpus& corpus, std::span<const std::size_t> train_docs,
                                          const ClassifierConfig& config) {
  std::vector<DocInstance> instances;
  instances.reserve(train_docs.size());
  for (std::size_t d : train_docs) instances.push_back(make_instance(corpus.documents.at(d), config.max_n));
  return train_doc_classifier(instances, config);
}

Classification classify(const LinearTextClassifier& model, const DocInstance& instance) {
  const double s = model.score(instance.features);
  return {s > 0.0, s};
}

Classification classify(const LinearTextClassifier& model, const Document& doc) {
  return classify(model, make_instance(doc, model.max_n));
}

namespace {

double f1(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
  if (tp == 0) return 0.0;
  const double p = static_cast<double>(tp) / static_cast<double>(tp + fp);
  const double r = static_cast<double>(tp) / static_cast<double>(tp + fn);
  return 2.0 * p * r / (p + r);
}

}  // namespace

BinaryEvaluation evaluate_binary(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn, std::uint64_t tn) {
  BinaryEvaluation e{tp, fp, fn, tn};
  e.f1_persuasive = f1(tp, fp, fn);
  e.f1_non_persuasive = f1(tn, fn, fp);
  e.macro_f1 = (e.f1_persuasive + e.f1_non_persuasive) / 2.0;
  const auto n = tp + fp + fn + tn;
  e.accuracy = n ? static_cast<double>(tp + tn) / static_cast<double>(n) : 0.0;
  return e;
}

BinaryEvaluation evaluate_binary(const std::vector<bool>& gold, const std::vector<bool>& predicted) {
  if (gold.size() != predicted.size()) throw ConfigError("gold and predicted label counts differ");
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i]) {
      (predicted[i] ? tp : fn) += 1;
    } else {
      (predicted[i] ? fp : tn) += 1;
    }
  }
  return evaluate_binary(tp, fp, fn, tn);
}

BinaryEvaluation evaluate_docs(const LinearTextClassifier& model, const Corpus& corpus,
                               std::span<const std::size_t> test_docs) {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t d : test_docs) {
    const auto& doc = corpus.documents.at(d);
    if (!doc.persuasive) throw ConfigError("document " + doc.id + " has no persuasiveness label");
    const bool p = classify(model, doc).persuasive;
    if (doc.persuasive->label) {
      (p ? tp : fn) += 1;
    } else {
      (p ? fp : tn) += 1;
    }
  }
  return evaluate_binary(tp, fp, fn, tn);
}

PersuasiveCrossval crossval_doc_classifier(const Corpus& corpus, std::size_t k, const ClassifierConfig& config) {
  std::vector<std::size_t> labeled;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    if (corpus.documents[d].persuasive) labeled.push_back(d);
  }
  if (k < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (k > labeled.size()) {
    throw ConfigError(std::to_string(k) + " folds requested but only " + std::to_string(labeled.size()) +
                      " documents carry a persuasiveness label");
  }
  std::mt19937_64 rng(config.seed);
  for (std::size_t i = labeled.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(labeled[i - 1], labeled[pick(rng)]);
  }
  std::vector<DocInstance> instances;
  instances.reserve(labeled.size());
  for (std::size_t d : labeled) instances.push_back(make_instance(corpus.documents[d], config.max_n));

  const std::size_t n = instances.size();
  std::vector<std::array<std::uint64_t, 4>> counts(k, {0, 0, 0, 0});
  std::vector<std::exception_ptr> errors(k);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t f = 0; f < static_cast<std::int64_t>(k); ++f) {
    try {
      const std::size_t lo = static_cast<std::size_t>(f) * n / k;
      const std::size_t hi = (static_cast<std::size_t>(f) + 1) * n / k;
      std::vector<DocInstance> train;
      for (std::size_t i = 0; i < n; ++i) {
        if (i < lo || i >= hi) train.push_back(instances[i]);
      }
      ClassifierConfig c = config;
      c.seed = mix_seed(config.seed, static_cast<std::uint64_t>(f));
      const auto model = train_doc_classifier(train, c);
      auto& cnt = counts[static_cast<std::size_t>(f)];
      for (std::size_t i = lo; i < hi; ++i) {
        const bool g = *instances[i].label;
        const bool p = classify(model, instances[i]).persuasive;
        cnt[g ? (p ? 0 : 2) : (p ? 1 : 3)] += 1;
      }
    } catch (...) {
      errors[static_cast<std::size_t>(f)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::array<std::uint64_t, 4> total{0, 0, 0, 0};
  for (const auto& c : counts) {
    for (std::size_t j = 0; j < 4; ++j) total[j] += c[j];
  }
  PersuasiveCrossval out;
  out.evaluation = evaluate_binary(total[0], total[1], total[2], total[3]);
  out.folds = k;
  out.documents = n;
  out.positives = static_cast<std::size_t>(std::count_if(instances.begin(), instances.end(),
                                                         [](const DocInstance& d) { return *d.label; }));
  out.seed = config.seed;
  return out;
}

}  // namespace argmine
