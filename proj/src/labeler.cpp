#include "argmine/labeler.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "argmine/error.hpp"
#include "argmine/parallel.hpp"

namespace argmine {

std::uint32_t FeatureSpace::intern(const std::string& name) {
  auto [it, inserted] = ids_.emplace(name, static_cast<std::uint32_t>(names_.size()));
  if (inserted) names_.push_back(name);
  return it->second;
}

std::optional<std::uint32_t> FeatureSpace::find(const std::string& name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

EncodedDocument encode(const DocumentFeatures& features, FeatureSpace& space, bool grow) {
  EncodedDocument out;
  out.doc_id = features.doc_id;
  out.sentences.resize(features.sentences.size());
  auto map = [&](const std::vector<NamedValue>& in, std::vector<std::pair<std::uint32_t, float>>& dst) {
    dst.reserve(in.size());
    for (const auto& [name, value] : in) {
      if (grow) {
        dst.emplace_back(space.intern(name), static_cast<float>(value));
      } else if (auto id = space.find(name)) {
        dst.emplace_back(*id, static_cast<float>(value));
      }
    }
  };
  for (std::size_t s = 0; s < features.sentences.size(); ++s) {
    map(features.sentences[s].lexical, out.sentences[s].lexical);
    map(features.sentences[s].contextual, out.sentences[s].contextual);
  }
  return out;
}

std::vector<std::size_t> viterbi(std::span<const LabelScores> emissions, const TransitionMatrix& transitions,
                                 std::size_t n_labels) {
  const std::size_t n = emissions.size();
  if (n == 0) return {};
  std::vector<LabelScores> delta(n);
  std::vector<std::array<std::size_t, kNumBioLabels>> back(n);
  for (std::size_t y = 0; y < n_labels; ++y) delta[0][y] = emissions[0][y];
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t y = 0; y < n_labels; ++y) {
      std::size_t best = 0;
      double best_score = delta[i - 1][0] + transitions[0][y];
      for (std::size_t p = 1; p < n_labels; ++p) {
        const double s = delta[i - 1][p] + transitions[p][y];
        if (s > best_score) {
          best_score = s;
          best = p;
        }
      }
      delta[i][y] = best_score + emissions[i][y];
      back[i][y] = best;
    }
  }
  std::vector<std::size_t> path(n);
  std::size_t best = 0;
  for (std::size_t y = 1; y < n_labels; ++y) {
    if (delta[n - 1][y] > delta[n - 1][best]) best = y;
  }
  path[n - 1] = best;
  for (std::size_t i = n - 1; i > 0; --i) path[i - 1] = back[i][path[i]];
  return path;
}

double sequence_score(std::span<const LabelScores> emissions, const TransitionMatrix& transitions,
                      std::span<const std::size_t> labels) {
  double s = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    s += emissions[i][labels[i]];
    if (i > 0) s += transitions[labels[i - 1]][labels[i]];
  }
  return s;
}

namespace {

// Calls fn(key, value) for every weighted feature visible from sentence i.
template <typename Fn>
void for_each_feature(const EncodedDocument& doc, std::size_t i, int window, Fn&& fn) {
  for (const auto& [id, v] : doc.sentences[i].lexical) fn(LinearChainModel::key(id, 0), v);
  const auto n = static_cast<long>(doc.sentences.size());
  for (int k = -window; k <= window; ++k) {
    const long j = static_cast<long>(i) + k;
    if (j < 0 || j >= n) continue;
    for (const auto& [id, v] : doc.sentences[static_cast<std::size_t>(j)].contextual) {
      fn(LinearChainModel::key(id, k), v);
    }
  }
}

std::vector<BioLabel> to_labels(const std::vector<std::size_t>& path) {
  std::vector<BioLabel> out;
  out.reserve(path.size());
  for (auto p : path) out.push_back(bio_from_index(p));
  return out;
}

struct Averaged {
  LabelScores w{};
  LabelScores u{};
};

}  // namespace

std::vector<LabelScores> LinearChainModel::emission_scores(const EncodedDocument& doc) const {
  std::vector<LabelScores> out(doc.sentences.size());
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    auto& row = out[i];
    row.fill(0.0);
    for_each_feature(doc, i, feature_config.window, [&](std::uint64_t k, float v) {
      auto it = emission.find(k);
      if (it == emission.end()) return;
      for (std::size_t y = 0; y < kNumBioLabels; ++y) row[y] += it->second[y] * v;
    });
  }
  return out;
}

std::vector<BioLabel> LinearChainModel::decode(const EncodedDocument& doc) const {
  return to_labels(viterbi(emission_scores(doc), transition));
}

std::pair<int, std::string> split_feature_name(const std::string& full) {
  for (const char* stem : {"minus", "plus"}) {
    const std::string s(stem);
    if (full.rfind(s, 0) != 0) continue;
    std::size_t pos = s.size();
    std::size_t digits_end = pos;
    while (digits_end < full.size() && full[digits_end] >= '0' && full[digits_end] <= '9') ++digits_end;
    if (digits_end == pos || full.compare(digits_end, 5, "Sent_") != 0) continue;
    const int k = std::stoi(full.substr(pos, digits_end - pos));
    return {s == "minus" ? -k : k, full.substr(digits_end + 5)};
  }
  return {0, full};
}

double LinearChainModel::weight(const std::string& full_name, BioLabel label) const {
  const auto [offset, base] = split_feature_name(full_name);
  const auto id = space.find(base);
  if (!id) return 0.0;
  auto it = emission.find(key(*id, offset));
  return it == emission.end() ? 0.0 : it->second[index_of(label)];
}

std::vector<BioLabel> viterbi_decode(const LinearChainModel& model, std::span<const FeatureVector> sequence) {
  std::vector<LabelScores> scores(sequence.size());
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    scores[i].fill(0.0);
    for (const auto& [name, value] : sequence[i]) {
      const auto [offset, base] = split_feature_name(name);
      const auto id = model.space.find(base);
      if (!id) continue;
      auto it = model.emission.find(LinearChainModel::key(*id, offset));
      if (it == model.emission.end()) continue;
      // Scores are accumulated in float-rounded values, as in encode().
      const double v = static_cast<float>(value);
      for (std::size_t y = 0; y < kNumBioLabels; ++y) scores[i][y] += it->second[y] * v;
    }
  }
  return to_labels(viterbi(scores, model.transition));
}

LinearChainModel train_perceptron(std::vector<EncodedDocument> docs, FeatureSpace space,
                                  const FeatureConfig& feature_config, const TrainingConfig& config) {
  if (config.epochs < 1) throw ConfigError("training needs at least one epoch");
  if (space.size() == 0) throw ConfigError("empty feature space: no features extracted from training data");
  for (const auto& d : docs) {
    if (d.gold.size() != d.sentences.size()) throw ConfigError("document " + d.doc_id + " lacks gold labels");
  }
  const int window = feature_config.window;
  std::unordered_map<std::uint64_t, Averaged> em;
  std::array<Averaged, kNumBioLabels> tr{};
  double c = 1.0;

  LinearChainModel model;
  model.feature_config = feature_config;
  model.metadata.epochs = config.epochs;
  model.metadata.seed = config.seed;
  model.metadata.shuffle = config.shuffle;
  model.metadata.averaging = config.averaging;
  model.metadata.documents = docs.size();

  auto update = [&](Averaged& a, std::size_t y, double delta) {
    a.w[y] += delta;
    a.u[y] += c * delta;
  };

  std::vector<std::size_t> order(docs.size());
  std::vector<LabelScores> scores;
  TransitionMatrix trans{};
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    if (config.shuffle) {
      std::mt19937_64 rng(mix_seed(config.seed, epoch));
      for (std::size_t k = order.size(); k > 1; --k) {
        std::uniform_int_distribution<std::size_t> pick(0, k - 1);
        std::swap(order[k - 1], order[pick(rng)]);
      }
    }
    std::size_t mistakes = 0;
    for (std::size_t d : order) {
      const auto& doc = docs[d];
      if (doc.sentences.empty()) continue;
      scores.assign(doc.sentences.size(), LabelScores{});
      for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
        for_each_feature(doc, i, window, [&](std::uint64_t k, float v) {
          auto it = em.find(k);
          if (it == em.end()) return;
          for (std::size_t y = 0; y < kNumBioLabels; ++y) scores[i][y] += it->second.w[y] * v;
        });
      }
      for (std::size_t p = 0; p < kNumBioLabels; ++p) trans[p] = tr[p].w;
      const auto pred = viterbi(scores, trans);
      bool wrong = false;
      for (std::size_t i = 0; i < pred.size(); ++i) {
        const std::size_t g = index_of(doc.gold[i]);
        if (g != pred[i]) {
          wrong = true;
          for_each_feature(doc, i, window, [&](std::uint64_t k, float v) {
            auto& a = em[k];
            update(a, g, v);
            update(a, pred[i], -static_cast<double>(v));
          });
        }
        if (i > 0) {
          const std::size_t gp = index_of(doc.gold[i - 1]);
          if (gp != pred[i - 1] || g != pred[i]) {
            update(tr[gp], g, 1.0);
            update(tr[pred[i - 1]], pred[i], -1.0);
          }
        }
      }
      if (wrong) ++mistakes;
      c += 1.0;
    }
    model.metadata.errors_per_epoch.push_back(mistakes);
  }

  auto finalize = [&](const Averaged& a) {
    LabelScores out{};
    for (std::size_t y = 0; y < kNumBioLabels; ++y) out[y] = config.averaging ? a.w[y] - a.u[y] / c : a.w[y];
    return out;
  };
  for (const auto& [k, a] : em) {
    const auto w = finalize(a);
    if (std::any_of(w.begin(), w.end(), [](double x) { return x != 0.0; })) model.emission.emplace(k, w);
  }
  for (std::size_t p = 0; p < kNumBioLabels; ++p) model.transition[p] = finalize(tr[p]);
  model.space = std::move(space);
  return model;
}

LinearChainModel train(const Corpus& corpus, std::span<const std::size_t> train_docs,
                       const FeatureConfig& feature_config, const FeatureResources& resources,
                       const TrainingConfig& config) {
  if (train_docs.empty()) throw ConfigError("no training documents");
  const auto features = extract_corpus(corpus, train_docs, feature_config, resources);
  FeatureSpace space;
  std::vector<EncodedDocument> encoded;
  encoded.reserve(features.size());
  for (std::size_t k = 0; k < features.size(); ++k) {
    const auto& doc = corpus.documents.at(train_docs[k]);
    if (!doc.gold) throw ConfigError("training document " + doc.id + " has no gold annotation");
    auto e = encode(features[k], space, true);
    e.gold = sentence_approximate(doc, *doc.gold).labels;
    encoded.push_back(std::move(e));
  }
  auto model = train_perceptron(std::move(encoded), std::move(space), feature_config, config);
  if (resources.embeddings && feature_config.sets.has(4)) model.metadata.embedding_dimension = resources.embeddings->dimension();
  if (resources.topics && feature_config.sets.has(2)) model.metadata.topics = resources.topics->topics();
  return model;
}

DocumentPrediction predict_document(const LinearChainModel& model, const Document& doc,
                                    const FeatureConfig& config, const FeatureResources& resources) {
  if (!(config == model.feature_config)) {
    throw ConfigError("feature configuration mismatch: model uses sets " + model.feature_config.sets.to_string() +
                      " window " + std::to_string(model.feature_config.window) + ", got sets " +
                      config.sets.to_string() + " window " + std::to_string(config.window));
  }
  const auto& sets = model.feature_config.sets;
  if (resources.embeddings && !sets.has(4)) {
    throw ConfigError("feature configuration mismatch: embeddings supplied but the model was trained without set 4");
  }
  if (resources.topics && !sets.has(2)) {
    throw ConfigError("feature configuration mismatch: topic model supplied but the model was trained without set 2");
  }
  if (sets.has(4) && resources.embeddings && model.metadata.embedding_dimension &&
      resources.embeddings->dimension() != model.metadata.embedding_dimension) {
    throw ConfigError("embedding dimension mismatch: model " + std::to_string(model.metadata.embedding_dimension) +
                      ", supplied " + std::to_string(resources.embeddings->dimension()));
  }
  if (sets.has(2) && resources.topics && model.metadata.topics && resources.topics->topics() != model.metadata.topics) {
    throw ConfigError("topic count mismatch: model " + std::to_string(model.metadata.topics) + ", supplied " +
                      std::to_string(resources.topics->topics()));
  }
  DocumentPrediction out;
  out.sentences.doc_id = doc.id;
  if (doc.sentences.empty()) return out;
  FeatureResources r = resources;
  const Vocabulary open = Vocabulary::open();
  if (sets.has(0) && !r.vocabulary) r.vocabulary = &open;
  FeatureSpace space = model.space;  // lookup only; encode() does not grow it
  const auto encoded = encode(extract_document(doc, config, r), space, false);
  out.sentences.labels = model.decode(encoded);
  out.tokens = expand_to_tokens(doc, out.sentences);
  return out;
}

}  // namespace argmine
