#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>

#include "json.hpp"

#include "argmine/error.hpp"
#include "argmine/features.hpp"
#include "argmine/parallel.hpp"
#include "argmine/utf8.hpp"

namespace argmine {
namespace {

std::uint64_t fnv1a(std::span<const std::string> tokens) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& t : tokens) {
    for (unsigned char c : t) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0xFF;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Draws an index from unnormalized weights.
std::size_t sample(std::vector<double>& cumulative, std::mt19937_64& rng) {
  std::partial_sum(cumulative.begin(), cumulative.end(), cumulative.begin());
  std::uniform_real_distribution<double> u(0.0, cumulative.back());
  const double x = u(rng);
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
  return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

void normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  for (double& x : v) x /= s;
}

}  // namespace

std::vector<std::string> topic_tokens(std::span<const std::string> tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    bool letter = false;
    for (char32_t cp : utf8::decode(t)) letter = letter || utf8::is_alphabetic(cp);
    if (letter) out.push_back(utf8::to_lower(t));
  }
  return out;
}

TopicModel::TopicModel(LdaConfig config, std::vector<std::string> words,
                       std::vector<std::vector<std::uint32_t>> word_topic,
                       std::vector<std::vector<double>> training_theta)
    : config_(config),
      words_(std::move(words)),
      word_topic_(std::move(word_topic)),
      topic_totals_(config.topics, 0),
      training_theta_(std::move(training_theta)) {
  for (std::uint32_t w = 0; w < words_.size(); ++w) word_ids_.emplace(words_[w], w);
  for (const auto& row : word_topic_) {
    for (std::size_t k = 0; k < row.size(); ++k) topic_totals_[k] += row[k];
  }
}

std::vector<double> TopicModel::infer(std::span<const std::string> tokens) const {
  const std::size_t T = config_.topics;
  const double alpha = config_.effective_alpha();
  const double beta = config_.beta;
  const double vbeta = beta * static_cast<double>(words_.size());
  std::vector<std::uint32_t> ids;
  for (const auto& t : topic_tokens(tokens)) {
    auto it = word_ids_.find(t);
    if (it != word_ids_.end()) ids.push_back(it->second);
  }
  std::vector<double> theta(T, 1.0 / static_cast<double>(T));
  if (ids.empty()) return theta;

  std::mt19937_64 rng(mix_seed(config_.seed, fnv1a(tokens)));
  std::vector<std::size_t> z(ids.size());
  std::vector<double> n_dk(T, 0.0);
  std::uniform_int_distribution<std::size_t> init(0, T - 1);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    z[i] = init(rng);
    n_dk[z[i]] += 1.0;
  }
  std::vector<double> p(T);
  for (std::size_t it = 0; it < config_.inference_iterations; ++it) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      n_dk[z[i]] -= 1.0;
      const auto& wt = word_topic_[ids[i]];
      for (std::size_t k = 0; k < T; ++k) {
        p[k] = (n_dk[k] + alpha) * (static_cast<double>(wt[k]) + beta) /
               (static_cast<double>(topic_totals_[k]) + vbeta);
      }
      z[i] = sample(p, rng);
      n_dk[z[i]] += 1.0;
    }
  }
  const double denom = static_cast<double>(ids.size()) + static_cast<double>(T) * alpha;
  for (std::size_t k = 0; k < T; ++k) theta[k] = (n_dk[k] + alpha) / denom;
  normalize(theta);
  return theta;
}

std::vector<std::string> TopicModel::top_words(std::size_t topic, std::size_t n) const {
  std::vector<std::uint32_t> ids(words_.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::stable_sort(ids.begin(), ids.end(), [&](auto a, auto b) {
    return word_topic_[a][topic] > word_topic_[b][topic];
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < std::min(n, ids.size()); ++i) out.push_back(words_[ids[i]]);
  return out;
}

TopicModel train_lda(const std::vector<std::vector<std::string>>& texts, const LdaConfig& config) {
  const std::size_t T = config.topics;
  if (T < 2) throw ConfigError("LDA needs at least 2 topics");
  std::map<std::string, std::uint32_t> vocab;
  std::vector<std::vector<std::uint32_t>> docs;
  for (const auto& text : texts) {
    std::vector<std::uint32_t> ids;
    for (auto& t : topic_tokens(text)) {
      auto [it, inserted] = vocab.emplace(t, 0);
      if (inserted) it->second = static_cast<std::uint32_t>(vocab.size() - 1);
      ids.push_back(it->second);
    }
    docs.push_back(std::move(ids));
  }
  if (vocab.empty()) throw ConfigError("LDA training texts have an empty vocabulary");
  std::vector<std::string> words(vocab.size());
  for (const auto& [w, id] : vocab) words[id] = w;

  const std::size_t V = words.size();
  const double alpha = config.effective_alpha();
  const double beta = config.beta;
  const double vbeta = beta * static_cast<double>(V);
  std::vector<std::vector<std::uint32_t>> n_wt(V, std::vector<std::uint32_t>(T, 0));
  std::vector<std::vector<std::uint32_t>> n_dt(docs.size(), std::vector<std::uint32_t>(T, 0));
  std::vector<std::uint64_t> n_t(T, 0);
  std::vector<std::vector<std::uint32_t>> z(docs.size());

  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<std::size_t> init(0, T - 1);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    z[d].resize(docs[d].size());
    for (std::size_t i = 0; i < docs[d].size(); ++i) {
      const auto k = static_cast<std::uint32_t>(init(rng));
      z[d][i] = k;
      ++n_wt[docs[d][i]][k];
      ++n_dt[d][k];
      ++n_t[k];
    }
  }
  std::vector<double> p(T);
  for (std::size_t it = 0; it < config.iterations; ++it) {
    for (std::size_t d = 0; d < docs.size(); ++d) {
      for (std::size_t i = 0; i < docs[d].size(); ++i) {
        const auto w = docs[d][i];
        const auto old = z[d][i];
        --n_wt[w][old];
        --n_dt[d][old];
        --n_t[old];
        for (std::size_t k = 0; k < T; ++k) {
          p[k] = (static_cast<double>(n_dt[d][k]) + alpha) * (static_cast<double>(n_wt[w][k]) + beta) /
                 (static_cast<double>(n_t[k]) + vbeta);
        }
        const auto k = static_cast<std::uint32_t>(sample(p, rng));
        z[d][i] = k;
        ++n_wt[w][k];
        ++n_dt[d][k];
        ++n_t[k];
      }
    }
  }
  std::vector<std::vector<double>> theta(docs.size(), std::vector<double>(T));
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const double denom = static_cast<double>(docs[d].size()) + static_cast<double>(T) * alpha;
    for (std::size_t k = 0; k < T; ++k) theta[d][k] = (static_cast<double>(n_dt[d][k]) + alpha) / denom;
    normalize(theta[d]);
  }
  return TopicModel(config, std::move(words), std::move(n_wt), std::move(theta));
}

void TopicModel::save(const std::filesystem::path& path) const {
  nlohmann::json j;
  j["version"] = 1;
  j["topics"] = config_.topics;
  j["alpha"] = config_.effective_alpha();
  j["beta"] = config_.beta;
  j["iterations"] = config_.iterations;
  j["inference_iterations"] = config_.inference_iterations;
  j["seed"] = config_.seed;
  j["words"] = words_;
  j["word_topic"] = word_topic_;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write topic model " + path.string());
  out << j.dump() << "\n";
}

TopicModel TopicModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open topic model " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
    if (j.at("version").get<int>() != 1) {
      throw ConfigError("topic model version " + j.at("version").dump() + " unsupported (expected 1)");
    }
    LdaConfig c;
    c.topics = j.at("topics").get<std::size_t>();
    c.alpha = j.at("alpha").get<double>();
    c.beta = j.at("beta").get<double>();
    c.iterations = j.at("iterations").get<std::size_t>();
    c.inference_iterations = j.at("inference_iterations").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    auto words = j.at("words").get<std::vector<std::string>>();
    auto wt = j.at("word_topic").get<std::vector<std::vector<std::uint32_t>>>();
    if (wt.size() != words.size()) throw ParseError("topic model: word_topic rows do not match words");
    for (const auto& row : wt) {
      if (row.size() != c.topics) throw ParseError("topic model: word_topic row has wrong width");
    }
    return TopicModel(c, std::move(words), std::move(wt), {});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("topic model ") + path.string() + ": " + e.what());
  }
}

}  // namespace argmine
