#include <cstdio>
#include <exception>

#include "argmine/error.hpp"
#include "argmine/features.hpp"

namespace argmine {

FeatureSets FeatureSets::parse(std::string_view digits) {
  FeatureSets fs;
  if (digits.empty()) throw ConfigError("empty feature-set selection");
  for (char c : digits) {
    if (c < '0' || c > '4') throw ConfigError("feature set digits must be 0-4, got '" + std::string(digits) + "'");
    auto& slot = fs.enabled[static_cast<std::size_t>(c - '0')];
    if (slot) throw ConfigError("feature set " + std::string(1, c) + " listed twice");
    slot = true;
  }
  return fs;
}

std::string FeatureSets::to_string() const {
  std::string s;
  for (int k = 0; k < 5; ++k) {
    if (has(k)) s += static_cast<char>('0' + k);
  }
  return s;
}

std::string position_prefix(int offset) {
  if (offset == 0) return {};
  return (offset < 0 ? "minus" + std::to_string(-offset) : "plus" + std::to_string(offset)) + "Sent_";
}

void check_resources(const FeatureConfig& config, const FeatureResources& r) {
  if (config.window < 0) throw ConfigError("context window must be >= 0");
  if (config.sets.has(0) && !r.vocabulary) throw ConfigError("feature set 0 needs an n-gram vocabulary");
  if (config.sets.has(2) && !r.topics) throw ConfigError("feature set 2 needs a topic model");
  if (config.sets.has(4) && !r.embeddings) throw ConfigError("feature set 4 needs an embeddings table");
}

namespace {

std::string padded(const char* stem, std::size_t k, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*zu", stem, width, k);
  return buf;
}

constexpr std::array<const char*, 5> kSentimentNames = {
    "FS2_sentimentVeryNegative", "FS2_sentimentNegative", "FS2_sentimentNeutral",
    "FS2_sentimentPositive", "FS2_sentimentVeryPositive"};

double relative(std::size_t index, std::size_t count) {
  return count > 1 ? static_cast<double>(index) / static_cast<double>(count - 1) : 0.0;
}

void structural_features(const Document& doc, std::size_t s, const DocumentLayers* layers,
                         SentenceFeatures& out, std::set<std::string>& degraded) {
  const auto toks = doc.sentence_tokens(s);
  const std::size_t n = toks.size();
  for (std::size_t k = 0; k < 3 && k < n; ++k) {
    out.contextual.emplace_back("FS1_first" + std::to_string(k + 1) + "=" + std::string(toks[k]), 1.0);
    out.contextual.emplace_back("FS1_last" + std::to_string(k + 1) + "=" + std::string(toks[n - 1 - k]), 1.0);
  }
  const auto& sent = doc.sentences[s];
  std::size_t first_in_par = s, last_in_par = s;
  while (first_in_par > 0 && doc.sentences[first_in_par - 1].paragraph == sent.paragraph) --first_in_par;
  while (last_in_par + 1 < doc.sentences.size() && doc.sentences[last_in_par + 1].paragraph == sent.paragraph) {
    ++last_in_par;
  }
  out.contextual.emplace_back("FS1_relPosParagraph",
                              relative(s - first_in_par, last_in_par - first_in_par + 1));
  out.contextual.emplace_back("FS1_relPosDocument", relative(s, doc.sentences.size()));

  if (layers && layers->pos) {
    std::map<std::string, double> counts;
    std::vector<std::string> tags(layers->pos->begin() + static_cast<std::ptrdiff_t>(sent.first_token),
                                  layers->pos->begin() + static_cast<std::ptrdiff_t>(sent.last_token + 1));
    for (auto& g : ngrams(tags)) {
      for (char& c : g) c = c == ' ' ? '_' : c;
      counts["FS1_pos=" + g] += 1.0;
    }
    for (auto& [name, c] : counts) out.contextual.emplace_back(name, c);
  } else {
    degraded.insert("FS1:pos");
  }
  if (layers && (layers->depth || layers->productions || layers->subclauses)) {
    if (layers->depth) out.contextual.emplace_back("FS1_depTreeDepth", (*layers->depth)[s]);
    if (layers->productions) {
      std::set<std::string> rules((*layers->productions)[s].begin(), (*layers->productions)[s].end());
      for (const auto& r : rules) out.contextual.emplace_back("FS1_prod=" + r, 1.0);
    }
    if (layers->subclauses) out.contextual.emplace_back("FS1_subClauses", (*layers->subclauses)[s]);
  } else {
    degraded.insert("FS1:syntax");
  }
}

void semantic_features(std::size_t s, const DocumentLayers* layers, SentenceFeatures& out,
                       std::set<std::string>& degraded) {
  std::set<std::string> names;
  if (layers && layers->srl) {
    for (const auto& f : (*layers->srl)[s]) names.insert("FS3_srl=" + f);
  } else {
    degraded.insert("FS3:srl");
  }
  if (layers && layers->coref) {
    const auto& c = (*layers->coref)[s];
    if (c.in_chain) names.insert("FS3_corefInChain");
    for (const auto& t : c.transitions) names.insert("FS3_corefTransition=" + t);
    if (c.prev_distance) names.insert("FS3_corefPrevDist=" + std::to_string(*c.prev_distance));
    if (c.next_distance) names.insert("FS3_corefNextDist=" + std::to_string(*c.next_distance));
    if (c.links > 0) names.insert("FS3_corefLinks=" + std::to_string(c.links));
  } else {
    degraded.insert("FS3:coref");
  }
  if (layers && layers->discourse) {
    for (const auto& r : (*layers->discourse)[s]) {
      if (!r.type.empty()) names.insert("FS3_discType=" + r.type);
      if (!r.connective.empty()) {
        names.insert("FS3_discConnective");
        names.insert("FS3_discConnective=" + r.connective);
      }
      if (r.attribution) names.insert("FS3_discAttribution");
    }
  } else {
    degraded.insert("FS3:discourse");
  }
  for (const auto& n : names) out.contextual.emplace_back(n, 1.0);
}

}  // namespace

DocumentFeatures extract_document(const Document& doc, const FeatureConfig& config,
                                  const FeatureResources& r) {
  check_resources(config, r);
  DocumentFeatures out;
  out.doc_id = doc.id;
  const DocumentLayers* layers = nullptr;
  if (r.layers) {
    auto it = r.layers->find(doc.id);
    if (it != r.layers->end()) {
      check_layers(doc, it->second);
      layers = &it->second;
    }
  }
  out.sentences.resize(doc.sentences.size());
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    auto& sf = out.sentences[s];
    const auto lowered = lowered_tokens(doc, s);
    if (config.sets.has(0)) {
      std::set<std::string> hits;
      for (auto& g : ngrams(lowered)) {
        if (r.vocabulary->contains(g)) hits.insert(std::move(g));
      }
      for (const auto& g : hits) sf.lexical.emplace_back("FS0_ng=" + g, 1.0);
    }
    if (config.sets.has(1)) structural_features(doc, s, layers, sf, out.degraded);
    if (config.sets.has(2)) {
      std::vector<std::string> raw;
      for (auto t : doc.sentence_tokens(s)) raw.emplace_back(t);
      const auto theta = r.topics->infer(raw);
      for (std::size_t k = 0; k < theta.size(); ++k) sf.contextual.emplace_back(padded("FS2_topic", k, 2), theta[k]);
      if (layers && layers->sentiment) {
        const auto& v = (*layers->sentiment)[s];
        for (std::size_t k = 0; k < 5; ++k) sf.contextual.emplace_back(kSentimentNames[k], v[k]);
      } else {
        out.degraded.insert("FS2:sentiment");
      }
    }
    if (config.sets.has(3)) semantic_features(s, layers, sf, out.degraded);
    if (config.sets.has(4)) {
      std::vector<std::string> lookup;
      if (config.lowercase_lookup) {
        lookup = lowered;
      } else {
        for (auto t : doc.sentence_tokens(s)) lookup.emplace_back(t);
      }
      const auto emb = sentence_embedding(lookup, *r.embeddings);
      for (std::size_t k = 0; k < emb.size(); ++k) sf.contextual.emplace_back(padded("FS4_emb", k, 3), emb[k]);
    }
  }
  return out;
}

FeatureVector assemble(const DocumentFeatures& features, std::size_t sentence, int window) {
  FeatureVector v;
  const auto& cur = features.sentences.at(sentence);
  for (const auto& [name, value] : cur.lexical) v[name] = value;
  const auto n = static_cast<long>(features.sentences.size());
  for (int k = -window; k <= window; ++k) {
    const long j = static_cast<long>(sentence) + k;
    if (j < 0 || j >= n) continue;
    const std::string prefix = position_prefix(k);
    for (const auto& [name, value] : features.sentences[static_cast<std::size_t>(j)].contextual) {
      v[prefix + name] = value;
    }
  }
  return v;
}

FeatureVector extract_features(const Document& doc, std::size_t sentence, const FeatureConfig& config,
                               const FeatureResources& resources) {
  if (sentence >= doc.sentences.size()) throw ConfigError("sentence index out of range");
  return assemble(extract_document(doc, config, resources), sentence, config.window);
}

std::vector<DocumentFeatures> extract_corpus(const Corpus& corpus, std::span<const std::size_t> docs,
                                             const FeatureConfig& config, const FeatureResources& resources) {
  check_resources(config, resources);
  std::vector<DocumentFeatures> out(docs.size());
  std::vector<std::exception_ptr> errors(docs.size());
  const auto n = static_cast<std::int64_t>(docs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[i] = extract_document(corpus.documents.at(docs[i]), config, resources);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

namespace reference {
std::vector<DocumentFeatures> extract_corpus(const Corpus& corpus, std::span<const std::size_t> docs,
                                             const FeatureConfig& config, const FeatureResources& resources) {
  std::vector<DocumentFeatures> out;
  out.reserve(docs.size());
  for (std::size_t d : docs) out.push_back(extract_document(corpus.documents.at(d), config, resources));
  return out;
}
}  // namespace reference

}  // namespace argmine
