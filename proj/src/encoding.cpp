#include "argmine/encoding.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "argmine/error.hpp"

namespace argmine {

SentenceLabeling sentence_approximate(const Document& doc, const AnnotationSet& annotation) {
  const auto spans = annotation.spans_of(Dimension::kLogos);
  SentenceLabeling out;
  out.doc_id = doc.id;
  out.labels.assign(doc.sentences.size(), BioLabel::kO);
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const auto& sent = doc.sentences[s];
    const ComponentSpan* best = nullptr;
    std::size_t best_overlap = 0;
    // spans are sorted by first token, so strict > keeps the earliest on ties
    for (const auto& span : spans) {
      const std::size_t lo = std::max(span.first_token, sent.first_token);
      const std::size_t hi = std::min(span.last_token, sent.last_token);
      if (lo > hi) continue;
      const std::size_t overlap = hi - lo + 1;
      if (overlap > best_overlap) {
        best = &span;
        best_overlap = overlap;
      }
    }
    if (!best) continue;
    out.labels[s] = sent.contains_token(best->first_token) ? begin_label(best->type)
                                                            : inside_label(best->type);
  }
  return out;
}

std::vector<BioLabel> expand_to_tokens(const Document& doc, const SentenceLabeling& labeling) {
  if (labeling.labels.size() != doc.sentences.size()) {
    throw ConfigError("document " + doc.id + ": labeling has " +
                      std::to_string(labeling.labels.size()) + " labels for " +
                      std::to_string(doc.sentences.size()) + " sentences");
  }
  std::vector<BioLabel> out(doc.tokens.size(), BioLabel::kO);
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const auto& sent = doc.sentences[s];
    const BioLabel l = labeling.labels[s];
    for (std::size_t t = sent.first_token; t <= sent.last_token; ++t) out[t] = l;
    if (is_begin(l)) {
      const auto type = *component_of(l);
      for (std::size_t t = sent.first_token + 1; t <= sent.last_token; ++t) out[t] = inside_label(type);
    }
  }
  return out;
}

std::vector<BioLabel> tokens_from_annotation(const Document& doc, const AnnotationSet& annotation) {
  std::vector<BioLabel> out(doc.tokens.size(), BioLabel::kO);
  for (const auto& span : annotation.spans) {
    if (span.dimension != Dimension::kLogos) continue;
    for (std::size_t t = span.first_token; t <= span.last_token && t < out.size(); ++t) {
      out[t] = t == span.first_token ? begin_label(span.type) : inside_label(span.type);
    }
  }
  return out;
}

OracleResult oracle_eval(const Corpus& corpus) {
  OracleResult r;
  for (const auto& doc : corpus.documents) {
    if (!doc.gold) throw ConfigError("document " + doc.id + " has no gold annotation");
    const auto gold = tokens_from_annotation(doc, *doc.gold);
    const auto approx = expand_to_tokens(doc, sentence_approximate(doc, *doc.gold));
    r.evaluation.confusion.add(gold, approx);
    ++r.documents;
  }
  r.evaluation.scores = score(r.evaluation.confusion);
  return r;
}

void write_token_dump(std::ostream& out, const std::vector<TokenPrediction>& predictions) {
  out << "doc_id\ttoken_index\tgold_label\tpredicted_label\n";
  for (const auto& p : predictions) {
    for (std::size_t i = 0; i < p.predicted.size(); ++i) {
      out << p.doc_id << '\t' << i << '\t' << (p.gold.empty() ? "-" : to_string(p.gold[i])) << '\t'
          << to_string(p.predicted[i]) << '\n';
    }
  }
}

void write_token_dump(const std::filesystem::path& path, const std::vector<TokenPrediction>& predictions) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  write_token_dump(out, predictions);
}

std::vector<TokenPrediction> read_token_dump(std::istream& in) {
  std::vector<TokenPrediction> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("doc_id\t", 0) == 0) continue;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string doc_id, index, gold, pred;
    if (!std::getline(fields, doc_id, '\t') || !std::getline(fields, index, '\t') ||
        !std::getline(fields, gold, '\t') || !std::getline(fields, pred)) {
      throw ParseError("token dump: expected 4 tab-separated columns", line_no, 1);
    }
    if (out.empty() || out.back().doc_id != doc_id) out.push_back({doc_id, {}, {}});
    auto& cur = out.back();
    std::size_t idx = 0;
    try {
      idx = std::stoul(index);
    } catch (const std::exception&) {
      throw ParseError("token dump: bad token index '" + index + "'", line_no, 1);
    }
    if (idx != cur.predicted.size()) {
      throw ParseError("token dump: token indices must be consecutive per document", line_no, 1);
    }
    const auto p = parse_bio_label(pred);
    if (!p) throw ParseError("token dump: unknown label '" + pred + "'", line_no, 1);
    cur.predicted.push_back(*p);
    if (gold != "-") {
      const auto g = parse_bio_label(gold);
      if (!g) throw ParseError("token dump: unknown label '" + gold + "'", line_no, 1);
      if (cur.gold.size() != idx) throw ParseError("token dump: mixed gold/no-gold rows", line_no, 1);
      cur.gold.push_back(*g);
    }
  }
  return out;
}

std::vector<TokenPrediction> read_token_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_token_dump(in);
}

}  // namespace argmine
