#include <cmath>

#include "argmine/corpus.hpp"
#include "argmine/encoding.hpp"

namespace argmine {
namespace {

Summary summarize(const std::vector<double>& xs) {
  Summary s;
  s.count = xs.size();
  for (double x : xs) s.total += x;
  if (xs.empty()) return s;
  s.mean = s.total / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

}  // namespace

CorpusStatistics corpus_statistics(const Corpus& corpus) {
  CorpusStatistics st;
  for (Topic t : kAllTopics) {
    for (Register r : kAllRegisters) st.documents[t][r] = 0;
  }
  std::vector<double> tokens, sentences;
  bool all_gold = true;
  std::map<BioLabel, std::size_t> classes;
  for (std::size_t k = 0; k < kNumBioLabels; ++k) classes[bio_from_index(k)] = 0;

  for (const auto& doc : corpus.documents) {
    ++st.documents[doc.topic][doc.register_kind];
    ++st.document_count;
    tokens.push_back(static_cast<double>(doc.tokens.size()));
    sentences.push_back(static_cast<double>(doc.sentences.size()));
    st.token_count += doc.tokens.size();
    st.sentence_count += doc.sentences.size();
    if (!doc.gold) {
      all_gold = false;
      continue;
    }
    for (BioLabel l : sentence_approximate(doc, *doc.gold).labels) ++classes[l];
  }
  st.tokens_per_document = summarize(tokens);
  st.sentences_per_document = summarize(sentences);
  if (all_gold) {
    st.class_distribution = std::move(classes);
  } else {
    st.notices.push_back("class distribution omitted: some documents have no gold annotation");
  }
  return st;
}

}  // namespace argmine
