#include "argmine/error.hpp"
#include "argmine/features.hpp"
#include "argmine/utf8.hpp"

namespace argmine {

std::vector<std::string> ngrams(std::span<const std::string> tokens, int max_n) {
  std::vector<std::string> out;
  for (int n = 1; n <= max_n; ++n) {
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
      std::string g = tokens[i];
      for (int k = 1; k < n; ++k) {
        g += ' ';
        g += tokens[i + static_cast<std::size_t>(k)];
      }
      out.push_back(std::move(g));
    }
  }
  return out;
}

Vocabulary::Vocabulary(std::map<std::string, std::size_t> counts, std::size_t min_count)
    : min_count_(min_count) {
  for (auto& [g, c] : counts) {
    if (c >= min_count) counts_.emplace(g, c);
  }
}

Vocabulary Vocabulary::open() {
  Vocabulary v;
  v.open_ = true;
  return v;
}

std::vector<std::string> lowered_tokens(const Document& doc, std::size_t sentence) {
  std::vector<std::string> out;
  for (auto tok : doc.sentence_tokens(sentence)) out.push_back(utf8::to_lower(tok));
  return out;
}

Vocabulary build_vocabulary(const Corpus& corpus, std::span<const std::size_t> train_docs,
                            std::size_t min_count) {
  std::map<std::string, std::size_t> counts;
  for (std::size_t d : train_docs) {
    const auto& doc = corpus.documents.at(d);
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      const auto toks = lowered_tokens(doc, s);
      for (auto& g : ngrams(toks)) ++counts[g];
    }
  }
  return Vocabulary(std::move(counts), min_count);
}

}  // namespace argmine
