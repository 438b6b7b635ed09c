#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "argmine/corpus.hpp"
#include "argmine/labels.hpp"
#include "argmine/metrics.hpp"

namespace argmine {

struct SentenceLabeling {
  std::string doc_id;
  std::vector<BioLabel> labels;  // one per sentence

  bool operator==(const SentenceLabeling&) const = default;
};

// Projects the logos spans of `annotation` onto whole sentences: the
// component with most tokens in a sentence wins (earliest start on ties),
// and the label is *-B iff that component starts in the sentence.
SentenceLabeling sentence_approximate(const Document& doc, const AnnotationSet& annotation);

// Spreads sentence labels back over tokens; a *-B sentence yields *-B on its
// first token and *-I on the rest.
std::vector<BioLabel> expand_to_tokens(const Document& doc, const SentenceLabeling& labeling);

std::vector<BioLabel> tokens_from_annotation(const Document& doc, const AnnotationSet& annotation);

struct OracleResult {
  TokenEvaluation evaluation;
  std::size_t documents = 0;
};

// Scores the sentence-level approximation of the gold sets against the
// token-level gold sets, over one summed confusion matrix.
OracleResult oracle_eval(const Corpus& corpus);

// Token-label dump: doc_id, token_index, gold_label, predicted_label.
struct TokenPrediction {
  std::string doc_id;
  std::vector<BioLabel> gold;  // may be empty when the document has no gold
  std::vector<BioLabel> predicted;
};

void write_token_dump(std::ostream& out, const std::vector<TokenPrediction>& predictions);
void write_token_dump(const std::filesystem::path& path, const std::vector<TokenPrediction>& predictions);
std::vector<TokenPrediction> read_token_dump(const std::filesystem::path& path);
std::vector<TokenPrediction> read_token_dump(std::istream& in);

}  // namespace argmine
