#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "argmine/labels.hpp"

namespace argmine {

// Offsets are Unicode scalar-value positions into Document::text; `end` is
// exclusive. The byte_* fields are derived by index_document() and are not
// part of the file format.
struct Token {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t index = 0;
  std::size_t byte_begin = 0;
  std::size_t byte_end = 0;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::size_t start = 0;
  std::size_t end = 0;
  // Derived: inclusive token range and owning paragraph.
  std::size_t first_token = 0;
  std::size_t last_token = 0;
  std::size_t paragraph = 0;

  std::size_t token_count() const { return last_token - first_token + 1; }
  bool contains_token(std::size_t t) const { return t >= first_token && t <= last_token; }
  bool operator==(const Sentence&) const = default;
};

struct Paragraph {
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const Paragraph&) const = default;
};

struct ComponentSpan {
  ComponentType type = ComponentType::kClaim;
  Dimension dimension = Dimension::kLogos;
  std::size_t first_token = 0;
  std::size_t last_token = 0;  // inclusive
  std::optional<std::string> summary;
  bool implicit = false;

  std::size_t length() const { return last_token - first_token + 1; }
  bool operator==(const ComponentSpan&) const = default;
};

struct AnnotationSet {
  std::string annotator;
  std::vector<ComponentSpan> spans;
  std::optional<std::string> implicit_claim_stance;

  // Spans of one dimension, sorted by first token.
  std::vector<ComponentSpan> spans_of(Dimension d) const;
  bool operator==(const AnnotationSet&) const = default;
};

struct PersuasiveLabel {
  bool label = false;
  std::map<std::string, bool> votes;

  bool operator==(const PersuasiveLabel&) const = default;
};

struct Document {
  std::string id;
  Topic topic = Topic::kHomeschooling;
  Register register_kind = Register::kComment;
  std::string text;
  std::vector<Paragraph> paragraphs;
  std::vector<Sentence> sentences;
  std::vector<Token> tokens;
  std::vector<AnnotationSet> annotations;
  std::optional<AnnotationSet> gold;
  std::optional<PersuasiveLabel> persuasive;

  std::string_view token_text(std::size_t i) const;
  // Tokens [first, last] of a sentence as views into text.
  std::vector<std::string_view> sentence_tokens(std::size_t sentence) const;
  const AnnotationSet* annotation_by(std::string_view annotator) const;

  bool operator==(const Document&) const = default;
};

struct Corpus {
  std::string name;
  std::string version;
  std::vector<Document> documents;

  const Document* find(std::string_view doc_id) const;
  bool operator==(const Corpus&) const = default;
};

// Fills the derived fields (token index/bytes, sentence token ranges and
// paragraph membership). Throws ValidationError naming doc and field when
// the offsets are not consistent with the text.
void index_document(Document& doc);

enum class Severity { kError, kWarning };

struct Finding {
  Severity severity = Severity::kError;
  std::string doc_id;
  std::string field;
  std::string message;
};

// Checks every data-model invariant that does not already prevent
// index_document() from succeeding. Empty result iff the document is valid.
std::vector<Finding> validate_document(const Document& doc);

std::size_t error_count(const std::vector<Finding>& findings);

Corpus parse_corpus(const std::filesystem::path& path);
Corpus parse_corpus_string(std::string_view json_text);
std::string serialize_corpus_string(const Corpus& corpus);
void serialize_corpus(const Corpus& corpus, const std::filesystem::path& path);

// Gold construction by token-level strict majority.
struct UnresolvedRegion {
  Dimension dimension = Dimension::kLogos;
  std::size_t first_token = 0;
  std::size_t last_token = 0;
};

struct GoldResult {
  AnnotationSet gold;
  std::vector<UnresolvedRegion> unresolved;
};

GoldResult build_gold_majority(const Document& doc);

// Descriptive statistics of a corpus.
struct Summary {
  std::size_t count = 0;
  double total = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1)
};

struct CorpusStatistics {
  // documents per topic x register
  std::map<Topic, std::map<Register, std::size_t>> documents;
  std::size_t document_count = 0;
  Summary tokens_per_document;
  Summary sentences_per_document;
  std::size_t token_count = 0;
  std::size_t sentence_count = 0;
  // Sentence-level BIO class distribution of the gold sets; absent when
  // some document lacks gold.
  std::optional<std::map<BioLabel, std::size_t>> class_distribution;
  std::vector<std::string> notices;
};

CorpusStatistics corpus_statistics(const Corpus& corpus);

}  // namespace argmine
