#include <algorithm>

#include "argmine/corpus.hpp"
#include "argmine/error.hpp"
#include "argmine/utf8.hpp"

namespace argmine {

std::vector<ComponentSpan> AnnotationSet::spans_of(Dimension d) const {
  std::vector<ComponentSpan> out;
  for (const auto& s : spans) {
    if (s.dimension == d) out.push_back(s);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.first_token < b.first_token;
  });
  return out;
}

std::string_view Document::token_text(std::size_t i) const {
  const Token& t = tokens.at(i);
  return std::string_view(text).substr(t.byte_begin, t.byte_end - t.byte_begin);
}

std::vector<std::string_view> Document::sentence_tokens(std::size_t sentence) const {
  const Sentence& s = sentences.at(sentence);
  std::vector<std::string_view> out;
  out.reserve(s.token_count());
  for (std::size_t t = s.first_token; t <= s.last_token; ++t) out.push_back(token_text(t));
  return out;
}

const AnnotationSet* Document::annotation_by(std::string_view annotator) const {
  for (const auto& a : annotations) {
    if (a.annotator == annotator) return &a;
  }
  return nullptr;
}

const Document* Corpus::find(std::string_view doc_id) const {
  for (const auto& d : documents) {
    if (d.id == doc_id) return &d;
  }
  return nullptr;
}

namespace {

class FindingSink {
 public:
  explicit FindingSink(const Document& doc) : doc_(doc) {}

  void error(std::string field, std::string message) {
    out_.push_back({Severity::kError, doc_.id, std::move(field), std::move(message)});
  }
  void warning(std::string field, std::string message) {
    out_.push_back({Severity::kWarning, doc_.id, std::move(field), std::move(message)});
  }
  std::vector<Finding> take() { return std::move(out_); }
  bool has_errors() const { return error_count(out_) > 0; }

 private:
  const Document& doc_;
  std::vector<Finding> out_;
};

std::string at(std::string_view list, std::size_t i) {
  return std::string(list) + "[" + std::to_string(i) + "]";
}

template <typename Range>
void check_ordered_ranges(const std::vector<Range>& items, std::string_view name,
                          std::size_t text_len, FindingSink& sink) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& r = items[i];
    if (r.start >= r.end) sink.error(at(name, i), "start must be < end");
    if (r.end > text_len) sink.error(at(name, i), "end exceeds text length");
    if (i > 0 && r.start < items[i - 1].end) {
      sink.error(at(name, i), "overlaps or precedes the previous entry");
    }
  }
}

void check_annotation_set(const AnnotationSet& set, std::string_view field,
                          std::size_t n_tokens, FindingSink& sink) {
  for (std::size_t i = 0; i < set.spans.size(); ++i) {
    const auto& s = set.spans[i];
    const std::string f = std::string(field) + ".spans[" + std::to_string(i) + "]";
    if (s.first_token > s.last_token) sink.error(f, "first_token > last_token");
    if (s.last_token >= n_tokens) {
      sink.error(f, "last_token " + std::to_string(s.last_token) + " out of range (" +
                        std::to_string(n_tokens) + " tokens)");
    }
    if (dimension_of(s.type) != s.dimension) {
      sink.error(f, std::string("type ") + std::string(to_string(s.type)) +
                        " is not in dimension " + std::string(to_string(s.dimension)));
    }
    if (s.implicit && s.type != ComponentType::kClaim) {
      sink.error(f, "implicit flag is only valid for claims");
    }
  }
  for (Dimension d : {Dimension::kLogos, Dimension::kPathos}) {
    const auto spans = set.spans_of(d);
    for (std::size_t i = 1; i < spans.size(); ++i) {
      if (spans[i].first_token <= spans[i - 1].last_token) {
        sink.error(std::string(field) + ".spans",
                   std::string("overlapping ") + std::string(to_string(d)) + " spans at token " +
                       std::to_string(spans[i].first_token));
      }
    }
  }
  const auto has = [&](ComponentType t) {
    return std::any_of(set.spans.begin(), set.spans.end(),
                       [t](const auto& s) { return s.type == t; });
  };
  if (has(ComponentType::kRefutation) && !has(ComponentType::kRebuttal)) {
    sink.warning(std::string(field), "refutation without any rebuttal");
  }
}

}  // namespace

std::size_t error_count(const std::vector<Finding>& findings) {
  return static_cast<std::size_t>(std::count_if(
      findings.begin(), findings.end(), [](const Finding& f) { return f.severity == Severity::kError; }));
}

std::vector<Finding> validate_document(const Document& doc) {
  FindingSink sink(doc);
  if (doc.id.empty()) sink.error("id", "empty document id");

  std::size_t text_len = 0;
  try {
    text_len = utf8::length(doc.text);
  } catch (const ParseError& e) {
    sink.error("text", e.what());
    return sink.take();
  }

  check_ordered_ranges(doc.tokens, "tokens", text_len, sink);
  check_ordered_ranges(doc.sentences, "sentences", text_len, sink);
  check_ordered_ranges(doc.paragraphs, "paragraphs", text_len, sink);
  if (sink.has_errors()) return sink.take();

  // Sentences must partition the token list.
  std::size_t next_token = 0;
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const auto& sent = doc.sentences[s];
    std::size_t count = 0;
    while (next_token < doc.tokens.size() && doc.tokens[next_token].end <= sent.end &&
           doc.tokens[next_token].start >= sent.start) {
      ++next_token;
      ++count;
    }
    if (count == 0) sink.error(at("sentences", s), "sentence contains no token");
    if (next_token < doc.tokens.size() && doc.tokens[next_token].start < sent.end) {
      sink.error(at("tokens", next_token), "token crosses a sentence boundary");
      break;
    }
  }
  if (!sink.has_errors() && next_token != doc.tokens.size()) {
    sink.error(at("tokens", next_token), "token outside every sentence");
  }

  std::size_t p = 0;
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const auto& sent = doc.sentences[s];
    while (p < doc.paragraphs.size() && doc.paragraphs[p].end <= sent.start) ++p;
    if (p == doc.paragraphs.size() || doc.paragraphs[p].start > sent.start ||
        doc.paragraphs[p].end < sent.end) {
      sink.error(at("sentences", s), "sentence not within a single paragraph");
    }
  }

  const std::size_t n = doc.tokens.size();
  for (std::size_t i = 0; i < doc.annotations.size(); ++i) {
    check_annotation_set(doc.annotations[i], at("annotations", i), n, sink);
  }
  for (std::size_t i = 0; i < doc.annotations.size(); ++i) {
    for (std::size_t j = i + 1; j < doc.annotations.size(); ++j) {
      if (doc.annotations[i].annotator == doc.annotations[j].annotator) {
        sink.error(at("annotations", j), "duplicate annotator " + doc.annotations[j].annotator);
      }
    }
  }
  if (doc.gold) check_annotation_set(*doc.gold, "gold", n, sink);
  return sink.take();
}

void index_document(Document& doc) {
  const auto offsets = utf8::code_point_offsets(doc.text);
  const std::size_t text_len = offsets.size() - 1;
  auto fail = [&](const std::string& field, const std::string& msg) {
    throw ValidationError("document " + doc.id + ": " + field + ": " + msg);
  };
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    auto& t = doc.tokens[i];
    if (t.start >= t.end || t.end > text_len) fail(at("tokens", i), "offsets out of range");
    t.index = i;
    t.byte_begin = offsets[t.start];
    t.byte_end = offsets[t.end];
  }
  std::size_t next_token = 0;
  std::size_t p = 0;
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    auto& sent = doc.sentences[s];
    sent.first_token = next_token;
    while (next_token < doc.tokens.size() && doc.tokens[next_token].end <= sent.end) ++next_token;
    if (next_token == sent.first_token) fail(at("sentences", s), "sentence contains no token");
    sent.last_token = next_token - 1;
    while (p < doc.paragraphs.size() && doc.paragraphs[p].end <= sent.start) ++p;
    if (p == doc.paragraphs.size()) fail(at("sentences", s), "sentence outside every paragraph");
    sent.paragraph = p;
  }
  if (next_token != doc.tokens.size()) fail(at("tokens", next_token), "token outside every sentence");
}

}  // namespace argmine
