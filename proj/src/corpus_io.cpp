#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "argmine/corpus.hpp"
#include "argmine/error.hpp"

namespace argmine {
namespace {

using nlohmann::json;

// Schema reader that reports violations by document id and field path.
class Reader {
 public:
  explicit Reader(std::string doc_id) : doc_id_(std::move(doc_id)) {}

  [[noreturn]] void fail(const std::string& field, const std::string& msg) const {
    throw ValidationError("document " + (doc_id_.empty() ? "<unknown>" : doc_id_) + ": " + field +
                          ": " + msg);
  }

  void expect_keys(const json& obj, const std::string& field, std::set<std::string> required,
                   std::set<std::string> optional) const {
    if (!obj.is_object()) fail(field, "expected an object");
    for (const auto& key : required) {
      if (!obj.contains(key)) fail(field + "." + key, "missing required field");
    }
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!required.count(it.key()) && !optional.count(it.key())) {
        fail(field + "." + it.key(), "unknown field");
      }
    }
  }

  std::string string_at(const json& obj, const std::string& key, const std::string& field) const {
    const auto& v = obj.at(key);
    if (!v.is_string()) fail(field + "." + key, "expected a string");
    return v.get<std::string>();
  }

  std::size_t offset_at(const json& obj, const std::string& key, const std::string& field) const {
    const auto& v = obj.at(key);
    if (!v.is_number_unsigned()) fail(field + "." + key, "expected a non-negative integer");
    return v.get<std::size_t>();
  }

  bool bool_at(const json& obj, const std::string& key, const std::string& field) const {
    const auto& v = obj.at(key);
    if (!v.is_boolean()) fail(field + "." + key, "expected a boolean");
    return v.get<bool>();
  }

  const json& array_at(const json& obj, const std::string& key, const std::string& field) const {
    const auto& v = obj.at(key);
    if (!v.is_array()) fail(field + "." + key, "expected an array");
    return v;
  }

  template <typename Range>
  std::vector<Range> ranges(const json& obj, const std::string& key) const {
    std::vector<Range> out;
    const auto& arr = array_at(obj, key, "");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string f = key + "[" + std::to_string(i) + "]";
      expect_keys(arr[i], f, {"start", "end"}, {});
      Range r;
      r.start = offset_at(arr[i], "start", f);
      r.end = offset_at(arr[i], "end", f);
      out.push_back(r);
    }
    return out;
  }

  AnnotationSet annotation_set(const json& obj, const std::string& field) const {
    expect_keys(obj, field, {"annotator", "spans"}, {"implicit_claim_stance"});
    AnnotationSet set;
    set.annotator = string_at(obj, "annotator", field);
    if (obj.contains("implicit_claim_stance")) {
      set.implicit_claim_stance = string_at(obj, "implicit_claim_stance", field);
    }
    const auto& spans = array_at(obj, "spans", field);
    for (std::size_t i = 0; i < spans.size(); ++i) {
      const std::string f = field + ".spans[" + std::to_string(i) + "]";
      const auto& s = spans[i];
      expect_keys(s, f, {"type", "dimension", "first_token", "last_token"}, {"summary", "implicit"});
      ComponentSpan span;
      const auto type = parse_component_type(string_at(s, "type", f));
      if (!type) fail(f + ".type", "unknown component type");
      const auto dim = parse_dimension(string_at(s, "dimension", f));
      if (!dim) fail(f + ".dimension", "unknown dimension");
      span.type = *type;
      span.dimension = *dim;
      span.first_token = offset_at(s, "first_token", f);
      span.last_token = offset_at(s, "last_token", f);
      if (s.contains("summary")) span.summary = string_at(s, "summary", f);
      if (s.contains("implicit")) span.implicit = bool_at(s, "implicit", f);
      set.spans.push_back(std::move(span));
    }
    return set;
  }

 private:
  std::string doc_id_;
};

Document read_document(const json& obj, std::size_t position) {
  std::string id;
  if (obj.is_object() && obj.contains("id") && obj["id"].is_string()) id = obj["id"].get<std::string>();
  Reader r(id.empty() ? "#" + std::to_string(position) : id);
  r.expect_keys(obj, "document",
                {"id", "topic", "register", "text", "paragraphs", "sentences", "tokens",
                 "annotations"},
                {"gold", "persuasive"});
  Document doc;
  doc.id = r.string_at(obj, "id", "document");
  const auto topic = parse_topic(r.string_at(obj, "topic", "document"));
  if (!topic) r.fail("topic", "unknown topic '" + obj["topic"].get<std::string>() + "'");
  const auto reg = parse_register(r.string_at(obj, "register", "document"));
  if (!reg) r.fail("register", "unknown register '" + obj["register"].get<std::string>() + "'");
  doc.topic = *topic;
  doc.register_kind = *reg;
  doc.text = r.string_at(obj, "text", "document");
  doc.paragraphs = r.ranges<Paragraph>(obj, "paragraphs");
  doc.sentences = r.ranges<Sentence>(obj, "sentences");
  doc.tokens = r.ranges<Token>(obj, "tokens");
  const auto& anns = r.array_at(obj, "annotations", "document");
  for (std::size_t i = 0; i < anns.size(); ++i) {
    doc.annotations.push_back(r.annotation_set(anns[i], "annotations[" + std::to_string(i) + "]"));
  }
  if (obj.contains("gold")) doc.gold = r.annotation_set(obj["gold"], "gold");
  if (obj.contains("persuasive")) {
    const auto& p = obj["persuasive"];
    r.expect_keys(p, "persuasive", {"label"}, {"votes"});
    PersuasiveLabel label;
    label.label = r.bool_at(p, "label", "persuasive");
    if (p.contains("votes")) {
      if (!p["votes"].is_object()) r.fail("persuasive.votes", "expected an object");
      for (auto it = p["votes"].begin(); it != p["votes"].end(); ++it) {
        if (!it.value().is_boolean()) r.fail("persuasive.votes." + it.key(), "expected a boolean");
        label.votes[it.key()] = it.value().get<bool>();
      }
    }
    doc.persuasive = std::move(label);
  }

  const auto findings = validate_document(doc);
  if (error_count(findings) > 0) {
    std::string msg = "document " + doc.id + ": ";
    bool first = true;
    for (const auto& f : findings) {
      if (f.severity != Severity::kError) continue;
      msg += (first ? "" : "; ") + f.field + ": " + f.message;
      first = false;
    }
    throw ValidationError(msg);
  }
  index_document(doc);
  return doc;
}

json write_set(const AnnotationSet& set) {
  json spans = json::array();
  for (const auto& s : set.spans) {
    json js = {{"type", to_string(s.type)},
               {"dimension", to_string(s.dimension)},
               {"first_token", s.first_token},
               {"last_token", s.last_token}};
    if (s.summary) js["summary"] = *s.summary;
    if (s.implicit) js["implicit"] = true;
    spans.push_back(std::move(js));
  }
  json out = {{"annotator", set.annotator}, {"spans", std::move(spans)}};
  if (set.implicit_claim_stance) out["implicit_claim_stance"] = *set.implicit_claim_stance;
  return out;
}

template <typename Range>
json write_ranges(const std::vector<Range>& items) {
  json arr = json::array();
  for (const auto& r : items) arr.push_back({{"start", r.start}, {"end", r.end}});
  return arr;
}

json write_document(const Document& doc) {
  json anns = json::array();
  for (const auto& a : doc.annotations) anns.push_back(write_set(a));
  json out = {{"id", doc.id},
              {"topic", to_string(doc.topic)},
              {"register", to_string(doc.register_kind)},
              {"text", doc.text},
              {"paragraphs", write_ranges(doc.paragraphs)},
              {"sentences", write_ranges(doc.sentences)},
              {"tokens", write_ranges(doc.tokens)},
              {"annotations", std::move(anns)}};
  if (doc.gold) out["gold"] = write_set(*doc.gold);
  if (doc.persuasive) {
    json p = {{"label", doc.persuasive->label}};
    if (!doc.persuasive->votes.empty()) p["votes"] = doc.persuasive->votes;
    out["persuasive"] = std::move(p);
  }
  return out;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

Corpus parse_corpus_string(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(json_text, e.byte);
    throw ParseError(std::string("malformed corpus JSON: ") + e.what(), line, col);
  }
  Reader r("");
  if (!root.is_object()) throw ValidationError("corpus: top level must be an object");
  r.expect_keys(root, "corpus", {"name", "version", "documents"}, {});
  Corpus corpus;
  corpus.name = r.string_at(root, "name", "corpus");
  corpus.version = r.string_at(root, "version", "corpus");
  const auto& docs = r.array_at(root, "documents", "corpus");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    corpus.documents.push_back(read_document(docs[i], i));
    if (!seen.insert(corpus.documents.back().id).second) {
      throw ValidationError("document " + corpus.documents.back().id + ": id: duplicate doc_id");
    }
  }
  return corpus;
}

Corpus parse_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corpus_string(buf.str());
}

std::string serialize_corpus_string(const Corpus& corpus) {
  json docs = json::array();
  for (const auto& d : corpus.documents) docs.push_back(write_document(d));
  json root = {{"name", corpus.name}, {"version", corpus.version}, {"documents", std::move(docs)}};
  return root.dump(1, '\t', false, json::error_handler_t::strict) + "\n";
}

void serialize_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  const std::string text = serialize_corpus_string(corpus);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write corpus file " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace argmine
