#include <fstream>
#include <sstream>

#include "json.hpp"

#include "argmine/error.hpp"
#include "argmine/features.hpp"

namespace argmine {
namespace {

using nlohmann::json;

DocumentLayers read_layers(const json& j) {
  DocumentLayers l;
  if (j.contains("pos")) l.pos = j["pos"].get<std::vector<std::string>>();
  if (j.contains("sentiment")) {
    std::vector<std::array<double, 5>> s;
    for (const auto& row : j["sentiment"]) {
      if (!row.is_array() || row.size() != 5) throw ParseError("sentiment rows must hold 5 numbers");
      std::array<double, 5> v{};
      for (std::size_t k = 0; k < 5; ++k) v[k] = row[k].get<double>();
      s.push_back(v);
    }
    l.sentiment = std::move(s);
  }
  if (j.contains("syntax")) {
    const auto& syn = j["syntax"];
    if (syn.contains("depth")) l.depth = syn["depth"].get<std::vector<int>>();
    if (syn.contains("productions")) l.productions = syn["productions"].get<std::vector<std::vector<std::string>>>();
    if (syn.contains("subclauses")) l.subclauses = syn["subclauses"].get<std::vector<int>>();
  }
  if (j.contains("srl")) l.srl = j["srl"].get<std::vector<std::vector<std::string>>>();
  if (j.contains("coref")) {
    std::vector<CorefInfo> c;
    for (const auto& e : j["coref"]) {
      CorefInfo info;
      info.in_chain = e.value("in_chain", false);
      if (e.contains("transitions")) info.transitions = e["transitions"].get<std::vector<std::string>>();
      if (e.contains("prev_distance") && !e["prev_distance"].is_null()) info.prev_distance = e["prev_distance"].get<int>();
      if (e.contains("next_distance") && !e["next_distance"].is_null()) info.next_distance = e["next_distance"].get<int>();
      info.links = e.value("links", 0);
      c.push_back(std::move(info));
    }
    l.coref = std::move(c);
  }
  if (j.contains("discourse")) {
    std::vector<std::vector<DiscourseRelation>> d;
    for (const auto& sent : j["discourse"]) {
      std::vector<DiscourseRelation> rels;
      for (const auto& r : sent) {
        DiscourseRelation rel;
        rel.type = r.value("type", "");
        rel.connective = r.value("connective", "");
        rel.attribution = r.value("attribution", false);
        rels.push_back(std::move(rel));
      }
      d.push_back(std::move(rels));
    }
    l.discourse = std::move(d);
  }
  return l;
}

}  // namespace

LayerStore parse_layers(std::string_view json_text) {
  LayerStore store;
  try {
    const auto root = json::parse(json_text);
    if (!root.is_object()) throw ParseError("layer file: top level must be an object keyed by doc_id");
    for (auto it = root.begin(); it != root.end(); ++it) store.emplace(it.key(), read_layers(it.value()));
  } catch (const json::exception& e) {
    throw ParseError(std::string("layer file: ") + e.what());
  }
  return store;
}

LayerStore load_layers(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open layer file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_layers(buf.str());
}

void check_layers(const Document& doc, const DocumentLayers& l) {
  const auto fail = [&](const std::string& what, std::size_t got, std::size_t want) {
    throw ValidationError("layers for " + doc.id + ": " + what + " has " + std::to_string(got) +
                          " entries, document has " + std::to_string(want));
  };
  const std::size_t ns = doc.sentences.size();
  if (l.pos && l.pos->size() != doc.tokens.size()) fail("pos", l.pos->size(), doc.tokens.size());
  if (l.sentiment && l.sentiment->size() != ns) fail("sentiment", l.sentiment->size(), ns);
  if (l.depth && l.depth->size() != ns) fail("syntax.depth", l.depth->size(), ns);
  if (l.productions && l.productions->size() != ns) fail("syntax.productions", l.productions->size(), ns);
  if (l.subclauses && l.subclauses->size() != ns) fail("syntax.subclauses", l.subclauses->size(), ns);
  if (l.srl && l.srl->size() != ns) fail("srl", l.srl->size(), ns);
  if (l.coref && l.coref->size() != ns) fail("coref", l.coref->size(), ns);
  if (l.discourse && l.discourse->size() != ns) fail("discourse", l.discourse->size(), ns);
}

}  // namespace argmine
