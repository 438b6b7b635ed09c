#include "argmine/report.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "argmine/error.hpp"

namespace argmine {
namespace {

using json = nlohmann::json;

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json confusion_json(const ConfusionMatrix& m) {
  json rows = json::array();
  for (const auto& r : m.counts()) rows.push_back(json(std::vector<std::uint64_t>(r.begin(), r.end())));
  return rows;
}

json normalized_json(const ConfusionMatrix& m) {
  json rows = json::array();
  for (const auto& r : m.counts()) {
    std::uint64_t total = 0;
    for (auto c : r) total += c;
    if (total == 0) {
      rows.push_back(nullptr);
      continue;
    }
    json row = json::array();
    for (auto c : r) row.push_back(static_cast<double>(c) / static_cast<double>(total));
    rows.push_back(row);
  }
  return rows;
}

json labels_json() {
  json a = json::array();
  for (std::size_t y = 0; y < kNumBioLabels; ++y) a.push_back(std::string(to_string(bio_from_index(y))));
  return a;
}

json report_to_json(const EvalReport& r) {
  json j;
  j["label"] = r.label;
  j["tokens"] = r.scores.tokens;
  j["macro_f1"] = r.scores.macro_f1;
  j["accuracy"] = r.scores.accuracy;
  json per = json::object();
  for (std::size_t y = 0; y < kNumBioLabels; ++y) {
    const auto& c = r.scores.per_class[y];
    per[std::string(to_string(bio_from_index(y)))] = {{"precision", c.precision}, {"recall", c.recall}, {"f1", c.f1}};
  }
  j["per_class"] = std::move(per);
  j["label_order"] = labels_json();
  j["confusion"] = confusion_json(r.confusion);
  j["confusion_normalized"] = normalized_json(r.confusion);
  j["alpha_u"] = opt(r.alpha_u);
  j["boundary_similarity"] = opt(r.boundary_similarity);
  json runs = json::array();
  for (const auto& run : r.runs) {
    runs.push_back({{"name", run.name},
                    {"seed", run.seed},
                    {"train_ids", run.train_ids},
                    {"test_ids", run.test_ids},
                    {"resource_fit_ids", run.resource_fit_ids},
                    {"confusion", confusion_json(run.confusion)}});
  }
  j["runs"] = std::move(runs);
  return j;
}

json result_to_json(const ScenarioResult& r) {
  json j;
  j["scenario"] = r.scenario;
  j["learner"] = r.learner;
  j["feature_config"] = {{"sets", r.config.sets.to_string()},
                         {"window", r.config.window},
                         {"min_count", r.config.min_count}};
  j["folds"] = r.options.folds;
  j["seed"] = r.options.seed;
  j["boundary_window"] = r.options.boundary_window;
  j["alpha_permutations"] = r.options.alpha_permutations;
  j["aggregated"] = report_to_json(r.aggregated);
  json parts = json::array();
  for (const auto& p : r.parts) parts.push_back(report_to_json(p));
  j["parts"] = std::move(parts);
  j["degraded_features"] = std::vector<std::string>(r.degraded.begin(), r.degraded.end());
  j["notices"] = r.notices;
  return j;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "-"; }

std::string html_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string md_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|' || c == '[' || c == ']' || c == '*' || c == '_' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

// Tabular view shared by both text formats.
struct Table {
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::vector<Table> metric_tables(const ReportInput& in) {
  std::vector<Table> tables;
  std::vector<std::string> header = {"features", "part", "macro-F1", "accuracy"};
  for (std::size_t y = 0; y < kNumBioLabels; ++y) header.emplace_back(to_string(bio_from_index(y)));
  std::vector<std::string> order;
  for (const auto& r : in.results) {
    if (std::find(order.begin(), order.end(), r.scenario) == order.end()) order.push_back(r.scenario);
  }
  for (const auto& scenario : order) {
    Table t;
    t.title = "Scenario: " + scenario;
    t.header = header;
    for (const auto& r : in.results) {
      if (r.scenario != scenario) continue;
      auto add = [&](const EvalReport& e) {
        std::vector<std::string> row = {r.config.sets.to_string() + " (" + r.learner + ")", e.label,
                                        fmt(e.scores.macro_f1), fmt(e.scores.accuracy)};
        for (const auto& c : e.scores.per_class) row.push_back(fmt(c.f1));
        t.rows.push_back(std::move(row));
      };
      for (const auto& p : r.parts) add(p);
      add(r.aggregated);
    }
    tables.push_back(std::move(t));
  }
  if (!in.comparison.empty()) {
    Table t;
    t.title = "System comparison";
    t.header = {"system", "macro-F1", "alpha_U", "boundary similarity"};
    for (const auto& c : in.comparison) {
      t.rows.push_back({c.system, fmt(c.macro_f1), fmt(c.alpha_u), fmt(c.boundary_similarity)});
    }
    tables.push_back(std::move(t));
  }
  return tables;
}

struct Piece {
  std::string text;
  std::optional<ComponentType> type;
};

// Splits each sentence of a document into plain and component pieces.
std::vector<std::vector<Piece>> sentence_pieces(const Document& doc, std::span<const BioLabel> labels) {
  std::vector<std::vector<Piece>> out;
  for (const auto& s : doc.sentences) {
    std::vector<Piece> pieces;
    for (std::size_t t = s.first_token; t <= s.last_token; ++t) {
      const auto type = component_of(labels[t]);
      const bool join = !pieces.empty() && pieces.back().type == type && !is_begin(labels[t]);
      if (!join) pieces.push_back({"", type});
      auto& p = pieces.back();
      if (!p.text.empty()) {
        p.text += doc.text.substr(doc.tokens[t - 1].byte_end, doc.tokens[t].byte_begin - doc.tokens[t - 1].byte_end);
      }
      p.text += std::string(doc.token_text(t));
    }
    out.push_back(std::move(pieces));
  }
  return out;
}

std::string md_pieces(const std::vector<Piece>& pieces) {
  std::string out;
  for (const auto& p : pieces) {
    if (!out.empty()) out += ' ';
    out += p.type ? "**[" + std::string(to_string(*p.type)) + "]** " + md_escape(p.text) + " **[/]**" : md_escape(p.text);
  }
  return out;
}

std::string html_pieces(const std::vector<Piece>& pieces) {
  std::string out;
  for (const auto& p : pieces) {
    if (!out.empty()) out += ' ';
    if (p.type) {
      const std::string t(to_string(*p.type));
      out += "<span class=\"" + t + "\" title=\"" + t + "\">" + html_escape(p.text) + "</span>";
    } else {
      out += html_escape(p.text);
    }
  }
  return out;
}

std::string render_markdown(const ReportInput& in) {
  std::ostringstream o;
  o << "# Argument component identification report\n\n";
  for (const auto& t : metric_tables(in)) {
    o << "## " << t.title << "\n\n|";
    for (const auto& h : t.header) o << ' ' << md_escape(h) << " |";
    o << "\n|";
    for (std::size_t i = 0; i < t.header.size(); ++i) o << "---|";
    o << '\n';
    for (const auto& r : t.rows) {
      o << '|';
      for (const auto& c : r) o << ' ' << md_escape(c) << " |";
      o << '\n';
    }
    o << '\n';
  }
  if (in.corpus && !in.predictions.empty()) {
    o << "## Documents\n\n";
    for (const auto& p : in.predictions) {
      const Document* doc = in.corpus->find(p.doc_id);
      if (!doc) continue;
      o << "### " << md_escape(doc->id) << "\n\n| sentence | gold | predicted |\n|---|---|---|\n";
      const auto pred = sentence_pieces(*doc, p.predicted);
      const auto gold = p.gold.empty() ? std::vector<std::vector<Piece>>(pred.size()) : sentence_pieces(*doc, p.gold);
      for (std::size_t s = 0; s < pred.size(); ++s) {
        o << "| " << s << " | " << md_pieces(gold[s]) << " | " << md_pieces(pred[s]) << " |\n";
      }
      o << '\n';
    }
  }
  return o.str();
}

std::string render_html(const ReportInput& in) {
  std::ostringstream o;
  o << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>Argument component identification report</title>\n"
       "<style>\n"
       "table{border-collapse:collapse;margin-bottom:1em}td,th{border:1px solid #999;padding:2px 6px;vertical-align:top}\n"
       ".claim{background:#f8c9c9}.premise{background:#c9e4f8}.backing{background:#d4f8c9}\n"
       ".rebuttal{background:#f8ecc9}.refutation{background:#e4c9f8}.appeal_to_emotion{background:#eee}\n"
       "</style></head><body>\n<h1>Argument component identification report</h1>\n";
  for (const auto& t : metric_tables(in)) {
    o << "<h2>" << html_escape(t.title) << "</h2>\n<table><tr>";
    for (const auto& h : t.header) o << "<th>" << html_escape(h) << "</th>";
    o << "</tr>\n";
    for (const auto& r : t.rows) {
      o << "<tr>";
      for (const auto& c : r) o << "<td>" << html_escape(c) << "</td>";
      o << "</tr>\n";
    }
    o << "</table>\n";
  }
  if (in.corpus && !in.predictions.empty()) {
    o << "<h2>Documents</h2>\n";
    for (const auto& p : in.predictions) {
      const Document* doc = in.corpus->find(p.doc_id);
      if (!doc) continue;
      o << "<h3>" << html_escape(doc->id) << "</h3>\n<table><tr><th>#</th><th>gold</th><th>predicted</th></tr>\n";
      const auto pred = sentence_pieces(*doc, p.predicted);
      const auto gold = p.gold.empty() ? std::vector<std::vector<Piece>>(pred.size()) : sentence_pieces(*doc, p.gold);
      for (std::size_t s = 0; s < pred.size(); ++s) {
        o << "<tr><td>" << s << "</td><td>" << html_pieces(gold[s]) << "</td><td>" << html_pieces(pred[s])
          << "</td></tr>\n";
      }
      o << "</table>\n";
    }
  }
  o << "</body></html>\n";
  return o.str();
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view s) {
  if (s == "json") return ReportFormat::kJson;
  if (s == "md") return ReportFormat::kMarkdown;
  if (s == "html") return ReportFormat::kHtml;
  return std::nullopt;
}

std::string eval_report_json(const EvalReport& report) { return report_to_json(report).dump(1, '\t') + "\n"; }

std::string results_json(const std::vector<ScenarioResult>& results) {
  json a = json::array();
  for (const auto& r : results) a.push_back(result_to_json(r));
  return json{{"results", a}}.dump(1, '\t') + "\n";
}

ComparisonRow comparison_row(const std::string& system, const EvalReport& report) {
  return {system, report.scores.macro_f1, report.alpha_u, report.boundary_similarity};
}

std::string render_report(const ReportInput& input, ReportFormat format) {
  switch (format) {
    case ReportFormat::kMarkdown:
      return render_markdown(input);
    case ReportFormat::kHtml:
      return render_html(input);
    case ReportFormat::kJson: {
      json a = json::array();
      for (const auto& r : input.results) a.push_back(result_to_json(r));
      json cmp = json::array();
      for (const auto& c : input.comparison) {
        cmp.push_back({{"system", c.system},
                       {"macro_f1", opt(c.macro_f1)},
                       {"alpha_u", opt(c.alpha_u)},
                       {"boundary_similarity", opt(c.boundary_similarity)}});
      }
      return json{{"results", a}, {"comparison", cmp}}.dump(1, '\t') + "\n";
    }
  }
  throw ConfigError("unknown report format");
}

}  // namespace argmine
