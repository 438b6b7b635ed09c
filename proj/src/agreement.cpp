#include <algorithm>
#include <cmath>
#include <map>

#include "argmine/agreement.hpp"
#include "argmine/error.hpp"

namespace argmine {

double fleiss_kappa(const std::vector<std::vector<std::string>>& items) {
  if (items.empty()) throw ConfigError("Fleiss' kappa needs at least one item");
  const std::size_t n = items.front().size();
  if (n < 2) throw ConfigError("Fleiss' kappa needs at least 2 raters per item");
  std::map<std::string, double> totals;
  double p_bar = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].size() != n) {
      throw ConfigError("item " + std::to_string(i) + " has " + std::to_string(items[i].size()) +
                        " ratings, expected " + std::to_string(n));
    }
    std::map<std::string, double> counts;
    for (const auto& v : items[i]) counts[v] += 1.0;
    double agree = 0.0;
    for (const auto& [cat, c] : counts) {
      agree += c * (c - 1.0);
      totals[cat] += c;
    }
    p_bar += agree / (static_cast<double>(n) * static_cast<double>(n - 1));
  }
  const double N = static_cast<double>(items.size());
  p_bar /= N;
  double p_e = 0.0;
  for (const auto& [cat, c] : totals) {
    const double p = c / (N * static_cast<double>(n));
    p_e += p * p;
  }
  if (p_e >= 1.0) throw UndefinedMetric("Fleiss' kappa undefined: only one category used");
  return (p_bar - p_e) / (1.0 - p_e);
}

ProbConfusion prob_confusion_matrix(const std::vector<std::vector<std::vector<int>>>& token_labels,
                                    const std::vector<std::string>& labels) {
  const std::size_t k = labels.size();
  std::vector<std::vector<double>> counts(k, std::vector<double>(k, 0.0));
  for (const auto& doc : token_labels) {
    const std::size_t m = doc.size();
    if (m < 2) continue;
    const std::size_t n = doc.front().size();
    for (const auto& a : doc) {
      if (a.size() != n) throw ConfigError("annotators disagree on token count");
    }
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          if (i == j) continue;
          const int li = doc[i][t], lj = doc[j][t];
          if (li < 0 || lj < 0 || static_cast<std::size_t>(li) >= k || static_cast<std::size_t>(lj) >= k) {
            throw ConfigError("token label outside the label set");
          }
          counts[li][lj] += 1.0;
        }
      }
    }
  }
  ProbConfusion out;
  out.labels = labels;
  for (std::size_t r = 0; r < k; ++r) {
    double total = 0.0;
    for (double c : counts[r]) total += c;
    if (total == 0.0) {
      out.rows.emplace_back(std::nullopt);
      continue;
    }
    std::vector<double> row(k);
    for (std::size_t c = 0; c < k; ++c) row[c] = counts[r][c] / total;
    out.rows.emplace_back(std::move(row));
  }
  return out;
}

ProbConfusion prob_confusion_matrix(const Corpus& corpus, const std::vector<std::string>& annotators,
                                    std::span<const ComponentType> types) {
  std::vector<std::string> labels = {"none"};
  for (auto t : types) labels.emplace_back(to_string(t));
  const auto docs = collect_units(corpus, annotators, types);
  std::vector<std::vector<std::vector<int>>> token_labels;
  for (const auto& d : docs) {
    std::vector<std::vector<int>> per;
    for (const auto& units : d.annotators) {
      std::vector<int> lab(d.length, 0);
      for (const auto& u : units) {
        const auto pos = std::find(types.begin(), types.end(), static_cast<ComponentType>(u.category)) - types.begin();
        for (std::size_t t = u.first; t <= u.last; ++t) lab[t] = static_cast<int>(pos) + 1;
      }
      per.push_back(std::move(lab));
    }
    token_labels.push_back(std::move(per));
  }
  return prob_confusion_matrix(token_labels, labels);
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("pearson_r: series differ in length");
  if (x.size() < 3) throw ConfigError("pearson_r: needs at least 3 observations");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedMetric("pearson_r: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

double sentence_coverage(const Document& doc) {
  std::vector<bool> starts(doc.tokens.size(), false), ends(doc.tokens.size(), false);
  for (const auto& s : doc.sentences) {
    starts[s.first_token] = true;
    ends[s.last_token] = true;
  }
  std::size_t boundaries = 0, aligned = 0;
  for (const auto& set : doc.annotations) {
    for (const auto& span : set.spans) {
      if (span.dimension != Dimension::kLogos) continue;
      boundaries += 2;
      aligned += starts[span.first_token] ? 1 : 0;
      aligned += ends[span.last_token] ? 1 : 0;
    }
  }
  return boundaries ? static_cast<double>(aligned) / static_cast<double>(boundaries) : 1.0;
}

}  // namespace

std::vector<DocumentDiagnostics> document_diagnostics(const Corpus& corpus, const SubsetFilter& filter,
                                                      std::span<const ComponentType> types,
                                                      std::vector<std::string>* notices) {
  std::vector<DocumentDiagnostics> out;
  const auto cats = category_ids(types);
  for (const auto& doc : corpus.documents) {
    if (!filter.accepts(doc)) continue;
    if (doc.annotations.size() < 2 || doc.tokens.empty()) {
      if (notices) notices->push_back(doc.id + ": fewer than 2 annotation sets, skipped");
      continue;
    }
    std::vector<const AnnotationSet*> sets;
    for (const auto& a : doc.annotations) sets.push_back(&a);
    const auto du = units_from_sets(doc, sets, types);
    const std::size_t order[] = {0};
    DocumentDiagnostics d;
    d.doc_id = doc.id;
    try {
      d.alpha = alpha_u(concatenate(std::span(&du, 1), order), cats);
    } catch (const UndefinedMetric& e) {
      if (notices) notices->push_back(doc.id + ": " + e.what());
      continue;
    }
    const double tokens = static_cast<double>(doc.tokens.size());
    std::size_t paragraphs_used = 0;
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      if (s == 0 || doc.sentences[s].paragraph != doc.sentences[s - 1].paragraph) ++paragraphs_used;
    }
    d.measures[0] = sentence_coverage(doc);
    d.measures[1] = tokens;
    d.measures[2] = paragraphs_used ? tokens / static_cast<double>(paragraphs_used) : 0.0;
    d.measures[3] = doc.sentences.empty() ? 0.0 : tokens / static_cast<double>(doc.sentences.size());
    try {
      const auto r = readability(doc);
      d.measures[4] = r.ari;
      d.measures[5] = r.coleman_liau;
      d.measures[6] = r.flesch;
      d.measures[7] = r.lix;
    } catch (const UndefinedMetric& e) {
      if (notices) notices->push_back(doc.id + ": " + e.what());
      continue;
    }
    out.push_back(std::move(d));
  }
  return out;
}

CorrelationTable correlation_table(const std::vector<DocumentDiagnostics>& diagnostics) {
  CorrelationTable table;
  table.documents = diagnostics.size();
  std::vector<double> alpha;
  for (const auto& d : diagnostics) alpha.push_back(d.alpha);
  for (std::size_t k = 0; k < kDiagnosticMeasures.size(); ++k) {
    CorrelationCell cell;
    cell.measure = kDiagnosticMeasures[k];
    std::vector<double> x;
    for (const auto& d : diagnostics) x.push_back(d.measures[k]);
    try {
      cell.r = pearson_r(x, alpha);
    } catch (const Error& e) {
      cell.error = e.what();
    }
    table.cells.push_back(std::move(cell));
  }
  return table;
}

CorrelationTable disagreement_correlates(const Corpus& corpus, const SubsetFilter& filter,
                                         std::span<const ComponentType> types) {
  std::vector<std::string> notices;
  const auto diag = document_diagnostics(corpus, filter, types, &notices);
  if (diag.empty()) throw ConfigError("no document in the subset has a defined per-document alpha");
  auto table = correlation_table(diag);
  table.notices = std::move(notices);
  return table;
}

}  // namespace argmine
