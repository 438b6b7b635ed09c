#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "argmine/corpus.hpp"
#include "argmine/encoding.hpp"
#include "argmine/experiment.hpp"

namespace argmine {

enum class ReportFormat { kJson, kMarkdown, kHtml };

std::optional<ReportFormat> parse_report_format(std::string_view s);

// Metric JSON of scenario results: matrices, scores, runs and scenario
// settings. Contains no timestamps, so equal inputs give equal bytes.
std::string results_json(const std::vector<ScenarioResult>& results);
std::string eval_report_json(const EvalReport& report);

// One row of the system comparison block (macro-F1, alpha_u, boundary
// similarity).
struct ComparisonRow {
  std::string system;
  std::optional<double> macro_f1;
  std::optional<double> alpha_u;
  std::optional<double> boundary_similarity;
};

ComparisonRow comparison_row(const std::string& system, const EvalReport& report);

struct ReportInput {
  std::vector<ScenarioResult> results;
  std::vector<ComparisonRow> comparison;
  const Corpus* corpus = nullptr;           // needed for the side-by-side part
  std::vector<TokenPrediction> predictions;  // documents to render
};

// Markdown or HTML: metric tables per scenario, the comparison block, then
// gold and predicted spans side by side per document. JSON yields the
// metric JSON plus the comparison rows.
std::string render_report(const ReportInput& input, ReportFormat format);

}  // namespace argmine
