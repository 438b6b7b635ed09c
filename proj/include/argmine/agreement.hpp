#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "argmine/corpus.hpp"

namespace argmine {

// A unitized annotation continuum: for each annotator, non-overlapping
// categorized units [first, last] over token positions [0, length).
struct Unit {
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
  int category = 0;

  std::size_t length() const { return last - first + 1; }
};

struct Continuum {
  std::size_t length = 0;
  std::vector<std::vector<Unit>> annotators;
};

// Observed and expected disagreement for one category.
struct DisagreementTerms {
  double observed = 0.0;
  double expected = 0.0;
};

// Krippendorff's unitized alpha. With several categories the joint value is
// 1 - sum(D_o) / sum(D_e). Throws ConfigError for < 2 annotators or an empty
// continuum, UndefinedMetric when the expected disagreement is zero.
double alpha_u(const Continuum& continuum, std::span<const int> categories);
DisagreementTerms alpha_u_terms(const Continuum& continuum, int category);

// Direct all-pairs evaluation of the same sums. Quadratic in the number of
// sections; kept as the reference the fast kernel is tested against.
namespace reference {
double alpha_u(const Continuum& continuum, std::span<const int> categories);
DisagreementTerms alpha_u_terms(const Continuum& continuum, int category);
}  // namespace reference

// One document's units, per annotator (same annotator order across docs).
struct DocumentUnits {
  std::string doc_id;
  std::size_t length = 0;
  std::vector<std::vector<Unit>> annotators;
};

// Units of the given annotators restricted to `types`. The pseudo-annotator
// "gold" refers to Document::gold. Documents lacking any requested
// annotator are skipped.
std::vector<DocumentUnits> collect_units(const Corpus& corpus, const std::vector<std::string>& annotators,
                                         std::span<const ComponentType> types);
DocumentUnits units_from_sets(const Document& doc, std::span<const AnnotationSet* const> sets,
                              std::span<const ComponentType> types);

// Concatenates documents in the given order into one continuum.
Continuum concatenate(std::span<const DocumentUnits> docs, std::span<const std::size_t> order);

struct AgreementResult {
  double value = 0.0;      // mean over concatenation orders
  double std_error = 0.0;  // standard error of that mean
  double stddev = 0.0;     // spread of the per-order values
  std::size_t n_permutations = 0;
  std::size_t documents = 0;
};

// Averages alpha_u over n_perm seeded random concatenation orders. Order k
// is drawn from a generator seeded with mix_seed(seed, k); permutations run
// in parallel.
AgreementResult corpus_alpha_u(std::span<const DocumentUnits> docs, std::span<const int> categories,
                               std::size_t n_perm, std::uint64_t seed);
AgreementResult corpus_alpha_u(const Corpus& corpus, const std::vector<std::string>& annotators,
                               std::span<const ComponentType> types, std::size_t n_perm,
                               std::uint64_t seed);
namespace reference {
AgreementResult corpus_alpha_u(std::span<const DocumentUnits> docs, std::span<const int> categories,
                               std::size_t n_perm, std::uint64_t seed);
}

std::vector<int> category_ids(std::span<const ComponentType> types);

// Fleiss' kappa; each item lists one category vote per rater.
double fleiss_kappa(const std::vector<std::vector<std::string>>& items);

// Probabilistic confusion matrix. Row j: distribution of the label another
// annotator assigned, given one annotator chose label j, pooled over all
// ordered annotator pairs and tokens. Rows of unused labels are nullopt.
struct ProbConfusion {
  std::vector<std::string> labels;
  std::vector<std::optional<std::vector<double>>> rows;
};

// token_labels[doc][annotator][token] in [0, n_labels).
ProbConfusion prob_confusion_matrix(const std::vector<std::vector<std::vector<int>>>& token_labels,
                                    const std::vector<std::string>& labels);
// Labels: "none" followed by the requested component types.
ProbConfusion prob_confusion_matrix(const Corpus& corpus, const std::vector<std::string>& annotators,
                                    std::span<const ComponentType> types);

struct Readability {
  double ari = 0.0;
  double coleman_liau = 0.0;
  double flesch = 0.0;
  double lix = 0.0;
};

struct TextCounts {
  std::size_t sentences = 0;
  std::size_t words = 0;
  std::size_t letters = 0;
  std::size_t digits = 0;
  std::size_t syllables = 0;
  std::size_t long_words = 0;
};

std::size_t count_syllables(std::string_view word);
// Words are tokens with at least one letter or digit.
TextCounts count_text(const std::vector<std::vector<std::string_view>>& sentences);
Readability readability(const TextCounts& counts);
Readability readability(const Document& doc);

double pearson_r(std::span<const double> x, std::span<const double> y);

// Per-document diagnostics used for disagreement analysis.
inline constexpr std::array<const char*, 8> kDiagnosticMeasures = {
    "SC", "DL", "APL", "ASL", "ARI", "C-L", "Flesch", "LIX"};

struct DocumentDiagnostics {
  std::string doc_id;
  double alpha = 0.0;
  std::array<double, 8> measures{};
};

struct SubsetFilter {
  std::optional<Topic> topic;
  std::optional<Register> register_kind;

  bool accepts(const Document& d) const {
    return (!topic || d.topic == *topic) && (!register_kind || d.register_kind == *register_kind);
  }
};

struct CorrelationCell {
  std::string measure;
  std::optional<double> r;
  std::string error;
};

struct CorrelationTable {
  std::vector<CorrelationCell> cells;
  std::size_t documents = 0;
  std::vector<std::string> notices;
};

// Document-local alpha over all of the document's annotation sets plus the
// eight measures; documents with undefined alpha are reported in notices.
std::vector<DocumentDiagnostics> document_diagnostics(const Corpus& corpus, const SubsetFilter& filter,
                                                      std::span<const ComponentType> types,
                                                      std::vector<std::string>* notices = nullptr);
CorrelationTable correlation_table(const std::vector<DocumentDiagnostics>& diagnostics);
CorrelationTable disagreement_correlates(const Corpus& corpus, const SubsetFilter& filter,
                                         std::span<const ComponentType> types);

}  // namespace argmine
