// Acceptance checks: one PASS / FAIL / SKIP line per criterion.
// Criteria 10-15 need the released gold corpus (--gold-corpus or
// ARGMINE_GOLD_CORPUS); FS4 runs also need word vectors (--embeddings or
// ARGMINE_EMBEDDINGS).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "argmine/agreement.hpp"
#include "argmine/cli.hpp"
#include "argmine/encoding.hpp"
#include "argmine/error.hpp"
#include "argmine/evaluation.hpp"
#include "argmine/experiment.hpp"
#include "argmine/labeler.hpp"
#include "argmine/persuasiveness.hpp"
#include "argmine/report.hpp"
#include "oracles/oracles.hpp"
#include "support/synthetic.hpp"

using namespace argmine;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and bands.
constexpr double kAlphaOracleTol = 1e-9;
constexpr double kAlphaRandomBound = 0.05;
constexpr double kFleissTol = 1e-9;
constexpr double kRowSumTol = 1e-9;
constexpr double kBoundaryTol = 1e-9;
constexpr double kLiddellTol = 1e-6;
constexpr double kOracleF1 = 0.906, kOracleF1Tol = 0.01;
constexpr double kOracleAcc = 0.984, kOracleAccTol = 0.005;
constexpr double kPersuasiveLo = 0.62, kPersuasiveHi = 0.76;
constexpr double kBaselineLo = 0.10, kBaselineHi = 0.22;
constexpr double kFullGain = 0.03, kFullP = 0.01;
constexpr double kCrossGain = 0.05;
constexpr double kHumanAlpha = 0.48;

int failures = 0;

void line(int id, const char* status, const std::string& what, const std::string& detail) {
  std::printf("%-4s %2d  %s: %s\n", status, id, what.c_str(), detail.c_str());
  std::fflush(stdout);
}

void verdict(int id, bool ok, const std::string& what, const std::string& detail) {
  if (!ok) ++failures;
  line(id, ok ? "PASS" : "FAIL", what, detail);
}

std::string num(double x, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return s.str();
}

template <class F>
void guarded(int id, const std::string& what, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    verdict(id, false, what, std::string("exception: ") + e.what());
  }
}

// ---- 1 ------------------------------------------------------------------

void viterbi_optimality() {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> w(-64, 64);
  std::uniform_int_distribution<std::size_t> len(1, 6);
  constexpr std::size_t k = 5;
  std::size_t equal = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = len(rng);
    std::vector<LabelScores> em(n);
    std::vector<std::vector<double>> em_o(n, std::vector<double>(k));
    TransitionMatrix tr{};
    std::vector<std::vector<double>> tr_o(k, std::vector<double>(k));
    // Multiples of 1/16 add exactly in double precision.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t y = 0; y < k; ++y) em[i][y] = em_o[i][y] = w(rng) / 16.0;
    }
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) tr[a][b] = tr_o[a][b] = w(rng) / 16.0;
    }
    const auto path = viterbi(em, tr, k);
    equal += sequence_score(em, tr, path) == oracle::best_sequence_score(em_o, tr_o, k);
  }
  verdict(1, equal == 1000, "Viterbi optimality", std::to_string(equal) + "/1000 equal to exhaustive maximum");
}

// ---- 2 ------------------------------------------------------------------

void oracle_identity() {
  std::size_t perfect = 0;
  for (std::uint64_t s = 1; s <= 200; ++s) {
    synth::Options o;
    o.documents = 6;
    o.seed = s;
    const auto r = oracle_eval(synth::make_corpus(o));
    perfect += r.evaluation.scores.macro_f1 == 1.0 && r.evaluation.scores.accuracy == 1.0;
  }
  verdict(2, perfect == 200, "Oracle identity", std::to_string(perfect) + "/200 corpora with macro-F1 = accuracy = 1.0");
}

// ---- 3 ------------------------------------------------------------------

Continuum random_continuum(std::mt19937_64& rng, std::size_t m, std::size_t length, int categories,
                           std::size_t max_len, double rate) {
  Continuum c;
  c.length = length;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_int_distribution<int> cat(0, categories - 1);
  for (std::size_t a = 0; a < m; ++a) {
    std::vector<Unit> units;
    for (std::size_t t = 0; t < length;) {
      if (u(rng) < rate) {
        const std::size_t l = std::min(len(rng), length - t);
        units.push_back({t, t + l - 1, cat(rng)});
        t += l;
      } else {
        ++t;
      }
    }
    c.annotators.push_back(std::move(units));
  }
  return c;
}

std::vector<std::vector<std::vector<int>>> unit_tables(const Continuum& c, const std::vector<int>& cats) {
  std::vector<std::vector<std::vector<int>>> out;
  for (int k : cats) {
    std::vector<std::vector<int>> per;
    for (const auto& a : c.annotators) {
      std::vector<int> row(c.length, -1);
      for (std::size_t id = 0; id < a.size(); ++id) {
        if (a[id].category != k) continue;
        for (std::size_t t = a[id].first; t <= a[id].last; ++t) row[t] = static_cast<int>(id);
      }
      per.push_back(std::move(row));
    }
    out.push_back(std::move(per));
  }
  return out;
}

void alpha_checks() {
  std::mt19937_64 rng(3);
  const std::vector<int> cats{0, 1, 2, 3, 4};

  auto same = random_continuum(rng, 1, 500, 5, 10, 0.1);
  same.annotators.push_back(same.annotators[0]);
  same.annotators.push_back(same.annotators[0]);
  const double identical = alpha_u(same, cats);

  double worst_random = 0.0;
  for (std::size_t m : {2, 3}) {
    const auto c = random_continuum(rng, m, 10000, 5, 12, 0.08);
    worst_random = std::max(worst_random, std::abs(alpha_u(c, cats)));
    const std::vector<int> one{0};
    worst_random = std::max(worst_random, std::abs(alpha_u(c, one)));
  }

  double worst_gap = 0.0;
  std::size_t compared = 0;
  std::uniform_int_distribution<std::size_t> len(8, 40), ann(2, 4);
  while (compared < 50) {
    const auto c = random_continuum(rng, ann(rng), len(rng), 3, 6, 0.25);
    const std::vector<int> three{0, 1, 2};
    const auto expected = oracle::alpha(unit_tables(c, three));
    if (!expected) continue;
    worst_gap = std::max(worst_gap, std::abs(alpha_u(c, three) - *expected));
    ++compared;
  }
  const bool ok = identical == 1.0 && worst_random < kAlphaRandomBound && worst_gap < kAlphaOracleTol;
  verdict(3, ok, "Unitized alpha",
          "identical = " + num(identical, 17) + ", max |alpha| on random 10k continua = " + num(worst_random) +
              ", max oracle gap on 50 continua = " + num(worst_gap));
}

// ---- 4 ------------------------------------------------------------------

void fleiss_checks() {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> cat(0, 3), items(3, 30), raters(2, 6);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    std::vector<std::vector<std::string>> table(items(rng));
    const int r = raters(rng);
    for (auto& it : table) {
      for (int k = 0; k < r; ++k) it.push_back(std::string(1, static_cast<char>('A' + cat(rng))));
    }
    worst = std::max(worst, std::abs(fleiss_kappa(table) - oracle::fleiss(table)));
  }
  const double unanimous = fleiss_kappa({{"A", "A", "A"}, {"B", "B", "B"}, {"A", "A", "A"}});
  verdict(4, worst < kFleissTol && unanimous == 1.0, "Fleiss kappa",
          "max oracle gap on 50 tables = " + num(worst) + ", unanimous = " + num(unanimous, 17));
}

// ---- 5 ------------------------------------------------------------------

void prob_confusion_checks() {
  double worst_row = 0.0;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    synth::Options o;
    o.documents = 10;
    o.noise = 0.4;
    o.aligned = false;
    o.seed = s;
    const auto m = prob_confusion_matrix(synth::make_corpus(o), {"a1", "a2", "a3"}, kLogosTypes);
    for (const auto& row : m.rows) {
      if (!row) continue;
      double sum = 0.0;
      for (double v : *row) sum += v;
      worst_row = std::max(worst_row, std::abs(sum - 1.0));
    }
  }
  synth::Options o;
  o.documents = 10;
  o.noise = 0.0;
  const auto m = prob_confusion_matrix(synth::make_corpus(o), {"a1", "a2", "a3"}, kLogosTypes);
  bool identity = true;
  for (std::size_t j = 0; j < m.rows.size(); ++j) {
    if (!m.rows[j]) continue;
    for (std::size_t k = 0; k < m.rows[j]->size(); ++k) identity &= (*m.rows[j])[k] == (j == k ? 1.0 : 0.0);
  }
  verdict(5, worst_row < kRowSumTol && identity, "Probabilistic confusion",
          "max |row sum - 1| = " + num(worst_row) + ", identity under perfect agreement: " + (identity ? "yes" : "no"));
}

// ---- 6 ------------------------------------------------------------------

void boundary_checks() {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> len(2, 24), win(1, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto random_seg = [&](std::size_t n) {
    Segmentation s{n, {}};
    for (std::size_t p = 1; p < n; ++p) {
      if (u(rng) < 0.3) s.boundaries.push_back(p);
    }
    return s;
  };
  std::size_t bad = 0;
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = len(rng), w = win(rng);
    const auto a = random_seg(n), b = random_seg(n);
    const double ab = boundary_similarity(a, b, w), ba = boundary_similarity(b, a, w);
    bad += ab != ba || boundary_similarity(a, a, w) != 1.0 || ab < 0.0 || ab > 1.0;
    worst = std::max(worst, std::abs(ab - oracle::boundary_similarity(a.boundaries, b.boundaries, w).similarity));
  }
  verdict(6, bad == 0 && worst < kBoundaryTol, "Boundary similarity",
          std::to_string(1000 - bad) + "/1000 pairs symmetric, reflexive and in [0,1]; max oracle gap = " + num(worst));
}

// ---- 7 ------------------------------------------------------------------

void liddell_checks() {
  const double p = liddell_p_value(10, 0);
  const double closed = 2.0 * std::pow(0.5, 10);  // 0.001953125, quoted as 0.00195
  const std::vector<BioLabel> gold{BioLabel::kO, BioLabel::kClaimB, BioLabel::kClaimI};
  const std::vector<BioLabel> pred{BioLabel::kO, BioLabel::kO, BioLabel::kClaimI};
  const double equal = liddell_exact_test(gold, pred, pred).p_value;
  const bool ok = std::abs(p - closed) < kLiddellTol && std::round(p * 1e5) / 1e5 == 0.00195 && equal == 1.0;
  verdict(7, ok, "Liddell exact test", "p(10, 0) = " + num(p, 10) + ", equal predictions p = " + num(equal));
}

// ---- 8, 9 ---------------------------------------------------------------

Corpus three_topic_corpus() {
  synth::Options o;
  o.documents = 24;
  o.topics = 3;
  o.max_sentences = 7;
  o.aligned = false;
  o.seed = 8;
  return synth::make_corpus(o);
}

std::unique_ptr<Learner> small_perceptron() {
  PerceptronOptions p;
  p.training.epochs = 3;
  p.lda.topics = 5;
  p.lda.iterations = 30;
  p.lda.inference_iterations = 10;
  return make_perceptron_learner(p);
}

void leakage_checks() {
  const auto c = three_topic_corpus();
  FeatureConfig cfg;
  cfg.sets = FeatureSets::parse("012");
  cfg.min_count = 1;
  const std::vector<FeatureConfig> configs{cfg};
  ScenarioOptions opts;
  opts.folds = 3;
  opts.alpha_permutations = 2;
  const auto learner = small_perceptron();
  const auto in = audit_leakage(c, run_indomain(c, configs, *learner, opts).at(0));
  const auto cross = audit_leakage(c, run_crossdomain(c, configs, *learner, opts).at(0));
  std::string detail = std::string("in-domain ") + (in.ok ? "clean" : "LEAK") + ", cross-domain " +
                       (cross.ok ? "clean" : "LEAK");
  for (const auto& p : in.problems) detail += "; " + p;
  for (const auto& p : cross.problems) detail += "; " + p;
  verdict(8, in.ok && cross.ok, "Leakage audits", detail);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "argmine");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

void determinism_checks() {
  const auto dir = fs::temp_directory_path() / "argmine_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto corpus_path = dir / "corpus.json";
  serialize_corpus(three_topic_corpus(), corpus_path);

  bool ok = true;
  std::string detail;
  for (const char* scenario : {"all", "in-domain", "cross-domain"}) {
    std::string metrics[2];
    for (int run = 0; run < 2; ++run) {
      const auto out = dir / (std::string(scenario) + "-" + std::to_string(run));
      const int code = cli({"xval", "--corpus", corpus_path.string(), "--scenario", scenario, "--features", "0,012",
                            "--folds", "3", "--epochs", "3", "--min-count", "1", "--topics", "5",
                            "--lda-iterations", "30", "--alpha-permutations", "3", "--seed", "9", "--out",
                            out.string()});
      if (code != 0) {
        ok = false;
        detail += std::string(scenario) + " exit " + std::to_string(code) + "; ";
      }
      metrics[run] = slurp(out / "metrics.json");
    }
    const bool same = !metrics[0].empty() && metrics[0] == metrics[1];
    ok &= same;
    detail += std::string(scenario) + " " + (same ? "identical" : "DIFFERENT") + " (" +
              std::to_string(metrics[0].size()) + " bytes); ";
  }
  fs::remove_all(dir);
  detail.resize(detail.size() - 2);
  verdict(9, ok, "Deterministic metric JSON", detail);
}

// ---- 10-15 ----------------------------------------------------------------

struct GoldInputs {
  std::string corpus;
  std::string embeddings;
  std::string layers;
};

std::string env_or(const std::string& given, const char* var) {
  if (!given.empty()) return given;
  const char* v = std::getenv(var);
  return v ? v : "";
}

void skip_all_gold(const std::string& why) {
  const char* names[] = {"Corpus statistics", "Oracle approximation", "Persuasiveness", "All-data labeling",
                         "Cross-domain ordering", "System comparison triple"};
  for (int id = 10; id <= 15; ++id) line(id, "SKIP", names[id - 10], why);
}

FeatureConfig config_of(const char* sets) {
  FeatureConfig c;
  c.sets = FeatureSets::parse(sets);
  return c;
}

void gold_checks(const GoldInputs& in) {
  const auto corpus = parse_corpus(in.corpus);

  guarded(10, "Corpus statistics", [&] {
    const auto s = corpus_statistics(corpus);
    std::size_t o = 0, pb = 0, total = 0;
    if (s.class_distribution) {
      for (const auto& [label, n] : *s.class_distribution) total += n;
      o = s.class_distribution->count(BioLabel::kO) ? s.class_distribution->at(BioLabel::kO) : 0;
      pb = s.class_distribution->count(BioLabel::kPremiseB) ? s.class_distribution->at(BioLabel::kPremiseB) : 0;
    }
    verdict(10, s.document_count == 340 && o == 2214 && pb == 530 && total == 3899, "Corpus statistics",
            std::to_string(s.document_count) + " documents, O = " + std::to_string(o) + ", Premise-B = " +
                std::to_string(pb) + ", total = " + std::to_string(total));
  });

  guarded(11, "Oracle approximation", [&] {
    const auto r = oracle_eval(corpus).evaluation.scores;
    verdict(11,
            std::abs(r.macro_f1 - kOracleF1) <= kOracleF1Tol && std::abs(r.accuracy - kOracleAcc) <= kOracleAccTol,
            "Oracle approximation", "macro-F1 = " + num(r.macro_f1, 4) + ", accuracy = " + num(r.accuracy, 4));
  });

  guarded(12, "Persuasiveness", [&] {
    std::size_t labeled = 0, positive = 0;
    for (const auto& d : corpus.documents) {
      if (!d.persuasive) continue;
      ++labeled;
      positive += d.persuasive->label;
    }
    if (labeled == 0) {
      line(12, "SKIP", "Persuasiveness", "corpus carries no persuasiveness labels");
      return;
    }
    const auto cv = crossval_doc_classifier(corpus, 10, ClassifierConfig{});
    const double f1 = cv.evaluation.macro_f1;
    verdict(12, labeled == 990 && positive == 524 && f1 >= kPersuasiveLo && f1 <= kPersuasiveHi, "Persuasiveness",
            std::to_string(positive) + "/" + std::to_string(labeled) + " persuasive, 10-fold macro-F1 = " + num(f1, 4));
  });

  const std::string emb_path = in.embeddings;
  std::optional<EmbeddingTable> emb;
  std::optional<LayerStore> layers;
  if (!emb_path.empty()) emb = load_embeddings(emb_path);
  if (!in.layers.empty()) layers = load_layers(in.layers);
  PerceptronOptions p;
  p.embeddings = emb ? &*emb : nullptr;
  p.layers = layers ? &*layers : nullptr;
  const auto learner = make_perceptron_learner(p);
  ScenarioOptions opts;

  std::optional<ScenarioResult> full;
  guarded(13, "All-data labeling", [&] {
    if (!emb) {
      line(13, "SKIP", "All-data labeling", "config 01234 needs word vectors (--embeddings / ARGMINE_EMBEDDINGS)");
      return;
    }
    const std::vector<FeatureConfig> configs{config_of("0"), config_of("01234")};
    auto r = run_crossval(corpus, configs, *learner, opts);
    const double base = r[0].aggregated.scores.macro_f1, best = r[1].aggregated.scores.macro_f1;
    const double p_value = compare_runs(r[1], r[0]).p_value;
    verdict(13, base >= kBaselineLo && base <= kBaselineHi && best >= base + kFullGain && p_value < kFullP,
            "All-data labeling",
            "FS0 = " + num(base, 4) + ", 01234 = " + num(best, 4) + ", Liddell p = " + num(p_value, 3));
    full = std::move(r[1]);
  });

  guarded(14, "Cross-domain ordering", [&] {
    if (!emb) {
      line(14, "SKIP", "Cross-domain ordering", "config 4 needs word vectors (--embeddings / ARGMINE_EMBEDDINGS)");
      return;
    }
    const std::vector<FeatureConfig> configs{config_of("0"), config_of("4")};
    const auto r = run_crossdomain(corpus, configs, *learner, opts);
    const double base = r[0].aggregated.scores.macro_f1, e4 = r[1].aggregated.scores.macro_f1;
    verdict(14, e4 >= base + kCrossGain, "Cross-domain ordering", "FS0 = " + num(base, 4) + ", FS4 = " + num(e4, 4));
  });

  guarded(15, "System comparison triple", [&] {
    if (!full) {
      line(15, "SKIP", "System comparison triple", "needs the 01234 run of criterion 13");
      return;
    }
    const std::vector<FeatureConfig> configs{config_of("0")};
    const auto base = run_crossval(corpus, configs, *make_majority_learner(), opts).at(0);
    const auto sys = comparison_row("system", full->aggregated);
    const auto all_o = base.aggregated.alpha_u;
    const bool emitted = sys.macro_f1 && sys.alpha_u && sys.boundary_similarity;
    const bool between = emitted && all_o && *sys.alpha_u > *all_o && *sys.alpha_u < kHumanAlpha;
    verdict(15, between, "System comparison triple",
            "macro-F1 = " + (sys.macro_f1 ? num(*sys.macro_f1, 4) : "-") +
                ", alpha_U = " + (sys.alpha_u ? num(*sys.alpha_u, 4) : "-") +
                ", boundary similarity = " + (sys.boundary_similarity ? num(*sys.boundary_similarity, 4) : "-") +
                ", all-O alpha_U = " + (all_o ? num(*all_o, 4) : "-"));
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  GoldInputs in;
  app.add_option("--gold-corpus", in.corpus, "Released gold corpus JSON");
  app.add_option("--embeddings", in.embeddings, "Word-vector file for feature set 4");
  app.add_option("--layers", in.layers, "Precomputed linguistic layers JSON");
  CLI11_PARSE(app, argc, argv);
  in.corpus = env_or(in.corpus, "ARGMINE_GOLD_CORPUS");
  in.embeddings = env_or(in.embeddings, "ARGMINE_EMBEDDINGS");
  in.layers = env_or(in.layers, "ARGMINE_LAYERS");

  const auto start = std::chrono::steady_clock::now();
  guarded(1, "Viterbi optimality", viterbi_optimality);
  guarded(2, "Oracle identity", oracle_identity);
  guarded(3, "Unitized alpha", alpha_checks);
  guarded(4, "Fleiss kappa", fleiss_checks);
  guarded(5, "Probabilistic confusion", prob_confusion_checks);
  guarded(6, "Boundary similarity", boundary_checks);
  guarded(7, "Liddell exact test", liddell_checks);
  guarded(8, "Leakage audits", leakage_checks);
  guarded(9, "Deterministic metric JSON", determinism_checks);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("property checks took %.1f s\n", seconds);

  if (in.corpus.empty()) {
    skip_all_gold("released gold corpus not supplied (--gold-corpus / ARGMINE_GOLD_CORPUS)");
  } else {
    try {
      gold_checks(in);
    } catch (const std::exception& e) {
      ++failures;
      std::printf("FAIL     gold corpus checks aborted: %s\n", e.what());
    }
  }
  std::printf("%d failing criteria\n", failures);
  return failures == 0 ? 0 : 1;
}
