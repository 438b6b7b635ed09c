#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <omp.h>

#include "argmine/agreement.hpp"
#include "argmine/error.hpp"
#include "argmine/parallel.hpp"

namespace argmine {
namespace {

using Wide = unsigned __int128;

struct Section {
  std::size_t begin = 0;
  std::size_t length = 0;
  bool unit = false;

  std::size_t end() const { return begin + length; }
};

void check_continuum(const Continuum& c) {
  if (c.annotators.size() < 2) {
    throw ConfigError("unitized alpha needs at least 2 annotators, got " +
                      std::to_string(c.annotators.size()));
  }
  if (c.length == 0) throw ConfigError("unitized alpha needs a non-empty continuum");
  for (const auto& units : c.annotators) {
    for (const auto& u : units) {
      if (u.first > u.last || u.last >= c.length) {
        throw ConfigError("unit [" + std::to_string(u.first) + ", " + std::to_string(u.last) +
                          "] outside continuum of length " + std::to_string(c.length));
      }
    }
  }
}

// Partition of [0, length) into the category's units and the gaps between
// them. Units of other categories fall inside gaps.
std::vector<Section> sections_for(const std::vector<Unit>& units, int category, std::size_t length) {
  std::vector<const Unit*> mine;
  for (const auto& u : units) {
    if (u.category == category) mine.push_back(&u);
  }
  std::sort(mine.begin(), mine.end(), [](const Unit* a, const Unit* b) { return a->first < b->first; });
  std::vector<Section> out;
  std::size_t pos = 0;
  for (const Unit* u : mine) {
    if (u->first < pos) throw ConfigError("overlapping units of one category within an annotator");
    if (u->first > pos) out.push_back({pos, u->first - pos, false});
    out.push_back({u->first, u->length(), true});
    pos = u->last + 1;
  }
  if (pos < length) out.push_back({pos, length - pos, false});
  return out;
}

std::uint64_t sq(std::int64_t x) { return static_cast<std::uint64_t>(x * x); }

// Sum of delta^2 over overlapping section pairs of two annotators (one
// orientation). Sections of each annotator tile the continuum, so a merge
// walk visits every overlapping pair exactly once.
Wide observed_pair_sweep(const std::vector<Section>& a, const std::vector<Section>& b) {
  Wide sum = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const Section& g = a[i];
    const Section& h = b[j];
    if (g.unit && h.unit) {
      const auto db = static_cast<std::int64_t>(g.begin) - static_cast<std::int64_t>(h.begin);
      const auto de = static_cast<std::int64_t>(g.end()) - static_cast<std::int64_t>(h.end());
      sum += sq(db) + sq(de);
    } else if (g.unit && !h.unit) {
      if (g.begin >= h.begin && g.end() <= h.end()) sum += sq(static_cast<std::int64_t>(g.length));
    } else if (!g.unit && h.unit) {
      if (h.begin >= g.begin && h.end() <= g.end()) sum += sq(static_cast<std::int64_t>(h.length));
    }
    if (g.end() < h.end()) {
      ++i;
    } else if (h.end() < g.end()) {
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
  return sum;
}

struct CategoryTerms {
  Wide observed_num = 0;        // sum over ordered annotator pairs
  Wide expected_num_x3 = 0;     // 3 * numerator, kept integral
  double expected_den = 0.0;
};

// Expected-disagreement numerator (times 3 to stay integral) and
// denominator for one category.
void expected_terms(const std::vector<std::vector<Section>>& sections, std::size_t length,
                    CategoryTerms& out) {
  const std::size_t m = sections.size();
  std::uint64_t n_units = 0;
  std::vector<std::uint64_t> gaps;
  Wide unit_pairs = 0;  // sum of l(l-1)
  for (const auto& secs : sections) {
    for (const auto& s : secs) {
      if (s.unit) {
        ++n_units;
        unit_pairs += static_cast<Wide>(s.length) * (s.length - 1);
      } else {
        gaps.push_back(s.length);
      }
    }
  }
  std::sort(gaps.begin(), gaps.end());
  // suffix sums over sorted gap lengths
  std::vector<Wide> suffix_len(gaps.size() + 1, 0);
  for (std::size_t k = gaps.size(); k-- > 0;) suffix_len[k] = suffix_len[k + 1] + gaps[k];

  Wide num = 0;
  for (const auto& secs : sections) {
    for (const auto& s : secs) {
      if (!s.unit) continue;
      const Wide l = s.length;
      // (N - 1)/3 * (2l^3 - 3l^2 + l), times 3
      num += static_cast<Wide>(n_units - 1) * (l * (l - 1) * (2 * l - 1));
      const auto first = static_cast<std::size_t>(
          std::lower_bound(gaps.begin(), gaps.end(), static_cast<std::uint64_t>(l)) - gaps.begin());
      const Wide count = gaps.size() - first;
      const Wide fits = suffix_len[first] - (l - 1) * count;  // sum of (gap - l + 1)
      num += 3 * l * l * fits;
    }
  }
  out.expected_num_x3 = num;
  const double mL = static_cast<double>(m) * static_cast<double>(length);
  out.expected_den = mL * (mL - 1.0) - static_cast<double>(unit_pairs);
}

// The 2/L prefactor makes D_e the mean of D_o when sections are placed at
// random; 2/m would overstate it by a factor L/m.
DisagreementTerms finish(const CategoryTerms& t, std::size_t m, std::size_t length) {
  DisagreementTerms d;
  const double md = static_cast<double>(m);
  const double L = static_cast<double>(length);
  d.observed = static_cast<double>(t.observed_num) / (md * (md - 1.0) * L * L);
  d.expected = t.expected_den > 0.0
                   ? (2.0 / L) * (static_cast<double>(t.expected_num_x3) / 3.0) / t.expected_den
                   : 0.0;
  return d;
}

double combine(const std::vector<DisagreementTerms>& terms) {
  double o = 0.0, e = 0.0;
  for (const auto& t : terms) {
    o += t.observed;
    e += t.expected;
  }
  if (!(e > 0.0)) throw UndefinedMetric("unitized alpha undefined: zero expected disagreement");
  return 1.0 - o / e;
}

std::vector<std::size_t> random_order(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t k = n; k > 1; --k) {
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    std::swap(order[k - 1], order[pick(rng)]);
  }
  return order;
}

AgreementResult summarize(const std::vector<double>& values, std::size_t docs) {
  AgreementResult r;
  r.n_permutations = values.size();
  r.documents = docs;
  double sum = 0.0;
  for (double v : values) sum += v;
  r.value = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - r.value) * (v - r.value);
    r.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    r.std_error = r.stddev / std::sqrt(static_cast<double>(values.size()));
  }
  return r;
}

template <typename AlphaFn>
std::vector<double> permutation_values(std::span<const DocumentUnits> docs, std::span<const int> categories,
                                       std::size_t n_perm, std::uint64_t seed, bool parallel,
                                       AlphaFn alpha) {
  if (n_perm == 0) throw ConfigError("n_perm must be >= 1");
  if (docs.empty()) throw ConfigError("no documents carry all requested annotators");
  std::vector<double> values(n_perm, 0.0);
  std::vector<std::string> errors(n_perm);
  const auto n = static_cast<std::int64_t>(n_perm);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::int64_t p = 0; p < n; ++p) {
    try {
      const auto order = random_order(docs.size(), mix_seed(seed, static_cast<std::uint64_t>(p)));
      values[p] = alpha(concatenate(docs, order), categories);
    } catch (const std::exception& e) {
      errors[p] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw UndefinedMetric(e);
  }
  return values;
}

}  // namespace

DisagreementTerms alpha_u_terms(const Continuum& continuum, int category) {
  check_continuum(continuum);
  const std::size_t m = continuum.annotators.size();
  std::vector<std::vector<Section>> sections;
  sections.reserve(m);
  for (const auto& units : continuum.annotators) {
    sections.push_back(sections_for(units, category, continuum.length));
  }
  CategoryTerms t;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) t.observed_num += 2 * observed_pair_sweep(sections[i], sections[j]);
  }
  expected_terms(sections, continuum.length, t);
  return finish(t, m, continuum.length);
}

double alpha_u(const Continuum& continuum, std::span<const int> categories) {
  check_continuum(continuum);
  if (categories.empty()) throw ConfigError("no category given for unitized alpha");
  const std::size_t m = continuum.annotators.size();
  const std::size_t nc = categories.size();

  std::vector<std::vector<std::vector<Section>>> sections(nc, std::vector<std::vector<Section>>(m));
  const auto n_build = static_cast<std::int64_t>(nc * m);
#pragma omp parallel for schedule(static) if (n_build > 1 && !omp_in_parallel())
  for (std::int64_t k = 0; k < n_build; ++k) {
    const auto c = static_cast<std::size_t>(k) / m;
    const auto a = static_cast<std::size_t>(k) % m;
    sections[c][a] = sections_for(continuum.annotators[a], categories[c], continuum.length);
  }

  // One task per (category, annotator pair); partial sums are exact
  // integers, so the reduction is order-independent.
  std::vector<std::array<std::size_t, 3>> tasks;
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) tasks.push_back({c, i, j});
    }
  }
  std::vector<Wide> partial(tasks.size(), 0);
  const auto n_tasks = static_cast<std::int64_t>(tasks.size());
#pragma omp parallel for schedule(dynamic) if (n_tasks > 1 && !omp_in_parallel())
  for (std::int64_t k = 0; k < n_tasks; ++k) {
    const auto [c, i, j] = tasks[k];
    partial[k] = 2 * observed_pair_sweep(sections[c][i], sections[c][j]);
  }

  std::vector<CategoryTerms> terms(nc);
  for (std::size_t k = 0; k < tasks.size(); ++k) terms[tasks[k][0]].observed_num += partial[k];
  for (std::size_t c = 0; c < nc; ++c) expected_terms(sections[c], continuum.length, terms[c]);

  std::vector<DisagreementTerms> finished;
  finished.reserve(nc);
  for (const auto& t : terms) finished.push_back(finish(t, m, continuum.length));
  return combine(finished);
}

namespace reference {

DisagreementTerms alpha_u_terms(const Continuum& continuum, int category) {
  check_continuum(continuum);
  const std::size_t m = continuum.annotators.size();
  const double L = static_cast<double>(continuum.length);
  std::vector<std::vector<Section>> secs;
  for (const auto& units : continuum.annotators) secs.push_back(sections_for(units, category, continuum.length));

  double observed = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      for (const auto& g : secs[i]) {
        for (const auto& h : secs[j]) {
          const double bg = static_cast<double>(g.begin), lg = static_cast<double>(g.length);
          const double bh = static_cast<double>(h.begin), lh = static_cast<double>(h.length);
          if (g.unit && h.unit && -lg < bg - bh && bg - bh < lh) {
            observed += (bg - bh) * (bg - bh) + (bg + lg - bh - lh) * (bg + lg - bh - lh);
          } else if (g.unit && !h.unit && lh - lg >= bg - bh && bg - bh >= 0) {
            observed += lg * lg;
          } else if (!g.unit && h.unit && lg - lh >= bh - bg && bh - bg >= 0) {
            observed += lh * lh;
          }
        }
      }
    }
  }
  const double md = static_cast<double>(m);
  DisagreementTerms d;
  d.observed = observed / (md * (md - 1.0) * L * L);

  double n_units = 0.0, unit_pairs = 0.0;
  for (const auto& s : secs) {
    for (const auto& g : s) {
      if (g.unit) {
        n_units += 1.0;
        unit_pairs += static_cast<double>(g.length) * static_cast<double>(g.length - 1);
      }
    }
  }
  double num = 0.0;
  for (const auto& s : secs) {
    for (const auto& g : s) {
      if (!g.unit) continue;
      const double l = static_cast<double>(g.length);
      double inner = 0.0;
      for (const auto& s2 : secs) {
        for (const auto& h : s2) {
          if (!h.unit && h.length >= g.length) inner += static_cast<double>(h.length) - l + 1.0;
        }
      }
      num += (n_units - 1.0) / 3.0 * (2 * l * l * l - 3 * l * l + l) + l * l * inner;
    }
  }
  const double den = md * L * (md * L - 1.0) - unit_pairs;
  d.expected = den > 0.0 ? (2.0 / L) * num / den : 0.0;
  return d;
}

double alpha_u(const Continuum& continuum, std::span<const int> categories) {
  if (categories.empty()) throw ConfigError("no category given for unitized alpha");
  std::vector<DisagreementTerms> terms;
  for (int c : categories) terms.push_back(reference::alpha_u_terms(continuum, c));
  return combine(terms);
}

AgreementResult corpus_alpha_u(std::span<const DocumentUnits> docs, std::span<const int> categories,
                               std::size_t n_perm, std::uint64_t seed) {
  auto fn = [](const Continuum& c, std::span<const int> cats) { return reference::alpha_u(c, cats); };
  return summarize(permutation_values(docs, categories, n_perm, seed, false, fn), docs.size());
}

}  // namespace reference

std::vector<int> category_ids(std::span<const ComponentType> types) {
  std::vector<int> out;
  for (auto t : types) out.push_back(static_cast<int>(t));
  return out;
}

DocumentUnits units_from_sets(const Document& doc, std::span<const AnnotationSet* const> sets,
                              std::span<const ComponentType> types) {
  DocumentUnits du;
  du.doc_id = doc.id;
  du.length = doc.tokens.size();
  for (const AnnotationSet* set : sets) {
    std::vector<Unit> units;
    for (const auto& s : set->spans) {
      if (std::find(types.begin(), types.end(), s.type) == types.end()) continue;
      units.push_back({s.first_token, s.last_token, static_cast<int>(s.type)});
    }
    std::sort(units.begin(), units.end(), [](const Unit& a, const Unit& b) { return a.first < b.first; });
    du.annotators.push_back(std::move(units));
  }
  return du;
}

std::vector<DocumentUnits> collect_units(const Corpus& corpus, const std::vector<std::string>& annotators,
                                         std::span<const ComponentType> types) {
  std::vector<DocumentUnits> out;
  for (const auto& doc : corpus.documents) {
    std::vector<const AnnotationSet*> sets;
    for (const auto& id : annotators) {
      const AnnotationSet* s = id == "gold" && doc.gold ? &*doc.gold : doc.annotation_by(id);
      if (!s) break;
      sets.push_back(s);
    }
    if (sets.size() != annotators.size() || doc.tokens.empty()) continue;
    out.push_back(units_from_sets(doc, sets, types));
  }
  return out;
}

Continuum concatenate(std::span<const DocumentUnits> docs, std::span<const std::size_t> order) {
  Continuum c;
  if (docs.empty()) return c;
  const std::size_t m = docs[order.empty() ? 0 : order[0]].annotators.size();
  c.annotators.resize(m);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& d = docs[order[k]];
    if (d.annotators.size() != m) throw ConfigError("documents disagree on annotator count");
    for (std::size_t a = 0; a < m; ++a) {
      for (const auto& u : d.annotators[a]) {
        c.annotators[a].push_back({u.first + c.length, u.last + c.length, u.category});
      }
    }
    c.length += d.length;
  }
  return c;
}

AgreementResult corpus_alpha_u(std::span<const DocumentUnits> docs, std::span<const int> categories,
                               std::size_t n_perm, std::uint64_t seed) {
  auto fn = [](const Continuum& c, std::span<const int> cats) { return alpha_u(c, cats); };
  return summarize(permutation_values(docs, categories, n_perm, seed, true, fn), docs.size());
}

AgreementResult corpus_alpha_u(const Corpus& corpus, const std::vector<std::string>& annotators,
                               std::span<const ComponentType> types, std::size_t n_perm,
                               std::uint64_t seed) {
  const auto docs = collect_units(corpus, annotators, types);
  const auto cats = category_ids(types);
  return corpus_alpha_u(docs, cats, n_perm, seed);
}

void set_worker_count(int workers) {
  if (workers > 0) omp_set_num_threads(workers);
}

int worker_count() { return omp_get_max_threads(); }

}  // namespace argmine
