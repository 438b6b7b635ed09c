#include <algorithm>
#include <map>

#include "argmine/corpus.hpp"
#include "argmine/error.hpp"

namespace argmine {
namespace {

constexpr int kNone = -1;

// Per-token component type (or kNone) of one annotator in one dimension.
std::vector<int> token_types(const AnnotationSet& set, Dimension d, std::size_t n) {
  std::vector<int> out(n, kNone);
  for (const auto& s : set.spans) {
    if (s.dimension != d) continue;
    for (std::size_t t = s.first_token; t <= s.last_token && t < n; ++t) {
      out[t] = static_cast<int>(s.type);
    }
  }
  return out;
}

// Number of annotators whose span of `type` starts at each token.
std::vector<std::size_t> start_votes(const std::vector<AnnotationSet>& sets, Dimension d,
                                     std::size_t n, int type) {
  std::vector<std::size_t> out(n, 0);
  for (const auto& set : sets) {
    for (const auto& s : set.spans) {
      if (s.dimension == d && static_cast<int>(s.type) == type && s.first_token < n) {
        ++out[s.first_token];
      }
    }
  }
  return out;
}

}  // namespace

GoldResult build_gold_majority(const Document& doc) {
  const auto& sets = doc.annotations;
  if (sets.size() < 3) {
    throw ValidationError("document " + doc.id + ": gold construction needs at least 3 annotation sets, got " +
                          std::to_string(sets.size()));
  }
  const std::size_t n = doc.tokens.size();
  const std::size_t m = sets.size();
  GoldResult result;
  result.gold.annotator = "gold";

  for (Dimension d : {Dimension::kLogos, Dimension::kPathos}) {
    std::vector<std::vector<int>> per_annotator;
    per_annotator.reserve(m);
    for (const auto& set : sets) per_annotator.push_back(token_types(set, d, n));

    std::vector<int> majority(n, kNone);
    std::vector<bool> unresolved(n, false);
    for (std::size_t t = 0; t < n; ++t) {
      std::map<int, std::size_t> votes;
      for (const auto& a : per_annotator) ++votes[a[t]];
      bool found = false;
      for (const auto& [label, count] : votes) {
        if (2 * count > m) {
          majority[t] = label;
          found = true;
        }
      }
      unresolved[t] = !found;
    }

    for (std::size_t t = 0; t < n;) {
      if (!unresolved[t]) {
        ++t;
        continue;
      }
      std::size_t e = t;
      while (e + 1 < n && unresolved[e + 1]) ++e;
      result.unresolved.push_back({d, t, e});
      t = e + 1;
    }

    std::map<int, std::vector<std::size_t>> starts;
    for (std::size_t t = 0; t < n;) {
      const int type = majority[t];
      if (type == kNone) {
        ++t;
        continue;
      }
      auto it = starts.find(type);
      if (it == starts.end()) it = starts.emplace(type, start_votes(sets, d, n, type)).first;
      const auto& sv = it->second;
      std::size_t e = t;
      while (e + 1 < n && majority[e + 1] == type && sv[e + 1] < 2) ++e;
      ComponentSpan span;
      span.type = static_cast<ComponentType>(type);
      span.dimension = d;
      span.first_token = t;
      span.last_token = e;
      // Carry summary and implicit flag when a majority drew exactly this span.
      std::size_t exact = 0;
      const ComponentSpan* first_exact = nullptr;
      for (const auto& set : sets) {
        for (const auto& s : set.spans) {
          if (s.dimension == d && s.type == span.type && s.first_token == t && s.last_token == e) {
            ++exact;
            if (!first_exact) first_exact = &s;
          }
        }
      }
      if (2 * exact > m) {
        span.summary = first_exact->summary;
        span.implicit = first_exact->implicit;
      }
      result.gold.spans.push_back(std::move(span));
      t = e + 1;
    }
  }

  std::stable_sort(result.gold.spans.begin(), result.gold.spans.end(),
                   [](const auto& a, const auto& b) {
                     if (a.dimension != b.dimension) return a.dimension < b.dimension;
                     return a.first_token < b.first_token;
                   });

  if (std::all_of(sets.begin(), sets.end(), [&](const auto& s) {
        return s.implicit_claim_stance == sets.front().implicit_claim_stance;
      })) {
    result.gold.implicit_claim_stance = sets.front().implicit_claim_stance;
  }
  return result;
}

}  // namespace argmine
