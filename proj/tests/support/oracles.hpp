#pragma once

#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mnemosim/core.hpp"
#include "mnemosim/temporal.hpp"

namespace mnemosim::harness {

using Rational = boost::multiprecision::cpp_rational;

/// Exact value of a double; every finite double is a dyadic rational.
inline Rational exact(double v) { return Rational(v); }

inline double to_double(const Rational& r) { return static_cast<double>(r); }

// ---- temporal ------------------------------------------------------------

/// Materializes the first n steps of a trace, padding past the end of a
/// finite trace with `std::nullopt`.
inline std::vector<std::optional<bool>> padded(const Trace& t, std::size_t n) {
  std::vector<std::optional<bool>> out;
  for (std::size_t k = 0; k < n; ++k) {
    if (k < t.prefix.size()) out.push_back(t.prefix[k]);
    else if (t.is_lasso()) out.push_back(t.period[(k - t.prefix.size()) % t.period.size()]);
    else out.push_back(std::nullopt);
  }
  return out;
}

/// Strong next by padding the trace far enough and reading k + 1.
inline bool next_by_padding(const Trace& t, std::size_t k) {
  const auto v = padded(t, k + 2);
  return v[k + 1].value_or(false);
}

/// Box of the suffix starting at k, over a horizon long enough to cover the
/// prefix and two full periods.
inline bool always_from_unrolled(const Trace& t, std::size_t k) {
  const std::size_t n = k + t.prefix.size() + 2 * std::max<std::size_t>(t.period.size(), 1);
  const auto v = padded(t, n);
  const std::size_t end = t.is_lasso() ? n : t.prefix.size();
  for (std::size_t i = k; i < end; ++i) {
    if (!v[i].value_or(false)) return false;
  }
  return true;
}

// ---- containment paths -----------------------------------------------------

/// Every upward path from `src` to `dst` in the containment DAG, as context
/// sequences including both ends.
inline std::vector<std::vector<ContextId>> containment_paths(const std::vector<ContextDef>& defs, const ContextId& src,
                                                             const ContextId& dst) {
  std::map<ContextId, std::vector<ContextId>> up;
  for (const auto& d : defs) up[d.id] = d.within;
  std::vector<std::vector<ContextId>> out;
  std::vector<ContextId> path{src};
  auto dfs = [&](auto&& self, const ContextId& c) -> void {
    if (c == dst) {
      out.push_back(path);
      return;
    }
    for (const auto& parent : up[c]) {
      path.push_back(parent);
      self(self, parent);
      path.pop_back();
    }
  };
  dfs(dfs, src);
  return out;
}

inline std::set<PropositionId> members_of(const std::vector<ContextDef>& defs, const ContextId& id) {
  for (const auto& d : defs) {
    if (d.id == id) return {d.members.begin(), d.members.end()};
  }
  return {};
}

/// Propagation path sum computed path by path in exact arithmetic. Literal
/// mode repeats the relation in the target context; per-edge mode reads it
/// in each edge's upper context.
inline Rational propagation_oracle(const std::vector<ContextDef>& defs, const Rational& relation,
                                   const PropositionId& pi, const PropositionId& pj, const ContextId& src,
                                   const ContextId& dst, bool per_edge) {
  auto in = [&](const ContextId& c) {
    const auto m = members_of(defs, c);
    return m.contains(pi) && m.contains(pj) ? relation : Rational(0);
  };
  if (src == dst) return in(dst);
  Rational total = 0;
  for (const auto& path : containment_paths(defs, src, dst)) {
    Rational product = 1;
    for (std::size_t i = 1; i < path.size(); ++i) product *= per_edge ? in(path[i]) : in(dst);
    total += product;
  }
  return total;
}

// ---- influence paths -------------------------------------------------------

/// Sum over simple paths of length >= 2, built by trying every ordered
/// selection of distinct intermediate vertices rather than by graph search.
inline double influence_by_permutation(const std::vector<PropositionId>& vertices,
                                       const std::map<std::pair<PropositionId, PropositionId>, double>& w,
                                       const PropositionId& src, const PropositionId& dst, double lambda_path) {
  auto weight = [&](const PropositionId& a, const PropositionId& b) {
    auto it = w.find(std::minmax(a, b));
    return it == w.end() ? 0.0 : it->second;
  };
  std::vector<PropositionId> others;
  for (const auto& v : vertices) {
    if (v != src && v != dst) others.push_back(v);
  }
  double total = 0.0;
  const std::size_t n = others.size();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<PropositionId> chosen;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) chosen.push_back(others[i]);
    }
    std::sort(chosen.begin(), chosen.end());
    do {
      double product = 1.0;
      PropositionId at = src;
      for (const auto& v : chosen) {
        product *= weight(at, v);
        at = v;
      }
      product *= weight(at, dst);
      const double len = static_cast<double>(chosen.size() + 1);
      if (product > 0.0) total += product * std::exp(-lambda_path * len);
    } while (std::next_permutation(chosen.begin(), chosen.end()));
  }
  return total;
}

// ---- entanglement ------------------------------------------------------------

struct ClosureEntry {
  PropositionId a, b;
  ContextId context;
  auto operator<=>(const ClosureEntry&) const = default;
};

/// Seeds each locally entangled pair and spreads it upward by BFS.
inline std::set<ClosureEntry> closure_by_bfs(const std::vector<ContextDef>& defs,
                                             const std::map<std::pair<PropositionId, PropositionId>, double>& r,
                                             double tau_e) {
  std::map<ContextId, std::vector<ContextId>> up;
  for (const auto& d : defs) up[d.id] = d.within;
  std::set<ClosureEntry> out;
  for (const auto& d : defs) {
    for (std::size_t i = 0; i < d.members.size(); ++i) {
      for (std::size_t j = 0; j < d.members.size(); ++j) {
        const auto& a = d.members[i];
        const auto& b = d.members[j];
        if (!(a < b)) continue;
        auto it = r.find({a, b});
        if (it == r.end() || !(it->second > tau_e)) continue;
        std::deque<ContextId> queue{d.id};
        std::set<ContextId> seen{d.id};
        while (!queue.empty()) {
          const auto c = queue.front();
          queue.pop_front();
          out.insert({a, b, c});
          for (const auto& p : up[c]) {
            if (seen.insert(p).second) queue.push_back(p);
          }
        }
      }
    }
  }
  return out;
}

// ---- Bayes -------------------------------------------------------------------

/// Joint model: a hidden source H drawn from the priors, and for each
/// proposition an independent recall indicator with P(recall e | H = k) =
/// L(e | k). Posterior P(H = target | evidence recalled) by summing every
/// cell of the explicit joint table in exact arithmetic.
inline Rational joint_table_posterior(const std::vector<PropositionId>& members, const std::map<PropositionId, double>& prior,
                                      const std::map<std::pair<PropositionId, PropositionId>, double>& likelihood,
                                      const std::vector<PropositionId>& observed_props, const PropositionId& evidence,
                                      const PropositionId& target) {
  const std::size_t n = observed_props.size();
  Rational numerator = 0, marginal = 0;
  for (const auto& h : members) {
    for (std::uint32_t cell = 0; cell < (1u << n); ++cell) {
      Rational p = exact(prior.at(h));
      bool evidence_recalled = false;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& o = observed_props[i];
        const Rational l = exact(likelihood.at({o, h}));
        const bool on = cell & (1u << i);
        p *= on ? l : Rational(1) - l;
        if (o == evidence) evidence_recalled = on;
      }
      if (!evidence_recalled) continue;
      marginal += p;
      if (h == target) numerator += p;
    }
  }
  return marginal == 0 ? Rational(0) : numerator / marginal;
}

}  // namespace mnemosim::harness
