#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mnemosim/core.hpp"

namespace mnemosim::harness {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return uniform() < p; }
  // k / 100 for k in [lo, hi]; exact rational counterparts are easy to rebuild.
  double percent(int lo = 0, int hi = 100) { return integer(lo, hi) / 100.0; }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(integer(0, static_cast<int>(v.size()) - 1))];
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline std::vector<std::string> make_ids(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

/// Random containment DAG over `n` contexts. Context i may only sit within
/// contexts j > i, so the graph is acyclic; members of a child are drawn from
/// the intersection of its parents. The first proposition is in every
/// context, so intersections never go empty.
inline std::vector<ContextDef> random_hierarchy(Gen& g, int n, const std::vector<PropositionId>& props,
                                                double edge_p = 0.4) {
  std::vector<ContextDef> defs(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    auto& c = defs[static_cast<std::size_t>(i)];
    c.id = "C" + std::to_string(i);
    for (int j = i + 1; j < n; ++j) {
      if (g.coin(edge_p)) c.within.push_back("C" + std::to_string(j));
    }
    std::vector<PropositionId> pool = props;
    for (const auto& parent : c.within) {
      const auto& pm = defs[static_cast<std::size_t>(std::stoi(parent.substr(1)))].members;
      std::erase_if(pool, [&](const auto& p) { return std::ranges::find(pm, p) == pm.end(); });
    }
    for (const auto& p : pool) {
      if (p == props.front() || g.coin(0.7)) c.members.push_back(p);
    }
  }
  return defs;
}

/// Relation entries over every distinct pair, each present with probability
/// `density` and valued in hundredths.
inline std::vector<RelationEntry> random_relations(Gen& g, const std::vector<PropositionId>& props, double density,
                                                   int lo = 1, int hi = 100) {
  std::vector<RelationEntry> out;
  for (std::size_t i = 0; i < props.size(); ++i) {
    for (std::size_t j = i + 1; j < props.size(); ++j) {
      if (g.coin(density)) out.push_back({props[i], props[j], g.percent(lo, hi), g.percent(0, 100)});
    }
  }
  return out;
}

inline std::vector<Truth> random_series(Gen& g, int max_len) {
  std::vector<Truth> out(static_cast<std::size_t>(g.integer(0, max_len)));
  for (auto& t : out) t = static_cast<Truth>(g.integer(0, 2));
  return out;
}

/// A valid scenario exercising every schema field.
inline ScenarioConfig random_config(Gen& g) {
  ScenarioConfig c;
  const auto ids = make_ids("P", g.integer(1, 6));
  for (const auto& id : ids) {
    Proposition p;
    p.id = id;
    p.decay_constant = g.uniform(0.0, 2.0);
    p.base_latency = g.uniform(0.1, 10.0);
    p.initial_amplitude = g.uniform(0.01, 1.0);
    p.initial_phase = g.coin() ? Phase::Decayed : Phase::Unresolved;
    c.propositions.push_back(p);
  }
  if (g.coin(0.7)) c.contexts = random_hierarchy(g, g.integer(1, 5), ids);
  c.relations = random_relations(g, ids, 0.6);
  for (auto& r : c.relations) r.r = g.uniform();

  auto& p = c.params;
  p.tau = g.uniform();
  p.tau_e = g.uniform();
  p.tau_c = g.uniform();
  p.eps_h = g.uniform(0.0, 5.0);
  p.alpha_fb = g.uniform(0.0, 3.0);
  p.alpha_res = g.uniform(0.0, 3.0);
  p.beta = g.uniform(0.0, 3.0);
  p.lambda_path = g.uniform(0.0, 1.0);
  p.eps_cross = g.uniform(0.0, 0.1);
  p.tau_res = g.uniform(1.0, 1000.0);
  if (g.coin()) {
    p.environment = g.uniform(0.1, 10.0);
  } else {
    std::vector<EnvironmentPoint> schedule;
    double t = 0.0;
    for (int i = g.integer(1, 4); i > 0; --i) {
      schedule.push_back({t, g.uniform(0.1, 10.0)});
      t += g.uniform(0.5, 5.0);
    }
    p.environment = schedule;
  }
  std::vector<Modifier> all{Modifier::Relation, Modifier::Feedback, Modifier::Bayesian, Modifier::Simultaneous};
  std::shuffle(all.begin(), all.end(), g.engine());
  p.modifiers.assign(all.begin(), all.begin() + g.integer(0, 4));
  if (g.coin()) p.latency_law = {LatencyLaw::Kind::ReciprocalPower, g.uniform(0.5, 3.0)};
  p.propagation_mode = g.coin() ? PropagationMode::Literal : PropagationMode::PerEdge;
  p.optimal_sign = g.coin() ? OptimalSign::Literal : OptimalSign::Flipped;
  p.realization_duration = g.uniform(0.1, 3.0);
  p.cascade_depth = g.integer(0, 64);
  p.path_cap = g.integer(1, 1'000'000);
  p.stochastic = g.coin();
  p.propagation = g.coin();
  p.scheduling = g.coin();
  p.simultaneous_fixed_point = g.coin();

  std::vector<PropositionId> shuffled = ids;
  std::shuffle(shuffled.begin(), shuffled.end(), g.engine());
  for (std::size_t i = 0; i < shuffled.size();) {
    ChainDef chain;
    chain.id = "chain" + std::to_string(p.chains.size());
    const auto len = static_cast<std::size_t>(g.integer(1, 3));
    for (std::size_t k = 0; k < len && i < shuffled.size(); ++k) chain.members.push_back(shuffled[i++]);
    if (chain.members.size() > 1 && g.coin()) {
      double rest = 1.0;
      for (std::size_t k = 1; k + 1 < chain.members.size(); ++k) {
        chain.probabilities.push_back(rest / 2);
        rest /= 2;
      }
      chain.probabilities.push_back(rest);
    }
    p.chains.push_back(chain);
  }
  if (g.coin()) {
    BayesParams b;
    for (const auto& id : ids) {
      if (g.coin()) b.priors[id] = g.uniform();
    }
    for (int i = g.integer(0, 3); i > 0; --i) b.likelihoods.push_back({g.pick(ids), g.pick(ids), g.uniform()});
    p.bayes = b;
  }
  for (int i = g.integer(0, 2); i > 0; --i) {
    BranchSeries s;
    do {
      s.prefix = random_series(g, 4);
      s.period = random_series(g, 3);
    } while (s.prefix.empty() && s.period.empty());
    p.branches["b" + std::to_string(i)] = s;
  }

  c.horizon = g.uniform(0.0, 50.0);
  c.dt = g.uniform(0.01, 2.0);
  c.seed = g.engine()();
  for (int i = g.integer(0, 6); i > 0; --i) {
    EventDef e;
    e.time = g.uniform(0.0, c.horizon);
    const int kind = g.integer(0, 3);
    if (kind == 0) {
      e.kind = EventKind::Recall;
      e.target = g.pick(ids);
    } else if (kind == 1) {
      e.kind = EventKind::Trigger;
      e.target = g.pick(ids);
      if (!c.contexts.empty() && g.coin()) e.context = g.pick(c.contexts).id;
    } else if (kind == 2) {
      e.kind = EventKind::Environment;
      e.value = g.uniform(0.1, 10.0);
    } else if (!p.branches.empty()) {
      e.kind = EventKind::Measure;
      e.target = g.pick(ids);
      e.branch = p.branches.begin()->first;
      e.step = g.integer(0, 10);
    } else {
      e.kind = EventKind::Recall;
      e.target = g.pick(ids);
    }
    c.events.push_back(e);
  }
  return c;
}

}  // namespace mnemosim::harness
