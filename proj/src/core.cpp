#include "mnemosim/core.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "mnemosim/error.hpp"

namespace mnemosim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownProposition: return "UnknownProposition";
    case ErrorCode::UnknownContext: return "UnknownContext";
    case ErrorCode::UnknownBranch: return "UnknownBranch";
    case ErrorCode::EmptyTrace: return "EmptyTrace";
    case ErrorCode::InvalidTrace: return "InvalidTrace";
    case ErrorCode::NotLasso: return "NotLasso";
    case ErrorCode::StepOutOfRange: return "StepOutOfRange";
    case ErrorCode::TimeBeforeCurveStart: return "TimeBeforeCurveStart";
    case ErrorCode::NotDecayed: return "NotDecayed";
    case ErrorCode::NonMonotoneTime: return "NonMonotoneTime";
    case ErrorCode::PathExplosion: return "PathExplosion";
    case ErrorCode::NotContained: return "NotContained";
    case ErrorCode::NonPositiveInput: return "NonPositiveInput";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::UnresolvedLatency: return "UnresolvedLatency";
    case ErrorCode::NonPositiveLatency: return "NonPositiveLatency";
    case ErrorCode::NoIncomingInfluence: return "NoIncomingInfluence";
    case ErrorCode::Divergence: return "Divergence";
    case ErrorCode::ZeroTotalInfluence: return "ZeroTotalInfluence";
    case ErrorCode::UnassignedChain: return "UnassignedChain";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ZeroEvidence: return "ZeroEvidence";
    case ErrorCode::ZeroMarginal: return "ZeroMarginal";
    case ErrorCode::EmptyContext: return "EmptyContext";
    case ErrorCode::ZeroPosterior: return "ZeroPosterior";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::NegativeEntropy: return "NegativeEntropy";
    case ErrorCode::EmptyChain: return "EmptyChain";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::EventHorizonExceeded: return "EventHorizonExceeded";
    case ErrorCode::ClockRegression: return "ClockRegression";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingAnchor: return "MissingAnchor";
  }
  return "Unknown";
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Realized: return "realized";
    case Phase::Decayed: return "decayed";
    case Phase::Unresolved: return "unresolved";
  }
  return "unresolved";
}

std::string_view to_string(Modifier modifier) {
  switch (modifier) {
    case Modifier::Relation: return "relation";
    case Modifier::Feedback: return "feedback";
    case Modifier::Bayesian: return "bayesian";
    case Modifier::Simultaneous: return "simultaneous";
  }
  return "relation";
}

std::optional<Modifier> parse_modifier(std::string_view text) {
  if (text == "relation") return Modifier::Relation;
  if (text == "feedback") return Modifier::Feedback;
  if (text == "bayesian") return Modifier::Bayesian;
  if (text == "simultaneous") return Modifier::Simultaneous;
  return std::nullopt;
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Recall: return "recall";
    case EventKind::Trigger: return "trigger";
    case EventKind::Environment: return "environment";
    case EventKind::Measure: return "measure";
  }
  return "recall";
}

namespace {

class Checker {
 public:
  explicit Checker(ValidationReport& report) : report_(report) {}

  void fail(std::string field, std::string message) {
    report_.push_back({std::move(field), std::move(message)});
  }

  void threshold(const std::string& field, double v) {
    if (!(v >= 0.0 && v <= 1.0)) fail(field, "threshold out of [0,1]");
  }
  void coefficient(const std::string& field, double v) {
    if (!(std::isfinite(v) && v >= 0.0)) fail(field, "coefficient must be finite and >= 0");
  }
  void probability(const std::string& field, double v) {
    if (!(v >= 0.0 && v <= 1.0)) fail(field, "probability out of [0,1]");
  }
  void positive(const std::string& field, double v, std::string_view what) {
    if (!(std::isfinite(v) && v > 0.0)) fail(field, std::string(what) + " must be positive");
  }

 private:
  ValidationReport& report_;
};

std::string at(std::string_view base, std::size_t i) {
  return std::string(base) + "[" + std::to_string(i) + "]";
}

// Returns true when the containment graph has a cycle reachable from any node.
bool has_cycle(const std::map<std::string, std::vector<std::string>>& parents) {
  enum class Mark { White, Grey, Black };
  std::map<std::string, Mark> mark;
  for (const auto& [id, _] : parents) mark[id] = Mark::White;

  for (const auto& [root, _] : parents) {
    if (mark[root] != Mark::White) continue;
    std::vector<std::pair<std::string, std::size_t>> stack{{root, 0}};
    mark[root] = Mark::Grey;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const auto& out = parents.at(node);
      if (next == out.size()) {
        mark[node] = Mark::Black;
        stack.pop_back();
        continue;
      }
      const std::string child = out[next++];
      auto it = mark.find(child);
      if (it == mark.end()) continue;
      if (it->second == Mark::Grey) return true;
      if (it->second == Mark::White) {
        it->second = Mark::Grey;
        stack.emplace_back(child, 0);
      }
    }
  }
  return false;
}

void validate_series(Checker& check, const std::string& field, const BranchSeries& s) {
  if (s.prefix.empty() && s.period.empty()) check.fail(field, "branch series must be non-empty");
}

}  // namespace

ValidationReport validate_scenario(const ScenarioConfig& config) {
  ValidationReport report;
  Checker check(report);

  std::set<std::string> props;
  for (std::size_t i = 0; i < config.propositions.size(); ++i) {
    const auto& p = config.propositions[i];
    const auto base = at("propositions", i);
    if (p.id.empty()) check.fail(base + ".id", "id must be non-empty");
    if (!props.insert(p.id).second) check.fail(base + ".id", "duplicate proposition id '" + p.id + "'");
    check.coefficient(base + ".decay_constant", p.decay_constant);
    check.positive(base + ".base_latency", p.base_latency, "base latency");
    if (!(p.initial_amplitude > 0.0 && p.initial_amplitude <= 1.0))
      check.fail(base + ".initial_amplitude", "amplitude out of (0,1]");
    if (p.initial_phase == Phase::Realized)
      check.fail(base + ".initial", "initial phase must be unresolved or decayed");
  }

  std::map<std::string, std::vector<std::string>> parents;
  std::map<std::string, std::set<std::string>> members;
  for (std::size_t i = 0; i < config.contexts.size(); ++i) {
    const auto& c = config.contexts[i];
    const auto base = at("contexts", i);
    if (c.id.empty()) check.fail(base + ".id", "id must be non-empty");
    if (parents.contains(c.id)) check.fail(base + ".id", "duplicate context id '" + c.id + "'");
    parents[c.id] = c.within;
    auto& set = members[c.id];
    for (std::size_t j = 0; j < c.members.size(); ++j) {
      if (!props.contains(c.members[j]))
        check.fail(at(base + ".members", j), "unknown proposition '" + c.members[j] + "'");
      if (!set.insert(c.members[j]).second)
        check.fail(at(base + ".members", j), "duplicate member '" + c.members[j] + "'");
    }
  }
  for (std::size_t i = 0; i < config.contexts.size(); ++i) {
    const auto& c = config.contexts[i];
    const auto base = at("contexts", i);
    for (std::size_t j = 0; j < c.within.size(); ++j) {
      const auto& parent = c.within[j];
      if (!members.contains(parent)) {
        check.fail(at(base + ".within", j), "unknown context '" + parent + "'");
        continue;
      }
      for (const auto& m : c.members) {
        if (!members[parent].contains(m))
          check.fail(at(base + ".within", j),
                     "member '" + m + "' of '" + c.id + "' missing from containing context '" + parent + "'");
      }
    }
  }
  if (has_cycle(parents)) check.fail("contexts", "context containment must be acyclic");

  std::set<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < config.relations.size(); ++i) {
    const auto& r = config.relations[i];
    const auto base = at("relations", i);
    if (!props.contains(r.a)) check.fail(base + ".a", "unknown proposition '" + r.a + "'");
    if (!props.contains(r.b)) check.fail(base + ".b", "unknown proposition '" + r.b + "'");
    if (r.a == r.b) check.fail(base, "self relation is fixed at 1 and cannot be declared");
    check.probability(base + ".r", r.r);
    check.probability(base + ".r_u", r.r_u);
    auto key = std::minmax(r.a, r.b);
    if (!pairs.insert({key.first, key.second}).second) check.fail(base, "duplicate relation pair");
  }

  const auto& p = config.params;
  check.threshold("params.tau", p.tau);
  check.threshold("params.tau_e", p.tau_e);
  check.threshold("params.tau_c", p.tau_c);
  check.coefficient("params.eps_h", p.eps_h);
  check.coefficient("params.alpha_fb", p.alpha_fb);
  check.coefficient("params.alpha_res", p.alpha_res);
  check.coefficient("params.beta", p.beta);
  check.coefficient("params.lambda_path", p.lambda_path);
  check.coefficient("params.eps_cross", p.eps_cross);
  check.coefficient("params.tau_res", p.tau_res);
  if (p.eps_cross > 0.1) check.fail("params.eps_cross", "cross-chain subtlety must be <= 0.1");

  if (const auto* scalar = std::get_if<double>(&p.environment)) {
    check.positive("params.environment", *scalar, "environment");
  } else {
    const auto& schedule = std::get<std::vector<EnvironmentPoint>>(p.environment);
    if (schedule.empty()) check.fail("params.environment", "schedule must be non-empty");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      check.positive(at("params.environment", i) + ".value", schedule[i].value, "environment");
      if (!(std::isfinite(schedule[i].time) && schedule[i].time >= 0.0))
        check.fail(at("params.environment", i) + ".time", "time must be finite and >= 0");
      if (i > 0 && !(schedule[i].time > schedule[i - 1].time))
        check.fail(at("params.environment", i) + ".time", "schedule times must be strictly ascending");
    }
  }

  std::set<Modifier> seen_modifiers;
  for (std::size_t i = 0; i < p.modifiers.size(); ++i) {
    if (!seen_modifiers.insert(p.modifiers[i]).second)
      check.fail(at("params.modifiers", i), "duplicate modifier");
  }
  check.positive("params.latency_law.exponent", p.latency_law.exponent, "exponent");
  check.positive("params.realization_duration", p.realization_duration, "realization duration");
  if (p.cascade_depth < 0) check.fail("params.cascade_depth", "cascade depth must be >= 0");
  if (p.path_cap < 1) check.fail("params.path_cap", "path cap must be >= 1");

  std::set<std::string> chain_ids;
  std::set<std::string> chained;
  for (std::size_t i = 0; i < p.chains.size(); ++i) {
    const auto& c = p.chains[i];
    const auto base = at("params.chains", i);
    if (!chain_ids.insert(c.id).second) check.fail(base + ".id", "duplicate chain id '" + c.id + "'");
    if (c.members.empty()) check.fail(base + ".members", "chain must be non-empty");
    for (std::size_t j = 0; j < c.members.size(); ++j) {
      if (!props.contains(c.members[j]))
        check.fail(at(base + ".members", j), "unknown proposition '" + c.members[j] + "'");
      if (!chained.insert(c.members[j]).second)
        check.fail(at(base + ".members", j), "proposition '" + c.members[j] + "' assigned to two chains");
    }
    if (!c.probabilities.empty()) {
      if (c.probabilities.size() + 1 != c.members.size())
        check.fail(base + ".probabilities", "expected one probability per non-anchor member");
      double total = 0.0;
      for (std::size_t j = 0; j < c.probabilities.size(); ++j) {
        check.probability(at(base + ".probabilities", j), c.probabilities[j]);
        total += c.probabilities[j];
      }
      if (std::abs(total - 1.0) > 1e-9) check.fail(base + ".probabilities", "probabilities must sum to 1");
    }
  }

  if (p.bayes) {
    for (const auto& [id, prior] : p.bayes->priors) {
      const auto field = "params.bayes.priors." + id;
      if (!props.contains(id)) check.fail(field, "unknown proposition '" + id + "'");
      check.probability(field, prior);
    }
    for (std::size_t i = 0; i < p.bayes->likelihoods.size(); ++i) {
      const auto& l = p.bayes->likelihoods[i];
      const auto base = at("params.bayes.likelihoods", i);
      if (!props.contains(l.of)) check.fail(base + ".of", "unknown proposition '" + l.of + "'");
      if (!props.contains(l.given)) check.fail(base + ".given", "unknown proposition '" + l.given + "'");
      check.probability(base + ".p", l.p);
    }
  }

  for (const auto& [id, series] : p.branches) validate_series(check, "params.branches." + id, series);

  for (std::size_t i = 0; i < config.events.size(); ++i) {
    const auto& e = config.events[i];
    const auto base = at("events", i);
    if (!(std::isfinite(e.time) && e.time >= 0.0)) check.fail(base + ".time", "time must be finite and >= 0");
    const bool needs_target = e.kind != EventKind::Environment;
    if (needs_target && !props.contains(e.target))
      check.fail(base + ".target", "unknown proposition '" + e.target + "'");
    if (e.kind == EventKind::Trigger && e.context && !members.contains(*e.context))
      check.fail(base + ".context", "unknown context '" + *e.context + "'");
    if (e.kind == EventKind::Environment) check.positive(base + ".value", e.value, "environment");
    if (e.kind == EventKind::Measure) {
      if (!p.branches.contains(e.branch)) check.fail(base + ".branch", "unknown branch '" + e.branch + "'");
      if (e.step < 0) check.fail(base + ".step", "step must be >= 0");
    }
  }

  if (!(std::isfinite(config.horizon) && config.horizon >= 0.0))
    check.fail("horizon", "horizon must be finite and >= 0");
  if (!(std::isfinite(config.dt) && config.dt > 0.0)) check.fail("dt", "dt must be positive");

  return report;
}

std::string format_report(const ValidationReport& report) {
  std::ostringstream out;
  for (const auto& v : report) out << v.field << ": " << v.message << "\n";
  return out.str();
}

Registry::Registry(std::span<const Proposition> propositions)
    : propositions_(propositions.begin(), propositions.end()) {
  for (std::size_t i = 0; i < propositions_.size(); ++i) {
    if (!index_.emplace(propositions_[i].id, i).second)
      throw Error(ErrorCode::ValidationFailed, "duplicate proposition id '" + propositions_[i].id + "'");
  }
}

const Proposition& Registry::lookup(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) throw Error(ErrorCode::UnknownProposition, std::string(id));
  return propositions_[it->second];
}

bool Registry::contains(std::string_view id) const { return index_.contains(std::string(id)); }

}  // namespace mnemosim
