#include "mnemosim/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mnemosim/error.hpp"
#include "mnemosim/recall.hpp"

namespace mnemosim {

namespace {

const ScenarioConfig& validated(const ScenarioConfig& config) {
  const auto report = validate_scenario(config);
  if (!report.empty()) throw Error(ErrorCode::ValidationFailed, std::to_string(report.size()) + " problem(s) in scenario\n" + format_report(report));
  return config;
}

}  // namespace

Scenario::Scenario(ScenarioConfig config)
    : config_(std::move(validated(config))),
      registry_(config_.propositions),
      relations_(config_.relations),
      hierarchy_(config_.contexts),
      partition_(make_partition(config_.params.chains)) {
  for (const auto& p : config_.propositions) ids_.push_back(p.id);
  std::ranges::sort(ids_);
  graph_ = InfluenceGraph(
      ids_, [this](const PropositionId& a, const PropositionId& b) { return shared_relation(a, b); },
      config_.params.lambda_path);
}

double Scenario::shared_relation(const PropositionId& a, const PropositionId& b) const {
  if (hierarchy_.empty() || a == b) return relations_.get(a, b);
  return hierarchy_.share_context(a, b) ? relations_.get(a, b) : 0.0;
}

double Scenario::environment_at(Time t) const {
  if (const auto* scalar = std::get_if<double>(&config_.params.environment)) return *scalar;
  const auto& schedule = std::get<std::vector<EnvironmentPoint>>(config_.params.environment);
  double value = schedule.front().value;
  for (const auto& point : schedule) {
    if (point.time <= t) value = point.value;
  }
  return value;
}

BeliefTable Scenario::belief_table() const {
  const auto& bayes = config_.params.bayes;
  return BeliefTable::from_scenario(ids_, relations_, bayes ? &*bayes : nullptr);
}

std::vector<PropositionId> Scenario::candidates_for(const PropositionId& evidence) const {
  std::vector<PropositionId> out;
  std::ranges::copy_if(ids_, std::back_inserter(out), [&](const auto& p) { return p != evidence; });
  return out;
}

namespace {

Time simultaneous_latency(const Scenario& scenario, const PropositionId& target, double environment) {
  const auto& params = scenario.params();
  auto base = [&](const PropositionId& p) {
    return base_environment_latency(scenario.registry().lookup(p).base_latency, environment);
  };

  if (params.simultaneous_fixed_point) {
    std::map<PropositionId, Time> initial;
    for (const auto& p : scenario.ids()) {
      if (!scenario.graph().neighbors(p).empty()) initial[p] = base(p);
    }
    if (!initial.contains(target)) return kInfiniteLatency;
    return cumulative_latency_fixed_point(scenario.graph(), initial, params.tau_e).at(target);
  }

  std::vector<double> incoming;
  for (const auto& [q, w] : scenario.graph().neighbors(target)) {
    double in = simultaneous_influence(w, base(q));
    if (w > params.tau_e) in = symmetrized_influence(in, simultaneous_influence(w, base(target)));
    incoming.push_back(in);
  }
  try {
    return cumulative_latency(incoming);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoIncomingInfluence) return kInfiniteLatency;
    throw;
  }
}

}  // namespace

LatencyResult resolve_latency(const Scenario& scenario, const LatencyQuery& query) {
  const auto& params = scenario.params();
  const auto& target = scenario.registry().lookup(query.target);
  if (query.anchor) scenario.registry().lookup(*query.anchor);

  LatencyResult result;
  result.target = query.target;
  result.anchor = query.anchor;
  result.environment = query.environment;

  Time t = base_environment_latency(target.base_latency, query.environment);
  result.pipeline.push_back({"base", t});

  auto anchor = [&](Modifier m) -> const PropositionId& {
    if (!query.anchor)
      throw Error(ErrorCode::MissingAnchor, std::string(to_string(m)) + " modifier needs an anchor proposition");
    return *query.anchor;
  };

  for (Modifier m : query.modifiers) {
    switch (m) {
      case Modifier::Relation: {
        const double r = scenario.shared_relation(query.target, anchor(m));
        t = law_latency(params.latency_law, r, query.environment);
        break;
      }
      case Modifier::Feedback: {
        const double f =
            query.feedback.value_or(feedback(params.alpha_fb, scenario.shared_relation(anchor(m), query.target)));
        t = t / (1.0 + f);
        break;
      }
      case Modifier::Bayesian: {
        double posterior = 0.0;
        if (query.posterior) {
          posterior = *query.posterior;
        } else {
          const auto members = scenario.candidates_for(anchor(m));
          try {
            posterior = posterior_over_context(scenario.belief_table(), *query.anchor, query.target, members);
          } catch (const Error& e) {
            if (e.code() != ErrorCode::ZeroMarginal) throw;
          }
        }
        t = posterior > 0.0 ? t / posterior : kInfiniteLatency;
        break;
      }
      case Modifier::Simultaneous:
        t = simultaneous_latency(scenario, query.target, query.environment);
        break;
    }
    result.pipeline.push_back({std::string(to_string(m)), t});
  }
  result.latency = t;
  return result;
}

std::vector<ChainSummary> chain_summaries(const Scenario& scenario, const std::vector<Modifier>& modifiers,
                                          double environment) {
  std::vector<ChainSummary> out;
  for (const auto& chain : scenario.params().chains) {
    if (chain.members.size() < 2) continue;
    const auto& anchor = chain.members.front();

    std::vector<Time> latencies;
    for (std::size_t i = 1; i < chain.members.size(); ++i) {
      LatencyQuery q;
      q.target = chain.members[i];
      q.anchor = anchor;
      q.environment = environment;
      q.modifiers = modifiers;
      latencies.push_back(resolve_latency(scenario, q).latency);
    }

    std::vector<double> p = chain.probabilities;
    if (p.empty()) {
      for (Time t : latencies) p.push_back(std::isinf(t) ? 0.0 : 1.0 / t);
      const double total = std::accumulate(p.begin(), p.end(), 0.0);
      if (!(total > 0.0))
        throw Error(ErrorCode::InsufficientData, "chain '" + chain.id + "' has no finite latency");
      for (double& v : p) v /= total;
    }

    ChainSummary s;
    s.chain_id = chain.id;
    s.entropy_bits = chain_entropy(p);
    s.efficiency = recall_efficiency(s.entropy_bits);
    s.mean_latency = std::accumulate(latencies.begin(), latencies.end(), 0.0) / static_cast<double>(latencies.size());
    out.push_back(s);
  }
  return out;
}

}  // namespace mnemosim
