#include "mnemosim/bayes.hpp"

#include <algorithm>

#include "mnemosim/error.hpp"
#include "mnemosim/hierarchy.hpp"

namespace mnemosim {

BeliefTable BeliefTable::from_scenario(std::span<const PropositionId> props, const RelationMatrix& relations,
                                       const BayesParams* params) {
  BeliefTable table;
  const double uniform = props.empty() ? 0.0 : 1.0 / static_cast<double>(props.size());
  for (const auto& p : props) table.set_prior(p, uniform);
  for (const auto& of : props) {
    for (const auto& given : props) table.set_likelihood(of, given, relations.get(of, given));
  }
  if (params) {
    for (const auto& [p, prior] : params->priors) table.set_prior(p, prior);
    for (const auto& l : params->likelihoods) table.set_likelihood(l.of, l.given, l.p);
  }
  return table;
}

double BeliefTable::prior(const PropositionId& p) const {
  auto it = priors_.find(p);
  return it == priors_.end() ? 0.0 : it->second;
}

double BeliefTable::likelihood(const PropositionId& of, const PropositionId& given) const {
  auto it = likelihoods_.find({of, given});
  return it == likelihoods_.end() ? 0.0 : it->second;
}

std::vector<PropositionId> BeliefTable::propositions() const {
  std::vector<PropositionId> out;
  for (const auto& [p, _] : priors_) out.push_back(p);
  return out;
}

Conditional bayes_conditional(double likelihood, double prior, double evidence) {
  if (!(evidence > 0.0)) throw Error(ErrorCode::ZeroEvidence, "evidence must be positive");
  const double raw = likelihood * prior / evidence;
  const double value = std::clamp(raw, 0.0, 1.0);
  return {value, value != raw};
}

std::map<PropositionId, double> posterior_distribution(const BeliefTable& table, const PropositionId& evidence,
                                                       std::span<const PropositionId> members) {
  if (members.empty()) throw Error(ErrorCode::EmptyContext, "context has no members");
  std::map<PropositionId, double> joint;
  double marginal = 0.0;
  for (const auto& k : members) {
    joint[k] = table.likelihood(evidence, k) * table.prior(k);
    marginal += joint[k];
  }
  if (!(marginal > 0.0)) throw Error(ErrorCode::ZeroMarginal, "context marginal of '" + evidence + "' is zero");
  for (auto& [_, v] : joint) v /= marginal;
  return joint;
}

double posterior_over_context(const BeliefTable& table, const PropositionId& evidence, const PropositionId& target,
                              std::span<const PropositionId> members) {
  const auto dist = posterior_distribution(table, evidence, members);
  auto it = dist.find(target);
  if (it == dist.end()) throw Error(ErrorCode::UnknownProposition, "'" + target + "' is not a context member");
  return it->second;
}

std::vector<double> iterate_recall_update(BeliefTable& table, const PropositionId& evidence,
                                          const PropositionId& target, std::span<const PropositionId> members,
                                          int iterations) {
  std::vector<double> sequence;
  sequence.reserve(static_cast<std::size_t>(std::max(iterations, 0)));
  for (int n = 0; n < iterations; ++n) {
    const double post = posterior_over_context(table, evidence, target, members);
    double others = 0.0;
    for (const auto& k : members) {
      if (k != target) others += table.prior(k);
    }
    const double scale = others > 0.0 ? (1.0 - post) / others : 0.0;
    for (const auto& k : members) {
      if (k != target) table.set_prior(k, table.prior(k) * scale);
    }
    table.set_prior(target, post);
    table.bump_iterations();
    sequence.push_back(post);
  }
  return sequence;
}

Time bayesian_latency(Time base_latency, double posterior) {
  if (!(posterior > 0.0)) throw Error(ErrorCode::ZeroPosterior, "posterior must be positive");
  return base_latency / posterior;
}

double bayesian_decay(double posterior, double rate, Time t, Time t_r) {
  return strength(DecayCurve::bayesian(posterior, rate, t_r), t);
}

}  // namespace mnemosim
