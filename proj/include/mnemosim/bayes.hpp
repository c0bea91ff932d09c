#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "mnemosim/core.hpp"
#include "mnemosim/decay.hpp"

namespace mnemosim {

class RelationMatrix;

/// Priors P(p) and likelihoods P(of | given). Evidence is always derived
/// from these on demand.
class BeliefTable {
 public:
  BeliefTable() = default;

  /// Scenario defaults: uniform priors over `props`, likelihood(of | given)
  /// = R(of, given), then explicit overrides from `params`.
  static BeliefTable from_scenario(std::span<const PropositionId> props, const RelationMatrix& relations,
                                   const BayesParams* params);

  void set_prior(const PropositionId& p, double prior) { priors_[p] = prior; }
  void set_likelihood(const PropositionId& of, const PropositionId& given, double p) { likelihoods_[{of, given}] = p; }

  double prior(const PropositionId& p) const;
  double likelihood(const PropositionId& of, const PropositionId& given) const;
  const std::map<PropositionId, double>& priors() const { return priors_; }
  std::vector<PropositionId> propositions() const;

  int iterations() const { return iterations_; }
  void bump_iterations() { ++iterations_; }

 private:
  std::map<PropositionId, double> priors_;
  std::map<std::pair<PropositionId, PropositionId>, double> likelihoods_;
  int iterations_ = 0;
};

struct Conditional {
  double value = 0.0;
  bool clamped = false;  // inputs were incoherent and the ratio left [0,1]
};

/// likelihood * prior / evidence clamped to [0,1]. Throws ZeroEvidence.
Conditional bayes_conditional(double likelihood, double prior, double evidence);

/// Posterior of every context member given that `evidence` was recalled:
/// L(evidence | p) P(p) / sum_k L(evidence | k) P(k).
/// Throws EmptyContext or ZeroMarginal.
std::map<PropositionId, double> posterior_distribution(const BeliefTable& table, const PropositionId& evidence,
                                                       std::span<const PropositionId> members);

double posterior_over_context(const BeliefTable& table, const PropositionId& evidence, const PropositionId& target,
                              std::span<const PropositionId> members);

/// Repeated recall of `evidence`: each round computes the posterior of
/// `target`, makes it the target's prior, and rescales the other members'
/// priors to share the remaining mass. Returns P(1)..P(n).
std::vector<double> iterate_recall_update(BeliefTable& table, const PropositionId& evidence,
                                          const PropositionId& target, std::span<const PropositionId> members,
                                          int iterations);

/// T_B / posterior. Throws ZeroPosterior.
Time bayesian_latency(Time base_latency, double posterior);

/// posterior * exp(-rate * (t - t_r)).
double bayesian_decay(double posterior, double rate, Time t, Time t_r);

}  // namespace mnemosim
