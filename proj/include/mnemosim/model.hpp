#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mnemosim/bayes.hpp"
#include "mnemosim/core.hpp"
#include "mnemosim/hierarchy.hpp"
#include "mnemosim/influence.hpp"
#include "mnemosim/metrics.hpp"

namespace mnemosim {

/// A validated scenario with its derived structures: registry, relation
/// matrix, context DAG, influence graph and chain partition. Immutable.
class Scenario {
 public:
  /// Throws ValidationFailed (with the formatted report) on invalid input.
  explicit Scenario(ScenarioConfig config);

  const ScenarioConfig& config() const { return config_; }
  const Params& params() const { return config_.params; }
  const Registry& registry() const { return registry_; }
  const RelationMatrix& relations() const { return relations_; }
  const ContextHierarchy& hierarchy() const { return hierarchy_; }
  const InfluenceGraph& graph() const { return graph_; }
  const ChainPartition& partition() const { return partition_; }
  const std::vector<PropositionId>& ids() const { return ids_; }

  /// R_C between two propositions: R when some context holds both (or the
  /// scenario declares no contexts at all), otherwise 0.
  double shared_relation(const PropositionId& a, const PropositionId& b) const;

  /// Environment value in force at time t.
  double environment_at(Time t) const;

  /// Scenario belief table (uniform priors, likelihood = R unless overridden).
  BeliefTable belief_table() const;

  /// Every proposition except `evidence`: the candidate set for posteriors
  /// conditioned on a recall of `evidence`.
  std::vector<PropositionId> candidates_for(const PropositionId& evidence) const;

 private:
  ScenarioConfig config_;
  Registry registry_;
  RelationMatrix relations_;
  ContextHierarchy hierarchy_;
  InfluenceGraph graph_;
  ChainPartition partition_;
  std::vector<PropositionId> ids_;
};

struct LatencyQuery {
  PropositionId target;
  std::optional<PropositionId> anchor;
  double environment = 1.0;
  std::vector<Modifier> modifiers;
  // Accumulated feedback F from the anchor; default alpha_fb * R_C.
  std::optional<double> feedback;
  // Posterior P(target | anchor); default from the scenario belief table.
  std::optional<double> posterior;
};

struct LatencyStage {
  std::string stage;
  Time value = 0.0;
};

struct LatencyResult {
  PropositionId target;
  std::optional<PropositionId> anchor;
  double environment = 1.0;
  Time latency = 0.0;
  std::vector<LatencyStage> pipeline;
};

/// Runs the modifier pipeline: start at T_B / E, then apply each modifier in
/// order. Relation replaces the value with the relation law, Feedback
/// divides by (1 + F), Bayesian divides by the posterior, Simultaneous
/// replaces it with the cumulative-influence latency. Throws MissingAnchor
/// when a modifier needs an anchor and none is given.
LatencyResult resolve_latency(const Scenario& scenario, const LatencyQuery& query);

/// Per-chain entropy/efficiency/mean-latency rows. The first chain member is
/// the anchor; the remaining members carry the chain's recall distribution,
/// explicit or derived from recall rates 1/T_R. Chains with a single
/// member are skipped.
std::vector<ChainSummary> chain_summaries(const Scenario& scenario, const std::vector<Modifier>& modifiers,
                                          double environment);

}  // namespace mnemosim
