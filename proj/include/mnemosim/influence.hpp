#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mnemosim/core.hpp"

namespace mnemosim {

/// Undirected influence network over propositions. Edges carry the
/// positive relation weight R_C in (0,1]; traversal direction gives the
/// direction of influence.
class InfluenceGraph {
 public:
  using WeightFn = std::function<double(const PropositionId&, const PropositionId&)>;

  InfluenceGraph() = default;
  /// Adds an edge for every distinct pair with weight(a, b) > 0.
  InfluenceGraph(std::vector<PropositionId> vertices, const WeightFn& weight, double lambda_path = 0.0);

  const std::vector<PropositionId>& vertices() const { return vertices_; }
  double weight(const PropositionId& a, const PropositionId& b) const;
  const std::vector<std::pair<PropositionId, double>>& neighbors(const PropositionId& p) const;
  double lambda_path() const { return lambda_path_; }

  /// Vertex set of the network seen from src: every p != src with R_C(src, p) > 0.
  std::vector<PropositionId> vertex_set(const PropositionId& src) const;

 private:
  std::vector<PropositionId> vertices_;
  std::map<PropositionId, std::vector<std::pair<PropositionId, double>>> adjacency_;
  double lambda_path_ = 0.0;
};

/// R_C / T_R(influencer). Throws NonPositiveLatency.
double simultaneous_influence(double relation, Time influencer_latency);

/// Arithmetic mean of both directions, reported for entangled pairs.
double symmetrized_influence(double forward, double backward);

/// 1 / sum of incoming influences. Throws NoIncomingInfluence when the sum is not positive.
Time cumulative_latency(std::span<const double> incoming);

/// Iterates latencies -> influences -> latencies until the largest change is
/// below `tolerance` or `max_iterations` pass (then throws Divergence).
/// Pairs whose relation exceeds `tau_e` use symmetrized influence.
std::map<PropositionId, Time> cumulative_latency_fixed_point(const InfluenceGraph& g,
                                                             const std::map<PropositionId, Time>& initial,
                                                             double tau_e, double tolerance = 1e-9,
                                                             int max_iterations = 100);

/// F = alpha * R_C.
double feedback(double alpha, double relation);

/// T_B / (1 + F).
Time feedback_latency(Time base_latency, double feedback);

enum class CapPolicy { Throw, Truncate };

struct PathSum {
  double value = 0.0;
  std::int64_t path_count = 0;
  bool capped = false;
};

/// Sum over simple paths of length >= 2 from src to dst of the product of
/// edge weights times exp(-lambda_path * length). The direct edge is the
/// separate direct term of total_influence.
PathSum enumerate_recursive_influence(const InfluenceGraph& g, const PropositionId& src, const PropositionId& dst,
                                      std::int64_t path_cap = 1'000'000, CapPolicy policy = CapPolicy::Throw);

double recursive_influence(const InfluenceGraph& g, const PropositionId& src, const PropositionId& dst,
                           std::int64_t path_cap = 1'000'000);

/// Direct R_C(src, dst) plus the recursive term.
double total_influence(const InfluenceGraph& g, const PropositionId& src, const PropositionId& dst,
                       std::int64_t path_cap = 1'000'000);

/// Normalized total influence over the vertex set of src. Throws ZeroTotalInfluence.
std::map<PropositionId, double> recall_distribution(const InfluenceGraph& g, const PropositionId& src,
                                                    std::int64_t path_cap = 1'000'000);

/// Entry of recall_distribution; 0 for propositions outside the vertex set.
double updated_recall_probability(const InfluenceGraph& g, const PropositionId& src, const PropositionId& dst,
                                  std::int64_t path_cap = 1'000'000);

/// (P' + own F_R) / (1 + total F_R).
double feedback_adjusted_raw(double p_prime, double own_feedback, double total_feedback);

struct FeedbackAdjusted {
  double raw = 0.0;
  double normalized = 0.0;
};

/// Feedback-adjusted recall distribution over the vertex set of src, where
/// F_R(p) sums the recursive influence of every other vertex on p.
std::map<PropositionId, FeedbackAdjusted> feedback_adjusted_distribution(const InfluenceGraph& g,
                                                                          const PropositionId& src,
                                                                          std::int64_t path_cap = 1'000'000);

/// Explicit proposition -> chain assignment.
using ChainPartition = std::map<PropositionId, std::string>;

ChainPartition make_partition(std::span<const ChainDef> chains);

struct ChainInfluence {
  double influence = 0.0;
  bool causal = false;
  bool same_chain = false;
};

/// Same chain: (R_C, influence >= tau_c). Different chains:
/// (eps_cross * R_U, non-causal). Throws UnassignedChain.
ChainInfluence chain_influence(const PropositionId& pi, const PropositionId& pj, const ChainPartition& chains,
                               double relation, double universal, double eps_cross, double tau_c);

struct Imprecision {
  double delta = 0.0;
  bool numb = false;  // self-similarity vanished: the state is {P_m, bottom}
};

/// delta = 1 - R_C(p, p'). Throws OutOfRange outside [0,1].
Imprecision imprecision(double self_relation);

/// Imprecision with self-similarity exp(-rate * t).
Imprecision imprecision_over_time(double rate, Time t);

}  // namespace mnemosim
