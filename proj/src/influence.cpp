#include "mnemosim/influence.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mnemosim/decay.hpp"
#include "mnemosim/error.hpp"

namespace mnemosim {

InfluenceGraph::InfluenceGraph(std::vector<PropositionId> vertices, const WeightFn& weight, double lambda_path)
    : vertices_(std::move(vertices)), lambda_path_(lambda_path) {
  std::ranges::sort(vertices_);
  for (const auto& v : vertices_) adjacency_[v];
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
      const double w = weight(vertices_[i], vertices_[j]);
      if (!(w > 0.0)) continue;
      adjacency_[vertices_[i]].emplace_back(vertices_[j], w);
      adjacency_[vertices_[j]].emplace_back(vertices_[i], w);
    }
  }
}

double InfluenceGraph::weight(const PropositionId& a, const PropositionId& b) const {
  auto it = adjacency_.find(a);
  if (it == adjacency_.end()) return 0.0;
  for (const auto& [n, w] : it->second) {
    if (n == b) return w;
  }
  return 0.0;
}

const std::vector<std::pair<PropositionId, double>>& InfluenceGraph::neighbors(const PropositionId& p) const {
  auto it = adjacency_.find(p);
  if (it == adjacency_.end()) throw Error(ErrorCode::UnknownProposition, p);
  return it->second;
}

std::vector<PropositionId> InfluenceGraph::vertex_set(const PropositionId& src) const {
  std::vector<PropositionId> out;
  for (const auto& [n, _] : neighbors(src)) out.push_back(n);
  std::ranges::sort(out);
  return out;
}

double simultaneous_influence(double relation, Time influencer_latency) {
  if (!(influencer_latency > 0.0)) throw Error(ErrorCode::NonPositiveLatency, "influencer latency must be positive");
  return relation / influencer_latency;
}

double symmetrized_influence(double forward, double backward) { return 0.5 * (forward + backward); }

Time cumulative_latency(std::span<const double> incoming) {
  double total = 0.0;
  for (double i : incoming) total += i;
  if (!(total > 0.0)) throw Error(ErrorCode::NoIncomingInfluence, "no positive incoming influence");
  return 1.0 / total;
}

std::map<PropositionId, Time> cumulative_latency_fixed_point(const InfluenceGraph& g,
                                                             const std::map<PropositionId, Time>& initial,
                                                             double tau_e, double tolerance, int max_iterations) {
  std::map<PropositionId, Time> latency = initial;
  for (int iter = 0; iter < max_iterations; ++iter) {
    std::map<PropositionId, Time> next;
    double change = 0.0;
    for (const auto& [p, _] : latency) {
      std::vector<double> incoming;
      for (const auto& [q, w] : g.neighbors(p)) {
        auto q_it = latency.find(q);
        if (q_it == latency.end()) continue;
        double in = simultaneous_influence(w, q_it->second);
        if (w > tau_e) in = symmetrized_influence(in, simultaneous_influence(w, latency.at(p)));
        incoming.push_back(in);
      }
      next[p] = cumulative_latency(incoming);
      change = std::max(change, std::abs(next[p] - latency.at(p)));
    }
    latency = std::move(next);
    if (change < tolerance) return latency;
  }
  throw Error(ErrorCode::Divergence, "latencies did not settle within " + std::to_string(max_iterations) +
                                         " iterations");
}

double feedback(double alpha, double relation) { return alpha * relation; }

Time feedback_latency(Time base_latency, double feedback) { return base_latency / (1.0 + feedback); }

PathSum enumerate_recursive_influence(const InfluenceGraph& g, const PropositionId& src, const PropositionId& dst,
                                      std::int64_t path_cap, CapPolicy policy) {
  if (src == dst) throw Error(ErrorCode::OutOfRange, "recursive influence needs distinct endpoints");
  g.neighbors(dst);

  PathSum sum;
  std::set<PropositionId> on_path{src};
  const double length_decay = std::exp(-g.lambda_path());

  // Iterative DFS; each frame remembers the next neighbor index to try.
  struct Frame {
    PropositionId vertex;
    std::size_t next = 0;
    double product = 1.0;  // includes the length decay
    int length = 0;
  };
  std::vector<Frame> stack{{src, 0, 1.0, 0}};
  while (!stack.empty()) {
    Frame& top = stack.back();
    const auto& adj = g.neighbors(top.vertex);
    if (top.next == adj.size()) {
      on_path.erase(top.vertex);
      stack.pop_back();
      continue;
    }
    const auto& [n, w] = adj[top.next++];
    if (on_path.contains(n)) continue;
    const double product = top.product * w * length_decay;
    const int length = top.length + 1;
    if (n == dst) {
      if (length < 2) continue;
      if (sum.path_count == path_cap) {
        if (policy == CapPolicy::Throw)
          throw Error(ErrorCode::PathExplosion, "more than " + std::to_string(path_cap) + " paths");
        sum.capped = true;
        return sum;
      }
      sum.value += product;
      ++sum.path_count;
      continue;
    }
    on_path.insert(n);
    stack.push_back({n, 0, product, length});
  }
  return sum;
}

double recursive_influence(const InfluenceGraph& g, const PropositionId& src, const PropositionId& dst,
                           std::int64_t path_cap) {
  return enumerate_recursive_influence(g, src, dst, path_cap).value;
}

double total_influence(const InfluenceGraph& g, const PropositionId& src, const PropositionId& dst,
                       std::int64_t path_cap) {
  return g.weight(src, dst) + recursive_influence(g, src, dst, path_cap);
}

std::map<PropositionId, double> recall_distribution(const InfluenceGraph& g, const PropositionId& src,
                                                    std::int64_t path_cap) {
  std::map<PropositionId, double> out;
  double total = 0.0;
  for (const auto& p : g.vertex_set(src)) {
    out[p] = total_influence(g, src, p, path_cap);
    total += out[p];
  }
  if (!(total > 0.0)) throw Error(ErrorCode::ZeroTotalInfluence, "'" + src + "' influences nothing");
  for (auto& [_, v] : out) v /= total;
  return out;
}

double updated_recall_probability(const InfluenceGraph& g, const PropositionId& src, const PropositionId& dst,
                                  std::int64_t path_cap) {
  const auto dist = recall_distribution(g, src, path_cap);
  auto it = dist.find(dst);
  return it == dist.end() ? 0.0 : it->second;
}

double feedback_adjusted_raw(double p_prime, double own_feedback, double total_feedback) {
  return (p_prime + own_feedback) / (1.0 + total_feedback);
}

std::map<PropositionId, FeedbackAdjusted> feedback_adjusted_distribution(const InfluenceGraph& g,
                                                                          const PropositionId& src,
                                                                          std::int64_t path_cap) {
  const auto p_prime = recall_distribution(g, src, path_cap);
  const auto vertices = g.vertex_set(src);

  std::map<PropositionId, double> loop;
  double total_loop = 0.0;
  for (const auto& p : vertices) {
    double f = 0.0;
    for (const auto& q : vertices) {
      if (q != p) f += recursive_influence(g, q, p, path_cap);
    }
    loop[p] = f;
    total_loop += f;
  }

  std::map<PropositionId, FeedbackAdjusted> out;
  double total_raw = 0.0;
  for (const auto& p : vertices) {
    const double raw = feedback_adjusted_raw(p_prime.at(p), loop[p], total_loop);
    out[p].raw = raw;
    total_raw += raw;
  }
  for (auto& [_, v] : out) v.normalized = v.raw / total_raw;
  return out;
}

ChainPartition make_partition(std::span<const ChainDef> chains) {
  ChainPartition out;
  for (const auto& c : chains) {
    for (const auto& m : c.members) out[m] = c.id;
  }
  return out;
}

ChainInfluence chain_influence(const PropositionId& pi, const PropositionId& pj, const ChainPartition& chains,
                               double relation, double universal, double eps_cross, double tau_c) {
  auto a = chains.find(pi);
  if (a == chains.end()) throw Error(ErrorCode::UnassignedChain, pi);
  auto b = chains.find(pj);
  if (b == chains.end()) throw Error(ErrorCode::UnassignedChain, pj);
  if (a->second == b->second) return {relation, relation >= tau_c, true};
  return {eps_cross * universal, false, false};
}

Imprecision imprecision(double self_relation) {
  if (!(self_relation >= 0.0 && self_relation <= 1.0))
    throw Error(ErrorCode::OutOfRange, "self relation must lie in [0,1]");
  return {1.0 - self_relation, self_relation == 0.0};
}

Imprecision imprecision_over_time(double rate, Time t) {
  double similarity = std::exp(-rate * t);
  if (similarity < kStrengthFloor) similarity = 0.0;
  return imprecision(similarity);
}

}  // namespace mnemosim
