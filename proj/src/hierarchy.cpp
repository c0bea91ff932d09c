#include "mnemosim/hierarchy.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "mnemosim/error.hpp"

namespace mnemosim {

RelationMatrix::RelationMatrix(std::span<const RelationEntry> entries) {
  for (const auto& e : entries) set(e.a, e.b, e.r, e.r_u);
}

RelationMatrix::Key RelationMatrix::key(const PropositionId& a, const PropositionId& b) {
  return a < b ? Key{a, b} : Key{b, a};
}

void RelationMatrix::set(const PropositionId& a, const PropositionId& b, double r, double r_u) {
  relation_[key(a, b)] = r;
  universal_[key(a, b)] = r_u;
}

double RelationMatrix::get(const PropositionId& a, const PropositionId& b) const {
  if (a == b) return 1.0;
  auto it = relation_.find(key(a, b));
  return it == relation_.end() ? 0.0 : it->second;
}

double RelationMatrix::universal(const PropositionId& a, const PropositionId& b) const {
  if (a == b) return 1.0;
  auto it = universal_.find(key(a, b));
  return it == universal_.end() ? 0.0 : it->second;
}

ContextHierarchy::ContextHierarchy(std::span<const ContextDef> contexts) {
  for (const auto& c : contexts) {
    auto [it, inserted] = nodes_.emplace(c.id, Node{{c.members.begin(), c.members.end()}, c.within});
    if (!inserted) throw Error(ErrorCode::ValidationFailed, "duplicate context '" + c.id + "'");
  }
  for (const auto& [id, n] : nodes_) {
    for (const auto& parent : n.parents) {
      auto it = nodes_.find(parent);
      if (it == nodes_.end()) throw Error(ErrorCode::ValidationFailed, "unknown context '" + parent + "'");
      if (!std::ranges::includes(it->second.members, n.members))
        throw Error(ErrorCode::ValidationFailed, "context '" + id + "' is not a subset of '" + parent + "'");
    }
  }
  for (const auto& [id, _] : nodes_) {
    if (ancestors(id).contains(id)) throw Error(ErrorCode::ValidationFailed, "containment cycle through '" + id + "'");
  }
}

const ContextHierarchy::Node& ContextHierarchy::node(const ContextId& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(ErrorCode::UnknownContext, id);
  return it->second;
}

const std::set<PropositionId>& ContextHierarchy::members(const ContextId& id) const { return node(id).members; }

const std::vector<ContextId>& ContextHierarchy::parents(const ContextId& id) const { return node(id).parents; }

std::vector<ContextId> ContextHierarchy::ids() const {
  std::vector<ContextId> out;
  for (const auto& [id, _] : nodes_) out.push_back(id);
  return out;
}

std::set<ContextId> ContextHierarchy::ancestors(const ContextId& id) const {
  std::set<ContextId> seen;
  std::deque<ContextId> queue(node(id).parents.begin(), node(id).parents.end());
  while (!queue.empty()) {
    auto c = std::move(queue.front());
    queue.pop_front();
    if (!seen.insert(c).second) continue;
    for (const auto& p : node(c).parents) queue.push_back(p);
  }
  return seen;
}

bool ContextHierarchy::contains(const ContextId& outer, const ContextId& inner) const {
  node(outer);
  return outer == inner || ancestors(inner).contains(outer);
}

std::vector<ContextId> ContextHierarchy::contexts_of(const PropositionId& p) const {
  std::vector<ContextId> out;
  for (const auto& [id, n] : nodes_) {
    if (n.members.contains(p)) out.push_back(id);
  }
  return out;
}

bool ContextHierarchy::share_context(const PropositionId& a, const PropositionId& b) const {
  return std::ranges::any_of(nodes_, [&](const auto& kv) {
    return kv.second.members.contains(a) && kv.second.members.contains(b);
  });
}

double contextual_relation(const RelationMatrix& m, const ContextHierarchy& h, const PropositionId& pi,
                           const PropositionId& pj, const ContextId& c) {
  const auto& members = h.members(c);
  if (!members.contains(pi) || !members.contains(pj)) return 0.0;
  return m.get(pi, pj);
}

bool is_memory_chain(const RelationMatrix& m, std::span<const PropositionId> props) {
  for (std::size_t i = 0; i < props.size(); ++i) {
    for (std::size_t j = i + 1; j < props.size(); ++j) {
      if (props[i] != props[j] && !(m.get(props[i], props[j]) > 0.0)) return false;
    }
  }
  return true;
}

bool entangled(const RelationMatrix& m, const ContextHierarchy& h, const PropositionId& pi, const PropositionId& pj,
               const ContextId& c, double tau_e) {
  return contextual_relation(m, h, pi, pj, c) > tau_e;
}

std::set<EntangledPair> entanglement_closure(const ContextHierarchy& h, const RelationMatrix& m, double tau_e) {
  std::set<EntangledPair> out;
  for (const auto& c : h.ids()) {
    const auto& members = h.members(c);
    const auto up = h.ancestors(c);
    for (auto a = members.begin(); a != members.end(); ++a) {
      for (auto b = std::next(a); b != members.end(); ++b) {
        if (!entangled(m, h, *a, *b, c, tau_e)) continue;
        out.insert({*a, *b, c});
        for (const auto& anc : up) out.insert({*a, *b, anc});
      }
    }
  }
  return out;
}

PropagationResult recall_propagation(const ContextHierarchy& h, const RelationMatrix& m, const PropositionId& pi,
                                     const PropositionId& pj, const ContextId& source_ctx,
                                     const ContextId& target_ctx, PropagationMode mode, std::int64_t path_cap) {
  if (!h.members(source_ctx).contains(pi))
    throw Error(ErrorCode::NotContained, "'" + pi + "' is not a member of '" + source_ctx + "'");
  if (!h.members(target_ctx).contains(pj))
    throw Error(ErrorCode::NotContained, "'" + pj + "' is not a member of '" + target_ctx + "'");

  const double shared = contextual_relation(m, h, pi, pj, target_ctx);
  PropagationResult result;
  if (source_ctx == target_ctx) {
    result.raw = shared;
    result.probability = std::clamp(shared, 0.0, 1.0);
    result.path_count = 1;
    return result;
  }

  auto weight = [&](const ContextId& broader) {
    return mode == PropagationMode::Literal ? shared : contextual_relation(m, h, pi, pj, broader);
  };

  // Memoized sums over the upward DAG: for each context, the weighted sum
  // and the count of paths that reach target_ctx.
  struct Partial {
    double sum = 0.0;
    std::int64_t count = 0;
  };
  std::map<ContextId, Partial> memo;
  const std::int64_t saturate = path_cap + 1;
  std::function<Partial(const ContextId&)> walk = [&](const ContextId& c) -> Partial {
    if (c == target_ctx) return {1.0, 1};
    if (auto it = memo.find(c); it != memo.end()) return it->second;
    Partial acc;
    for (const auto& parent : h.parents(c)) {
      const Partial up = walk(parent);
      if (up.count == 0) continue;
      acc.sum += weight(parent) * up.sum;
      acc.count = std::min(saturate, acc.count + up.count);
    }
    memo.emplace(c, acc);
    return acc;
  };

  const Partial total = walk(source_ctx);
  if (total.count > path_cap)
    throw Error(ErrorCode::PathExplosion, "more than " + std::to_string(path_cap) + " containment paths");
  result.raw = total.sum;
  result.probability = std::clamp(total.sum, 0.0, 1.0);
  result.path_count = total.count;
  return result;
}

double recall_propagation_probability(const ContextHierarchy& h, const RelationMatrix& m, const PropositionId& pi,
                                      const PropositionId& pj, const ContextId& source_ctx,
                                      const ContextId& target_ctx) {
  return recall_propagation(h, m, pi, pj, source_ctx, target_ctx).probability;
}

bool propagates(const ContextHierarchy& h, const RelationMatrix& m, const PropositionId& pi, const PropositionId& pj,
                const ContextId& c_k, const ContextId& c_l, double tau) {
  if (!h.contains(c_l, c_k))
    throw Error(ErrorCode::NotContained, "'" + c_l + "' does not contain '" + c_k + "'");
  return contextual_relation(m, h, pi, pj, c_l) > tau;
}

}  // namespace mnemosim
