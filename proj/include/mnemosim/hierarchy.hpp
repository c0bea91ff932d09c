#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mnemosim/core.hpp"

namespace mnemosim {

/// Symmetric pairwise relation R with values in [0,1]. Missing pairs are 0;
/// the self relation is fixed at 1.
class RelationMatrix {
 public:
  RelationMatrix() = default;
  explicit RelationMatrix(std::span<const RelationEntry> entries);

  void set(const PropositionId& a, const PropositionId& b, double r, double r_u = 0.0);

  double get(const PropositionId& a, const PropositionId& b) const;
  /// Universal (cross-chain) relation R_U.
  double universal(const PropositionId& a, const PropositionId& b) const;

 private:
  using Key = std::pair<PropositionId, PropositionId>;
  static Key key(const PropositionId& a, const PropositionId& b);

  std::map<Key, double> relation_;
  std::map<Key, double> universal_;
};

/// Context containment DAG. An edge child -> parent means
/// members(child) is a subset of members(parent).
class ContextHierarchy {
 public:
  ContextHierarchy() = default;
  /// Throws ValidationFailed on unknown parents, broken subset
  /// invariants, or cycles.
  explicit ContextHierarchy(std::span<const ContextDef> contexts);

  bool has(const ContextId& id) const { return nodes_.contains(id); }
  const std::set<PropositionId>& members(const ContextId& id) const;
  const std::vector<ContextId>& parents(const ContextId& id) const;
  std::vector<ContextId> ids() const;

  /// Strict transitive ancestors (every broader context).
  std::set<ContextId> ancestors(const ContextId& id) const;
  /// True when `outer` equals `inner` or transitively contains it.
  bool contains(const ContextId& outer, const ContextId& inner) const;
  /// Contexts whose member set includes p.
  std::vector<ContextId> contexts_of(const PropositionId& p) const;
  /// True when some context holds both propositions.
  bool share_context(const PropositionId& a, const PropositionId& b) const;

  bool empty() const { return nodes_.empty(); }

 private:
  struct Node {
    std::set<PropositionId> members;
    std::vector<ContextId> parents;
  };
  const Node& node(const ContextId& id) const;

  std::map<ContextId, Node> nodes_;
};

/// R(pi, pj) when both belong to context c, else 0. Throws UnknownContext.
double contextual_relation(const RelationMatrix& m, const ContextHierarchy& h, const PropositionId& pi,
                           const PropositionId& pj, const ContextId& c);

/// All distinct pairs strictly positive; singletons are vacuously chains.
bool is_memory_chain(const RelationMatrix& m, std::span<const PropositionId> props);

/// Strict comparison R_C(pi, pj) > tau_e in context c.
bool entangled(const RelationMatrix& m, const ContextHierarchy& h, const PropositionId& pi, const PropositionId& pj,
               const ContextId& c, double tau_e);

struct EntangledPair {
  PropositionId a;  // a < b
  PropositionId b;
  ContextId context;

  auto operator<=>(const EntangledPair&) const = default;
};

/// Pairs entangled in some context, propagated to every containing context.
std::set<EntangledPair> entanglement_closure(const ContextHierarchy& h, const RelationMatrix& m, double tau_e);

struct PropagationResult {
  double probability = 0.0;  // clamped to [0,1]
  double raw = 0.0;          // unclamped path sum
  std::int64_t path_count = 0;
};

/// Sum over containment paths from source_ctx up to target_ctx. Literal mode
/// multiplies R_C(pi, pj) (evaluated in target_ctx) once per edge; PerEdge
/// mode uses R_C(pi, pj) evaluated in each edge's broader context. When
/// source and target coincide the result is the in-context R_C.
PropagationResult recall_propagation(const ContextHierarchy& h, const RelationMatrix& m, const PropositionId& pi,
                                     const PropositionId& pj, const ContextId& source_ctx,
                                     const ContextId& target_ctx,
                                     PropagationMode mode = PropagationMode::Literal,
                                     std::int64_t path_cap = 1'000'000);

double recall_propagation_probability(const ContextHierarchy& h, const RelationMatrix& m, const PropositionId& pi,
                                      const PropositionId& pj, const ContextId& source_ctx,
                                      const ContextId& target_ctx);

/// R_C(pi, pj) > tau in the broader context c_l. Throws NotContained unless
/// c_l contains c_k.
bool propagates(const ContextHierarchy& h, const RelationMatrix& m, const PropositionId& pi, const PropositionId& pj,
                const ContextId& c_k, const ContextId& c_l, double tau);

}  // namespace mnemosim
