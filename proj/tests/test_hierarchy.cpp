#include <gtest/gtest.h>

#include <map>

#include "generators.hpp"
#include "mnemosim/error.hpp"
#include "mnemosim/hierarchy.hpp"
#include "oracles.hpp"

using namespace mnemosim;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::ParseError;
}

RelationMatrix pair_matrix(double r) {
  RelationMatrix m;
  m.set("P1", "P2", r);
  return m;
}

std::vector<ContextDef> chain3() {
  return {{"C1", {"P1", "P2"}, {"C2"}}, {"C2", {"P1", "P2", "P3"}, {"C3"}}, {"C3", {"P1", "P2", "P3", "P4"}, {}}};
}

std::vector<ContextDef> diamond() {
  return {{"B", {"P1", "P2"}, {"L", "R"}},
          {"L", {"P1", "P2", "P3"}, {"T"}},
          {"R", {"P1", "P2", "P4"}, {"T"}},
          {"T", {"P1", "P2", "P3", "P4"}, {}}};
}

}  // namespace

TEST(RelationMatrix, SymmetricWithUnitSelf) {
  RelationMatrix m;
  m.set("B", "A", 0.3, 0.7);
  EXPECT_EQ(m.get("A", "B"), 0.3);
  EXPECT_EQ(m.get("B", "A"), 0.3);
  EXPECT_EQ(m.universal("A", "B"), 0.7);
  EXPECT_EQ(m.get("A", "A"), 1.0);
  EXPECT_EQ(m.get("A", "Z"), 0.0);
}

TEST(Hierarchy, RejectsBrokenSubsetAndCycles) {
  const std::vector<ContextDef> not_subset{{"C1", {"P1", "P9"}, {"C2"}}, {"C2", {"P1"}, {}}};
  EXPECT_EQ(code_of([&] { ContextHierarchy h(not_subset); }), ErrorCode::ValidationFailed);
  const std::vector<ContextDef> cycle{{"C1", {"P1"}, {"C2"}}, {"C2", {"P1"}, {"C1"}}};
  EXPECT_EQ(code_of([&] { ContextHierarchy h(cycle); }), ErrorCode::ValidationFailed);
}

TEST(Hierarchy, AncestorsAndContainment) {
  const ContextHierarchy h(diamond());
  EXPECT_EQ(h.ancestors("B"), (std::set<ContextId>{"L", "R", "T"}));
  EXPECT_TRUE(h.contains("T", "B"));
  EXPECT_TRUE(h.contains("B", "B"));
  EXPECT_FALSE(h.contains("L", "R"));
  EXPECT_TRUE(h.share_context("P3", "P1"));
  EXPECT_TRUE(h.share_context("P3", "P4"));
  EXPECT_FALSE(h.share_context("P3", "P9"));
}

TEST(ContextualRelation, Examples) {
  const ContextHierarchy h(chain3());
  RelationMatrix m;
  m.set("P1", "P2", 0.7);
  m.set("P1", "P4", 0.9);
  EXPECT_EQ(contextual_relation(m, h, "P1", "P2", "C1"), 0.7);
  EXPECT_EQ(contextual_relation(m, h, "P1", "P4", "C1"), 0.0);
  EXPECT_EQ(contextual_relation(m, h, "P1", "P4", "C3"), 0.9);
  EXPECT_EQ(code_of([&] { contextual_relation(m, h, "P1", "P2", "nope"); }), ErrorCode::UnknownContext);
}

TEST(MemoryChain, Examples) {
  RelationMatrix m;
  m.set("P1", "P2", 0.3);
  m.set("P2", "P3", 0.3);
  const std::vector<PropositionId> two{"P1", "P2"}, three{"P1", "P2", "P3"}, one{"P1"};
  EXPECT_TRUE(is_memory_chain(m, two));
  EXPECT_FALSE(is_memory_chain(m, three));
  EXPECT_TRUE(is_memory_chain(m, one));
}

TEST(Entangled, StrictThreshold) {
  const ContextHierarchy h(chain3());
  EXPECT_TRUE(entangled(pair_matrix(0.9), h, "P1", "P2", "C1", 0.8));
  EXPECT_FALSE(entangled(pair_matrix(0.8), h, "P1", "P2", "C1", 0.8));
  RelationMatrix m;
  m.set("P1", "P4", 0.95);
  EXPECT_FALSE(entangled(m, h, "P1", "P4", "C1", 0.8));
}

TEST(Closure, PersistsUpTheHierarchy) {
  const ContextHierarchy h(chain3());
  const auto closure = entanglement_closure(h, pair_matrix(0.9), 0.8);
  EXPECT_EQ(closure, (std::set<EntangledPair>{{"P1", "P2", "C1"}, {"P1", "P2", "C2"}, {"P1", "P2", "C3"}}));
  EXPECT_TRUE(entanglement_closure(h, pair_matrix(0.5), 0.8).empty());
  EXPECT_EQ(entanglement_closure(ContextHierarchy(diamond()), pair_matrix(0.9), 0.8).size(), 4u);
}

TEST(Closure, MatchesBfsOracle) {
  harness::Gen g(101);
  const auto props = harness::make_ids("P", 6);
  for (int i = 0; i < 150; ++i) {
    const auto defs = harness::random_hierarchy(g, g.integer(1, 20), props);
    const auto rel = harness::random_relations(g, props, 0.5);
    std::map<std::pair<PropositionId, PropositionId>, double> r;
    for (const auto& e : rel) r[std::minmax(e.a, e.b)] = e.r;
    const double tau_e = g.percent(0, 100);
    std::set<EntangledPair> expected;
    for (const auto& e : harness::closure_by_bfs(defs, r, tau_e)) expected.insert({e.a, e.b, e.context});
    ASSERT_EQ(entanglement_closure(ContextHierarchy(defs), RelationMatrix(rel), tau_e), expected);
  }
}

TEST(Propagation, Examples) {
  const ContextHierarchy h(chain3());
  const auto single = recall_propagation(h, pair_matrix(0.6), "P1", "P2", "C1", "C2");
  EXPECT_EQ(single.raw, 0.6);
  EXPECT_EQ(single.path_count, 1);

  const ContextHierarchy d(diamond());
  const auto parallel = recall_propagation(d, pair_matrix(0.5), "P1", "P2", "B", "T");
  EXPECT_EQ(parallel.raw, 0.5);
  EXPECT_EQ(parallel.path_count, 2);
  EXPECT_EQ(recall_propagation(d, pair_matrix(0.0), "P1", "P2", "B", "T").raw, 0.0);
}

TEST(Propagation, ClampsProbabilityButKeepsRaw) {
  std::vector<ContextDef> defs{{"S", {"P1", "P2"}, {"A", "B", "C"}},
                               {"A", {"P1", "P2"}, {"T"}},
                               {"B", {"P1", "P2"}, {"T"}},
                               {"C", {"P1", "P2"}, {"T"}},
                               {"T", {"P1", "P2"}, {}}};
  const auto r = recall_propagation(ContextHierarchy(defs), pair_matrix(0.9), "P1", "P2", "S", "T");
  EXPECT_NEAR(r.raw, 3 * 0.81, 1e-15);
  EXPECT_EQ(r.probability, 1.0);
}

TEST(Propagation, MatchesExactPathOracle) {
  harness::Gen g(202);
  const auto props = harness::make_ids("P", 4);
  for (int i = 0; i < 300; ++i) {
    const auto defs = harness::random_hierarchy(g, g.integer(1, 7), props, 0.5);
    const ContextHierarchy h(defs);
    const double r = g.percent();
    const auto pj = g.pick(props);
    RelationMatrix m;
    if (pj != props.front()) m.set(props.front(), pj, r);
    const auto& src = g.pick(defs).id;
    const auto& dst = g.pick(defs).id;
    if (!h.contains(dst, src) || !h.members(dst).contains(pj)) continue;
    for (const bool per_edge : {false, true}) {
      const auto mode = per_edge ? PropagationMode::PerEdge : PropagationMode::Literal;
      const auto got = recall_propagation(h, m, props.front(), pj, src, dst, mode);
      const harness::Rational rel = pj == props.front() ? harness::Rational(1) : harness::exact(r);
      const double want = harness::to_double(harness::propagation_oracle(defs, rel, props.front(), pj, src, dst, per_edge));
      ASSERT_NEAR(got.raw, want, 1e-12 * std::max(1.0, want));
    }
  }
}

TEST(Propagation, RequiresMembership) {
  const ContextHierarchy h(chain3());
  EXPECT_EQ(code_of([&] { recall_propagation(h, pair_matrix(0.5), "P4", "P2", "C1", "C3"); }), ErrorCode::NotContained);
  EXPECT_EQ(code_of([&] { recall_propagation(h, pair_matrix(0.5), "P1", "P4", "C1", "C2"); }), ErrorCode::NotContained);
}

TEST(Propagates, Examples) {
  const ContextHierarchy h(chain3());
  EXPECT_TRUE(propagates(h, pair_matrix(0.5), "P1", "P2", "C1", "C3", 0.3));
  EXPECT_FALSE(propagates(h, pair_matrix(0.3), "P1", "P2", "C1", "C3", 0.3));
  EXPECT_EQ(code_of([&] { propagates(h, pair_matrix(0.5), "P1", "P2", "C3", "C1", 0.3); }), ErrorCode::NotContained);
}
