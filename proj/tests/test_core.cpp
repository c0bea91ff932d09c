#include <gtest/gtest.h>

#include <algorithm>

#include "generators.hpp"
#include "mnemosim/core.hpp"
#include "mnemosim/error.hpp"

using namespace mnemosim;

namespace {

ScenarioConfig two_props() {
  ScenarioConfig c;
  c.propositions = {{"P1", 0.5, 2.0, 1.0, Phase::Unresolved}, {"P2", 0.3, 1.0, 1.0, Phase::Unresolved}};
  c.relations = {{"P1", "P2", 0.7, 0.0}};
  return c;
}

bool has_violation(const ValidationReport& r, const std::string& field, const std::string& message) {
  return std::ranges::any_of(r, [&](const Violation& v) { return v.field == field && v.message == message; });
}

}  // namespace

TEST(Validate, WellFormedScenarioIsClean) { EXPECT_TRUE(validate_scenario(two_props()).empty()); }

TEST(Validate, ThresholdOutOfRange) {
  auto c = two_props();
  c.params.tau_e = 1.2;
  EXPECT_TRUE(has_violation(validate_scenario(c), "params.tau_e", "threshold out of [0,1]"));
}

TEST(Validate, ZeroDt) {
  auto c = two_props();
  c.dt = 0;
  EXPECT_TRUE(has_violation(validate_scenario(c), "dt", "dt must be positive"));
}

TEST(Validate, CoefficientsAndBounds) {
  auto c = two_props();
  c.params.alpha_fb = -1;
  c.params.eps_cross = 0.2;
  c.horizon = -1;
  c.params.environment = 0.0;
  const auto r = validate_scenario(c);
  EXPECT_TRUE(has_violation(r, "params.alpha_fb", "coefficient must be finite and >= 0"));
  EXPECT_TRUE(has_violation(r, "params.eps_cross", "cross-chain subtlety must be <= 0.1"));
  EXPECT_TRUE(has_violation(r, "horizon", "horizon must be finite and >= 0"));
  EXPECT_TRUE(has_violation(r, "params.environment", "environment must be positive"));
}

TEST(Validate, PropositionFields) {
  auto c = two_props();
  c.propositions[0].base_latency = 0;
  c.propositions[1].initial_amplitude = 1.5;
  c.propositions.push_back(c.propositions[0]);
  const auto r = validate_scenario(c);
  EXPECT_TRUE(has_violation(r, "propositions[0].base_latency", "base latency must be positive"));
  EXPECT_TRUE(has_violation(r, "propositions[1].initial_amplitude", "amplitude out of (0,1]"));
  EXPECT_TRUE(has_violation(r, "propositions[2].id", "duplicate proposition id 'P1'"));
}

TEST(Validate, RelationReferences) {
  auto c = two_props();
  c.relations.push_back({"P1", "PX", 0.5, 0});
  c.relations.push_back({"P2", "P1", 0.5, 0});
  c.relations.push_back({"P1", "P1", 0.5, 0});
  const auto r = validate_scenario(c);
  EXPECT_TRUE(has_violation(r, "relations[1].b", "unknown proposition 'PX'"));
  EXPECT_TRUE(has_violation(r, "relations[2]", "duplicate relation pair"));
  EXPECT_TRUE(has_violation(r, "relations[3]", "self relation is fixed at 1 and cannot be declared"));
}

TEST(Validate, ContextSubsetAndCycles) {
  auto c = two_props();
  c.contexts = {{"A", {"P1", "P2"}, {"B"}}, {"B", {"P1"}, {"A"}}};
  const auto r = validate_scenario(c);
  EXPECT_TRUE(has_violation(r, "contexts[0].within[0]", "member 'P2' of 'A' missing from containing context 'B'"));
  EXPECT_TRUE(has_violation(r, "contexts", "context containment must be acyclic"));
}

TEST(Validate, EventReferences) {
  auto c = two_props();
  c.events = {{1.0, EventKind::Recall, "PX"}, {-1.0, EventKind::Recall, "P1"}};
  EventDef m;
  m.kind = EventKind::Measure;
  m.target = "P1";
  m.branch = "nope";
  c.events.push_back(m);
  const auto r = validate_scenario(c);
  EXPECT_TRUE(has_violation(r, "events[0].target", "unknown proposition 'PX'"));
  EXPECT_TRUE(has_violation(r, "events[1].time", "time must be finite and >= 0"));
  EXPECT_TRUE(has_violation(r, "events[2].branch", "unknown branch 'nope'"));
}

TEST(Validate, ChainPartition) {
  auto c = two_props();
  c.params.chains = {{"a", {"P1", "P2"}, {0.5}}, {"b", {"P2"}, {}}};
  const auto r = validate_scenario(c);
  EXPECT_TRUE(has_violation(r, "params.chains[0].probabilities", "probabilities must sum to 1"));
  EXPECT_TRUE(has_violation(r, "params.chains[1].members[0]", "proposition 'P2' assigned to two chains"));
}

TEST(Validate, GeneratedConfigsAreValid) {
  harness::Gen g(7);
  for (int i = 0; i < 300; ++i) {
    const auto c = harness::random_config(g);
    const auto r = validate_scenario(c);
    ASSERT_TRUE(r.empty()) << format_report(r);
  }
}

TEST(Registry, Lookup) {
  const auto c = two_props();
  const Registry reg(c.propositions);
  EXPECT_EQ(reg.lookup("P1").base_latency, 2.0);
  EXPECT_TRUE(reg.contains("P2"));
  try {
    reg.lookup("PX");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownProposition);
  }
}

TEST(Registry, DuplicateRejected) {
  auto c = two_props();
  c.propositions.push_back(c.propositions[0]);
  EXPECT_THROW(Registry{c.propositions}, Error);
}

TEST(Modifiers, NamesRoundTrip) {
  for (auto m : {Modifier::Relation, Modifier::Feedback, Modifier::Bayesian, Modifier::Simultaneous})
    EXPECT_EQ(parse_modifier(to_string(m)), m);
  EXPECT_FALSE(parse_modifier("gravity"));
}
