#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace mnemosim {

using Time = double;
using PropositionId = std::string;
using ContextId = std::string;

enum class Phase { Realized, Decayed, Unresolved };

std::string_view to_string(Phase phase);

/// Three-valued measurement outcome; Bottom is the unresolved element.
enum class Truth { False, True, Bottom };

struct Proposition {
  PropositionId id;
  double decay_constant = 0.0;  // per time unit
  Time base_latency = 1.0;
  double initial_amplitude = 1.0;
  // Starting phase; Decayed propositions start their curve at t = 0.
  Phase initial_phase = Phase::Unresolved;

  bool operator==(const Proposition&) const = default;
};

/// Per-proposition memory state. Realized requires now in [t_r, t_f).
struct MemoryState {
  Phase phase = Phase::Unresolved;
  std::optional<Time> t_r;
  std::optional<Time> t_f;
  std::optional<Time> last_reset;

  bool operator==(const MemoryState&) const = default;
};

struct ContextDef {
  ContextId id;
  std::vector<PropositionId> members;
  std::vector<ContextId> within;  // direct parents: this context is a subset of each

  bool operator==(const ContextDef&) const = default;
};

struct RelationEntry {
  PropositionId a;
  PropositionId b;
  double r = 0.0;
  double r_u = 0.0;  // universal (cross-chain) relation

  bool operator==(const RelationEntry&) const = default;
};

struct EnvironmentPoint {
  Time time = 0.0;
  double value = 1.0;

  bool operator==(const EnvironmentPoint&) const = default;
};

/// Environment facilitation: a constant scalar or a piecewise-constant schedule.
using Environment = std::variant<double, std::vector<EnvironmentPoint>>;

struct ChainDef {
  std::string id;
  std::vector<PropositionId> members;
  // Optional explicit recall distribution over members[1..]; empty = derive.
  std::vector<double> probabilities;

  bool operator==(const ChainDef&) const = default;
};

struct LikelihoodEntry {
  PropositionId of;     // P(of | given)
  PropositionId given;
  double p = 0.0;

  bool operator==(const LikelihoodEntry&) const = default;
};

struct BayesParams {
  std::map<PropositionId, double> priors;
  std::vector<LikelihoodEntry> likelihoods;

  bool operator==(const BayesParams&) const = default;
};

enum class Modifier { Relation, Feedback, Bayesian, Simultaneous };

std::string_view to_string(Modifier modifier);
std::optional<Modifier> parse_modifier(std::string_view text);

enum class PropagationMode { Literal, PerEdge };
enum class OptimalSign { Literal, Flipped };

/// Law used for relation-conditioned latency. Reciprocal is 1/(R_C * E);
/// ReciprocalPower is 1/(R_C^exponent * E).
struct LatencyLaw {
  enum class Kind { Reciprocal, ReciprocalPower } kind = Kind::Reciprocal;
  double exponent = 1.0;

  bool operator==(const LatencyLaw&) const = default;
};

struct BranchSeries {
  std::vector<Truth> prefix;
  std::vector<Truth> period;

  bool operator==(const BranchSeries&) const = default;
};

struct Params {
  // thresholds
  double tau = 0.5;      // propagation
  double tau_e = 0.8;    // entanglement
  double tau_c = 0.5;    // chain causality
  double eps_h = 1.0;    // temporal-hierarchy latency bound (time units)
  // coefficients
  double alpha_fb = 0.5;
  double alpha_res = 1.0;
  double beta = 1.0;
  double lambda_path = 0.0;
  double eps_cross = 0.01;
  double tau_res = 100.0;  // resilience at which decay counts as negligible

  Environment environment = 1.0;
  std::vector<Modifier> modifiers{Modifier::Relation};
  LatencyLaw latency_law;
  PropagationMode propagation_mode = PropagationMode::Literal;
  OptimalSign optimal_sign = OptimalSign::Literal;

  Time realization_duration = 1.0;
  int cascade_depth = 32;
  std::int64_t path_cap = 1'000'000;
  bool stochastic = false;
  bool propagation = true;
  bool scheduling = true;
  bool simultaneous_fixed_point = false;

  std::vector<ChainDef> chains;
  std::optional<BayesParams> bayes;
  std::map<std::string, BranchSeries> branches;

  bool operator==(const Params&) const = default;
};

enum class EventKind { Recall, Trigger, Environment, Measure };

std::string_view to_string(EventKind kind);

struct EventDef {
  Time time = 0.0;
  EventKind kind = EventKind::Recall;
  PropositionId target;               // Recall, Trigger, Measure
  std::optional<ContextId> context;   // Trigger; absent = empty trigger set
  double value = 1.0;                 // Environment
  std::string branch;                 // Measure
  std::int64_t step = 0;              // Measure

  bool operator==(const EventDef&) const = default;
};

struct ScenarioConfig {
  std::vector<Proposition> propositions;
  std::vector<ContextDef> contexts;
  std::vector<RelationEntry> relations;
  Params params;
  std::vector<EventDef> events;
  Time horizon = 10.0;
  Time dt = 1.0;
  std::uint64_t seed = 0;

  bool operator==(const ScenarioConfig&) const = default;
};

struct Violation {
  std::string field;
  std::string message;

  bool operator==(const Violation&) const = default;
};

using ValidationReport = std::vector<Violation>;

/// Checks every invariant of a parsed scenario. An empty report means valid.
ValidationReport validate_scenario(const ScenarioConfig& config);

std::string format_report(const ValidationReport& report);

/// Immutable id -> proposition index built from a validated scenario.
class Registry {
 public:
  explicit Registry(std::span<const Proposition> propositions);

  const Proposition& lookup(std::string_view id) const;
  bool contains(std::string_view id) const;
  const std::vector<Proposition>& all() const { return propositions_; }

 private:
  std::vector<Proposition> propositions_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace mnemosim
