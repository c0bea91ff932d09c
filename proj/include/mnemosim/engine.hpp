#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mnemosim/bayes.hpp"
#include "mnemosim/core.hpp"
#include "mnemosim/decay.hpp"
#include "mnemosim/model.hpp"

namespace mnemosim {

struct SimulationEvent {
  enum class Kind {
    ExternalRecall,
    Trigger,
    EnvironmentChange,
    Measure,
    // scheduled by the engine itself
    PropagatedRecall,
    Transition,
    DecayOnset,
  };

  Time time = 0.0;
  std::uint64_t sequence = 0;
  Kind kind = Kind::ExternalRecall;
  PropositionId target;
  std::optional<ContextId> context;  // Trigger
  double value = 0.0;                // EnvironmentChange; Transition latency
  std::string branch;                // Measure
  std::int64_t step = 0;             // Measure
  PropositionId source;              // anchor of a Transition / PropagatedRecall
  std::uint64_t generation = 0;      // Transition / DecayOnset staleness check
  int depth = 0;                     // cascade depth
  std::string cause;

  bool operator<(const SimulationEvent& other) const {
    return time != other.time ? time < other.time : sequence < other.sequence;
  }
};

std::string_view to_string(SimulationEvent::Kind kind);

/// One state change. Records with prop "*" are scenario-wide (environment).
struct EventLogRecord {
  Time time = 0.0;
  PropositionId prop;
  std::optional<Phase> phase_before;
  std::optional<Phase> phase_after;
  std::optional<double> strength;
  std::optional<double> latency;
  std::string cause;

  bool operator==(const EventLogRecord&) const = default;
};

struct PropositionRuntime {
  MemoryState memory;
  DecayCurve curve;
  ResilienceAccumulator resilience;
  double rate = 0.0;  // decay rate adjusted by resilience, applied at the next curve reset
  bool decay_negligible = false;
  std::uint64_t onset_generation = 0;
  std::uint64_t transition_generation = 0;
  std::optional<Time> scheduled_transition;
  std::map<PropositionId, double> feedback;  // accumulated F from each anchor
  int recalls = 0;
};

struct SimulationState {
  Time clock = 0.0;
  double environment = 1.0;
  std::map<PropositionId, PropositionRuntime> props;
  // Per (evidence, target) belief tables reinforced by repeated recall.
  std::map<std::pair<PropositionId, PropositionId>, BeliefTable> beliefs;
  std::mt19937_64 rng;
  std::set<SimulationEvent> queue;
  std::uint64_t next_sequence = 0;
  std::vector<EventLogRecord> log;
  int cascade_capped = 0;
  int events_processed = 0;
};

/// Strength of a proposition at t: 1 while realized, the decay curve while
/// decayed, 0 when unresolved.
double current_strength(const PropositionRuntime& p, Time t);

/// Inverse-CDF draw from the exponential transition-time law with mean
/// `latency`, using 53 random bits from the generator.
Time sample_transition_delay(std::mt19937_64& rng, Time latency);

struct SimulationResult {
  SimulationState final_state;
  nlohmann::json metrics;
};

/// Discrete-event engine over one scenario. The engine is immutable; all
/// mutable data lives in SimulationState values threaded through step().
class Engine {
 public:
  explicit Engine(ScenarioConfig config);

  const Scenario& scenario() const { return scenario_; }

  /// Initial per-proposition states, init log records, and the scenario's
  /// external events queued in (time, config order).
  SimulationState initial_state() const;

  /// Applies one event. Throws ClockRegression for events before the clock.
  SimulationState step(SimulationState state, const SimulationEvent& event) const;

  /// Processes every queued event with time <= horizon.
  SimulationResult run() const;

  nlohmann::json metrics_bundle(const SimulationState& state) const;

 private:
  void realize(SimulationState& state, const PropositionId& p, Time t, const std::string& cause, int depth,
               std::optional<double> latency) const;
  void schedule(SimulationState& state, SimulationEvent event) const;
  bool modifier_active(Modifier m) const;

  Scenario scenario_;
};

/// Final phase per proposition reconstructed from a log alone.
std::map<PropositionId, Phase> replay_phases(const std::vector<EventLogRecord>& log);

std::string log_csv_header();
std::string to_csv_row(const EventLogRecord& record);
std::string to_json_line(const EventLogRecord& record);
std::string format_log(const std::vector<EventLogRecord>& log, bool json_lines);

}  // namespace mnemosim
