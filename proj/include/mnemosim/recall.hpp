#pragma once

#include <limits>
#include <span>
#include <vector>

#include "mnemosim/core.hpp"

namespace mnemosim {

inline constexpr double kInfiniteLatency = std::numeric_limits<double>::infinity();

/// T_B / environment. Throws NonPositiveInput for non-positive arguments.
Time base_environment_latency(Time base_latency, double environment);

/// 1 / (R_C * environment); +infinity when R_C is zero.
Time relation_latency(double relation, double environment);

/// Configurable relation law. Reciprocal reproduces relation_latency.
Time law_latency(const LatencyLaw& law, double relation, double environment);

/// 1 - exp(-t / T_R); zero for an infinite latency. Throws NegativeTime.
double transition_probability(Time elapsed, Time latency);

/// Decayed while t < T_R, Realized from t >= T_R on. Throws
/// UnresolvedLatency when the latency is NaN.
Phase state_at(Time latency, Time t);

struct LatencyEntry {
  PropositionId id;
  Time latency = 0.0;

  bool operator==(const LatencyEntry&) const = default;
};

/// Members with T_R <= bound, ascending by latency, ties by id.
std::vector<LatencyEntry> temporal_hierarchy(std::span<const LatencyEntry> latencies, Time bound);

struct PreemptionInput {
  double relation = 1.0;
  double environment = 1.0;
};

/// True iff the outside proposition's relation latency under its environment
/// is strictly below the inside one's.
bool hierarchy_preemption(const PreemptionInput& outside, const PreemptionInput& inside);

}  // namespace mnemosim
