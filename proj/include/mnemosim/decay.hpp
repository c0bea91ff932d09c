#pragma once

#include <span>
#include <vector>

#include "mnemosim/core.hpp"

namespace mnemosim {

/// Strengths below this clamp to exactly zero.
inline constexpr double kStrengthFloor = 1e-300;

enum class CurveKind { Ebbinghaus, BayesianModified };

/// A decay curve anchored at `start`: t_f for Ebbinghaus, the anchor's
/// recall time t_r for the Bayesian-modified curve. Strength is
/// non-increasing from the start until the next reset.
struct DecayCurve {
  CurveKind kind = CurveKind::Ebbinghaus;
  double rate = 0.0;
  Time start = 0.0;
  double posterior = 1.0;  // BayesianModified only
  double amplitude = 1.0;  // P_m

  static DecayCurve ebbinghaus(double rate, Time t_f, double amplitude = 1.0) {
    return {CurveKind::Ebbinghaus, rate, t_f, 1.0, amplitude};
  }
  static DecayCurve bayesian(double posterior, double rate, Time t_r, double amplitude = 1.0) {
    return {CurveKind::BayesianModified, rate, t_r, posterior, amplitude};
  }

  bool operator==(const DecayCurve&) const = default;
};

/// amplitude * [posterior] * exp(-rate * (t - start)). Throws
/// TimeBeforeCurveStart when t precedes the curve start.
double strength(const DecayCurve& curve, Time t);

/// Reactivation under a triggering context. A non-empty trigger returns a
/// Realized state starting at t with the decay curve reset; an empty
/// trigger leaves the state untouched. Throws NotDecayed unless the state
/// is Decayed, and TimeBeforeCurveStart unless t > t_f.
MemoryState reactivate(const MemoryState& state, std::span<const PropositionId> trigger, Time t);

struct ResilienceAccumulator {
  double alpha = 1.0;
  std::vector<Time> recall_times;  // strictly ascending
  double value = 0.0;

  /// Recomputes the sum from the recorded times.
  double recompute() const;
};

/// Appends a recall at t. The first recall adds nothing (no predecessor gap);
/// later ones add exp(-alpha * gap). Throws NonMonotoneTime unless t is
/// strictly after the last recall.
ResilienceAccumulator accumulate_resilience(ResilienceAccumulator acc, Time t);

struct AdjustedRate {
  double rate = 0.0;
  bool negligible = false;  // resilience reached the negligible-decay threshold
};

/// rate / (1 + resilience).
AdjustedRate adjusted_decay_rate(double rate, double resilience, double negligible_at = 100.0);

}  // namespace mnemosim
