#include "mnemosim/decay.hpp"

#include <cmath>

#include "mnemosim/error.hpp"

namespace mnemosim {

double strength(const DecayCurve& curve, Time t) {
  if (t < curve.start)
    throw Error(ErrorCode::TimeBeforeCurveStart,
                "t=" + std::to_string(t) + " precedes curve start " + std::to_string(curve.start));
  double s = curve.amplitude * std::exp(-curve.rate * (t - curve.start));
  if (curve.kind == CurveKind::BayesianModified) s *= curve.posterior;
  return s < kStrengthFloor ? 0.0 : s;
}

MemoryState reactivate(const MemoryState& state, std::span<const PropositionId> trigger, Time t) {
  if (state.phase != Phase::Decayed) throw Error(ErrorCode::NotDecayed, "reactivation requires a decayed state");
  if (state.t_f && !(t > *state.t_f))
    throw Error(ErrorCode::TimeBeforeCurveStart, "reactivation must follow the end of realization");
  if (trigger.empty()) return state;

  MemoryState next;
  next.phase = Phase::Realized;
  next.t_r = t;
  next.last_reset = t;
  return next;
}

double ResilienceAccumulator::recompute() const {
  double sum = 0.0;
  for (std::size_t k = 1; k < recall_times.size(); ++k)
    sum += std::exp(-alpha * (recall_times[k] - recall_times[k - 1]));
  return sum;
}

ResilienceAccumulator accumulate_resilience(ResilienceAccumulator acc, Time t) {
  if (!acc.recall_times.empty()) {
    const Time prev = acc.recall_times.back();
    if (!(t > prev))
      throw Error(ErrorCode::NonMonotoneTime,
                  "recall at " + std::to_string(t) + " does not follow " + std::to_string(prev));
    acc.value += std::exp(-acc.alpha * (t - prev));
  }
  acc.recall_times.push_back(t);
  return acc;
}

AdjustedRate adjusted_decay_rate(double rate, double resilience, double negligible_at) {
  return {rate / (1.0 + resilience), resilience >= negligible_at};
}

}  // namespace mnemosim
