#include "mnemosim/recall.hpp"

#include <algorithm>
#include <cmath>

#include "mnemosim/error.hpp"

namespace mnemosim {

Time base_environment_latency(Time base_latency, double environment) {
  if (!(base_latency > 0.0)) throw Error(ErrorCode::NonPositiveInput, "base latency must be positive");
  if (!(environment > 0.0)) throw Error(ErrorCode::NonPositiveInput, "environment must be positive");
  return base_latency / environment;
}

Time relation_latency(double relation, double environment) {
  if (!(environment > 0.0)) throw Error(ErrorCode::NonPositiveInput, "environment must be positive");
  if (!(relation > 0.0)) return kInfiniteLatency;
  return 1.0 / (relation * environment);
}

Time law_latency(const LatencyLaw& law, double relation, double environment) {
  switch (law.kind) {
    case LatencyLaw::Kind::Reciprocal:
      return relation_latency(relation, environment);
    case LatencyLaw::Kind::ReciprocalPower:
      return relation_latency(std::pow(relation, law.exponent), environment);
  }
  return relation_latency(relation, environment);
}

double transition_probability(Time elapsed, Time latency) {
  if (elapsed < 0.0) throw Error(ErrorCode::NegativeTime, "elapsed time must be >= 0");
  if (!(latency > 0.0)) throw Error(ErrorCode::NonPositiveLatency, "latency must be positive");
  if (std::isinf(latency)) return 0.0;
  return -std::expm1(-elapsed / latency);
}

Phase state_at(Time latency, Time t) {
  if (std::isnan(latency)) throw Error(ErrorCode::UnresolvedLatency, "latency not resolved");
  return t < latency ? Phase::Decayed : Phase::Realized;
}

std::vector<LatencyEntry> temporal_hierarchy(std::span<const LatencyEntry> latencies, Time bound) {
  std::vector<LatencyEntry> out;
  std::ranges::copy_if(latencies, std::back_inserter(out), [&](const auto& e) { return e.latency <= bound; });
  std::ranges::sort(out, [](const auto& a, const auto& b) {
    return a.latency != b.latency ? a.latency < b.latency : a.id < b.id;
  });
  return out;
}

bool hierarchy_preemption(const PreemptionInput& outside, const PreemptionInput& inside) {
  return relation_latency(outside.relation, outside.environment) <
         relation_latency(inside.relation, inside.environment);
}

}  // namespace mnemosim
