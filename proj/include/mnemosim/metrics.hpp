#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mnemosim/core.hpp"

namespace mnemosim {

/// Recall distribution over a chain, in bits.
struct ChainDistribution {
  std::vector<PropositionId> chain;
  std::vector<double> probabilities;
};

/// Shannon entropy in bits with 0 log 0 = 0. Throws InvalidDistribution
/// unless every p is in [0,1] and they sum to 1 within 1e-12.
double chain_entropy(std::span<const double> probabilities);
double chain_entropy(const ChainDistribution& dist);

/// 1 / (1 + H). Throws NegativeEntropy.
double recall_efficiency(double entropy_bits);

/// exp(-beta * score) / Z over members (Flipped uses +beta). beta = 0 is
/// uniform. Throws EmptyChain.
std::vector<double> optimal_distribution(std::span<const double> scores, double beta,
                                         OptimalSign sign = OptimalSign::Literal);

struct ChainSummary {
  std::string chain_id;
  double entropy_bits = 0.0;
  double efficiency = 1.0;
  double mean_latency = 0.0;
};

struct EntropyLatencyReport {
  std::vector<ChainSummary> chains;
  // Spearman rank correlation of entropy against mean latency; nullopt when
  // either column is constant.
  std::optional<double> rank_correlation;
};

/// Throws InsufficientData for fewer than two chains or a non-finite mean latency.
EntropyLatencyReport entropy_latency_report(std::vector<ChainSummary> chains);

/// Spearman correlation with average ranks for ties.
std::optional<double> rank_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace mnemosim
