#include "mnemosim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mnemosim/error.hpp"

namespace mnemosim {

double chain_entropy(std::span<const double> probabilities) {
  if (probabilities.empty()) throw Error(ErrorCode::InvalidDistribution, "empty distribution");
  double total = 0.0;
  double h = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidDistribution, "probability out of [0,1]");
    total += p;
    if (p > 0.0) h -= p * std::log2(p);
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorCode::InvalidDistribution, "probabilities do not sum to 1");
  return h > 0.0 ? h : 0.0;
}

double chain_entropy(const ChainDistribution& dist) { return chain_entropy(dist.probabilities); }

double recall_efficiency(double entropy_bits) {
  if (entropy_bits < 0.0) throw Error(ErrorCode::NegativeEntropy, "entropy must be >= 0");
  return 1.0 / (1.0 + entropy_bits);
}

std::vector<double> optimal_distribution(std::span<const double> scores, double beta, OptimalSign sign) {
  if (scores.empty()) throw Error(ErrorCode::EmptyChain, "chain has no members");
  const double b = sign == OptimalSign::Literal ? -beta : beta;
  // Shift by the largest exponent so the biggest weight is exactly 1.
  double top = -std::numeric_limits<double>::infinity();
  for (double s : scores) top = std::max(top, b * s);
  std::vector<double> p;
  p.reserve(scores.size());
  for (double s : scores) p.push_back(std::exp(b * s - top));
  const double z = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= z;
  return p;
}

namespace {

std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

std::optional<double> rank_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

EntropyLatencyReport entropy_latency_report(std::vector<ChainSummary> chains) {
  if (chains.size() < 2) throw Error(ErrorCode::InsufficientData, "need at least two chains");
  std::vector<double> h, t;
  for (const auto& c : chains) {
    if (!std::isfinite(c.mean_latency))
      throw Error(ErrorCode::InsufficientData, "chain '" + c.chain_id + "' has an unresolved latency");
    h.push_back(c.entropy_bits);
    t.push_back(c.mean_latency);
  }
  EntropyLatencyReport report;
  report.rank_correlation = rank_correlation(h, t);
  report.chains = std::move(chains);
  return report;
}

}  // namespace mnemosim
