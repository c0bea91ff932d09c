#include "mnemosim/temporal.hpp"

#include <algorithm>

#include "mnemosim/error.hpp"

namespace mnemosim {

namespace {

void require_non_empty(const Trace& trace) {
  if (trace.empty()) throw Error(ErrorCode::EmptyTrace, "trace has no steps");
}

// Every step >= k lands on a position in [k, max(k, n) + p).
bool always_from(const Trace& trace, std::size_t k) {
  const std::size_t end = trace.is_lasso() ? std::max(k, trace.prefix.size()) + trace.period.size()
                                           : trace.prefix.size();
  for (std::size_t i = k; i < end; ++i) {
    if (!*trace.value_at(i)) return false;
  }
  return true;
}

}  // namespace

std::optional<bool> Trace::value_at(std::size_t k) const {
  if (k < prefix.size()) return prefix[k];
  if (period.empty()) return std::nullopt;
  return period[(k - prefix.size()) % period.size()];
}

bool always(const Trace& trace) {
  require_non_empty(trace);
  return always_from(trace, 0);
}

bool eventually(const Trace& trace) {
  require_non_empty(trace);
  return std::ranges::any_of(trace.prefix, [](bool v) { return v; }) ||
         std::ranges::any_of(trace.period, [](bool v) { return v; });
}

bool next(const Trace& trace, std::size_t k) { return trace.value_at(k + 1).value_or(false); }

bool check_box_implies_diamond(const Trace& trace) { return !always(trace) || eventually(trace); }

CommuteCheck evaluate_next_box_commute(const Trace& trace) {
  if (!trace.is_lasso()) throw Error(ErrorCode::NotLasso, "theorem is evaluated over unbounded (lasso) traces");
  CommuteCheck result;
  result.next_always = always_from(trace, 1);
  // always-next quantifies over every step u; u in [0, n + p) covers each
  // equivalence class of the lasso exactly once.
  result.always_next = true;
  for (std::size_t u = 0; u < trace.distinct_positions(); ++u) {
    if (!next(trace, u)) {
      result.always_next = false;
      break;
    }
  }
  return result;
}

bool check_next_box_commute(const Trace& trace) { return evaluate_next_box_commute(trace).holds(); }

std::vector<StateRecord> unroll(const Trace& trace, std::size_t steps) {
  std::vector<StateRecord> states;
  for (std::size_t k = 0; k < steps; ++k) {
    auto v = trace.value_at(k);
    if (!v) break;
    states.push_back({k, *v});
  }
  return states;
}

std::optional<Truth> branch_value_at(const BranchSeries& series, std::size_t k) {
  if (k < series.prefix.size()) return series.prefix[k];
  if (series.period.empty()) return std::nullopt;
  return series.period[(k - series.prefix.size()) % series.period.size()];
}

bool branch_realized(const BranchingTrace& bt, std::string_view branch) {
  auto it = bt.branches.find(std::string(branch));
  if (it == bt.branches.end()) throw Error(ErrorCode::UnknownBranch, std::string(branch));
  const auto& s = it->second;
  auto resolved = [](Truth v) { return v != Truth::Bottom; };
  return std::ranges::any_of(s.prefix, resolved) || std::ranges::any_of(s.period, resolved);
}

std::set<BranchState> superposition(const BranchingTrace& bt, std::size_t k) {
  std::set<BranchState> states;
  for (const auto& [id, series] : bt.branches) {
    auto v = branch_value_at(series, k);
    if (!v) throw Error(ErrorCode::StepOutOfRange, "step " + std::to_string(k) + " beyond branch '" + id + "'");
    states.insert({id, *v});
  }
  return states;
}

}  // namespace mnemosim
