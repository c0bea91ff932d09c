#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mnemosim/core.hpp"

namespace mnemosim {

/// Boolean trace over dt-discretized time. A non-empty `period` makes it a
/// lasso: the period repeats forever after the prefix, standing in for
/// unbounded time. Without a period the trace is finite.
struct Trace {
  std::vector<bool> prefix;
  std::vector<bool> period;
  double dt = 1.0;

  bool is_lasso() const { return !period.empty(); }
  bool empty() const { return prefix.empty() && period.empty(); }

  /// Value at step k; nullopt past the end of a finite trace.
  std::optional<bool> value_at(std::size_t k) const;

  /// Number of distinct positions: every step k maps onto one of these.
  std::size_t distinct_positions() const { return prefix.size() + period.size(); }

  bool operator==(const Trace&) const = default;
};

struct BranchingTrace {
  std::map<std::string, BranchSeries> branches;
  double dt = 1.0;

  bool operator==(const BranchingTrace&) const = default;
};

// Box: true at every reachable step.
bool always(const Trace& trace);
// Diamond: true at some reachable step.
bool eventually(const Trace& trace);
// Strong next: value at k+1, false past the end of a finite trace.
bool next(const Trace& trace, std::size_t k);

/// always(trace) implies eventually(trace).
bool check_box_implies_diamond(const Trace& trace);

struct CommuteCheck {
  bool next_always = false;  // (next (always x)) at step 0
  bool always_next = false;  // (always (next x)) at step 0
  bool holds() const { return !next_always || always_next; }
};

/// Evaluates both sides of next-always => always-next on a lasso.
/// Throws NotLasso for finite traces.
CommuteCheck evaluate_next_box_commute(const Trace& trace);
bool check_next_box_commute(const Trace& trace);

/// Step-indexed state identity: distinct steps never share a record.
struct StateRecord {
  std::size_t index = 0;
  bool value = false;

  auto operator<=>(const StateRecord&) const = default;
};

/// The first `steps` states of a linear trace (clipped to a finite trace's end).
std::vector<StateRecord> unroll(const Trace& trace, std::size_t steps);

std::optional<Truth> branch_value_at(const BranchSeries& series, std::size_t k);

/// True iff some reachable step of the branch measures to something other than bottom.
bool branch_realized(const BranchingTrace& bt, std::string_view branch);

/// One branch-tagged element of a superposition; equal values on
/// different branches stay distinct.
struct BranchState {
  std::string branch;
  Truth value = Truth::Bottom;

  auto operator<=>(const BranchState&) const = default;
};

std::set<BranchState> superposition(const BranchingTrace& bt, std::size_t k);

}  // namespace mnemosim
