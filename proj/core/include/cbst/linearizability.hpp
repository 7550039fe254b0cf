#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cbst/history.hpp"
#include "cbst/key.hpp"

namespace cbst {

/// The search is exponential in the number of operations, so histories
/// above the bound are refused instead of attempted.
class HistoryTooLargeError : public std::length_error {
 public:
  HistoryTooLargeError(std::size_t ops, std::size_t bound);
  std::size_t ops() const noexcept { return ops_; }
  std::size_t bound() const noexcept { return bound_; }

 private:
  std::size_t ops_;
  std::size_t bound_;
};

struct LinearizabilityOptions {
  std::size_t max_ops = 20;
  /// Set contents before the first operation.
  std::vector<Key> initial_keys;
};

struct LinearizabilityResult {
  bool linearizable = false;
  /// Indices into History::operations() in linearization order. Pending
  /// operations that were left out do not appear.
  std::vector<std::size_t> witness;
  std::size_t states_explored = 0;
};

/// Searches for a total order of the history's operations that respects
/// real-time precedence and replays on SeqOracle with every recorded
/// result. Depth-first over the set of minimal pending operations, pruning
/// (linearized-set, set-contents) pairs already explored.
///
/// Operation A precedes B when A responds strictly before B is invoked, or
/// when both ran on the same thread and A came first. Pending operations
/// may be linearized anywhere after their invocation, with any result, or
/// dropped. Throws HistoryTooLargeError above options.max_ops and
/// HistoryFormatError for malformed histories.
LinearizabilityResult check_linearizable_detailed(const History& history,
                                                  const LinearizabilityOptions& options = {});

bool check_linearizable(const History& history, const LinearizabilityOptions& options = {});

}  // namespace cbst
