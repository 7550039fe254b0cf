#pragma once

#include <string>
#include <vector>

#include "cbst/history.hpp"
#include "cbst/key.hpp"
#include "cbst/node.hpp"
#include "cbst/tree.hpp"

namespace cbst {

/// Outcome of a quiescent consistency check. ok() iff no violations.
struct InvariantReport {
  bool order_ok = true;
  bool shape_ok = true;
  bool sentinels_ok = true;
  bool balance_ok = true;
  /// Human-readable findings; tree findings carry the path from the root
  /// ("root.L.R").
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
};

/// Order: every key in a router's left subtree is smaller than the router,
/// every key in its right subtree is greater or equal, and leaves read
/// left to right are strictly increasing. Shape: routers have two children,
/// leaves none. Sentinels: the three initial nodes are where an empty tree
/// put them. Requires quiescence.
InvariantReport check_structure(const ConcurrentSet& tree);

/// Same checks over a raw node graph. Sentinel checks are skipped for
/// members of `expected` left null.
InvariantReport check_structure(const NodeBase* root, const SentinelNodes& expected = {});

/// Per key, successful inserts and deletes must be able to alternate
/// under real-time order, and the net effect on `initial_keys` must equal
/// membership in `final_keys`. Searches and failed updates are ignored.
/// Requires a complete history.
bool check_balance(const History& history, const std::vector<Key>& final_keys,
                   const std::vector<Key>& initial_keys = {});

/// check_balance with findings, written into report.balance_ok and
/// report.violations.
void check_balance(const History& history, const std::vector<Key>& final_keys,
                   const std::vector<Key>& initial_keys, InvariantReport& report);

}  // namespace cbst
