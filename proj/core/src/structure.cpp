#include "cbst/structure.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_set>

namespace cbst {
namespace {

constexpr std::size_t kMaxReported = 64;

struct Visit {
  const NodeBase* node;
  std::size_t parent;  // index into visits, npos for the root
  bool right;          // which child of parent
  std::optional<Key> lo;  // inclusive lower bound
  std::optional<Key> hi;  // exclusive upper bound
};

constexpr std::size_t npos = static_cast<std::size_t>(-1);

std::string path_of(const std::vector<Visit>& visits, std::size_t index) {
  std::string reversed;
  for (std::size_t i = index; visits[i].parent != npos; i = visits[i].parent) {
    reversed += visits[i].right ? 'R' : 'L';
    reversed += '.';
  }
  std::string path = "root";
  for (auto it = reversed.rbegin(); it != reversed.rend(); ++it) path += *it;
  return path;
}

std::string describe(Key key) {
  if (key == kNegInf) return "-inf";
  if (key == kPosInf) return "+inf";
  return std::to_string(key);
}

class Checker {
 public:
  explicit Checker(InvariantReport& report) : report_(report) {}

  void fail(bool InvariantReport::*flag, std::string message) {
    report_.*flag = false;
    if (report_.violations.size() < kMaxReported) report_.violations.push_back(std::move(message));
  }

  void walk(const NodeBase* root) {
    if (root == nullptr) {
      fail(&InvariantReport::shape_ok, "root: tree has no root");
      return;
    }
    std::vector<Visit> visits;
    std::vector<std::size_t> stack;
    std::unordered_set<const NodeBase*> seen;
    std::optional<Key> previous_leaf;

    visits.push_back({root, npos, false, std::nullopt, std::nullopt});
    stack.push_back(0);
    while (!stack.empty()) {
      std::size_t index = stack.back();
      stack.pop_back();
      const Visit v = visits[index];
      const NodeBase* node = v.node;
      if (!seen.insert(node).second) {
        fail(&InvariantReport::shape_ok, path_of(visits, index) + ": node reachable twice");
        continue;
      }
      if ((v.lo && node->key < *v.lo) || (v.hi && !(node->key < *v.hi))) {
        fail(&InvariantReport::order_ok,
             path_of(visits, index) + ": key " + describe(node->key) + " outside [" +
                 (v.lo ? describe(*v.lo) : "-") + ", " + (v.hi ? describe(*v.hi) : "-") + ")");
      }
      NodeBase* left = node->left();
      NodeBase* right = node->right();
      if (node->leaf) {
        if (left != nullptr || right != nullptr) {
          fail(&InvariantReport::shape_ok, path_of(visits, index) + ": leaf has children");
        }
        if (previous_leaf && !(*previous_leaf < node->key)) {
          fail(&InvariantReport::order_ok, path_of(visits, index) + ": leaf " +
                                               describe(node->key) + " does not follow leaf " +
                                               describe(*previous_leaf));
        }
        previous_leaf = node->key;
        continue;
      }
      if (left == nullptr || right == nullptr) {
        fail(&InvariantReport::shape_ok, path_of(visits, index) + ": router " +
                                             describe(node->key) + " has " +
                                             (left == nullptr && right == nullptr ? "no children"
                                                                                  : "one child"));
      }
      // Push right first so leaves come off the stack in order.
      if (right != nullptr) {
        visits.push_back({right, index, true, node->key, v.hi});
        stack.push_back(visits.size() - 1);
      }
      if (left != nullptr) {
        visits.push_back({left, index, false, v.lo, node->key});
        stack.push_back(visits.size() - 1);
      }
    }
  }

  void sentinels(const NodeBase* root, const SentinelNodes& expected) {
    if (root == nullptr) return;
    if (expected.root != nullptr && root != expected.root) {
      fail(&InvariantReport::sentinels_ok, "root: root node was replaced");
    }
    if (root->leaf || root->key != kPosInf) {
      fail(&InvariantReport::sentinels_ok, "root: root must be a +inf router");
      return;
    }
    const NodeBase* right = root->right();
    if (right == nullptr || !right->leaf || right->key != kPosInf ||
        (expected.pos_leaf != nullptr && right != expected.pos_leaf)) {
      fail(&InvariantReport::sentinels_ok, "root.R: +inf sentinel leaf missing");
    }
    const NodeBase* node = root->left();
    std::string path = "root.L";
    while (node != nullptr && !node->leaf) {
      node = node->left();
      path += ".L";
    }
    if (node == nullptr || node->key != kNegInf ||
        (expected.neg_leaf != nullptr && node != expected.neg_leaf)) {
      fail(&InvariantReport::sentinels_ok, path + ": -inf sentinel leaf missing");
    }
  }

 private:
  InvariantReport& report_;
};

}  // namespace

InvariantReport check_structure(const NodeBase* root, const SentinelNodes& expected) {
  InvariantReport report;
  Checker checker(report);
  checker.walk(root);
  if (report.shape_ok) checker.sentinels(root, expected);
  return report;
}

InvariantReport check_structure(const ConcurrentSet& tree) {
  return check_structure(tree.root(), tree.sentinels());
}

void check_balance(const History& history, const std::vector<Key>& final_keys,
                   const std::vector<Key>& initial_keys, InvariantReport& report) {
  auto fail = [&report](std::string message) {
    report.balance_ok = false;
    if (report.violations.size() < kMaxReported) report.violations.push_back(std::move(message));
  };

  struct Interval {
    std::int64_t invoke;
    std::int64_t respond;
  };
  struct PerKey {
    std::vector<Interval> inserts;
    std::vector<Interval> deletes;
  };
  std::map<Key, PerKey> keys;
  for (const Operation& op : history.operations()) {
    if (op.pending()) {
      fail("history is incomplete: thread " + std::to_string(op.thread_id) + " op " +
           std::to_string(op.seq) + " has no response");
      return;
    }
    if (!*op.result || op.op == OpKind::kSearch) continue;
    auto& entry = keys[op.key];
    (op.op == OpKind::kInsert ? entry.inserts : entry.deletes)
        .push_back({op.invoke_ns, op.respond_ns});
  }
  for (Key k : initial_keys) keys.try_emplace(k);
  for (Key k : final_keys) keys.try_emplace(k);

  std::vector<Key> initial_sorted = initial_keys;
  std::sort(initial_sorted.begin(), initial_sorted.end());
  std::vector<Key> final_sorted = final_keys;
  std::sort(final_sorted.begin(), final_sorted.end());

  for (const auto& [key, ops] : keys) {
    const long initial = std::binary_search(initial_sorted.begin(), initial_sorted.end(), key);
    const long present = std::binary_search(final_sorted.begin(), final_sorted.end(), key);
    const long net = initial + static_cast<long>(ops.inserts.size()) -
                     static_cast<long>(ops.deletes.size());
    if (net != present) {
      fail("key " + std::to_string(key) + ": " + std::to_string(ops.inserts.size()) +
           " successful inserts and " + std::to_string(ops.deletes.size()) +
           " successful deletes from " + (initial ? "present" : "absent") + " leave it " +
           (net == 1 ? "present" : net == 0 ? "absent" : "with count " + std::to_string(net)) +
           ", but the final set has it " + (present ? "present" : "absent"));
      continue;
    }
    // At any instant x, the linearized inserts number between those that
    // responded by x and those invoked by x, likewise deletes. Alternation
    // needs some choice in those ranges leaving the count in {0, 1}.
    auto sorted_times = [](const std::vector<Interval>& v, std::int64_t Interval::*field) {
      std::vector<std::int64_t> times;
      times.reserve(v.size());
      for (const Interval& i : v) times.push_back(i.*field);
      std::sort(times.begin(), times.end());
      return times;
    };
    auto at_or_before = [](const std::vector<std::int64_t>& times, std::int64_t at) {
      return static_cast<long>(std::upper_bound(times.begin(), times.end(), at) - times.begin());
    };
    const auto ins_invoked = sorted_times(ops.inserts, &Interval::invoke);
    const auto ins_responded = sorted_times(ops.inserts, &Interval::respond);
    const auto del_invoked = sorted_times(ops.deletes, &Interval::invoke);
    const auto del_responded = sorted_times(ops.deletes, &Interval::respond);
    for (std::int64_t at : ins_responded) {
      if (initial + at_or_before(ins_responded, at) - at_or_before(del_invoked, at) > 1) {
        fail("key " + std::to_string(key) + ": insert responding at " + std::to_string(at) +
             " succeeded while the key must already have been present");
        break;
      }
    }
    for (std::int64_t at : del_responded) {
      if (initial + at_or_before(ins_invoked, at) - at_or_before(del_responded, at) < 0) {
        fail("key " + std::to_string(key) + ": delete responding at " + std::to_string(at) +
             " succeeded while the key must already have been absent");
        break;
      }
    }
  }
}

bool check_balance(const History& history, const std::vector<Key>& final_keys,
                   const std::vector<Key>& initial_keys) {
  InvariantReport report;
  check_balance(history, final_keys, initial_keys, report);
  return report.balance_ok;
}

}  // namespace cbst
