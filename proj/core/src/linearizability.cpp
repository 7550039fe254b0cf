#include "cbst/linearizability.hpp"

#include <cstdint>
#include <unordered_set>

#include "cbst/seq_oracle.hpp"

namespace cbst {

HistoryTooLargeError::HistoryTooLargeError(std::size_t ops, std::size_t bound)
    : std::length_error("history has " + std::to_string(ops) +
                        " operations; linearizability checking is bounded at " +
                        std::to_string(bound)),
      ops_(ops),
      bound_(bound) {}

namespace {

using Mask = std::uint64_t;

struct StateKey {
  Mask done;
  std::vector<Key> contents;
  friend bool operator==(const StateKey&, const StateKey&) = default;
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& s) const noexcept {
    std::size_t h = std::hash<Mask>{}(s.done);
    for (Key k : s.contents) h ^= std::hash<Key>{}(k) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

class Search {
 public:
  Search(const std::vector<Operation>& ops, std::vector<Mask> must_precede, Mask required)
      : ops_(ops), must_precede_(std::move(must_precede)), required_(required) {}

  bool run(Mask done, SeqOracle& oracle, LinearizabilityResult& out) {
    if ((done & required_) == required_) return true;
    if (!seen_.insert({done, oracle.keys()}).second) return false;
    ++out.states_explored;

    for (std::size_t i = 0; i < ops_.size(); ++i) {
      Mask bit = Mask{1} << i;
      if ((done & bit) != 0 || (must_precede_[i] & ~done) != 0) continue;
      const Operation& op = ops_[i];
      SeqOracle next = oracle;
      bool result = next.apply(op.op, op.key);
      if (op.result.has_value() && *op.result != result) continue;
      out.witness.push_back(i);
      if (run(done | bit, next, out)) return true;
      out.witness.pop_back();
    }
    return false;
  }

 private:
  const std::vector<Operation>& ops_;
  std::vector<Mask> must_precede_;
  Mask required_;
  std::unordered_set<StateKey, StateKeyHash> seen_;
};

}  // namespace

LinearizabilityResult check_linearizable_detailed(const History& history,
                                                  const LinearizabilityOptions& options) {
  std::vector<Operation> ops = history.operations();
  std::size_t bound = std::min<std::size_t>(options.max_ops, 64);
  if (ops.size() > bound) throw HistoryTooLargeError(ops.size(), bound);

  std::vector<Mask> must_precede(ops.size(), 0);
  Mask required = 0;
  for (std::size_t j = 0; j < ops.size(); ++j) {
    if (!ops[j].pending()) required |= Mask{1} << j;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (i == j) continue;
      bool same_thread_before = ops[i].thread_id == ops[j].thread_id && ops[i].seq < ops[j].seq;
      if (ops[i].respond_ns < ops[j].invoke_ns || same_thread_before) {
        must_precede[j] |= Mask{1} << i;
      }
    }
  }

  LinearizabilityResult result;
  SeqOracle oracle(options.initial_keys);
  Search search(ops, std::move(must_precede), required);
  result.linearizable = search.run(0, oracle, result);
  if (!result.linearizable) result.witness.clear();
  return result;
}

bool check_linearizable(const History& history, const LinearizabilityOptions& options) {
  return check_linearizable_detailed(history, options).linearizable;
}

}  // namespace cbst
