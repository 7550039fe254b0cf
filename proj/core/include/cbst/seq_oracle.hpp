#pragma once

#include <set>
#include <vector>

#include "cbst/key.hpp"

namespace cbst {

/// Sequential reference set. Single-threaded; callers serialize access.
class SeqOracle {
 public:
  SeqOracle() = default;
  explicit SeqOracle(std::vector<Key> initial);

  /// Applies one operation and returns its result. Throws InvalidKeyError
  /// for sentinel keys.
  bool apply(OpKind op, Key key);

  bool contains(Key key) const { return contents_.contains(key); }
  std::size_t size() const noexcept { return contents_.size(); }
  bool empty() const noexcept { return contents_.empty(); }

  /// Keys in strictly increasing order.
  std::vector<Key> keys() const { return {contents_.begin(), contents_.end()}; }

  friend bool operator==(const SeqOracle&, const SeqOracle&) = default;

 private:
  std::set<Key> contents_;
};

}  // namespace cbst
