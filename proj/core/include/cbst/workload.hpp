#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "cbst/key.hpp"

namespace cbst {

/// Operation mix over a key "bucket" [0, key_range).
struct WorkloadSpec {
  unsigned insert_pct = 9;
  unsigned delete_pct = 1;
  unsigned search_pct = 90;
  Key key_range = 10000;

  static WorkloadSpec low_contention(Key key_range) { return {9, 1, 90, key_range}; }
  static WorkloadSpec mid_contention(Key key_range) { return {20, 10, 70, key_range}; }

  /// One message per violated constraint; empty when valid.
  std::vector<std::string> validate() const;
  /// Throws std::invalid_argument listing the violations.
  void require_valid() const;

  friend bool operator==(const WorkloadSpec&, const WorkloadSpec&) = default;
};

/// Parses "insert,delete,search" percentages, e.g. "9,1,90". The key range
/// is left at `key_range`. Throws std::invalid_argument on malformed text.
WorkloadSpec parse_mix(std::string_view text, Key key_range);
std::string format_mix(const WorkloadSpec& spec);

/// splitmix64 finalizer over (seed, stream): independent, reproducible
/// seeds for per-thread generators.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Draws (operation, key) pairs: the kind by the mix percentages, the key
/// uniformly from [0, key_range).
class OpGenerator {
 public:
  struct Draw {
    OpKind op;
    Key key;
  };

  OpGenerator(const WorkloadSpec& spec, std::uint64_t seed, std::uint64_t stream);

  Draw next() {
    unsigned roll = static_cast<unsigned>(percent_(engine_));
    OpKind op = roll < insert_cut_   ? OpKind::kInsert
                : roll < delete_cut_ ? OpKind::kDelete
                                     : OpKind::kSearch;
    return {op, key_(engine_)};
  }

  Key next_key() { return key_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::uniform_int_distribution<int> percent_{0, 99};
  std::uniform_int_distribution<Key> key_;
  unsigned insert_cut_;
  unsigned delete_cut_;
};

}  // namespace cbst
