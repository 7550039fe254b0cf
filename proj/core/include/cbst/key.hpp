#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cbst {

/// Dictionary key. Application keys live strictly between the two sentinels.
using Key = std::int64_t;

inline constexpr Key kNegInf = std::numeric_limits<Key>::min();
inline constexpr Key kPosInf = std::numeric_limits<Key>::max();

constexpr bool is_sentinel(Key key) noexcept {
  return key == kNegInf || key == kPosInf;
}

constexpr bool is_application_key(Key key) noexcept {
  return !is_sentinel(key);
}

/// Thrown when a sentinel reaches a public operation.
class InvalidKeyError : public std::invalid_argument {
 public:
  explicit InvalidKeyError(Key key);
  Key key() const noexcept { return key_; }

 private:
  Key key_;
};

inline void require_application_key(Key key) {
  if (!is_application_key(key)) throw InvalidKeyError(key);
}

enum class OpKind : std::uint8_t { kSearch, kInsert, kDelete };

inline constexpr OpKind kAllOpKinds[] = {OpKind::kSearch, OpKind::kInsert,
                                         OpKind::kDelete};

std::string_view to_string(OpKind op) noexcept;
std::optional<OpKind> parse_op_kind(std::string_view text) noexcept;

}  // namespace cbst
