#include "cbst/key.hpp"

namespace cbst {

InvalidKeyError::InvalidKeyError(Key key)
    : std::invalid_argument("sentinel key " + std::to_string(key) +
                            " is reserved and cannot be used as an application key"),
      key_(key) {}

std::string_view to_string(OpKind op) noexcept {
  switch (op) {
    case OpKind::kSearch:
      return "SEARCH";
    case OpKind::kInsert:
      return "INSERT";
    case OpKind::kDelete:
      return "DELETE";
  }
  return "?";
}

std::optional<OpKind> parse_op_kind(std::string_view text) noexcept {
  if (text == "SEARCH") return OpKind::kSearch;
  if (text == "INSERT") return OpKind::kInsert;
  if (text == "DELETE") return OpKind::kDelete;
  return std::nullopt;
}

}  // namespace cbst
