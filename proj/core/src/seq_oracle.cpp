#include "cbst/seq_oracle.hpp"

namespace cbst {

SeqOracle::SeqOracle(std::vector<Key> initial) {
  for (Key key : initial) {
    require_application_key(key);
    contents_.insert(key);
  }
}

bool SeqOracle::apply(OpKind op, Key key) {
  require_application_key(key);
  switch (op) {
    case OpKind::kSearch:
      return contents_.contains(key);
    case OpKind::kInsert:
      return contents_.insert(key).second;
    case OpKind::kDelete:
      return contents_.erase(key) == 1;
  }
  return false;
}

}  // namespace cbst
