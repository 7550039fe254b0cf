#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbst/key.hpp"

namespace cbst {

enum class EventKind : std::uint8_t { kInvoke, kRespond };

/// One invocation or response of a set operation. Both halves of an
/// operation share its per-thread sequence number.
struct Event {
  std::uint32_t thread_id = 0;
  std::uint32_t seq = 0;
  EventKind kind = EventKind::kInvoke;
  OpKind op = OpKind::kSearch;
  Key key = 0;
  std::optional<bool> result;  // set on responses only
  std::int64_t timestamp_ns = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

/// An operation reassembled from its two events. Pending operations (no
/// response recorded) have no result and respond_ns == kPending.
struct Operation {
  static constexpr std::int64_t kPending = std::numeric_limits<std::int64_t>::max();

  std::uint32_t thread_id = 0;
  std::uint32_t seq = 0;
  OpKind op = OpKind::kSearch;
  Key key = 0;
  std::optional<bool> result;
  std::int64_t invoke_ns = 0;
  std::int64_t respond_ns = kPending;

  bool pending() const noexcept { return !result.has_value(); }
};

class HistoryFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time-ordered log of a concurrent run.
class History {
 public:
  History() = default;
  /// Sorts by (timestamp, thread, seq, invoke-before-respond).
  explicit History(std::vector<Event> events);

  const std::vector<Event>& events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }

  /// Empty string when well formed, else a description of the first
  /// problem: per thread, events alternate invoke/respond with matching
  /// seq, op and key; responses and only responses carry a result;
  /// timestamps never decrease.
  std::string check_well_formed() const;

  /// Operations in invocation order. Throws HistoryFormatError if the
  /// history is not well formed.
  std::vector<Operation> operations() const;

  /// True when no operation is pending.
  bool complete() const;

 private:
  std::vector<Event> events_;
};

/// One event per line:
///   <thread> <seq> <INVOKE|RESPOND> <SEARCH|INSERT|DELETE> <key> [<true|false>] <timestamp_ns>
std::string format_event(const Event& event);
Event parse_event(const std::string& line);
void write_history(std::ostream& out, const History& history);
/// Blank lines and lines starting with '#' are skipped. Throws
/// HistoryFormatError naming the offending line.
History read_history(std::istream& in);

std::int64_t monotonic_now_ns() noexcept;

}  // namespace cbst
