#include "cbst/history.hpp"

#include <algorithm>
#include <chrono>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace cbst {

History::History(std::vector<Event> events) : events_(std::move(events)) {
  std::stable_sort(events_.begin(), events_.end(), [](const Event& a, const Event& b) {
    if (a.timestamp_ns != b.timestamp_ns) return a.timestamp_ns < b.timestamp_ns;
    if (a.thread_id != b.thread_id) return a.thread_id < b.thread_id;
    if (a.seq != b.seq) return a.seq < b.seq;
    return a.kind == EventKind::kInvoke && b.kind == EventKind::kRespond;
  });
}

std::string History::check_well_formed() const {
  struct ThreadState {
    const Event* open = nullptr;
    std::optional<std::uint32_t> last_seq;
  };
  std::map<std::uint32_t, ThreadState> threads;
  std::int64_t last_ts = std::numeric_limits<std::int64_t>::min();
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const Event& e = events_[i];
    std::string where = "event " + std::to_string(i) + " (" + format_event(e) + "): ";
    if (e.timestamp_ns < last_ts) return where + "timestamp decreases";
    last_ts = e.timestamp_ns;
    ThreadState& t = threads[e.thread_id];
    if (e.kind == EventKind::kInvoke) {
      if (t.open != nullptr) return where + "invocation while another operation is open";
      if (e.result.has_value()) return where + "invocation carries a result";
      if (t.last_seq && e.seq <= *t.last_seq) return where + "sequence number does not increase";
      if (!is_application_key(e.key)) return where + "sentinel key";
      t.open = &e;
      t.last_seq = e.seq;
    } else {
      if (t.open == nullptr) return where + "response without invocation";
      if (t.open->seq != e.seq || t.open->op != e.op || t.open->key != e.key) {
        return where + "response does not match its invocation";
      }
      if (!e.result.has_value()) return where + "response without result";
      t.open = nullptr;
    }
  }
  return {};
}

std::vector<Operation> History::operations() const {
  if (std::string problem = check_well_formed(); !problem.empty()) {
    throw HistoryFormatError("malformed history: " + problem);
  }
  std::vector<Operation> ops;
  std::map<std::uint32_t, std::size_t> open;
  for (const Event& e : events_) {
    if (e.kind == EventKind::kInvoke) {
      open[e.thread_id] = ops.size();
      ops.push_back({e.thread_id, e.seq, e.op, e.key, std::nullopt, e.timestamp_ns,
                     Operation::kPending});
    } else {
      Operation& op = ops[open.at(e.thread_id)];
      op.result = e.result;
      op.respond_ns = e.timestamp_ns;
    }
  }
  return ops;
}

bool History::complete() const {
  return std::ranges::all_of(operations(), [](const Operation& op) { return !op.pending(); });
}

std::string format_event(const Event& e) {
  std::string line = std::to_string(e.thread_id) + ' ' + std::to_string(e.seq) + ' ' +
                     (e.kind == EventKind::kInvoke ? "INVOKE" : "RESPOND") + ' ' +
                     std::string(to_string(e.op)) + ' ' + std::to_string(e.key) + ' ';
  if (e.result.has_value()) line += *e.result ? "true " : "false ";
  line += std::to_string(e.timestamp_ns);
  return line;
}

Event parse_event(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> fields;
  for (std::string f; in >> f;) fields.push_back(f);
  if (fields.size() != 6 && fields.size() != 7) {
    throw HistoryFormatError("expected 6 or 7 fields, got " + std::to_string(fields.size()));
  }
  auto to_int = [](const std::string& text, const char* what) -> std::int64_t {
    std::size_t used = 0;
    std::int64_t value = 0;
    try {
      value = std::stoll(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size() || text.empty()) {
      throw HistoryFormatError(std::string("bad ") + what + ": '" + text + "'");
    }
    return value;
  };

  Event e;
  std::int64_t thread = to_int(fields[0], "thread id");
  std::int64_t seq = to_int(fields[1], "sequence number");
  if (thread < 0 || thread > std::numeric_limits<std::uint32_t>::max() || seq < 0 ||
      seq > std::numeric_limits<std::uint32_t>::max()) {
    throw HistoryFormatError("thread id or sequence number out of range");
  }
  e.thread_id = static_cast<std::uint32_t>(thread);
  e.seq = static_cast<std::uint32_t>(seq);
  if (fields[2] == "INVOKE") {
    e.kind = EventKind::kInvoke;
  } else if (fields[2] == "RESPOND") {
    e.kind = EventKind::kRespond;
  } else {
    throw HistoryFormatError("bad event kind: '" + fields[2] + "'");
  }
  auto op = parse_op_kind(fields[3]);
  if (!op) throw HistoryFormatError("bad operation: '" + fields[3] + "'");
  e.op = *op;
  e.key = to_int(fields[4], "key");
  if (fields.size() == 7) {
    if (fields[5] == "true") {
      e.result = true;
    } else if (fields[5] == "false") {
      e.result = false;
    } else {
      throw HistoryFormatError("bad result: '" + fields[5] + "'");
    }
  }
  e.timestamp_ns = to_int(fields.back(), "timestamp");
  if ((e.kind == EventKind::kRespond) != e.result.has_value()) {
    throw HistoryFormatError("responses, and only responses, carry a result");
  }
  return e;
}

void write_history(std::ostream& out, const History& history) {
  for (const Event& e : history.events()) out << format_event(e) << '\n';
}

History read_history(std::istream& in) {
  std::vector<Event> events;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      events.push_back(parse_event(line));
    } catch (const HistoryFormatError& err) {
      throw HistoryFormatError("line " + std::to_string(number) + ": " + err.what());
    }
  }
  return History(std::move(events));
}

std::int64_t monotonic_now_ns() noexcept {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace cbst
