#include "cbst/records.hpp"

#include <charconv>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace cbst {
namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <class T>
T parse_number(const std::string& text, std::string_view column) {
  T value{};
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw RecordFormatError("bad value '" + text + "' in column " + std::string(column));
  }
  return value;
}

Variant variant_from(const std::string& text) {
  auto v = parse_variant(text);
  if (!v) throw RecordFormatError("unknown variant '" + text + "'");
  return *v;
}

json to_json(const BenchRecord& r) {
  return json{{"variant", std::string(to_string(r.variant))},
              {"threads", r.threads},
              {"key_range", r.key_range},
              {"insert_pct", r.insert_pct},
              {"delete_pct", r.delete_pct},
              {"search_pct", r.search_pct},
              {"duration_ms", r.duration_ms},
              {"ops_completed", r.ops_completed},
              {"throughput_ops_s", r.throughput_ops_s},
              {"retries", r.retries},
              {"contention_rate", r.contention_rate},
              {"wall_time_ms", r.wall_time_ms},
              {"seed", r.seed},
              {"repeat", r.repeat}};
}

}  // namespace

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << kBenchCsvHeader << '\n';
  std::ostringstream row;
  row << std::setprecision(17);
  for (const BenchRecord& r : records) {
    row.str({});
    row << to_string(r.variant) << ',' << r.threads << ',' << r.key_range << ',' << r.insert_pct
        << ',' << r.delete_pct << ',' << r.search_pct << ',' << r.duration_ms << ','
        << r.ops_completed << ',' << r.throughput_ops_s << ',' << r.retries << ','
        << r.contention_rate << ',' << r.wall_time_ms << ',' << r.seed << ',' << r.repeat;
    out << row.str() << '\n';
  }
}

void write_bench_json(std::ostream& out, const std::vector<BenchRecord>& records) {
  json array = json::array();
  for (const BenchRecord& r : records) array.push_back(to_json(r));
  out << array.dump(2) << '\n';
}

std::vector<BenchRecord> read_bench_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw RecordFormatError("empty bench CSV");
  std::map<std::string, std::size_t> column;
  auto header = split_csv_line(line);
  for (std::size_t i = 0; i < header.size(); ++i) column[header[i]] = i;
  for (std::string_view name : split_csv_line(std::string(kBenchCsvHeader))) {
    if (!column.contains(std::string(name))) {
      throw RecordFormatError("bench CSV is missing column " + std::string(name));
    }
  }

  std::vector<BenchRecord> records;
  for (std::size_t number = 2; std::getline(in, line); ++number) {
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (fields.size() < header.size()) {
      throw RecordFormatError("line " + std::to_string(number) + ": expected " +
                              std::to_string(header.size()) + " fields");
    }
    auto get = [&](const char* name) -> const std::string& { return fields[column.at(name)]; };
    BenchRecord r;
    r.variant = variant_from(get("variant"));
    r.threads = parse_number<unsigned>(get("threads"), "threads");
    r.key_range = parse_number<Key>(get("key_range"), "key_range");
    r.insert_pct = parse_number<unsigned>(get("insert_pct"), "insert_pct");
    r.delete_pct = parse_number<unsigned>(get("delete_pct"), "delete_pct");
    r.search_pct = parse_number<unsigned>(get("search_pct"), "search_pct");
    r.duration_ms = parse_number<std::int64_t>(get("duration_ms"), "duration_ms");
    r.ops_completed = parse_number<std::uint64_t>(get("ops_completed"), "ops_completed");
    r.throughput_ops_s = parse_number<double>(get("throughput_ops_s"), "throughput_ops_s");
    r.retries = parse_number<std::uint64_t>(get("retries"), "retries");
    r.contention_rate = parse_number<double>(get("contention_rate"), "contention_rate");
    r.wall_time_ms = parse_number<double>(get("wall_time_ms"), "wall_time_ms");
    r.seed = parse_number<std::uint64_t>(get("seed"), "seed");
    r.repeat = parse_number<unsigned>(get("repeat"), "repeat");
    records.push_back(r);
  }
  return records;
}

std::vector<BenchRecord> read_bench_json(std::istream& in) {
  json array;
  try {
    in >> array;
  } catch (const json::exception& err) {
    throw RecordFormatError(std::string("bench JSON does not parse: ") + err.what());
  }
  if (!array.is_array()) throw RecordFormatError("bench JSON must be an array");
  std::vector<BenchRecord> records;
  try {
    for (const json& o : array) {
      BenchRecord r;
      r.variant = variant_from(o.at("variant").get<std::string>());
      r.threads = o.at("threads").get<unsigned>();
      r.key_range = o.at("key_range").get<Key>();
      r.insert_pct = o.at("insert_pct").get<unsigned>();
      r.delete_pct = o.at("delete_pct").get<unsigned>();
      r.search_pct = o.at("search_pct").get<unsigned>();
      r.duration_ms = o.at("duration_ms").get<std::int64_t>();
      r.ops_completed = o.at("ops_completed").get<std::uint64_t>();
      r.throughput_ops_s = o.at("throughput_ops_s").get<double>();
      r.retries = o.at("retries").get<std::uint64_t>();
      r.contention_rate = o.at("contention_rate").get<double>();
      r.wall_time_ms = o.at("wall_time_ms").get<double>();
      r.seed = o.at("seed").get<std::uint64_t>();
      r.repeat = o.at("repeat").get<unsigned>();
      records.push_back(r);
    }
  } catch (const json::exception& err) {
    throw RecordFormatError(std::string("bench JSON record is malformed: ") + err.what());
  }
  return records;
}

std::vector<BenchRecord> read_bench_records(std::istream& in) {
  in >> std::ws;
  if (in.peek() == '[') return read_bench_json(in);
  return read_bench_csv(in);
}

}  // namespace cbst
