#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cbst/bench.hpp"

namespace cbst {

class RecordFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Field names shared by the CSV header and the JSON objects.
inline constexpr std::string_view kBenchCsvHeader =
    "variant,threads,key_range,insert_pct,delete_pct,search_pct,duration_ms,ops_completed,"
    "throughput_ops_s,retries,contention_rate,wall_time_ms,seed,repeat";

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records);
void write_bench_json(std::ostream& out, const std::vector<BenchRecord>& records);

/// Columns are matched by header name, so extra columns are ignored.
std::vector<BenchRecord> read_bench_csv(std::istream& in);
std::vector<BenchRecord> read_bench_json(std::istream& in);
/// Picks JSON when the first non-blank character is '[', CSV otherwise.
std::vector<BenchRecord> read_bench_records(std::istream& in);

}  // namespace cbst
