#include "cbst/workload.hpp"

#include <charconv>
#include <stdexcept>

namespace cbst {

std::vector<std::string> WorkloadSpec::validate() const {
  std::vector<std::string> problems;
  if (insert_pct + delete_pct + search_pct != 100) {
    problems.push_back("mix percentages must sum to 100 (got " +
                       std::to_string(insert_pct + delete_pct + search_pct) + ")");
  }
  if (key_range < 2) {
    problems.push_back("key range must be at least 2 (got " + std::to_string(key_range) + ")");
  }
  return problems;
}

void WorkloadSpec::require_valid() const {
  auto problems = validate();
  if (problems.empty()) return;
  std::string message = "invalid workload:";
  for (const auto& p : problems) message += " " + p + ";";
  throw std::invalid_argument(message);
}

WorkloadSpec parse_mix(std::string_view text, Key key_range) {
  unsigned parts[3] = {0, 0, 0};
  std::size_t index = 0;
  std::string_view rest = text;
  while (true) {
    std::size_t comma = rest.find(',');
    std::string_view field = rest.substr(0, comma);
    if (index >= 3) throw std::invalid_argument("mix must have exactly three fields: " + std::string(text));
    auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), parts[index]);
    if (ec != std::errc{} || end != field.data() + field.size() || field.empty()) {
      throw std::invalid_argument("mix field is not a non-negative integer: '" + std::string(field) + "'");
    }
    ++index;
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (index != 3) throw std::invalid_argument("mix must have exactly three fields: " + std::string(text));
  WorkloadSpec spec{parts[0], parts[1], parts[2], key_range};
  spec.require_valid();
  return spec;
}

std::string format_mix(const WorkloadSpec& spec) {
  return std::to_string(spec.insert_pct) + "," + std::to_string(spec.delete_pct) + "," +
         std::to_string(spec.search_pct);
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {
const WorkloadSpec& checked(const WorkloadSpec& spec) {
  spec.require_valid();
  return spec;
}
}  // namespace

OpGenerator::OpGenerator(const WorkloadSpec& spec, std::uint64_t seed, std::uint64_t stream)
    : engine_(derive_stream_seed(seed, stream)),
      key_(0, checked(spec).key_range - 1),
      insert_cut_(spec.insert_pct),
      delete_cut_(spec.insert_pct + spec.delete_pct) {}

}  // namespace cbst
