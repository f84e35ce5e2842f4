#pragma once

// Named per-loop meta-parameter schedules (tree depth D, tree count T,
// feature hashing bits).

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bare {

struct ScheduleEntry {
  int loop_index = 0;
  int depth = 0;
  int trees = 0;
  int feature_bits = 15;

  std::uint32_t feature_size() const { return std::uint32_t{1} << feature_bits; }
  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

class ScheduleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int default_feature_bits = 15;

// fives, nines, thirteens, sixteens, inc, 32_inc, inc2, inc3, dec3, exp2,
// exp5. Table-backed schedules (inc2, exp2, exp5) reject loop counts past
// the end of their table.
std::vector<ScheduleEntry> builtin_schedule(std::string_view name, int loops);
std::vector<std::string> builtin_schedule_names();
// Length of a table-backed schedule, 0 for formula schedules.
int schedule_table_length(std::string_view name);

}  // namespace bare
