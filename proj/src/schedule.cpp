#include "bareprover/schedule.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>

namespace bare {

namespace {

struct TableRow {
  int depth;
  int trees;
  int bits;
};

constexpr std::array<TableRow, 16> kInc2 = {{
    {3, 150, 15},  {5, 150, 15},  {7, 150, 15},  {9, 100, 15},  {11, 100, 15}, {13, 100, 15},
    {15, 75, 15},  {17, 50, 15},  {19, 75, 15},  {21, 100, 15}, {23, 150, 15}, {25, 75, 15},
    {27, 100, 15}, {29, 150, 15}, {31, 75, 15},  {33, 100, 15},
}};

// Run with 2^16 features.
constexpr std::array<TableRow, 22> kExp2 = {{
    {4, 50, 16},   {5, 150, 16},  {6, 160, 16},  {7, 170, 16},  {8, 180, 16},  {9, 190, 16},
    {10, 200, 16}, {11, 200, 16}, {12, 200, 16}, {13, 200, 16}, {14, 210, 16}, {15, 220, 16},
    {16, 225, 16}, {16, 225, 16}, {32, 225, 16}, {9, 300, 16},  {16, 300, 16}, {32, 225, 16},
    {64, 150, 16}, {24, 250, 16}, {25, 250, 16}, {32, 250, 16},
}};

// Feature sizes 16384, 8192, 4096, 2^8, 4096, 2^8, 4096, 32, 2048, 64, 32, 128.
constexpr std::array<TableRow, 12> kExp5 = {{
    {512, 2, 14},
    {512, 2, 13},
    {32, 100, 12},
    {1000, 100, 8},
    {32, 200, 12},
    {1000, 100, 8},
    {32, 200, 12},
    {1000, 32, 5},
    {32, 300, 11},
    {1000, 32, 6},
    {1000, 32, 5},
    {100, 32, 7},
}};

std::span<const TableRow> table_for(std::string_view name) {
  if (name == "inc2") return kInc2;
  if (name == "exp2") return kExp2;
  if (name == "exp5") return kExp5;
  return {};
}

// T stepped linearly from `from` to `to` across 16 loops, rounded to the
// nearest multiple of 10 and held at `to` afterwards.
int linear_trees(int loop, int from, int to) {
  int k = std::min(loop, 15);
  double t = from + (to - from) * static_cast<double>(k) / 15.0;
  return static_cast<int>(std::lround(t / 10.0)) * 10;
}

int inc_depth(int loop) { return std::min(3 + 2 * loop, 33); }

}  // namespace

std::vector<std::string> builtin_schedule_names() {
  return {"fives", "nines", "thirteens", "sixteens", "inc", "32_inc",
          "inc2",  "inc3",  "dec3",      "exp2",     "exp5"};
}

int schedule_table_length(std::string_view name) {
  return static_cast<int>(table_for(name).size());
}

std::vector<ScheduleEntry> builtin_schedule(std::string_view name, int loops) {
  if (loops < 0) throw ScheduleError("loop count must be non-negative");
  auto fixed = [&](int depth, int trees) {
    std::vector<ScheduleEntry> out;
    for (int k = 0; k < loops; ++k) out.push_back({k, depth, trees, default_feature_bits});
    return out;
  };
  auto per_loop = [&](auto&& fn) {
    std::vector<ScheduleEntry> out;
    for (int k = 0; k < loops; ++k) out.push_back(fn(k));
    return out;
  };

  if (name == "fives") return fixed(5, 100);
  if (name == "nines") return fixed(9, 100);
  if (name == "thirteens") return fixed(13, 200);
  if (name == "sixteens") return fixed(16, 100);
  if (name == "inc") {
    return per_loop([](int k) { return ScheduleEntry{k, inc_depth(k), 100, default_feature_bits}; });
  }
  if (name == "32_inc") {
    return per_loop([](int k) { return ScheduleEntry{k, 32, linear_trees(k, 50, 250), default_feature_bits}; });
  }
  if (name == "inc3") {
    return per_loop([](int k) {
      return ScheduleEntry{k, inc_depth(k), linear_trees(k, 50, 250), default_feature_bits};
    });
  }
  if (name == "dec3") {
    return per_loop([](int k) {
      return ScheduleEntry{k, inc_depth(k), linear_trees(k, 250, 50), default_feature_bits};
    });
  }
  auto table = table_for(name);
  if (table.empty()) throw ScheduleError("unknown schedule '" + std::string(name) + "'");
  if (static_cast<std::size_t>(loops) > table.size()) {
    throw ScheduleError("schedule '" + std::string(name) + "' has " + std::to_string(table.size()) +
                        " entries, " + std::to_string(loops) + " loops requested");
  }
  return per_loop([&](int k) {
    const TableRow& r = table[static_cast<std::size_t>(k)];
    return ScheduleEntry{k, r.depth, r.trees, r.bits};
  });
}

}  // namespace bare
