#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aesimc {

enum class Stage { load, addroundkey, subbyte, shiftrow, mixcolumn, store };

inline constexpr std::array<Stage, 6> kAllStages = {Stage::load,     Stage::addroundkey,
                                                    Stage::subbyte,  Stage::shiftrow,
                                                    Stage::mixcolumn, Stage::store};

const char* to_string(Stage stage);
std::optional<Stage> stage_from_string(std::string_view name);

// Cycle budget of one block. Each stage has a cost per occurrence; fused
// pairs share one slot whose length is the larger of the two costs.
//
// Round structure: load, initial AddRoundKey, rounds 1-9 (SubBytes,
// ShiftRows, MixColumns, AddRoundKey), round 10 without MixColumns, store.
struct CycleSchedule {
  std::map<Stage, int> stage_costs;
  bool fuse_subbyte_shiftrow = true;
  // Applies to rounds 1-9 only; round 10 has no MixColumns.
  bool fuse_mixcolumn_addroundkey = true;
  // Added to every ShiftRows occurrence for the cross-unit byte exchange.
  int exchange_cycles = 0;
  // Total the schedule claims; validate_schedule checks it against the sum.
  std::optional<int> declared_total;
  // Cycles between block starts when overlap is on. Unset means
  // total_latency, i.e. no overlap.
  std::optional<int> initiation_interval;

  // Throws ScheduleError if the stage has no cost entry.
  int cost(Stage stage) const;
  int total_latency() const;
  int effective_initiation_interval() const;

  // load 2, addroundkey/subbyte/shiftrow/mixcolumn 1, store 3, both fusions
  // on: 2 + 1 + 9*2 + 2 + 3 = 26 cycles.
  static CycleSchedule standard();
};

// One scheduled occurrence of a stage inside a block.
struct StageSlot {
  int round;  // 0 for load, initial AddRoundKey and store
  Stage stage;
  int start;  // cycle offset from block start
  int cycles;
};

// Slots in execution order. Fused partners share a start cycle.
std::vector<StageSlot> timeline(const CycleSchedule& schedule);

struct ScheduleDiagnostics {
  std::vector<std::string> problems;
  int total_latency = 0;
  bool ok() const { return problems.empty(); }
};

ScheduleDiagnostics validate_schedule(const CycleSchedule& schedule);

// JSON object with optional keys: the six stage names, fuse_subbyte_shiftrow,
// fuse_mixcolumn_addroundkey, exchange_cycles, total_latency,
// initiation_interval. Omitted stage costs keep their standard values.
CycleSchedule parse_schedule(std::string_view json_text);
CycleSchedule load_schedule_file(const std::string& path);
std::string schedule_to_json(const CycleSchedule& schedule);

}  // namespace aesimc
