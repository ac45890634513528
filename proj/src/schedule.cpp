#include "aesimc/schedule.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "aesimc/error.hpp"
#include "aesimc/reference_aes.hpp"
#include "json.hpp"

namespace aesimc {

const char* to_string(Stage stage) {
  switch (stage) {
    case Stage::load:
      return "load";
    case Stage::addroundkey:
      return "addroundkey";
    case Stage::subbyte:
      return "subbyte";
    case Stage::shiftrow:
      return "shiftrow";
    case Stage::mixcolumn:
      return "mixcolumn";
    case Stage::store:
      return "store";
  }
  return "?";
}

std::optional<Stage> stage_from_string(std::string_view name) {
  for (Stage s : kAllStages) {
    if (name == to_string(s)) return s;
  }
  return std::nullopt;
}

int CycleSchedule::cost(Stage stage) const {
  const auto it = stage_costs.find(stage);
  if (it == stage_costs.end()) {
    throw ScheduleError(fmt::format("schedule has no cost for stage {}", to_string(stage)));
  }
  return it->second;
}

int CycleSchedule::total_latency() const {
  const auto slots = timeline(*this);
  int end = 0;
  for (const auto& s : slots) end = std::max(end, s.start + s.cycles);
  return end;
}

int CycleSchedule::effective_initiation_interval() const {
  return initiation_interval.value_or(total_latency());
}

CycleSchedule CycleSchedule::standard() {
  CycleSchedule s;
  s.stage_costs = {{Stage::load, 2},      {Stage::addroundkey, 1}, {Stage::subbyte, 1},
                   {Stage::shiftrow, 1},  {Stage::mixcolumn, 1},   {Stage::store, 3}};
  return s;
}

std::vector<StageSlot> timeline(const CycleSchedule& schedule) {
  const int load = schedule.cost(Stage::load);
  const int ark = schedule.cost(Stage::addroundkey);
  const int sb = schedule.cost(Stage::subbyte);
  const int sr = schedule.cost(Stage::shiftrow) + schedule.exchange_cycles;
  const int mc = schedule.cost(Stage::mixcolumn);
  const int store = schedule.cost(Stage::store);

  std::vector<StageSlot> slots;
  int t = 0;
  auto serial = [&](int round, Stage stage, int cycles) {
    slots.push_back({round, stage, t, cycles});
    t += cycles;
  };
  auto paired = [&](int round, Stage first, int first_cycles, Stage second, int second_cycles,
                    bool fused) {
    if (!fused) {
      serial(round, first, first_cycles);
      serial(round, second, second_cycles);
      return;
    }
    slots.push_back({round, first, t, first_cycles});
    slots.push_back({round, second, t, second_cycles});
    t += std::max(first_cycles, second_cycles);
  };

  serial(0, Stage::load, load);
  serial(0, Stage::addroundkey, ark);
  for (int round = 1; round <= static_cast<int>(kRounds); ++round) {
    paired(round, Stage::subbyte, sb, Stage::shiftrow, sr, schedule.fuse_subbyte_shiftrow);
    if (round != static_cast<int>(kRounds)) {
      paired(round, Stage::mixcolumn, mc, Stage::addroundkey, ark,
             schedule.fuse_mixcolumn_addroundkey);
    } else {
      serial(round, Stage::addroundkey, ark);
    }
  }
  serial(0, Stage::store, store);
  return slots;
}

ScheduleDiagnostics validate_schedule(const CycleSchedule& schedule) {
  ScheduleDiagnostics diag;
  bool complete = true;
  for (Stage s : kAllStages) {
    const auto it = schedule.stage_costs.find(s);
    if (it == schedule.stage_costs.end()) {
      diag.problems.push_back(fmt::format("stage {} has no cost", to_string(s)));
      complete = false;
    } else if (it->second < 1) {
      diag.problems.push_back(
          fmt::format("stage {} cost must be >= 1 (got {})", to_string(s), it->second));
    }
  }
  if (schedule.exchange_cycles < 0) {
    diag.problems.push_back(
        fmt::format("exchange_cycles must be >= 0 (got {})", schedule.exchange_cycles));
  }
  if (!complete) return diag;

  diag.total_latency = schedule.total_latency();
  if (schedule.declared_total && *schedule.declared_total != diag.total_latency) {
    diag.problems.push_back(
        fmt::format("declared total {} does not match the round-structure sum {}",
                    *schedule.declared_total, diag.total_latency));
  }
  if (schedule.initiation_interval &&
      (*schedule.initiation_interval < 1 ||
       *schedule.initiation_interval > diag.total_latency)) {
    diag.problems.push_back(fmt::format("initiation_interval must be in 1..{} (got {})",
                                        diag.total_latency, *schedule.initiation_interval));
  }
  return diag;
}

namespace {

int integer_field(const nlohmann::json& value, const std::string& key) {
  if (!value.is_number_integer()) {
    throw ScheduleError(fmt::format("schedule field '{}' must be an integer", key));
  }
  return value.get<int>();
}

}  // namespace

CycleSchedule parse_schedule(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScheduleError(fmt::format("schedule is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw ScheduleError("schedule must be a JSON object");

  CycleSchedule s = CycleSchedule::standard();
  for (const auto& [key, value] : doc.items()) {
    if (auto stage = stage_from_string(key)) {
      s.stage_costs[*stage] = integer_field(value, key);
    } else if (key == "fuse_subbyte_shiftrow" || key == "fuse_mixcolumn_addroundkey") {
      if (!value.is_boolean()) {
        throw ScheduleError(fmt::format("schedule field '{}' must be a boolean", key));
      }
      (key == "fuse_subbyte_shiftrow" ? s.fuse_subbyte_shiftrow
                                      : s.fuse_mixcolumn_addroundkey) = value.get<bool>();
    } else if (key == "exchange_cycles") {
      s.exchange_cycles = integer_field(value, key);
    } else if (key == "total_latency") {
      s.declared_total = integer_field(value, key);
    } else if (key == "initiation_interval") {
      s.initiation_interval = integer_field(value, key);
    } else {
      throw ScheduleError(fmt::format("unknown schedule field '{}'", key));
    }
  }
  return s;
}

CycleSchedule load_schedule_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScheduleError(fmt::format("cannot open schedule file '{}'", path));
  std::stringstream text;
  text << in.rdbuf();
  return parse_schedule(text.str());
}

std::string schedule_to_json(const CycleSchedule& schedule) {
  nlohmann::ordered_json doc;
  for (Stage s : kAllStages) {
    const auto it = schedule.stage_costs.find(s);
    if (it != schedule.stage_costs.end()) doc[to_string(s)] = it->second;
  }
  doc["fuse_subbyte_shiftrow"] = schedule.fuse_subbyte_shiftrow;
  doc["fuse_mixcolumn_addroundkey"] = schedule.fuse_mixcolumn_addroundkey;
  doc["exchange_cycles"] = schedule.exchange_cycles;
  if (schedule.declared_total) doc["total_latency"] = *schedule.declared_total;
  if (schedule.initiation_interval) doc["initiation_interval"] = *schedule.initiation_interval;
  return doc.dump();
}

}  // namespace aesimc
