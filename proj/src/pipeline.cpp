#include "aesimc/pipeline.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <ostream>
#include <sstream>

#include "aesimc/error.hpp"
#include "json.hpp"

namespace aesimc {

std::uint64_t TraceLog::makespan() const {
  std::uint64_t end = 0;
  for (const auto& b : per_block) end = std::max(end, b.end);
  return end;
}

std::string format_event(const TraceEvent& event) {
  nlohmann::ordered_json detail;
  detail["block"] = event.block;
  detail["round"] = event.round;
  detail["op"] = event.op;
  detail["rows"] = event.stats.rows;
  detail["reads"] = event.stats.cell_reads;
  detail["writes"] = event.stats.cell_writes;
  detail["lut_lookups"] = event.stats.lut_lookups;
  detail["lut_waves"] = event.stats.lut_waves;
  detail["xors"] = event.stats.xor_ops;
  detail["exchanged"] = event.stats.exchanged_bytes;

  nlohmann::ordered_json line;
  line["cycle"] = event.cycle;
  line["unit"] = std::string(1, event.unit);
  line["stage"] = to_string(event.stage);
  line["detail"] = std::move(detail);
  return line.dump();
}

void TraceLog::write(std::ostream& out) const {
  for (const auto& e : events) out << format_event(e) << '\n';
  for (const auto& b : per_block) {
    nlohmann::ordered_json line;
    line["block"] = b.block;
    line["start"] = b.start;
    line["end"] = b.end;
    out << line.dump() << '\n';
  }
}

std::string TraceLog::to_text() const {
  std::ostringstream out;
  write(out);
  return out.str();
}

StreamResult run_stream(std::span<const Block> blocks, std::span<const Byte> key,
                        const CycleSchedule& schedule, Overlap overlap, EngineConfig config) {
  const auto diag = validate_schedule(schedule);
  if (!diag.ok()) {
    throw ScheduleError(fmt::format("invalid schedule: {}", fmt::join(diag.problems, "; ")));
  }
  const RoundKeySet keys = expand_key(key);

  StreamResult result;
  if (blocks.empty()) return result;

  config.schedule = schedule;
  ImcEngine engine(std::move(config));
  engine.load_keys(keys);

  const auto interval = static_cast<std::uint64_t>(
      overlap == Overlap::on ? schedule.effective_initiation_interval() : diag.total_latency);

  result.ciphertexts.reserve(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    BlockResult block = engine.encrypt(blocks[i], i, i * interval);
    result.ciphertexts.push_back(block.ciphertext);
    auto& events = result.trace.events;
    events.insert(events.end(), std::make_move_iterator(block.trace.events.begin()),
                  std::make_move_iterator(block.trace.events.end()));
    result.trace.per_block.push_back(block.trace.per_block.front());
  }
  if (overlap == Overlap::on) {
    std::stable_sort(result.trace.events.begin(), result.trace.events.end(),
                     [](const TraceEvent& a, const TraceEvent& b) { return a.cycle < b.cycle; });
  }
  return result;
}

}  // namespace aesimc
