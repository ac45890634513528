#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "aesimc/schedule.hpp"

namespace aesimc {

// Crossbar activity of one step on one unit.
struct StepStats {
  std::uint64_t cell_reads = 0;
  std::uint64_t cell_writes = 0;
  std::uint64_t lut_lookups = 0;
  // Sequential LUT passes; lookups spread over parallel LUT instances.
  std::uint64_t lut_waves = 0;
  std::uint64_t xor_ops = 0;
  std::uint64_t exchanged_bytes = 0;
  // Word lines activated or written, ascending.
  std::vector<std::size_t> rows;
};

struct TraceEvent {
  std::uint64_t cycle = 0;
  char unit = 'A';
  Stage stage = Stage::load;
  std::size_t block = 0;
  int round = 0;
  std::string op;
  StepStats stats;
};

struct BlockSpan {
  std::size_t block = 0;
  std::uint64_t start = 0;
  std::uint64_t end = 0;
};

struct TraceLog {
  std::vector<TraceEvent> events;
  std::vector<BlockSpan> per_block;

  std::uint64_t makespan() const;

  // Line-delimited JSON. Events first, keys in the order cycle, unit, stage,
  // detail; then one {"block","start","end"} line per block.
  void write(std::ostream& out) const;
  std::string to_text() const;
};

std::string format_event(const TraceEvent& event);

}  // namespace aesimc
