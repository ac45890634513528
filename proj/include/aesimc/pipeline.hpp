#pragma once

#include <span>
#include <vector>

#include "aesimc/imc_transforms.hpp"
#include "aesimc/reference_aes.hpp"
#include "aesimc/schedule.hpp"
#include "aesimc/trace.hpp"

namespace aesimc {

enum class Overlap { off, on };

struct StreamResult {
  std::vector<Block> ciphertexts;
  TraceLog trace;
};

// Encrypts `blocks` in order on one engine. Block i starts at i * II, where II
// is the schedule's total latency with overlap off and its initiation
// interval with overlap on. Overlap is analytic: data still flows through the
// engine one block at a time. `config.schedule` is replaced by `schedule`.
StreamResult run_stream(std::span<const Block> blocks, std::span<const Byte> key,
                        const CycleSchedule& schedule, Overlap overlap = Overlap::off,
                        EngineConfig config = {});

}  // namespace aesimc
