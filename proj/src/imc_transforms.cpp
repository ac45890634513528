#include "aesimc/imc_transforms.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <optional>
#include <set>

#include "aesimc/error.hpp"

namespace aesimc {

namespace {

Nibble high(Byte b) { return static_cast<Nibble>(b >> 4); }
Nibble low(Byte b) { return static_cast<Nibble>(b & 0x0f); }
Byte join(Nibble hi, Nibble lo) { return static_cast<Byte>((hi << 4) | lo); }

// Collects counter deltas and touched rows for one step.
class Activity {
 public:
  explicit Activity(const CrossbarArray& array) : array_(array), start_(array.counters()) {}

  void touch(std::size_t row) { rows_.insert(row); }

  StepStats finish(StepStats stats = {}) const {
    const auto& now = array_.counters();
    stats.cell_reads += now.cell_reads - start_.cell_reads;
    stats.cell_writes += now.cell_writes - start_.cell_writes;
    stats.rows.assign(rows_.begin(), rows_.end());
    return stats;
  }

 private:
  const CrossbarArray& array_;
  CrossbarCounters start_;
  std::set<std::size_t> rows_;
};

}  // namespace

std::size_t UnitLayout::row_count() const {
  std::size_t top = 0;
  auto bump = [&](std::size_t r) { top = std::max(top, r + 1); };
  for (auto r : data_rows) bump(r);
  for (const auto& round : key_rows)
    for (auto r : round) bump(r);
  for (auto r : sbox_rows) bump(r);
  for (const auto& inst : m2_rows)
    for (auto r : inst) bump(r);
  for (auto r : buffer_rows) bump(r);
  return top;
}

void UnitLayout::validate() const {
  if (m2_rows.empty()) throw ConfigurationError("layout needs at least one M-2 LUT instance");
  std::set<std::size_t> seen;
  auto claim = [&](std::size_t r, const char* what) {
    if (!seen.insert(r).second) {
      throw ConfigurationError(fmt::format("row {} assigned twice (second use: {})", r, what));
    }
  };
  for (auto r : data_rows) claim(r, "data");
  for (const auto& round : key_rows)
    for (auto r : round) claim(r, "key");
  for (auto r : sbox_rows) claim(r, "S-box LUT");
  for (const auto& inst : m2_rows)
    for (auto r : inst) claim(r, "M-2 LUT");
  for (auto r : buffer_rows) claim(r, "buffer");
}

UnitLayout UnitLayout::standard(std::size_t m2_parallelism, std::size_t buffer_rows) {
  UnitLayout layout;
  std::size_t next = 0;
  for (auto& r : layout.data_rows) r = next++;
  for (auto& round : layout.key_rows)
    for (auto& r : round) r = next++;
  for (auto& r : layout.sbox_rows) r = next++;
  layout.m2_rows.resize(m2_parallelism);
  for (auto& inst : layout.m2_rows)
    for (auto& r : inst) r = next++;
  layout.buffer_rows.resize(buffer_rows);
  for (auto& r : layout.buffer_rows) r = next++;
  return layout;
}

void ExchangeChannel::post(std::size_t state_row, std::size_t dest_column, Byte value) {
  if (!available_) {
    throw InterconnectError(fmt::format(
        "exchange channel unavailable for byte bound to row {} column {}", state_row,
        dest_column));
  }
  slots_[{state_row, dest_column}] = value;
  ++transferred_;
}

Byte ExchangeChannel::take(std::size_t state_row, std::size_t dest_column) {
  const auto it = slots_.find({state_row, dest_column});
  if (!available_ || it == slots_.end()) {
    throw InterconnectError(fmt::format("no byte on exchange channel for row {} column {}",
                                        state_row, dest_column));
  }
  const Byte v = it->second;
  slots_.erase(it);
  return v;
}

ImcUnit::ImcUnit(char name, std::size_t first_column, UnitLayout layout, std::size_t cols)
    : name_(name),
      first_column_(first_column),
      layout_((layout.validate(), std::move(layout))),
      array_(layout_.row_count(), cols),
      amps_(cols),
      buffer_(cols) {
  if (first_column + kUnitColumns > 4) {
    throw ConfigurationError(fmt::format("unit columns {}..{} outside the 4-column state",
                                         first_column, first_column + kUnitColumns - 1));
  }
  if (cols < kLutCols) {
    throw ConfigurationError(
        fmt::format("crossbar needs {} columns for LUT rows, got {}", kLutCols, cols));
  }
  for (const auto& round : layout_.key_rows)
    for (auto r : round) array_.set_row_class(r, RowClass::key);
  for (auto r : layout_.sbox_rows) array_.set_row_class(r, RowClass::lut);
  for (const auto& inst : layout_.m2_rows)
    for (auto r : inst) array_.set_row_class(r, RowClass::lut);
  for (auto r : layout_.buffer_rows) array_.set_row_class(r, RowClass::buffer);
}

bool ImcUnit::owns_column(std::size_t global_column) const {
  return global_column >= first_column_ && global_column < first_column_ + kUnitColumns;
}

std::size_t ImcUnit::lane(std::size_t state_row, std::size_t local_byte) const {
  return state_row * 4 + 2 * local_byte;
}

Byte ImcUnit::sense_byte(std::size_t row, std::size_t local_byte) {
  const Nibble hi = array_.sense(row, 2 * local_byte);
  const Nibble lo = array_.sense(row, 2 * local_byte + 1);
  return join(hi, lo);
}

void ImcUnit::lut_read(std::size_t lut_row, Nibble low_nibble, std::size_t amp_lane) {
  activate_read(array_, lut_row, 2 * low_nibble, amps_[amp_lane], AmpSlot::latch);
  activate_read(array_, lut_row, 2 * low_nibble + 1, amps_[amp_lane + 1], AmpSlot::latch);
}

void ImcUnit::program_sbox(const ByteTable& table) {
  for (std::size_t h = 0; h < kLutRows; ++h) {
    for (std::size_t l = 0; l < 16; ++l) {
      const Byte v = table[h << 4 | l];
      array_.write_cell(layout_.sbox_rows[h], 2 * l, high(v));
      array_.write_cell(layout_.sbox_rows[h], 2 * l + 1, low(v));
    }
  }
  sbox_programmed_ = true;
}

void ImcUnit::program_m2(const ByteTable& table) {
  for (const auto& inst : layout_.m2_rows) {
    for (std::size_t h = 0; h < kLutRows; ++h) {
      for (std::size_t l = 0; l < 16; ++l) {
        const Byte v = table[h << 4 | l];
        array_.write_cell(inst[h], 2 * l, high(v));
        array_.write_cell(inst[h], 2 * l + 1, low(v));
      }
    }
  }
  m2_programmed_ = true;
}

void ImcUnit::load_round_keys(const RoundKeySet& keys) {
  for (std::size_t round = 0; round < kRoundKeys; ++round) {
    const StateMatrix key(keys.keys[round]);
    for (std::size_t r = 0; r < 4; ++r) {
      for (std::size_t j = 0; j < kUnitColumns; ++j) {
        const Byte v = key.at(r, first_column_ + j);
        array_.write_cell(layout_.key_rows[round][r], 2 * j, high(v));
        array_.write_cell(layout_.key_rows[round][r], 2 * j + 1, low(v));
      }
    }
    keys_loaded_[round] = true;
  }
}

StepStats ImcUnit::load_state(const StateMatrix& state) {
  Activity act(array_);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t j = 0; j < kUnitColumns; ++j) {
      const Byte v = state.at(r, first_column_ + j);
      buffer_store(buffer_, 2 * j, high(v));
      buffer_store(buffer_, 2 * j + 1, low(v));
    }
    write_back(array_, buffer_, layout_.data_rows[r]);
    act.touch(layout_.data_rows[r]);
  }
  subbyte_pending_ = false;
  return act.finish();
}

StepStats ImcUnit::store_state(StateMatrix& state) {
  Activity act(array_);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t j = 0; j < kUnitColumns; ++j) {
      state.at(r, first_column_ + j) = sense_byte(layout_.data_rows[r], j);
    }
    act.touch(layout_.data_rows[r]);
  }
  return act.finish();
}

void ImcUnit::extract(StateMatrix& state) const {
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t j = 0; j < kUnitColumns; ++j) {
      state.at(r, first_column_ + j) = join(array_.peek(layout_.data_rows[r], 2 * j),
                                            array_.peek(layout_.data_rows[r], 2 * j + 1));
    }
  }
}

StepStats ImcUnit::addroundkey_step(std::size_t round) {
  if (round >= kRoundKeys || !keys_loaded_[round]) {
    throw ConfigurationError(
        fmt::format("unit {}: round key {} not loaded into key rows", name_, round));
  }
  Activity act(array_);
  StepStats stats;
  for (std::size_t r = 0; r < 4; ++r) {
    const std::size_t data_row = layout_.data_rows[r];
    const std::size_t key_row = layout_.key_rows[round][r];
    for (std::size_t c = 0; c < 2 * kUnitColumns; ++c) {
      SummingAmp& amp = amps_[c];
      amp.clear();
      activate_read(array_, data_row, c, amp, AmpSlot::capacitor);
      activate_read(array_, key_row, c, amp, AmpSlot::latch);
      xor_commit(amp);
      ++stats.xor_ops;
      buffer_store(buffer_, c, *amp.drain());
    }
    write_back(array_, buffer_, data_row);
    act.touch(data_row);
    act.touch(key_row);
  }
  return act.finish(std::move(stats));
}

StepStats ImcUnit::subbyte_step() {
  if (!sbox_programmed_) {
    throw ConfigurationError(fmt::format("unit {}: S-box LUT rows not programmed", name_));
  }
  Activity act(array_);
  StepStats stats;
  for (auto& amp : amps_) amp.clear();
  for (std::size_t r = 0; r < 4; ++r) {
    act.touch(layout_.data_rows[r]);
    for (std::size_t j = 0; j < kUnitColumns; ++j) {
      // High nibble decodes the LUT word line, low nibble the column pair.
      const Byte in = sense_byte(layout_.data_rows[r], j);
      const std::size_t lut_row = layout_.sbox_rows[high(in)];
      lut_read(lut_row, low(in), lane(r, j));
      act.touch(lut_row);
      ++stats.lut_lookups;
    }
  }
  stats.lut_waves = stats.lut_lookups;
  subbyte_pending_ = true;
  return act.finish(std::move(stats));
}

StepStats ImcUnit::post_crossings(ExchangeChannel& exchange) {
  if (!subbyte_pending_) {
    throw AmpStateError(fmt::format("unit {}: no SubBytes outputs latched", name_));
  }
  StepStats stats;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t j = 0; j < kUnitColumns; ++j) {
      const std::size_t source = first_column_ + j;
      const std::size_t dest = (source + 4 - r) % 4;
      if (owns_column(dest)) continue;
      const std::size_t l = lane(r, j);
      exchange.post(r, dest, join(*amps_[l].latch(), *amps_[l + 1].latch()));
      ++stats.exchanged_bytes;
    }
  }
  return stats;
}

StepStats ImcUnit::shiftrow_step(ExchangeChannel& exchange) {
  if (!subbyte_pending_) {
    throw AmpStateError(fmt::format("unit {}: no SubBytes outputs latched", name_));
  }
  Activity act(array_);
  StepStats stats;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t j = 0; j < kUnitColumns; ++j) {
      const std::size_t dest = first_column_ + j;
      const std::size_t source = (dest + r) % 4;
      Byte v;
      if (owns_column(source)) {
        // Column address plus row offset selects the latched S-box output.
        const std::size_t l = lane(r, source - first_column_);
        v = join(*amps_[l].latch(), *amps_[l + 1].latch());
      } else {
        v = exchange.take(r, dest);
        ++stats.exchanged_bytes;
      }
      buffer_store(buffer_, 2 * j, high(v));
      buffer_store(buffer_, 2 * j + 1, low(v));
    }
    write_back(array_, buffer_, layout_.data_rows[r]);
    act.touch(layout_.data_rows[r]);
  }
  for (auto& amp : amps_) amp.clear();
  subbyte_pending_ = false;
  return act.finish(std::move(stats));
}

void ImcUnit::convert_m2(std::span<const std::size_t> state_rows,
                         std::span<const std::size_t> target_rows, StepStats& stats) {
  // Byte k of the batch goes to LUT instance k % P; each instance serves its
  // bytes one after another.
  const std::size_t par = layout_.m2_parallelism();
  std::size_t k = 0;
  for (std::size_t i = 0; i < state_rows.size(); ++i) {
    for (std::size_t j = 0; j < kUnitColumns; ++j, ++k) {
      const Byte in = sense_byte(layout_.data_rows[state_rows[i]], j);
      const std::size_t lut_row = layout_.m2_rows[k % par][high(in)];
      SummingAmp& hi_amp = amps_[kLutCols - 2];
      SummingAmp& lo_amp = amps_[kLutCols - 1];
      hi_amp.clear();
      lo_amp.clear();
      activate_read(array_, lut_row, 2 * low(in), hi_amp, AmpSlot::latch);
      activate_read(array_, lut_row, 2 * low(in) + 1, lo_amp, AmpSlot::latch);
      buffer_store(buffer_, 2 * j, *hi_amp.drain());
      buffer_store(buffer_, 2 * j + 1, *lo_amp.drain());
      ++stats.lut_lookups;
    }
    write_back(array_, buffer_, target_rows[i]);
  }
  stats.lut_waves += (k + par - 1) / par;
}

StepStats ImcUnit::mixcolumn_step() {
  if (!m2_programmed_) {
    throw ConfigurationError(fmt::format("unit {}: M-2 LUT rows not programmed", name_));
  }
  const auto& buffers = layout_.buffer_rows;
  if (buffers.size() < 2) {
    throw ResourceError(fmt::format("unit {}: MixColumns needs 2 buffer rows, layout has {}",
                                    name_, buffers.size()));
  }
  Activity act(array_);
  StepStats stats;
  for (auto& amp : amps_) amp.clear();

  // out_i = m2(a_i) ^ m2(a_{i+1}) ^ a_{i+1} ^ a_{i+2} ^ a_{i+3}, with 3*x
  // taken as m2(x) ^ x. The doubled state row d_r lives in a buffer row.
  std::array<std::optional<std::size_t>, 4> home;   // state row -> buffer slot
  std::vector<std::optional<std::size_t>> holder(buffers.size());  // slot -> state row

  auto next_use = [](std::size_t state_row, std::size_t after_output) -> std::size_t {
    for (std::size_t i = after_output + 1; i < 4; ++i) {
      if (i == state_row || (i + 1) % 4 == state_row) return i;
    }
    return 4;  // never
  };

  auto place = [&](std::size_t state_row, std::size_t output, std::size_t keep) {
    std::optional<std::size_t> pick;
    std::size_t farthest = 0;
    for (std::size_t n = 0; n < buffers.size(); ++n) {
      const std::size_t slot = (next_buffer_ + n) % buffers.size();
      if (!holder[slot]) {
        pick = slot;
        break;
      }
      const std::size_t owner = *holder[slot];
      if (owner == keep) continue;
      const std::size_t use = next_use(owner, output);
      if (use == 4) {
        pick = slot;
        break;
      }
      if (!pick || use > farthest) {
        pick = slot;
        farthest = use;
      }
    }
    if (holder[*pick]) home[*holder[*pick]].reset();
    holder[*pick] = state_row;
    home[state_row] = *pick;
    next_buffer_ = (*pick + 1) % buffers.size();
    return buffers[*pick];
  };

  // Up-front batch fills as many buffer rows as are free (all four doubled
  // rows with the default layout); the rest are converted on demand.
  {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> targets;
    for (std::size_t r = 0; r < std::min<std::size_t>(4, buffers.size()); ++r) {
      rows.push_back(r);
      targets.push_back(place(r, 0, 4));
      act.touch(targets.back());
    }
    convert_m2(rows, targets, stats);
  }

  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t a = i;
    const std::size_t b = (i + 1) % 4;
    for (std::size_t need : {a, b}) {
      if (home[need]) continue;
      const std::size_t target = place(need, i, need == a ? b : a);
      const std::array<std::size_t, 1> rows{need};
      const std::array<std::size_t, 1> targets{target};
      convert_m2(rows, targets, stats);
      act.touch(target);
    }
    const std::size_t d_a = buffers[*home[a]];
    const std::size_t d_b = buffers[*home[b]];
    const std::array<std::size_t, 3> plain_rows{layout_.data_rows[(i + 1) % 4],
                                                layout_.data_rows[(i + 2) % 4],
                                                layout_.data_rows[(i + 3) % 4]};
    for (std::size_t c = 0; c < 2 * kUnitColumns; ++c) {
      SummingAmp& amp = amps_[i * 4 + c];
      activate_read(array_, d_a, c, amp, AmpSlot::capacitor);
      activate_read(array_, d_b, c, amp, AmpSlot::latch);
      xor_commit(amp);
      for (std::size_t row : plain_rows) {
        activate_read(array_, row, c, amp, AmpSlot::capacitor);
        xor_commit(amp);
      }
      stats.xor_ops += 4;
    }
    act.touch(d_a);
    act.touch(d_b);
    for (std::size_t row : plain_rows) act.touch(row);
  }

  // All four output rows are held in amplifier lanes; commit them.
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t c = 0; c < 2 * kUnitColumns; ++c) {
      buffer_store(buffer_, c, *amps_[i * 4 + c].drain());
    }
    write_back(array_, buffer_, layout_.data_rows[i]);
    act.touch(layout_.data_rows[i]);
  }
  return act.finish(std::move(stats));
}

namespace {

ImcUnit make_unit(char name, const EngineConfig& config, bool second) {
  const bool high_columns = second != config.swap_units;
  return ImcUnit(name, high_columns ? 2 : 0,
                 UnitLayout::standard(config.m2_parallelism, config.buffer_rows),
                 config.array_cols);
}

std::vector<StageSlot> checked_timeline(const CycleSchedule& schedule) {
  const auto diag = validate_schedule(schedule);
  if (!diag.ok()) {
    throw ScheduleError(fmt::format("invalid schedule: {}", fmt::join(diag.problems, "; ")));
  }
  return timeline(schedule);
}

}  // namespace

ImcEngine::ImcEngine(EngineConfig config)
    : config_(std::move(config)),
      slots_(checked_timeline(config_.schedule)),
      units_{make_unit('A', config_, false), make_unit('B', config_, true)} {
  for (auto& u : units_) {
    u.program_sbox(sbox_table());
    u.program_m2(m2_table());
  }
}

std::uint64_t ImcEngine::write_ceiling() const {
  return config_.max_writes_per_round != 0 ? config_.max_writes_per_round
                                           : default_write_ceiling();
}

void ImcEngine::load_keys(const RoundKeySet& keys) {
  for (auto& u : units_) u.load_round_keys(keys);
  keys_loaded_ = true;
}

BlockResult ImcEngine::encrypt(const Block& plain, std::size_t block_index,
                               std::uint64_t start_cycle) {
  if (!keys_loaded_) throw ConfigurationError("engine has no round keys loaded");

  BlockResult result;
  auto& events = result.trace.events;
  auto record = [&](const StageSlot& slot, const ImcUnit& u, const char* op, StepStats stats) {
    if (slot.stage != Stage::load && slot.stage != Stage::store) {
      result.round_writes[slot.round] += stats.cell_writes;
    }
    events.push_back(TraceEvent{start_cycle + static_cast<std::uint64_t>(slot.start), u.name(),
                                slot.stage, block_index, slot.round, op, std::move(stats)});
  };

  const StateMatrix input(plain);
  StateMatrix output;
  for (const StageSlot& slot : slots_) {
    switch (slot.stage) {
      case Stage::load:
        for (auto& u : units_) record(slot, u, "write_state_rows", u.load_state(input));
        break;
      case Stage::addroundkey:
        for (auto& u : units_) {
          record(slot, u, "xor_key_rows", u.addroundkey_step(static_cast<std::size_t>(slot.round)));
        }
        break;
      case Stage::subbyte:
        for (auto& u : units_) record(slot, u, "sbox_lookup", u.subbyte_step());
        break;
      case Stage::shiftrow: {
        ExchangeChannel exchange(config_.exchange_available);
        std::array<std::uint64_t, 2> sent{};
        for (std::size_t i = 0; i < units_.size(); ++i) {
          sent[i] = units_[i].post_crossings(exchange).exchanged_bytes;
        }
        for (std::size_t i = 0; i < units_.size(); ++i) {
          StepStats stats = units_[i].shiftrow_step(exchange);
          stats.exchanged_bytes += sent[i];
          record(slot, units_[i], "rotate_rows", std::move(stats));
        }
        break;
      }
      case Stage::mixcolumn:
        for (auto& u : units_) record(slot, u, "m2_lut_xor", u.mixcolumn_step());
        break;
      case Stage::store:
        for (auto& u : units_) record(slot, u, "read_state_rows", u.store_state(output));
        break;
    }
  }

  for (std::size_t round = 0; round < kRoundKeys; ++round) {
    if (result.round_writes[round] > write_ceiling()) {
      throw ResourceError(fmt::format("round {} issued {} cell writes, ceiling is {}", round,
                                      result.round_writes[round], write_ceiling()));
    }
  }

  const auto latency = static_cast<std::uint64_t>(config_.schedule.total_latency());
  result.trace.per_block.push_back({block_index, start_cycle, start_cycle + latency});
  result.ciphertext = output.block();
  return result;
}

BlockResult encrypt_block_imc(const Block& plain, const RoundKeySet& keys,
                              const EngineConfig& config) {
  ImcEngine engine(config);
  engine.load_keys(keys);
  return engine.encrypt(plain);
}

}  // namespace aesimc
