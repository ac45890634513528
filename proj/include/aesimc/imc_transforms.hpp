#pragma once

// AES round transformations executed as crossbar operations on one 64-bit
// unit, plus the two-unit engine that chains them into a full encryption.
//
// Each unit owns two state columns (8 bytes, 16 nibbles). State row r lives on
// word line data_rows[r]; the unit's local byte j sits in cells 2j (high
// nibble) and 2j+1 (low nibble). Key rows use the same placement so that data
// and key nibbles meet in the same column's summing amplifier.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "aesimc/crossbar.hpp"
#include "aesimc/reference_aes.hpp"
#include "aesimc/schedule.hpp"
#include "aesimc/trace.hpp"

namespace aesimc {

inline constexpr std::size_t kUnitColumns = 2;
inline constexpr std::size_t kLutRows = 16;
inline constexpr std::size_t kLutCols = 32;

struct UnitLayout {
  std::array<std::size_t, 4> data_rows{};
  std::array<std::array<std::size_t, 4>, kRoundKeys> key_rows{};
  // Row h holds table[h << 4 | l] in cells 2l, 2l+1.
  std::array<std::size_t, kLutRows> sbox_rows{};
  // One entry per parallel M-2 LUT instance.
  std::vector<std::array<std::size_t, kLutRows>> m2_rows;
  std::vector<std::size_t> buffer_rows;

  std::size_t m2_parallelism() const { return m2_rows.size(); }
  std::size_t row_count() const;

  // Throws ConfigurationError on overlapping row classes or no M-2 LUT.
  void validate() const;

  // Rows packed in order: data, keys, S-box, M-2 instances, buffers.
  static UnitLayout standard(std::size_t m2_parallelism = 4, std::size_t buffer_rows = 8);
};

// Idealized byte channel between the two units, used by ShiftRows for bytes
// whose destination column belongs to the other unit.
class ExchangeChannel {
 public:
  explicit ExchangeChannel(bool available = true) : available_(available) {}

  bool available() const { return available_; }
  void post(std::size_t state_row, std::size_t dest_column, Byte value);
  // Throws InterconnectError if nothing was posted for that slot.
  Byte take(std::size_t state_row, std::size_t dest_column);
  std::size_t pending() const { return slots_.size(); }
  std::uint64_t transferred() const { return transferred_; }

 private:
  bool available_;
  std::map<std::pair<std::size_t, std::size_t>, Byte> slots_;
  std::uint64_t transferred_ = 0;
};

class ImcUnit {
 public:
  // `first_column` is the global state column of local byte column 0 (0 or 2).
  ImcUnit(char name, std::size_t first_column, UnitLayout layout,
          std::size_t cols = kLutCols);

  char name() const { return name_; }
  std::size_t first_column() const { return first_column_; }
  bool owns_column(std::size_t global_column) const;

  const UnitLayout& layout() const { return layout_; }
  CrossbarArray& array() { return array_; }
  const CrossbarArray& array() const { return array_; }
  std::span<const SummingAmp> amps() const { return amps_; }

  void program_sbox(const ByteTable& table);
  void program_m2(const ByteTable& table);
  // Programs this unit's half of every round key.
  void load_round_keys(const RoundKeySet& keys);

  // Writes the unit's two state columns into the data rows.
  StepStats load_state(const StateMatrix& state);
  // Reads the data rows back into the unit's columns of `state`.
  StepStats store_state(StateMatrix& state);
  // Same as store_state without counting reads.
  void extract(StateMatrix& state) const;

  StepStats addroundkey_step(std::size_t round);
  // Leaves the S-box outputs latched in the amplifiers; no cell writes.
  StepStats subbyte_step();
  // Sends latched bytes whose ShiftRows destination is in the other unit.
  StepStats post_crossings(ExchangeChannel& exchange);
  StepStats shiftrow_step(ExchangeChannel& exchange);
  StepStats mixcolumn_step();

  bool subbyte_pending() const { return subbyte_pending_; }

 private:
  std::size_t lane(std::size_t state_row, std::size_t local_byte) const;
  Byte sense_byte(std::size_t row, std::size_t local_byte);
  void lut_read(std::size_t lut_row, Nibble low_nibble, std::size_t amp_lane);
  void convert_m2(std::span<const std::size_t> state_rows,
                  std::span<const std::size_t> target_rows, StepStats& stats);

  char name_;
  std::size_t first_column_;
  UnitLayout layout_;
  CrossbarArray array_;
  std::vector<SummingAmp> amps_;
  RowBuffer buffer_;
  bool sbox_programmed_ = false;
  bool m2_programmed_ = false;
  std::array<bool, kRoundKeys> keys_loaded_{};
  bool subbyte_pending_ = false;
  std::size_t next_buffer_ = 0;
};

struct EngineConfig {
  CycleSchedule schedule = CycleSchedule::standard();
  std::size_t m2_parallelism = 4;
  std::size_t buffer_rows = 8;
  std::size_t array_cols = kLutCols;
  // Unit A takes state columns 2-3 and unit B columns 0-1.
  bool swap_units = false;
  bool exchange_available = true;
  // Cell writes allowed per round across both units. 0 selects
  // default_write_ceiling().
  std::uint64_t max_writes_per_round = 0;
};

// Per unit and round: AddRoundKey 16, ShiftRows 16, MixColumns output 16,
// plus at most five 4-cell M-2 buffer rows.
inline constexpr std::uint64_t kUnitWritesPerRound = 16 * 3 + 4 * 5;
inline constexpr std::uint64_t default_write_ceiling() { return 2 * kUnitWritesPerRound; }

struct BlockResult {
  Block ciphertext{};
  TraceLog trace;
  // Non-volatile cell writes per round (index 0 is the initial AddRoundKey),
  // summed over both units.
  std::array<std::uint64_t, kRoundKeys> round_writes{};
};

class ImcEngine {
 public:
  explicit ImcEngine(EngineConfig config = {});

  const EngineConfig& config() const { return config_; }
  ImcUnit& unit(std::size_t index) { return units_.at(index); }
  const ImcUnit& unit(std::size_t index) const { return units_.at(index); }
  std::uint64_t write_ceiling() const;

  void load_keys(const RoundKeySet& keys);
  bool keys_loaded() const { return keys_loaded_; }

  // Runs one block. Trace cycles are offset by `start_cycle`.
  BlockResult encrypt(const Block& plain, std::size_t block_index = 0,
                      std::uint64_t start_cycle = 0);

 private:
  EngineConfig config_;
  std::vector<StageSlot> slots_;
  std::array<ImcUnit, 2> units_;
  bool keys_loaded_ = false;
};

BlockResult encrypt_block_imc(const Block& plain, const RoundKeySet& keys,
                              const EngineConfig& config = {});

}  // namespace aesimc
