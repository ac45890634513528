#pragma once

// Memristive crossbar substrate: 16-level cells on a word-line/bit-line grid,
// per-column summing amplifiers that sample, hold and XOR nibbles, and a row
// buffer that stages results before they are written back into the array.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace aesimc {

using Nibble = std::uint8_t;

inline constexpr int kMaxLevel = 15;

// One memristor holding a 4-bit conductance level.
class MultiLevelCell {
 public:
  Nibble level() const { return level_; }
  void program(int level);

 private:
  Nibble level_ = 0;
};

enum class RowClass { data, key, lut, buffer };

const char* to_string(RowClass cls);

struct CrossbarCounters {
  // Cell writes issued through write_back (the non-volatile write path).
  std::uint64_t cell_writes = 0;
  // Cell writes issued through write_cell (host-side programming of keys,
  // LUTs and test fixtures).
  std::uint64_t programmed_cells = 0;
  // Cells sensed by activate_read.
  std::uint64_t cell_reads = 0;
};

class RowBuffer;

class CrossbarArray {
 public:
  // Every row starts out as a data row.
  CrossbarArray(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  // Programs one cell directly. Bypasses row protection.
  void write_cell(std::size_t row, std::size_t col, int level);

  // Reads a cell without counting an activation. Meant for inspection.
  Nibble peek(std::size_t row, std::size_t col) const;

  // Reads a cell through its word line; counted as one cell read.
  Nibble sense(std::size_t row, std::size_t col);

  // Copies the dirty entries of `buf` into `row` and clears them. Returns the
  // number of cells written. Only data and buffer rows accept write-back.
  std::size_t write_back(RowBuffer& buf, std::size_t row);

  void set_row_class(std::size_t row, RowClass cls);
  RowClass row_class(std::size_t row) const;
  std::vector<std::size_t> free_rows() const;

  const CrossbarCounters& counters() const { return counters_; }
  void reset_counters() { counters_ = {}; }

  // One line per row, one lowercase hex digit per cell.
  std::string dump() const;

 private:
  void check_address(std::size_t row, std::size_t col) const;

  std::size_t rows_;
  std::size_t cols_;
  std::vector<MultiLevelCell> cells_;
  std::vector<RowClass> classes_;
  CrossbarCounters counters_;
};

enum class AmpSlot { capacitor, latch };

// Per-column sense circuit. The capacitor samples a read, the latch holds an
// operand or result.
class SummingAmp {
 public:
  const std::optional<Nibble>& capacitor() const { return capacitor_; }
  const std::optional<Nibble>& latch() const { return latch_; }

  // Fills a slot; throws AmpStateError when the slot is occupied and
  // overwriting was not requested.
  void load(AmpSlot slot, Nibble value, bool overwrite = false);

  // capacitor XOR latch; the result stays in the latch and the capacitor is
  // emptied.
  Nibble xor_commit();

  // Empties both slots and returns the latch content, if any.
  std::optional<Nibble> drain();
  void clear();

 private:
  std::optional<Nibble> capacitor_;
  std::optional<Nibble> latch_;
};

class RowBuffer {
 public:
  explicit RowBuffer(std::size_t cols);

  std::size_t size() const { return values_.size(); }
  void store(std::size_t col, int value);
  Nibble value(std::size_t col) const;
  bool dirty(std::size_t col) const;
  std::size_t dirty_count() const;

 private:
  friend class CrossbarArray;
  void check(std::size_t col) const;

  std::vector<Nibble> values_;
  std::vector<bool> dirty_;
};

void write_cell(CrossbarArray& array, std::size_t row, std::size_t col, int level);

// Activates word line `row`, senses bit line `col` and places the nibble into
// the requested slot of `amp`.
void activate_read(CrossbarArray& array, std::size_t row, std::size_t col, SummingAmp& amp,
                   AmpSlot target, bool overwrite = false);

Nibble xor_commit(SummingAmp& amp);

void buffer_store(RowBuffer& buf, std::size_t col, int value);

std::size_t write_back(CrossbarArray& array, RowBuffer& buf, std::size_t row);

}  // namespace aesimc
