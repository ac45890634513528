#include "aesimc/crossbar.hpp"

#include <fmt/format.h>

#include "aesimc/error.hpp"

namespace aesimc {

namespace {

void check_level(int level) {
  if (level < 0 || level > kMaxLevel) {
    throw LevelRangeError(fmt::format("cell level {} outside 0..{}", level, kMaxLevel));
  }
}

}  // namespace

void MultiLevelCell::program(int level) {
  check_level(level);
  level_ = static_cast<Nibble>(level);
}

const char* to_string(RowClass cls) {
  switch (cls) {
    case RowClass::data:
      return "data";
    case RowClass::key:
      return "key";
    case RowClass::lut:
      return "lut";
    case RowClass::buffer:
      return "buffer";
  }
  return "?";
}

CrossbarArray::CrossbarArray(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), cells_(rows * cols), classes_(rows, RowClass::data) {
  if (rows == 0 || cols == 0) {
    throw ConfigurationError("crossbar needs at least one row and one column");
  }
}

void CrossbarArray::check_address(std::size_t row, std::size_t col) const {
  if (row >= rows_ || col >= cols_) {
    throw AddressError(
        fmt::format("cell ({}, {}) outside {}x{} crossbar", row, col, rows_, cols_));
  }
}

void CrossbarArray::write_cell(std::size_t row, std::size_t col, int level) {
  check_address(row, col);
  cells_[row * cols_ + col].program(level);
  ++counters_.programmed_cells;
}

Nibble CrossbarArray::peek(std::size_t row, std::size_t col) const {
  check_address(row, col);
  return cells_[row * cols_ + col].level();
}

Nibble CrossbarArray::sense(std::size_t row, std::size_t col) {
  check_address(row, col);
  ++counters_.cell_reads;
  return cells_[row * cols_ + col].level();
}

std::size_t CrossbarArray::write_back(RowBuffer& buf, std::size_t row) {
  if (row >= rows_) {
    throw AddressError(fmt::format("row {} outside {}-row crossbar", row, rows_));
  }
  const RowClass cls = classes_[row];
  if (cls != RowClass::data && cls != RowClass::buffer) {
    throw ProtectionError(fmt::format("row {} is a {} row and cannot be written back", row,
                                      to_string(cls)));
  }
  if (buf.size() > cols_) {
    throw AddressError(
        fmt::format("row buffer of {} entries wider than {} columns", buf.size(), cols_));
  }
  std::size_t written = 0;
  for (std::size_t col = 0; col < buf.size(); ++col) {
    if (!buf.dirty_[col]) continue;
    cells_[row * cols_ + col].program(buf.values_[col]);
    buf.dirty_[col] = false;
    ++written;
  }
  counters_.cell_writes += written;
  return written;
}

void CrossbarArray::set_row_class(std::size_t row, RowClass cls) {
  if (row >= rows_) {
    throw AddressError(fmt::format("row {} outside {}-row crossbar", row, rows_));
  }
  classes_[row] = cls;
}

RowClass CrossbarArray::row_class(std::size_t row) const {
  if (row >= rows_) {
    throw AddressError(fmt::format("row {} outside {}-row crossbar", row, rows_));
  }
  return classes_[row];
}

std::vector<std::size_t> CrossbarArray::free_rows() const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < rows_; ++r) {
    if (classes_[r] == RowClass::buffer) out.push_back(r);
  }
  return out;
}

std::string CrossbarArray::dump() const {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(rows_ * (cols_ + 1));
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out.push_back(kHex[cells_[r * cols_ + c].level()]);
    out.push_back('\n');
  }
  return out;
}

void SummingAmp::load(AmpSlot slot, Nibble value, bool overwrite) {
  check_level(value);
  auto& target = slot == AmpSlot::capacitor ? capacitor_ : latch_;
  if (target && !overwrite) {
    throw AmpStateError(fmt::format("summing amp {} already holds a value",
                                    slot == AmpSlot::capacitor ? "capacitor" : "latch"));
  }
  target = value;
}

Nibble SummingAmp::xor_commit() {
  if (!capacitor_ || !latch_) {
    throw AmpStateError("xor needs both capacitor and latch populated");
  }
  const auto result = static_cast<Nibble>(*capacitor_ ^ *latch_);
  latch_ = result;
  capacitor_.reset();
  return result;
}

std::optional<Nibble> SummingAmp::drain() {
  auto out = latch_;
  clear();
  return out;
}

void SummingAmp::clear() {
  capacitor_.reset();
  latch_.reset();
}

RowBuffer::RowBuffer(std::size_t cols) : values_(cols, 0), dirty_(cols, false) {}

void RowBuffer::check(std::size_t col) const {
  if (col >= values_.size()) {
    throw AddressError(
        fmt::format("row buffer column {} outside {} entries", col, values_.size()));
  }
}

void RowBuffer::store(std::size_t col, int value) {
  check(col);
  check_level(value);
  values_[col] = static_cast<Nibble>(value);
  dirty_[col] = true;
}

Nibble RowBuffer::value(std::size_t col) const {
  check(col);
  return values_[col];
}

bool RowBuffer::dirty(std::size_t col) const {
  check(col);
  return dirty_[col];
}

std::size_t RowBuffer::dirty_count() const {
  std::size_t n = 0;
  for (bool d : dirty_) n += d ? 1 : 0;
  return n;
}

void write_cell(CrossbarArray& array, std::size_t row, std::size_t col, int level) {
  array.write_cell(row, col, level);
}

void activate_read(CrossbarArray& array, std::size_t row, std::size_t col, SummingAmp& amp,
                   AmpSlot target, bool overwrite) {
  amp.load(target, array.sense(row, col), overwrite);
}

Nibble xor_commit(SummingAmp& amp) { return amp.xor_commit(); }

void buffer_store(RowBuffer& buf, std::size_t col, int value) { buf.store(col, value); }

std::size_t write_back(CrossbarArray& array, RowBuffer& buf, std::size_t row) {
  return array.write_back(buf, row);
}

}  // namespace aesimc
