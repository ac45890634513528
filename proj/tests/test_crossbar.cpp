#include <random>

#include "aesimc/crossbar.hpp"
#include "aesimc/error.hpp"
#include "doctest.h"

using namespace aesimc;

TEST_CASE("write_cell then read returns the programmed level") {
  CrossbarArray array(4, 8);
  array.write_cell(1, 2, 0);
  CHECK(array.peek(1, 2) == 0);
  array.write_cell(1, 2, 15);
  CHECK(array.peek(1, 2) == 15);

  write_cell(array, 3, 7, 9);
  SummingAmp amp;
  activate_read(array, 3, 7, amp, AmpSlot::capacitor);
  CHECK(*amp.capacitor() == 9);
  amp.clear();
  activate_read(array, 3, 7, amp, AmpSlot::capacitor);
  CHECK(*amp.capacitor() == 9);
}

TEST_CASE("write_cell touches only the addressed cell") {
  CrossbarArray array(3, 3);
  const auto before = array.dump();
  array.write_cell(1, 1, 5);
  const auto after = array.dump();
  CHECK(after == "000\n050\n000\n");
  CHECK(before == "000\n000\n000\n");
}

TEST_CASE("crossbar addressing and level errors") {
  CrossbarArray array(4, 8);
  CHECK_THROWS_AS(array.write_cell(4, 0, 1), AddressError);
  CHECK_THROWS_AS(array.write_cell(0, 8, 1), AddressError);
  CHECK_THROWS_AS(array.write_cell(0, 0, 16), LevelRangeError);
  CHECK_THROWS_AS(array.write_cell(0, 0, -1), LevelRangeError);
  SummingAmp amp;
  CHECK_THROWS_AS(activate_read(array, 9, 0, amp, AmpSlot::latch), AddressError);
  CHECK_THROWS_AS(CrossbarArray(0, 4), ConfigurationError);
}

TEST_CASE("activate_read fills only the target slot") {
  CrossbarArray array(2, 2);
  array.write_cell(0, 0, 0x7);
  SummingAmp amp;
  activate_read(array, 0, 0, amp, AmpSlot::capacitor);
  CHECK(*amp.capacitor() == 0x7);
  CHECK_FALSE(amp.latch().has_value());

  SummingAmp zero;
  activate_read(array, 1, 1, zero, AmpSlot::capacitor);
  CHECK(*zero.capacitor() == 0x0);

  array.write_cell(0, 1, 0xA);
  array.write_cell(1, 1, 0x5);
  SummingAmp pair;
  activate_read(array, 0, 1, pair, AmpSlot::capacitor);
  activate_read(array, 1, 1, pair, AmpSlot::latch);
  CHECK(*pair.capacitor() == 0xA);
  CHECK(*pair.latch() == 0x5);

  // Occupied slot needs an explicit overwrite.
  CHECK_THROWS_AS(activate_read(array, 0, 0, pair, AmpSlot::latch), AmpStateError);
  activate_read(array, 0, 0, pair, AmpSlot::latch, true);
  CHECK(*pair.latch() == 0x7);
}

TEST_CASE("xor_commit semantics") {
  SummingAmp amp;
  amp.load(AmpSlot::capacitor, 0xA);
  amp.load(AmpSlot::latch, 0x5);
  CHECK(xor_commit(amp) == 0xF);
  CHECK(*amp.latch() == 0xF);
  CHECK_FALSE(amp.capacitor().has_value());

  for (int x = 0; x < 16; ++x) {
    SummingAmp self;
    self.load(AmpSlot::capacitor, static_cast<Nibble>(x));
    self.load(AmpSlot::latch, static_cast<Nibble>(x));
    CHECK(xor_commit(self) == 0);
  }

  SummingAmp half;
  CHECK_THROWS_AS(xor_commit(half), AmpStateError);
  half.load(AmpSlot::latch, 3);
  CHECK_THROWS_AS(xor_commit(half), AmpStateError);
}

TEST_CASE("two reads then xor_commit equal bitwise XOR for all 256 nibble pairs") {
  CrossbarArray array(2, 16);
  for (int a = 0; a < 16; ++a) {
    for (int b = 0; b < 16; ++b) {
      array.write_cell(0, static_cast<std::size_t>(b), a);
      array.write_cell(1, static_cast<std::size_t>(b), b);
      SummingAmp amp;
      activate_read(array, 0, static_cast<std::size_t>(b), amp, AmpSlot::capacitor);
      activate_read(array, 1, static_cast<std::size_t>(b), amp, AmpSlot::latch);
      CHECK(xor_commit(amp) == (a ^ b));
    }
  }
}

TEST_CASE("row buffer store and write_back") {
  CrossbarArray array(4, 16);
  RowBuffer buf(16);

  buffer_store(buf, 5, 0x3);
  CHECK(buf.value(5) == 0x3);
  CHECK(buf.dirty(5));
  buffer_store(buf, 5, 0x9);
  CHECK(buf.value(5) == 0x9);
  CHECK(buf.dirty_count() == 1);

  CHECK(write_back(array, buf, 2) == 1);
  CHECK(array.peek(2, 5) == 0x9);
  CHECK(array.counters().cell_writes == 1);
  CHECK(buf.dirty_count() == 0);

  // Nothing dirty: nothing written.
  CHECK(write_back(array, buf, 2) == 0);
  CHECK(array.counters().cell_writes == 1);

  CHECK_THROWS_AS(buffer_store(buf, 16, 1), AddressError);
  CHECK_THROWS_AS(buffer_store(buf, 0, 16), LevelRangeError);
}

TEST_CASE("full-row write_back counts one write per dirty entry") {
  CrossbarArray array(2, 16);
  RowBuffer buf(16);
  std::size_t expected = 0;
  for (std::size_t c = 0; c < 16; ++c) {
    buffer_store(buf, c, static_cast<int>(c));
    ++expected;
  }
  CHECK(buf.dirty_count() == expected);
  CHECK(write_back(array, buf, 0) == 16);
  CHECK(array.counters().cell_writes == 16);
  for (std::size_t c = 0; c < 16; ++c) CHECK(array.peek(0, c) == c);
}

TEST_CASE("write_back respects row protection") {
  CrossbarArray array(4, 4);
  array.set_row_class(0, RowClass::key);
  array.set_row_class(1, RowClass::lut);
  array.set_row_class(2, RowClass::buffer);
  RowBuffer buf(4);
  buffer_store(buf, 0, 1);
  CHECK_THROWS_AS(write_back(array, buf, 0), ProtectionError);
  CHECK_THROWS_AS(write_back(array, buf, 1), ProtectionError);
  CHECK(buf.dirty(0));
  CHECK(write_back(array, buf, 2) == 1);
  CHECK(array.free_rows() == std::vector<std::size_t>{2});
  CHECK_THROWS_AS(write_back(array, buf, 7), AddressError);
}

TEST_CASE("random operation sequences keep accounting and levels consistent") {
  std::mt19937 rng(7);
  CrossbarArray array(8, 8);
  for (std::size_t r = 4; r < 8; ++r) array.set_row_class(r, RowClass::buffer);
  RowBuffer buf(8);
  std::uint64_t expected_writes = 0;
  std::vector<SummingAmp> amps(8);

  for (int step = 0; step < 5000; ++step) {
    const auto row = static_cast<std::size_t>(rng() % 8);
    const auto col = static_cast<std::size_t>(rng() % 8);
    switch (rng() % 4) {
      case 0: {
        // Reads never disturb stored levels.
        const auto snapshot = array.dump();
        amps[col].clear();
        activate_read(array, row, col, amps[col], AmpSlot::capacitor);
        CHECK(array.dump() == snapshot);
        break;
      }
      case 1:
        buffer_store(buf, col, static_cast<int>(rng() % 16));
        break;
      case 2:
        expected_writes += buf.dirty_count();
        write_back(array, buf, row);
        break;
      default:
        array.write_cell(row, col, static_cast<int>(rng() % 16));
        break;
    }
  }
  CHECK(array.counters().cell_writes == expected_writes);
  for (char c : array.dump()) {
    CHECK(((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || c == '\n'));
  }
}
