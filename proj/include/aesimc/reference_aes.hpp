#pragma once

// Software AES-128 used as ground truth for the in-memory engine, plus the
// generators that produce the S-box and multiply-by-2 tables programmed into
// the crossbar LUT rows.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aesimc {

using Byte = std::uint8_t;
using Block = std::array<Byte, 16>;
using Column = std::array<Byte, 4>;
using ByteTable = std::array<Byte, 256>;

inline constexpr std::size_t kRounds = 10;
inline constexpr std::size_t kRoundKeys = kRounds + 1;

// 4x4 AES state. Column c holds bytes 4c..4c+3 of the block.
class StateMatrix {
 public:
  StateMatrix() = default;
  explicit StateMatrix(const Block& block) : bytes_(block) {}

  Byte& at(std::size_t row, std::size_t col) { return bytes_[col * 4 + row]; }
  Byte at(std::size_t row, std::size_t col) const { return bytes_[col * 4 + row]; }

  const Block& block() const { return bytes_; }

  Column column(std::size_t col) const;
  void set_column(std::size_t col, const Column& value);

  friend bool operator==(const StateMatrix&, const StateMatrix&) = default;

 private:
  Block bytes_{};
};

struct RoundKeySet {
  std::array<Block, kRoundKeys> keys{};
};

// Multiplication in GF(2^8) modulo x^8 + x^4 + x^3 + x + 1.
Byte gf_mul(Byte a, Byte b);

// Multiplicative inverse followed by the AES affine map.
ByteTable gen_sbox();
// x * 2 in GF(2^8).
ByteTable gen_m2();

// Cached tables.
const ByteTable& sbox_table();
const ByteTable& m2_table();

RoundKeySet expand_key(std::span<const Byte> key);

Block aes128_encrypt(std::span<const Byte> plain, std::span<const Byte> key);
Block aes128_encrypt(const Block& plain, const RoundKeySet& keys);

Column mixcolumn_ref(const Column& col);

// Individual round transformations on a StateMatrix.
void add_round_key(StateMatrix& state, const Block& round_key);
void sub_bytes(StateMatrix& state);
void shift_rows(StateMatrix& state);
void mix_columns(StateMatrix& state);

// Lowercase hex without separators. parse_hex ignores ASCII whitespace and
// accepts either case.
std::string to_hex(std::span<const Byte> bytes);
std::vector<Byte> parse_hex(std::string_view text);
Block parse_block_hex(std::string_view text);

}  // namespace aesimc
