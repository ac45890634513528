#include "aesimc/reference_aes.hpp"

#include <fmt/format.h>

#include "aesimc/error.hpp"

namespace aesimc {

namespace {

Byte rotl8(Byte x, int n) { return static_cast<Byte>((x << n) | (x >> (8 - n))); }

Byte xtime(Byte x) { return static_cast<Byte>((x << 1) ^ ((x & 0x80) ? 0x1b : 0x00)); }

Byte gf_inverse(Byte x) {
  if (x == 0) return 0;
  // x^254 == x^-1 in a field of order 256.
  Byte result = 1;
  Byte base = x;
  for (unsigned e = 254; e != 0; e >>= 1) {
    if (e & 1) result = gf_mul(result, base);
    base = gf_mul(base, base);
  }
  return result;
}

void require_length(std::span<const Byte> data, std::size_t expected, const char* what) {
  if (data.size() != expected) {
    throw InputError(
        fmt::format("{} must be {} bytes, got {}", what, expected, data.size()));
  }
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Column StateMatrix::column(std::size_t col) const {
  return {at(0, col), at(1, col), at(2, col), at(3, col)};
}

void StateMatrix::set_column(std::size_t col, const Column& value) {
  for (std::size_t r = 0; r < 4; ++r) at(r, col) = value[r];
}

Byte gf_mul(Byte a, Byte b) {
  Byte product = 0;
  while (b != 0) {
    if (b & 1) product ^= a;
    a = xtime(a);
    b >>= 1;
  }
  return product;
}

ByteTable gen_sbox() {
  ByteTable table{};
  for (unsigned x = 0; x < 256; ++x) {
    const Byte inv = gf_inverse(static_cast<Byte>(x));
    table[x] = static_cast<Byte>(inv ^ rotl8(inv, 1) ^ rotl8(inv, 2) ^ rotl8(inv, 3) ^
                                 rotl8(inv, 4) ^ 0x63);
  }
  return table;
}

ByteTable gen_m2() {
  ByteTable table{};
  for (unsigned x = 0; x < 256; ++x) table[x] = xtime(static_cast<Byte>(x));
  return table;
}

const ByteTable& sbox_table() {
  static const ByteTable table = gen_sbox();
  return table;
}

const ByteTable& m2_table() {
  static const ByteTable table = gen_m2();
  return table;
}

RoundKeySet expand_key(std::span<const Byte> key) {
  require_length(key, 16, "AES-128 key");
  const auto& sbox = sbox_table();

  std::array<std::array<Byte, 4>, 4 * kRoundKeys> words{};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) words[i][j] = key[4 * i + j];
  }
  Byte rcon = 0x01;
  for (std::size_t i = 4; i < words.size(); ++i) {
    auto temp = words[i - 1];
    if (i % 4 == 0) {
      temp = {sbox[temp[1]], sbox[temp[2]], sbox[temp[3]], sbox[temp[0]]};
      temp[0] ^= rcon;
      rcon = xtime(rcon);
    }
    for (std::size_t j = 0; j < 4; ++j) words[i][j] = words[i - 4][j] ^ temp[j];
  }

  RoundKeySet out;
  for (std::size_t round = 0; round < kRoundKeys; ++round) {
    for (std::size_t w = 0; w < 4; ++w) {
      for (std::size_t j = 0; j < 4; ++j) out.keys[round][4 * w + j] = words[4 * round + w][j];
    }
  }
  return out;
}

void add_round_key(StateMatrix& state, const Block& round_key) {
  const StateMatrix key(round_key);
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t r = 0; r < 4; ++r) state.at(r, c) ^= key.at(r, c);
  }
}

void sub_bytes(StateMatrix& state) {
  const auto& sbox = sbox_table();
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t r = 0; r < 4; ++r) state.at(r, c) = sbox[state.at(r, c)];
  }
}

void shift_rows(StateMatrix& state) {
  const StateMatrix in = state;
  for (std::size_t r = 1; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) state.at(r, c) = in.at(r, (c + r) % 4);
  }
}

Column mixcolumn_ref(const Column& col) {
  static constexpr Byte kMatrix[4][4] = {
      {2, 3, 1, 1}, {1, 2, 3, 1}, {1, 1, 2, 3}, {3, 1, 1, 2}};
  Column out{};
  for (std::size_t i = 0; i < 4; ++i) {
    Byte acc = 0;
    for (std::size_t j = 0; j < 4; ++j) acc ^= gf_mul(kMatrix[i][j], col[j]);
    out[i] = acc;
  }
  return out;
}

void mix_columns(StateMatrix& state) {
  for (std::size_t c = 0; c < 4; ++c) state.set_column(c, mixcolumn_ref(state.column(c)));
}

Block aes128_encrypt(const Block& plain, const RoundKeySet& keys) {
  StateMatrix state(plain);
  add_round_key(state, keys.keys[0]);
  for (std::size_t round = 1; round <= kRounds; ++round) {
    sub_bytes(state);
    shift_rows(state);
    if (round != kRounds) mix_columns(state);
    add_round_key(state, keys.keys[round]);
  }
  return state.block();
}

Block aes128_encrypt(std::span<const Byte> plain, std::span<const Byte> key) {
  require_length(plain, 16, "plaintext block");
  Block block{};
  std::copy(plain.begin(), plain.end(), block.begin());
  return aes128_encrypt(block, expand_key(key));
}

std::string to_hex(std::span<const Byte> bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (Byte b : bytes) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0x0f]);
  }
  return out;
}

std::vector<Byte> parse_hex(std::string_view text) {
  std::vector<Byte> out;
  int pending = -1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    const int v = hex_value(c);
    if (v < 0) {
      throw InputError(fmt::format("invalid hex character '{}' at offset {}", c, i));
    }
    if (pending < 0) {
      pending = v;
    } else {
      out.push_back(static_cast<Byte>((pending << 4) | v));
      pending = -1;
    }
  }
  if (pending >= 0) throw InputError("hex input has an odd number of digits");
  return out;
}

Block parse_block_hex(std::string_view text) {
  const auto bytes = parse_hex(text);
  require_length(bytes, 16, "hex block");
  Block out{};
  std::copy(bytes.begin(), bytes.end(), out.begin());
  return out;
}

}  // namespace aesimc
