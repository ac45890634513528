#pragma once

// Test-only AES-128 reference. Shares no code with the library: the S-box is
// the published literal table, field multiplication is bit-serial with an
// explicit 0x11B reduction, and the state is a flat byte array indexed
// in[c*4 + r].

#include <array>
#include <cstdint>

namespace oracle {

using u8 = std::uint8_t;
using Bytes16 = std::array<u8, 16>;

inline constexpr std::array<u8, 256> kSbox = {
    0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab, 0x76,
    0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0,
    0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
    0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2, 0xeb, 0x27, 0xb2, 0x75,
    0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0, 0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84,
    0x53, 0xd1, 0x00, 0xed, 0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
    0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8,
    0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5, 0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2,
    0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
    0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb,
    0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c, 0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79,
    0xe7, 0xc8, 0x37, 0x6d, 0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
    0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a,
    0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e,
    0xe1, 0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
    0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f, 0xb0, 0x54, 0xbb, 0x16,
};

// Polynomial product then reduction modulo 0x11B.
inline u8 gmul(u8 a, u8 b) {
  unsigned wide = 0;
  for (int i = 0; i < 8; ++i) {
    if (b & (1u << i)) wide ^= static_cast<unsigned>(a) << i;
  }
  for (int bit = 14; bit >= 8; --bit) {
    if (wide & (1u << bit)) wide ^= 0x11Bu << (bit - 8);
  }
  return static_cast<u8>(wide);
}

// Shift-and-reduce doubling.
inline u8 times2(u8 x) {
  unsigned v = static_cast<unsigned>(x) << 1;
  if (v & 0x100) v ^= 0x11B;
  return static_cast<u8>(v);
}

// S-box value computed algebraically: inverse by exhaustive search, then the
// affine map written bit by bit.
inline u8 sbox_algebraic(u8 x) {
  u8 inv = 0;
  for (unsigned y = 1; y < 256 && x != 0; ++y) {
    if (gmul(x, static_cast<u8>(y)) == 1) {
      inv = static_cast<u8>(y);
      break;
    }
  }
  u8 out = 0;
  for (int i = 0; i < 8; ++i) {
    const int bit = ((inv >> i) ^ (inv >> ((i + 4) % 8)) ^ (inv >> ((i + 5) % 8)) ^
                     (inv >> ((i + 6) % 8)) ^ (inv >> ((i + 7) % 8)) ^ (0x63 >> i)) & 1;
    out |= static_cast<u8>(bit << i);
  }
  return out;
}

inline std::array<u8, 4> mix_column(const std::array<u8, 4>& a) {
  return {static_cast<u8>(gmul(a[0], 2) ^ gmul(a[1], 3) ^ a[2] ^ a[3]),
          static_cast<u8>(a[0] ^ gmul(a[1], 2) ^ gmul(a[2], 3) ^ a[3]),
          static_cast<u8>(a[0] ^ a[1] ^ gmul(a[2], 2) ^ gmul(a[3], 3)),
          static_cast<u8>(gmul(a[0], 3) ^ a[1] ^ a[2] ^ gmul(a[3], 2))};
}

inline Bytes16 shift_rows(const Bytes16& in) {
  Bytes16 out{};
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 4; ++r) out[c * 4 + r] = in[((c + r) % 4) * 4 + r];
  return out;
}

inline std::array<Bytes16, 11> key_schedule(const Bytes16& key) {
  std::array<u8, 176> w{};
  for (int i = 0; i < 16; ++i) w[i] = key[i];
  u8 rcon = 1;
  for (int i = 16; i < 176; i += 4) {
    u8 t[4] = {w[i - 4], w[i - 3], w[i - 2], w[i - 1]};
    if (i % 16 == 0) {
      const u8 first = t[0];
      t[0] = static_cast<u8>(kSbox[t[1]] ^ rcon);
      t[1] = kSbox[t[2]];
      t[2] = kSbox[t[3]];
      t[3] = kSbox[first];
      rcon = times2(rcon);
    }
    for (int j = 0; j < 4; ++j) w[i + j] = static_cast<u8>(w[i - 16 + j] ^ t[j]);
  }
  std::array<Bytes16, 11> rk{};
  for (int r = 0; r < 11; ++r)
    for (int i = 0; i < 16; ++i) rk[r][i] = w[r * 16 + i];
  return rk;
}

inline Bytes16 encrypt(const Bytes16& plain, const Bytes16& key) {
  const auto rk = key_schedule(key);
  Bytes16 s{};
  for (int i = 0; i < 16; ++i) s[i] = static_cast<u8>(plain[i] ^ rk[0][i]);
  for (int round = 1; round <= 10; ++round) {
    for (auto& b : s) b = kSbox[b];
    s = shift_rows(s);
    if (round < 10) {
      for (int c = 0; c < 4; ++c) {
        const auto m = mix_column({s[c * 4], s[c * 4 + 1], s[c * 4 + 2], s[c * 4 + 3]});
        for (int r = 0; r < 4; ++r) s[c * 4 + r] = m[r];
      }
    }
    for (int i = 0; i < 16; ++i) s[i] ^= rk[round][i];
  }
  return s;
}

}  // namespace oracle
