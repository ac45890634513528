#include <random>
#include <set>

#include "aes_oracle.hpp"
#include "aesimc/error.hpp"
#include "aesimc/reference_aes.hpp"
#include "doctest.h"

using namespace aesimc;

namespace {

Block random_block(std::mt19937_64& rng) {
  Block b{};
  for (auto& x : b) x = static_cast<Byte>(rng());
  return b;
}

// Frozen from an independent AES implementation (OpenSSL via Python's
// cryptography package).
struct Vector {
  const char* key;
  const char* plain;
  const char* cipher;
};
constexpr Vector kVectors[] = {
    {"000102030405060708090a0b0c0d0e0f", "00112233445566778899aabbccddeeff",
     "69c4e0d86a7b0430d8cdb78070b4c55a"},
    {"f05d9b66d1877dffb5d46f9ea92669ef", "4b6cd21db2d5ee3f47a7c7a9b066a6da",
     "73b823bc021044c2522f971a3e44400b"},
    {"d4a26dd0756814730984a3d739a97678", "edbb4567bcfc4886c6acabee5643a969",
     "f48791d7aef5db5c5b6bc66e9c711629"},
    {"213258024de078b3752964917aec86f6", "dfd466249a9a8e458033fd6f64c65a72",
     "d5f0085e2a96d5a8eb9fd7059b1fb615"},
    {"a3b517c1253c751c406b2c5878f95452", "2c40350f375ca1003e8f0e5d1f356b6a",
     "5ecb75bc4220a04da1383ef737fea157"},
    {"61ec5ff2a08be8e06fcce5d6446b529f", "cb645bb6e9073dab0172d6136dedfe19",
     "24c39216ea960dde4756e3a3ceacdb36"},
    {"dcaa05ae82507337dc2244590cad9d81", "fd52b9eedefba751133e3dbad95c301b",
     "ea944bf987ff955b6fd6d01c619a3510"},
    {"df0d8b763ca2466c37dc3488de517600", "3f65c1d0e4587e958db6e639cfcb90a2",
     "b81ef1d506de79d313adac505e783236"},
    {"7479b774d7ef9e9263ef1b81c26b86d3", "44a191442f70ed8f977ec7905ef5ba0f",
     "da21da139ea81c0057195c46986a478c"},
    {"c0204433d8a5612682108560de5562f1", "8823ec3f338942c5327278549746c537",
     "353ba0b10288fc241a98b13cf887439a"},
    {"42add3a8aa780a8ec3478857836f43db", "61404276810c38d8d711f34f8db8ecb1",
     "a1aee040b069b71e622bbf66827edb3e"},
    {"95f6e510915fc4fdb8f8ba502189645d", "e1eea703483ad81990292af5ec6b77a0",
     "14aa262589abe78ae66b1d98e72fa635"},
    {"9af9961c6cf27d9ea080a8144785b1b0", "4d1bb207a1a1645f91e8195133f786c9",
     "8186e6d74911bf1d0d93f1fcd363feaa"},
};

}  // namespace

TEST_CASE("gen_sbox matches the algebraic construction and the published table") {
  const auto sbox = gen_sbox();
  CHECK(sbox[0x00] == 0x63);
  CHECK(sbox[0x53] == 0xED);
  for (unsigned x = 0; x < 256; ++x) {
    CHECK(sbox[x] == oracle::sbox_algebraic(static_cast<Byte>(x)));
    CHECK(sbox[x] == oracle::kSbox[x]);
  }
}

TEST_CASE("gen_sbox is a permutation without fixed points") {
  const auto sbox = gen_sbox();
  std::set<Byte> image(sbox.begin(), sbox.end());
  CHECK(image.size() == 256);
  for (unsigned x = 0; x < 256; ++x) CHECK(sbox[x] != x);
}

TEST_CASE("gen_m2 doubles in GF(2^8)") {
  const auto m2 = gen_m2();
  CHECK(m2[0x00] == 0x00);
  CHECK(m2[0x80] == 0x1B);
  CHECK(m2[0x57] == 0xAE);
  for (unsigned x = 0; x < 256; ++x) CHECK(m2[x] == oracle::times2(static_cast<Byte>(x)));

  std::mt19937 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const auto x = static_cast<Byte>(rng());
    const auto y = static_cast<Byte>(rng());
    CHECK((m2[x] ^ m2[y]) == m2[x ^ y]);
  }
}

TEST_CASE("times three decomposes as m2(x) ^ x") {
  const auto m2 = gen_m2();
  for (unsigned x = 0; x < 256; ++x) {
    CHECK((m2[x] ^ x) == oracle::gmul(static_cast<Byte>(x), 3));
  }
}

TEST_CASE("gf_mul agrees with the reduction-based multiply") {
  for (unsigned a = 0; a < 256; ++a) {
    for (unsigned b = 0; b < 256; b += 7) {
      CHECK(gf_mul(static_cast<Byte>(a), static_cast<Byte>(b)) ==
            oracle::gmul(static_cast<Byte>(a), static_cast<Byte>(b)));
    }
  }
}

TEST_CASE("expand_key") {
  const Block zero{};
  const auto ks = expand_key(zero);
  CHECK(ks.keys[0] == zero);
  CHECK(to_hex(ks.keys[1]) == "62636363626363636263636362636363");
  CHECK(to_hex(ks.keys[10]) == "b4ef5bcb3e92e21123e951cf6f8f188e");

  const auto fips = expand_key(parse_hex("000102030405060708090a0b0c0d0e0f"));
  CHECK(to_hex(fips.keys[10]) == "13111d7fe3944a17f307a78b4d2b30c5");

  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Block k1 = random_block(rng);
    Block k2 = random_block(rng);
    if (k1 == k2) continue;
    const auto a = expand_key(k1);
    const auto b = expand_key(k2);
    CHECK(a.keys[10] != b.keys[10]);
    const auto want = oracle::key_schedule(k1);
    for (std::size_t r = 0; r < kRoundKeys; ++r) CHECK(a.keys[r] == want[r]);
  }

  const std::vector<Byte> short_key(15, 0);
  CHECK_THROWS_AS(expand_key(short_key), InputError);
}

TEST_CASE("aes128_encrypt on frozen vectors") {
  for (const auto& v : kVectors) {
    CHECK(to_hex(aes128_encrypt(parse_hex(v.plain), parse_hex(v.key))) == v.cipher);
  }
  const std::vector<Byte> short_block(12, 0);
  CHECK_THROWS_AS(aes128_encrypt(short_block, parse_hex(kVectors[0].key)), InputError);
}

TEST_CASE("aes128_encrypt matches the independent reference on 10000 random pairs") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 10000; ++i) {
    const Block key = random_block(rng);
    const Block plain = random_block(rng);
    const Block got = aes128_encrypt(plain, expand_key(key));
    REQUIRE(got == oracle::encrypt(plain, key));
  }
}

TEST_CASE("aes128_encrypt is injective and avalanches") {
  std::mt19937_64 rng(5);
  const Block key = random_block(rng);
  const auto keys = expand_key(key);
  std::set<Block> plains;
  std::set<Block> ciphers;
  while (plains.size() < 1000) {
    const Block p = random_block(rng);
    if (plains.insert(p).second) ciphers.insert(aes128_encrypt(p, keys));
  }
  CHECK(ciphers.size() == 1000);

  for (int bit = 0; bit < 128; ++bit) {
    Block p = *plains.begin();
    const Block base = aes128_encrypt(p, keys);
    p[static_cast<std::size_t>(bit / 8)] ^= static_cast<Byte>(1u << (bit % 8));
    CHECK(aes128_encrypt(p, keys) != base);
  }
}

TEST_CASE("mixcolumn_ref") {
  CHECK(mixcolumn_ref({0xdb, 0x13, 0x53, 0x45}) == Column{0x8e, 0x4d, 0xa1, 0xbc});
  CHECK(mixcolumn_ref({0, 0, 0, 0}) == Column{0, 0, 0, 0});
  std::mt19937 rng(9);
  for (int i = 0; i < 1000; ++i) {
    const Column c{static_cast<Byte>(rng()), static_cast<Byte>(rng()), static_cast<Byte>(rng()),
                   static_cast<Byte>(rng())};
    CHECK(mixcolumn_ref(c) == oracle::mix_column(c));
  }
}

TEST_CASE("StateMatrix is column-major and round-trips") {
  std::mt19937_64 rng(1);
  const Block b = random_block(rng);
  const StateMatrix s(b);
  CHECK(s.block() == b);
  CHECK(s.at(1, 0) == b[1]);
  CHECK(s.at(0, 1) == b[4]);
  CHECK(s.at(3, 3) == b[15]);
}

TEST_CASE("shift_rows rotates row r left by r") {
  StateMatrix s;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) s.at(r, c) = static_cast<Byte>(r * 16 + c);
  shift_rows(s);
  CHECK(s.at(0, 0) == 0x00);
  CHECK(s.at(1, 0) == 0x11);
  CHECK(s.at(1, 3) == 0x10);
  CHECK(s.at(2, 0) == 0x22);
  CHECK(s.at(3, 0) == 0x33);
  CHECK(s.at(3, 1) == 0x30);
}

TEST_CASE("hex parsing") {
  CHECK(to_hex(parse_hex("00FFa0")) == "00ffa0");
  CHECK(parse_hex("  0a\n0b ") == std::vector<Byte>{0x0a, 0x0b});
  CHECK(parse_hex("").empty());
  CHECK_THROWS_AS(parse_hex("abc"), InputError);
  CHECK_THROWS_AS(parse_hex("zz"), InputError);
  CHECK_THROWS_AS(parse_block_hex("00"), InputError);
}
