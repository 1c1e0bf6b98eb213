// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cirng/engines.hpp"
#include "cirng/errors.hpp"

using namespace cirng;

namespace {

std::unique_ptr<CiprngV1> worked_example_generator(bool emit_seed = true) {
  return std::make_unique<CiprngV1>(BooleanStateVector::from_string("10100"),
                                    make_scripted_source({0, 1, 0}),
                                    make_scripted_source({1, 3, 1, 1, 4, 0, 0, 4, 4, 2, 1, 2, 2}),
                                    4, emit_seed);
}

// Combined generator written out step by step, sharing no code with the
// library: inline xorshift, inline BBS, the four lanes unrolled.
struct StraightLineOracle {
  std::uint64_t s1, s2, b, m;
  std::uint16_t z;

  static std::uint64_t xs(std::uint64_t& s) {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }

  std::uint16_t next() {
    const std::uint64_t x = xs(s1);
    const std::uint64_t y = xs(s2);
    const std::uint32_t z1 = x & 0xffffffff, z2 = (x >> 32) & 0xffffffff;
    const std::uint32_t z3 = y & 0xffffffff, z4 = (y >> 32) & 0xffffffff;
    b = (b * b) % m;
    const std::uint64_t t = b & 15;
    unsigned w1 = 0, w2 = 0, w3 = 0, w4 = 0;
    for (unsigned i = 0; i <= 11; ++i) {
      w1 ^= 1u << ((z1 >> (i * 2)) & 3);
      w2 ^= 1u << ((z2 >> (i * 2)) & 3);
      w3 ^= 1u << ((z3 >> (i * 2)) & 3);
      w4 ^= 1u << ((z4 >> (i * 2)) & 3);
    }
    if (t & 1) w1 ^= 1u << ((z1 >> 24) & 3);
    if (t & 2) w2 ^= 1u << ((z2 >> 24) & 3);
    if (t & 4) w3 ^= 1u << ((z3 >> 24) & 3);
    if (t & 8) w4 ^= 1u << ((z4 >> 24) & 3);
    z = static_cast<std::uint16_t>(z ^ w1 ^ (w2 << 4) ^ (w3 << 8) ^ (w4 << 12));
    return z;
  }
};

// Cumulative Binomial(n, 1/2) counts by Pascal's triangle, n <= 62.
std::vector<std::uint64_t> binomial_cumulative(unsigned n) {
  std::vector<std::uint64_t> row{1};
  for (unsigned r = 1; r <= n; ++r) {
    std::vector<std::uint64_t> next(r + 1, 1);
    for (unsigned i = 1; i < r; ++i) next[i] = row[i - 1] + row[i];
    row = next;
  }
  std::vector<std::uint64_t> cum(n + 1);
  std::uint64_t acc = 0;
  for (unsigned i = 0; i <= n; ++i) cum[i] = acc += row[i];
  return cum;
}

class ConstantStream final : public BitStream {
 public:
  explicit ConstantStream(std::size_t width) : width_(width) {}
  std::size_t block_width() const override { return width_; }
  void emit_block(BitSequence& out) override {
    for (std::size_t i = 0; i < width_; ++i) out.push_back(static_cast<std::uint8_t>((blocks_ + i) & 1));
    ++blocks_;
  }
  std::size_t blocks() const { return blocks_; }

 private:
  std::size_t width_;
  std::size_t blocks_ = 0;
};

}  // namespace

TEST(CiprngV1, WorkedExampleStream) {
  auto gen = worked_example_generator();
  EXPECT_EQ(to_bit_string(stream_bits(*gen, 20)), "10100111101111110011");
}

TEST(CiprngV1, WorkedExampleCheckpoints) {
  auto gen = worked_example_generator(false);
  EXPECT_EQ(gen->next_block().to_string(), "11110");
  EXPECT_EQ(gen->sigma(), 4u);
  EXPECT_EQ(gen->last_iterations(), 4u);
  EXPECT_EQ(gen->next_block().to_string(), "11111");
  EXPECT_EQ(gen->sigma(), 9u);
  EXPECT_EQ(gen->next_block().to_string(), "10011");
  EXPECT_EQ(gen->sigma(), 13u);
  EXPECT_THROW(gen->next_block(), EntropyExhausted);
}

TEST(CiprngV1, DistanceParityMatchesIterationCount) {
  CiprngV1 gen(BooleanStateVector(32), make_xorshift_source(3), make_xorshift_source(5), 4, false);
  auto prev = gen.state();
  for (int i = 0; i < 2000; ++i) {
    const auto cur = gen.next_block();
    std::size_t distance = 0;
    for (std::size_t k = 1; k <= 32; ++k) distance += prev.at(k) != cur.at(k);
    ASSERT_EQ(distance % 2, gen.last_iterations() % 2);
    ASSERT_TRUE(gen.last_iterations() == 4 || gen.last_iterations() == 5);
    prev = cur;
  }
}

TEST(StreamBits, TruncatesLastBlock) {
  ConstantStream s(16);
  EXPECT_EQ(stream_bits(s, 33).size(), 33u);
  EXPECT_EQ(s.blocks(), 3u);
  ConstantStream t(16);
  EXPECT_TRUE(stream_bits(t, 0).empty());
  EXPECT_EQ(t.blocks(), 0u);
  EXPECT_THROW(stream_bits(t, -1), PreconditionError);
}

TEST(StreamBits, PrefixOfLongerStream) {
  auto a = FpgaCiprng::from_seeds(FpgaSeeds{});
  auto b = FpgaCiprng::from_seeds(FpgaSeeds{});
  const auto short_bits = stream_bits(a, 33);
  const auto long_bits = stream_bits(b, 48);
  EXPECT_TRUE(std::equal(short_bits.begin(), short_bits.end(), long_bits.begin()));
}

TEST(G1Map, Boundaries) {
  EXPECT_EQ(g1_map(0), 0u);
  EXPECT_EQ(g1_map(0xffffffffu), 32u);
  EXPECT_EQ(g1_map(1), 1u);  // C(32,0) = 1
  EXPECT_EQ(g1_map(150994944u, 8), 2u);
  EXPECT_EQ(g1_map(150994943u, 8), 1u);
  EXPECT_EQ(g1_map(620756991u, 8), 2u);
  EXPECT_EQ(g1_map(620756992u, 8), 3u);
  EXPECT_THROW(g1_map(0, 0), PreconditionError);
  EXPECT_THROW(g1_map(0, 65), PreconditionError);
}

TEST(G1Map, MatchesPascalOracle) {
  std::mt19937 rng(42);
  for (unsigned n : {1u, 5u, 8u, 16u, 32u}) {
    const auto cum = binomial_cumulative(n);
    for (int i = 0; i < 20000; ++i) {
      const std::uint32_t a = rng();
      // a * 2^n / 2^32 < cum[i]  <=>  a * 2^n < cum[i] * 2^32
      unsigned want = n;
      for (unsigned k = 0; k <= n; ++k) {
        const long double lhs = std::ldexp(static_cast<long double>(a), static_cast<int>(n));
        const long double rhs = std::ldexp(static_cast<long double>(cum[k]), 32);
        if (lhs < rhs) {
          want = k;
          break;
        }
      }
      ASSERT_EQ(g1_map(a, n), want) << "a=" << a << " n=" << n;
    }
  }
}

TEST(CiprngV2, WorkedRound) {
  CiprngV2 gen(BooleanStateVector(8), make_scripted_source({150994944u}),
               make_scripted_source({3, 3, 5}));
  EXPECT_EQ(gen.next_block().to_string(), "00010100");
  EXPECT_EQ(gen.last_iterations(), 2u);
  EXPECT_EQ(gen.last_draws(), 3u);
  EXPECT_EQ(to_bit_string(gen.touched()), "00010100");
}

TEST(CiprngV2, RoundLimit) {
  CiprngV2 gen(BooleanStateVector(8), make_scripted_source({0xffffffffu}),
               make_scripted_source(std::vector<std::uint64_t>(600, 0)));
  EXPECT_THROW(gen.next_block(), RoundLimitExceeded);
}

TEST(CiprngV2, DistanceEqualsIterationCount) {
  CiprngV2 gen(BooleanStateVector(32), make_xorshift_source(7), make_xorshift_source(9));
  auto prev = gen.state();
  for (int i = 0; i < 2000; ++i) {
    const auto cur = gen.next_block();
    std::size_t distance = 0;
    for (std::size_t k = 1; k <= 32; ++k) distance += prev.at(k) != cur.at(k);
    ASSERT_EQ(distance, gen.last_iterations());
    prev = cur;
  }
}

TEST(Fpga, NibbleMask) {
  // Twelve zero chunks cancel pairwise; the thirteenth sets bit 0.
  EXPECT_EQ(derive_nibble_mask(0, false), 0u);
  EXPECT_EQ(derive_nibble_mask(0, true), 1u);
  // Chunks 0..11 of 0x00e4e4e4 are 0,1,2,3 three times each.
  EXPECT_EQ(derive_nibble_mask(0x00e4e4e4u, false), 0xfu);
  EXPECT_EQ(derive_nibble_mask(0x03e4e4e4u, true), 0x7u);
}

TEST(Fpga, FrozenOutputs) {
  FpgaSeeds seeds;
  seeds.modulus = kSmallBlumModulus;
  auto gen = FpgaCiprng::from_seeds(seeds);
  const std::vector<std::uint16_t> expected = {517, 40550, 55201, 49417, 3946};
  for (auto want : expected) EXPECT_EQ(gen.next(), want);
}

TEST(Fpga, MatchesStraightLineOracle) {
  for (std::uint32_t modulus : {kSmallBlumModulus, kDefaultBlumModulus}) {
    FpgaSeeds seeds;
    seeds.xs1 = 0x0123456789abcdefULL;
    seeds.xs2 = 0xfedcba9876543210ULL;
    seeds.bbs_seed = 1234567;
    seeds.modulus = modulus;
    seeds.z = 0xbeef;
    auto gen = FpgaCiprng::from_seeds(seeds);
    const auto bbs_start = Bbs::from_user_seed(seeds.bbs_seed, modulus).state();
    StraightLineOracle oracle{seeds.xs1, seeds.xs2, bbs_start, modulus, seeds.z};
    for (int i = 0; i < 5000; ++i) ASSERT_EQ(gen.next(), oracle.next()) << "round " << i;
  }
}

TEST(Fpga, LoopAndMaskFormsAgree) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 100000; ++i) {
    const FpgaRoundInputs in{rng(), rng(), static_cast<std::uint32_t>(rng() & 15)};
    ASSERT_EQ(loop_form_delta(in), mask_form_delta(in));
  }
}

TEST(Fpga, ScriptedSourcesDriveRounds) {
  FpgaCiprng gen(0, make_scripted_source({1}), make_scripted_source({0}), make_scripted_source({0}));
  // x = 1: lane 1 chunks are 1,0 x11 -> bits {1} ^ {0} (eleven zeros, odd) = 0b0011.
  EXPECT_EQ(gen.next(), 0x0003u);
  EXPECT_THROW(gen.next(), EntropyExhausted);
}

TEST(FpgaSeeds, FromWordsKeepsGivenWords) {
  const auto s = FpgaSeeds::from_words({5, 6, 7, 0x1234});
  EXPECT_EQ(s.xs1, 5u);
  EXPECT_EQ(s.xs2, 6u);
  EXPECT_EQ(s.bbs_seed, 7u);
  EXPECT_EQ(s.z, 0x1234u);
  const auto zero = FpgaSeeds::from_words({0, 0});
  EXPECT_NE(zero.xs1, 0u);
  EXPECT_NE(zero.xs2, 0u);
}
