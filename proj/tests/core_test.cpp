// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "cirng/bits.hpp"
#include "cirng/core.hpp"
#include "cirng/errors.hpp"

using namespace cirng;

namespace {

// Key/value pairs from the committed hand trace.
std::multimap<std::string, std::uint64_t> load_trace() {
  std::ifstream in(std::string(CIRNG_TESTS) + "/fixtures/xorshift_trace.txt");
  std::multimap<std::string, std::uint64_t> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    std::uint64_t value = 0;
    ls >> key >> value;
    out.emplace(key, value);
  }
  return out;
}

// Squaring by repeated addition, independent of Bbs::next.
std::uint64_t square_mod_by_addition(std::uint64_t b, std::uint64_t m) {
  std::uint64_t acc = 0;
  for (std::uint64_t i = 0; i < b; ++i) acc = (acc + b) % m;
  return acc;
}

}  // namespace

TEST(Xorshift, MatchesHandTraceFixture) {
  const auto trace = load_trace();
  ASSERT_EQ(trace.count("seed"), 1u);
  ASSERT_EQ(trace.count("output"), 1u);

  std::uint64_t x = trace.find("seed")->second;
  std::vector<std::uint64_t> steps;
  x ^= x << 13;
  steps.push_back(x);
  x ^= x >> 7;
  steps.push_back(x);
  x ^= x << 17;

  auto range = trace.equal_range("step");
  std::vector<std::uint64_t> expected;
  for (auto it = range.first; it != range.second; ++it) expected.push_back(it->second);
  EXPECT_EQ(steps, expected);
  EXPECT_EQ(x, trace.find("output")->second);

  Xorshift64 gen(1);
  EXPECT_EQ(gen.next(), 1082269761u);
  EXPECT_EQ(gen.state(), 1082269761u);
}

TEST(Xorshift, RejectsZeroSeedAndBadShifts) {
  EXPECT_THROW(Xorshift64(0), PreconditionError);
  EXPECT_THROW(Xorshift64(1, XorshiftTriple{0, 7, 17}), PreconditionError);
  EXPECT_THROW(Xorshift64(1, XorshiftTriple{13, 64, 17}), PreconditionError);
}

TEST(Xorshift, FreshInstancesAgree) {
  Xorshift64 a(0x9e3779b97f4a7c15ULL);
  Xorshift64 b(0x9e3779b97f4a7c15ULL);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next(), b.next());
}

TEST(Xorshift, NeverReachesZero) {
  for (std::uint64_t seed : {1ULL, 2ULL, 0xdeadbeefULL, ~0ULL}) {
    Xorshift64 gen(seed);
    for (int i = 0; i < 1'000'000; ++i) ASSERT_NE(gen.next(), 0u);
  }
}

TEST(Bbs, SmallModulusStatesMatchBruteForce) {
  Bbs gen(2, kSmallBlumModulus);
  std::uint64_t oracle = 2;
  const std::vector<std::uint32_t> expected = {4, 16, 25, 9, 4};
  for (auto want : expected) {
    oracle = square_mod_by_addition(oracle, 77);
    ASSERT_EQ(oracle, want);
    gen.next(4);
    EXPECT_EQ(gen.state(), want);
  }
}

TEST(Bbs, OutputIsLowBitsOfNewState) {
  Bbs a(2, 77);
  EXPECT_EQ(a.next(4), 4u);
  Bbs b(9, 77);
  EXPECT_EQ(b.next(4), 4u);
  EXPECT_EQ(b.state(), 4u);
  Bbs c(10, 77);  // 100 mod 77 = 23 = 0b10111
  EXPECT_EQ(c.next(3), 7u);
}

TEST(Bbs, RejectsBadParameters) {
  EXPECT_THROW(Bbs(1, 77), PreconditionError);
  EXPECT_THROW(Bbs(0, 77), PreconditionError);
  EXPECT_THROW(Bbs(77, 77), PreconditionError);
  EXPECT_THROW(Bbs(7, 77), PreconditionError);   // shares the factor 7
  EXPECT_THROW(Bbs(2, 35), PreconditionError);   // 5 = 1 mod 4
  EXPECT_NO_THROW(Bbs(2, 21));                   // 3 * 7
}

TEST(Bbs, DefaultModulusIsBlum) {
  EXPECT_EQ(kDefaultBlumModulus, 65519ULL * 65479ULL);
  EXPECT_TRUE(is_prime(65519));
  EXPECT_TRUE(is_prime(65479));
  EXPECT_EQ(65519 % 4, 3);
  EXPECT_EQ(65479 % 4, 3);
  EXPECT_TRUE(is_blum_integer(kDefaultBlumModulus));
  EXPECT_TRUE(is_blum_integer(77));
  EXPECT_FALSE(is_blum_integer(35));
  EXPECT_FALSE(is_blum_integer(49));
}

TEST(Bbs, UserSeedIsSteppedToCoprime) {
  EXPECT_EQ(Bbs::from_user_seed(2, 77).state(), 2u);
  EXPECT_EQ(Bbs::from_user_seed(7, 77).state(), 8u);
  EXPECT_EQ(Bbs::from_user_seed(0, 77).state(), 2u);
  EXPECT_EQ(Bbs::from_user_seed(1, 77).state(), 2u);
  EXPECT_EQ(Bbs::from_user_seed(77 + 3, 77).state(), 3u);
  EXPECT_EQ(Bbs::from_user_seed(76, 77).state(), 76u);
}

TEST(Bbs, StatesStayQuadraticResiduesInRange) {
  for (std::uint32_t seed = 2; seed < 77; ++seed) {
    if (seed % 7 == 0 || seed % 11 == 0) continue;
    Bbs gen(seed, 77);
    for (int i = 0; i < 40; ++i) {
      gen.next(1);
      const auto b = gen.state();
      ASSERT_GE(b, 1u);
      ASSERT_LT(b, 77u);
      bool residue = false;
      for (std::uint64_t r = 1; r < 77 && !residue; ++r) residue = (r * r) % 77 == b;
      ASSERT_TRUE(residue) << "seed " << seed << " state " << b;
    }
  }
}

TEST(ChaoticIteration, WorkedSteps) {
  const auto x0 = BooleanStateVector::from_string("10100");
  const auto x1 = ci_step(x0, {2});
  EXPECT_EQ(x1.to_string(), "11100");
  EXPECT_EQ(ci_step(x1, {4}).to_string(), "11110");
}

TEST(ChaoticIteration, RejectsOutOfRangePosition) {
  const BooleanStateVector x(5);
  EXPECT_THROW(ci_step(x, {0}), PreconditionError);
  EXPECT_THROW(ci_step(x, {6}), PreconditionError);
}

TEST(ChaoticIteration, WorkedStrategyCheckpoints) {
  auto x = BooleanStateVector::from_string("10100");
  const std::vector<std::size_t> strategy = {2, 4, 2, 2, 5, 1, 1, 5, 5, 3, 2, 3, 3};
  std::map<std::size_t, std::string> seen;
  for (std::size_t i = 0; i < strategy.size(); ++i) {
    x = ci_step(x, {strategy[i]});
    seen[i + 1] = x.to_string();
  }
  EXPECT_EQ(seen[4], "11110");
  EXPECT_EQ(seen[9], "11111");
  EXPECT_EQ(seen[13], "10011");
}

TEST(ChaoticIteration, InvolutionAndWeightChange) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng() % 64;
    const auto x = BooleanStateVector::from_word(rng(), n);
    const StrategyElement s{1 + rng() % n};
    const auto y = ci_step(x, s);
    ASSERT_EQ(ci_step(y, s), x);
    const auto wx = static_cast<long>(x.hamming_weight());
    const auto wy = static_cast<long>(y.hamming_weight());
    ASSERT_EQ(std::abs(wx - wy), 1);
    for (std::size_t i = 1; i <= n; ++i) {
      if (i != s.position) ASSERT_EQ(x.at(i), y.at(i));
    }
  }
}

TEST(ChaoticIteration, XorStep) {
  EXPECT_EQ(xor_ci_step(0b1010, 0b0110, 4), 0b1100u);
  EXPECT_EQ(xor_ci_step(0b1010, 0, 4), 0b1010u);
  EXPECT_EQ(xor_ci_step(0xabcdef, 0xabcdef), 0u);
}

TEST(BooleanStateVector, FirstComponentIsMostSignificant) {
  const auto x = BooleanStateVector::from_word(0b10100, 5);
  EXPECT_EQ(x.to_string(), "10100");
  EXPECT_TRUE(x.at(1));
  EXPECT_FALSE(x.at(2));
  EXPECT_EQ(x.to_word(), 0b10100u);
  EXPECT_THROW(BooleanStateVector(std::size_t{0}), PreconditionError);
}

TEST(BooleanStateVector, WordRoundTrip) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + rng() % 64;
    const std::uint64_t mask = n == 64 ? ~0ULL : ((1ULL << n) - 1);
    const std::uint64_t w = rng() & mask;
    ASSERT_EQ(BooleanStateVector::from_word(w, n).to_word(), w);
  }
}

TEST(Bits, StringRoundTripAndErrors) {
  const auto bits = from_bit_string("10 1\n1");
  EXPECT_EQ(to_bit_string(bits), "1011");
  EXPECT_THROW(from_bit_string("10a1"), FormatError);
  BitSequence out;
  append_word_bits(out, 0b101, 3);
  EXPECT_EQ(to_bit_string(out), "101");
  EXPECT_EQ(pack_bits(from_bit_string("101000001")), (std::vector<std::uint8_t>{0xa0, 0x80}));
}

TEST(SeedExpansion, KeepsGivenWordsAndIsDeterministic) {
  const auto a = expand_seed({5, 6}, 4);
  ASSERT_EQ(a.size(), 4u);
  EXPECT_EQ(a[0], 5u);
  EXPECT_EQ(a[1], 6u);
  EXPECT_EQ(a, expand_seed({5, 6}, 4));
  EXPECT_NE(a[2], a[3]);
}
