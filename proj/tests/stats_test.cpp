// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <array>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <random>
#include <sstream>

#include "cirng/engines.hpp"
#include "cirng/errors.hpp"
#include "cirng/stats.hpp"

using namespace cirng;
using namespace cirng::stats;

namespace {

// First 100 bits of the binary expansion of pi, the usual worked input.
const char* kPi100 =
    "1100100100001111110110101010001000100001011010001100001000110100110001001100011001100010100010111000";

const char* kLongestRun128 =
    "11001100000101010110110001001100111000000000001001001101010100010001001111010110100000001101011111001100111001101101100010110010";

BitSequence random_bits(std::mt19937_64& rng, std::size_t n) {
  BitSequence s;
  s.reserve(n);
  while (s.size() < n) {
    const auto w = rng();
    for (int i = 63; i >= 0 && s.size() < n; --i) s.push_back(static_cast<std::uint8_t>((w >> i) & 1));
  }
  return s;
}

class Mt19937Stream final : public BitStream {
 public:
  explicit Mt19937Stream(std::uint64_t seed) : rng_(seed) {}
  std::size_t block_width() const override { return 64; }
  void emit_block(BitSequence& out) override { append_word_bits(out, rng_(), 64); }

 private:
  std::mt19937_64 rng_;
};

class PatternStream final : public BitStream {
 public:
  explicit PatternStream(std::string pattern) : pattern_(std::move(pattern)) {}
  std::size_t block_width() const override { return pattern_.size(); }
  void emit_block(BitSequence& out) override {
    for (char c : pattern_) out.push_back(c == '1');
  }

 private:
  std::string pattern_;
};

// Serial statistic computed directly from its definition, p-values via Boost.
std::vector<double> serial_oracle(const BitSequence& s, unsigned m) {
  const std::size_t n = s.size();
  auto psi = [&](unsigned k) -> double {
    if (k == 0) return 0.0;
    std::vector<double> counts(std::size_t{1} << k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t v = 0;
      for (unsigned j = 0; j < k; ++j) v = v * 2 + s[(i + j) % n];
      counts[v] += 1.0;
    }
    double sum = 0.0;
    for (double c : counts) sum += c * c;
    return std::pow(2.0, k) / static_cast<double>(n) * sum - static_cast<double>(n);
  };
  const double d1 = psi(m) - psi(m - 1);
  const double d2 = psi(m) - 2 * psi(m - 1) + psi(m - 2);
  return {boost::math::gamma_q(std::pow(2.0, m - 2), d1 / 2),
          boost::math::gamma_q(std::pow(2.0, m - 3), d2 / 2)};
}

}  // namespace

TEST(SpecialFunctions, IncompleteGammaMatchesBoost) {
  for (double a : {0.5, 1.0, 2.5, 4.5, 8.0, 64.0, 512.0, 1024.0}) {
    for (double x : {0.01, 0.5, 1.0, 3.0, 10.0, 60.0, 500.0, 1100.0}) {
      EXPECT_NEAR(igamc(a, x), boost::math::gamma_q(a, x), 1e-9) << "a=" << a << " x=" << x;
    }
  }
  EXPECT_EQ(igamc(3.0, 0.0), 1.0);
  EXPECT_THROW(igamc(0.0, 1.0), PreconditionError);
}

TEST(SpecialFunctions, NormalCdf) {
  for (double x : {-5.0, -1.0, 0.0, 0.3, 2.0}) {
    EXPECT_NEAR(normal_cdf(x), 0.5 * std::erfc(-x / std::sqrt(2.0)), 1e-15);
  }
}

TEST(Monobit, KnownValues) {
  BitSequence s(100, 0);
  for (int i = 0; i < 58; ++i) s[static_cast<std::size_t>(i)] = 1;
  EXPECT_NEAR(run_test(TestKind::monobit, s), std::erfc(1.6 / std::sqrt(2.0)), 1e-4);
  EXPECT_NEAR(run_test(TestKind::monobit, s), 0.1096, 1e-4);

  BitSequence balanced(100);
  for (std::size_t i = 0; i < 100; ++i) balanced[i] = i % 2;
  EXPECT_DOUBLE_EQ(run_test(TestKind::monobit, balanced), 1.0);

  EXPECT_LT(run_test(TestKind::monobit, BitSequence(100, 0)), 1e-20);
  EXPECT_NEAR(run_test(TestKind::monobit, from_bit_string(kPi100)), 0.109599, 1e-6);
}

TEST(WorkedInputs, PiExpansion) {
  const auto s = from_bit_string(kPi100);
  TestParams p;
  p.block_frequency_m = 10;
  EXPECT_NEAR(run_test(TestKind::block_frequency, s, p), 0.706438, 1e-6);
  EXPECT_NEAR(run_test(TestKind::runs, s), 0.500798, 1e-6);
  const auto cusum = run_test_variants(TestKind::cumulative_sums, s);
  ASSERT_EQ(cusum.size(), 2u);
  EXPECT_NEAR(cusum[0], 0.219194, 1e-6);
  EXPECT_NEAR(cusum[1], 0.114866, 1e-6);
  EXPECT_NEAR(run_test(TestKind::cumulative_sums, s), 0.114866, 1e-6);
  p.entropy_m = 2;
  EXPECT_NEAR(run_test(TestKind::approximate_entropy, s, p), 0.235301, 1e-6);
}

TEST(WorkedInputs, LongestRun) {
  EXPECT_NEAR(run_test(TestKind::longest_run, from_bit_string(kLongestRun128)), 0.180609, 1e-6);
}

TEST(Serial, MatchesDefinitionOracle) {
  std::mt19937_64 rng(5);
  for (unsigned m : {3u, 5u, 10u}) {
    TestParams p;
    p.serial_m = m;
    const auto s = random_bits(rng, 20000);
    const auto got = run_test_variants(TestKind::serial, s, p);
    const auto want = serial_oracle(s, m);
    ASSERT_EQ(got.size(), 2u);
    EXPECT_NEAR(got[0], want[0], 1e-9);
    EXPECT_NEAR(got[1], want[1], 1e-9);
  }
}

TEST(Lengths, TooShortIsRejectedWithMinimum) {
  try {
    run_test(TestKind::monobit, BitSequence(99, 1));
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("100"), std::string::npos);
  }
  EXPECT_THROW(run_test(TestKind::longest_run, BitSequence(127, 1)), PreconditionError);
  EXPECT_EQ(minimum_length(TestKind::serial), 8192u);
  EXPECT_EQ(minimum_length(TestKind::block_frequency), 128u);
}

TEST(Properties, PureAndComplementInvariantCusum) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    auto s = random_bits(rng, 1000 + static_cast<std::size_t>(i) * 37);
    const auto a = run_test_variants(TestKind::cumulative_sums, s);
    EXPECT_EQ(a, run_test_variants(TestKind::cumulative_sums, s));
    for (auto& b : s) b ^= 1;
    EXPECT_EQ(a, run_test_variants(TestKind::cumulative_sums, s));
  }
}

TEST(Properties, PValuesInUnitInterval) {
  std::mt19937_64 rng(3);
  const auto good = random_bits(rng, 20000);
  const BitSequence zeros(20000, 0);
  BitSequence alternating(20000);
  for (std::size_t i = 0; i < alternating.size(); ++i) alternating[i] = i % 2;
  for (const BitSequence* s : std::array<const BitSequence*, 3>{&good, &zeros, &alternating}) {
    for (auto kind : kAllTests) {
      for (double p : run_test_variants(kind, *s)) {
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
      }
    }
  }
}

TEST(Uniformity, Examples) {
  EXPECT_LT(pt_uniformity(std::vector<double>(100, 0.05)), 1e-10);
  std::vector<double> even;
  for (int bin = 0; bin < 10; ++bin) {
    for (int j = 0; j < 10; ++j) even.push_back(bin / 10.0 + 0.05);
  }
  EXPECT_DOUBLE_EQ(pt_uniformity(even), 1.0);
  EXPECT_THROW(pt_uniformity(std::vector<double>(9, 0.5)), PreconditionError);
}

TEST(Uniformity, IidUniformPValuesPass) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int failures = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> p(1000);
    for (auto& v : p) v = u(rng);
    failures += pt_uniformity(p) <= kUniformityThreshold;
  }
  EXPECT_EQ(failures, 0);
}

TEST(Uniformity, MinimumProportion) {
  EXPECT_NEAR(minimum_pass_proportion(100, 0.01), 0.99 - 3 * std::sqrt(0.01 * 0.99 / 100), 1e-12);
  EXPECT_NEAR(minimum_pass_proportion(100, 0.01), 0.9602, 1e-4);
}

TEST(Battery, DegenerateGenerators) {
  PatternStream zeros("0");
  const auto r = run_battery(zeros, 10, 1000, {.tests = {TestKind::monobit}});
  EXPECT_EQ(r.get(TestKind::monobit).proportion, 0.0);
  EXPECT_FALSE(r.get(TestKind::monobit).passed);

  PatternStream alternating("01");
  const auto a = run_battery(alternating, 10, 1000, {.tests = {TestKind::runs}});
  for (double p : a.get(TestKind::runs).headline) EXPECT_LT(p, 1e-100);
}

TEST(Battery, DeterministicAcrossWorkerCounts) {
  Mt19937Stream g1(8);
  Mt19937Stream g4(8);
  const auto a = run_battery(g1, 24, 20000, {.jobs = 1});
  const auto b = run_battery(g4, 24, 20000, {.jobs = 4});
  ASSERT_EQ(a.tests.size(), b.tests.size());
  for (std::size_t i = 0; i < a.tests.size(); ++i) {
    EXPECT_EQ(a.tests[i].headline, b.tests[i].headline);
    EXPECT_EQ(a.tests[i].proportion, b.tests[i].proportion);
  }
  EXPECT_EQ(format_lines(a), format_lines(b));
}

TEST(Battery, LineFormat) {
  Mt19937Stream g(9);
  const auto r = run_battery(g, 12, 20000);
  std::istringstream lines(format_lines(r));
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    ++count;
    EXPECT_EQ(std::count(line.begin(), line.end(), '\t'), 3) << line;
    EXPECT_TRUE(line.ends_with("PASS") || line.ends_with("FAIL")) << line;
  }
  EXPECT_EQ(count, 7u);
}

// Under the null every test's p-values should be uniform. Approximate
// entropy with m = 10 only behaves once n is well above 2^(m+5).
TEST(Null, ReferenceStreamIsUniform) {
  Mt19937Stream g(20240601);
  const auto r = run_battery(g, 1000, 1 << 17, {.jobs = 4});
  for (const auto& t : r.tests) {
    for (const auto& v : t.variants) {
      ASSERT_TRUE(v.p_t.has_value());
      EXPECT_GT(*v.p_t, kUniformityThreshold) << test_name(t.kind);
    }
  }
}

TEST(Null, ApproximateEntropyBiasedAtShortLength) {
  Mt19937Stream g(77);
  const auto r = run_battery(g, 100, 20000, {.tests = {TestKind::approximate_entropy}});
  EXPECT_LT(*r.get(TestKind::approximate_entropy).p_t, kUniformityThreshold);
}
