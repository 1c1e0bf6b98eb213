// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// A subset of the NIST SP 800-22 battery: monobit, block frequency, runs,
// longest run of ones, cumulative sums, serial and approximate entropy.

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cirng/bits.hpp"

namespace cirng {

class BitStream;

namespace stats {

// Regularized upper incomplete gamma Q(a, x), a > 0, x >= 0.
double igamc(double a, double x);
// Standard normal CDF.
double normal_cdf(double x);

enum class TestKind {
  monobit,
  block_frequency,
  runs,
  longest_run,
  cumulative_sums,
  serial,
  approximate_entropy,
};

inline constexpr TestKind kAllTests[] = {
    TestKind::monobit,         TestKind::block_frequency, TestKind::runs,
    TestKind::longest_run,     TestKind::cumulative_sums, TestKind::serial,
    TestKind::approximate_entropy,
};

std::string_view test_name(TestKind kind);
std::optional<TestKind> parse_test_name(std::string_view name);

struct TestParams {
  std::size_t block_frequency_m = 128;
  std::size_t serial_m = 10;
  std::size_t entropy_m = 10;
};

// Smallest sequence length the test accepts under `params`.
std::size_t minimum_length(TestKind kind, const TestParams& params = {});

// All p-values a test produces: two for cumulative sums (forward,
// backward) and serial (del psi^2, del^2 psi^2), one otherwise. Throws
// PreconditionError when the sequence is shorter than minimum_length.
std::vector<double> run_test_variants(TestKind kind, const BitSequence& s,
                                      const TestParams& params = {});

// Headline p-value: the minimum over run_test_variants.
double run_test(TestKind kind, const BitSequence& s, const TestParams& params = {});

// Chi-square over 10 equal bins of [0, 1] (1.0 lands in the last bin),
// converted with igamc(9/2, chi2/2). Needs at least 10 p-values.
double pt_uniformity(const std::vector<double>& p_values);

// Lowest pass proportion NIST accepts for `sequences` samples:
// (1 - alpha) - 3 sqrt(alpha (1 - alpha) / sequences).
double minimum_pass_proportion(std::size_t sequences, double alpha);

inline constexpr double kAlpha = 0.01;
inline constexpr double kUniformityThreshold = 0.0001;

struct VariantSummary {
  std::vector<double> p_values;  // one per sequence
  double proportion = 0.0;       // fraction with p >= alpha
  std::optional<double> p_t;     // present with >= 10 sequences
};

struct TestSummary {
  TestKind kind{};
  std::vector<VariantSummary> variants;
  std::vector<double> headline;  // per sequence, min over variants
  // Worst case over variants.
  double proportion = 0.0;
  std::optional<double> p_t;
  bool passed = false;
};

struct TestReport {
  std::size_t sequences = 0;
  std::size_t bits_per_sequence = 0;
  double alpha = kAlpha;
  double min_proportion = 0.0;
  std::vector<TestSummary> tests;

  const TestSummary& get(TestKind kind) const;
  std::size_t passed_count() const;
};

struct BatteryOptions {
  TestParams params;
  std::vector<TestKind> tests{std::begin(kAllTests), std::end(kAllTests)};
  std::size_t jobs = 1;
  double alpha = kAlpha;
};

// Draws `sequences` consecutive runs of `bits_per_sequence` bits from `gen`
// and analyzes each; analysis may fan out to `jobs` threads, results are
// independent of the thread count.
TestReport run_battery(BitStream& gen, std::size_t sequences, std::size_t bits_per_sequence,
                       const BatteryOptions& options = {});

// Same, on sequences already in memory.
TestReport analyze_sequences(const std::vector<BitSequence>& sequences,
                             const BatteryOptions& options = {});

// Aligned table for people.
std::string format_table(const TestReport& report);
// One line per test: name, p-value (P_T, or the single p-value for a
// one-sequence report), pass proportion, PASS/FAIL; tab separated.
std::string format_lines(const TestReport& report);

}  // namespace stats
}  // namespace cirng
