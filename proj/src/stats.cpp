// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "cirng/stats.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "cirng/engines.hpp"
#include "cirng/errors.hpp"

namespace cirng::stats {

namespace {

constexpr double kEpsilon = 1e-15;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 100000;

double log_prefactor(double a, double x) { return -x + a * std::log(x) - std::lgamma(a); }

// Lower regularized gamma P(a, x) by its power series; good for x < a + 1.
double gamma_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kMaxIterations; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEpsilon) break;
  }
  return sum * std::exp(log_prefactor(a, x));
}

// Upper regularized gamma Q(a, x) by modified Lentz continued fraction;
// good for x >= a + 1.
double gamma_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEpsilon) break;
  }
  return std::exp(log_prefactor(a, x)) * h;
}

void require_length(TestKind kind, const BitSequence& s, const TestParams& params) {
  const std::size_t need = minimum_length(kind, params);
  if (s.size() < need) {
    throw PreconditionError(std::string(test_name(kind)) + " needs at least " +
                            std::to_string(need) + " bits, got " + std::to_string(s.size()));
  }
}

double clamp_p(double p) { return std::clamp(p, 0.0, 1.0); }

double monobit(const BitSequence& s) {
  const auto n = static_cast<double>(s.size());
  const double sum = 2.0 * static_cast<double>(count_ones(s)) - n;
  const double s_obs = std::fabs(sum) / std::sqrt(n);
  return std::erfc(s_obs / std::sqrt(2.0));
}

double block_frequency(const BitSequence& s, std::size_t m) {
  const std::size_t blocks = s.size() / m;
  double chi2 = 0.0;
  for (std::size_t i = 0; i < blocks; ++i) {
    std::size_t ones = 0;
    for (std::size_t j = 0; j < m; ++j) ones += s[i * m + j];
    const double pi = static_cast<double>(ones) / static_cast<double>(m);
    chi2 += (pi - 0.5) * (pi - 0.5);
  }
  chi2 *= 4.0 * static_cast<double>(m);
  return igamc(static_cast<double>(blocks) / 2.0, chi2 / 2.0);
}

double runs(const BitSequence& s) {
  const auto n = static_cast<double>(s.size());
  const double pi = static_cast<double>(count_ones(s)) / n;
  if (std::fabs(pi - 0.5) >= 2.0 / std::sqrt(n)) return 0.0;
  double v = 1.0;
  for (std::size_t k = 1; k < s.size(); ++k) {
    if (s[k] != s[k - 1]) v += 1.0;
  }
  const double num = std::fabs(v - 2.0 * n * pi * (1.0 - pi));
  const double den = 2.0 * std::sqrt(2.0 * n) * pi * (1.0 - pi);
  return std::erfc(num / den);
}

double longest_run(const BitSequence& s) {
  const std::size_t n = s.size();
  std::size_t m;
  std::size_t k;
  std::size_t low;  // run length of the first category
  std::vector<double> pi;
  if (n < 6272) {
    m = 8;
    k = 3;
    low = 1;
    pi = {0.21484375, 0.3671875, 0.23046875, 0.1875};
  } else if (n < 750000) {
    m = 128;
    k = 5;
    low = 4;
    pi = {0.1174035788, 0.242955959, 0.249363483, 0.17517706, 0.102701071, 0.112398847};
  } else {
    m = 10000;
    k = 6;
    low = 10;
    pi = {0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727};
  }
  const std::size_t blocks = n / m;
  std::vector<double> counts(k + 1, 0.0);
  for (std::size_t i = 0; i < blocks; ++i) {
    std::size_t longest = 0;
    std::size_t run = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (s[i * m + j]) {
        longest = std::max(longest, ++run);
      } else {
        run = 0;
      }
    }
    const std::size_t bin = longest <= low ? 0 : std::min(longest - low, k);
    counts[bin] += 1.0;
  }
  double chi2 = 0.0;
  const auto nb = static_cast<double>(blocks);
  for (std::size_t i = 0; i <= k; ++i) {
    const double expected = nb * pi[i];
    chi2 += (counts[i] - expected) * (counts[i] - expected) / expected;
  }
  return igamc(static_cast<double>(k) / 2.0, chi2 / 2.0);
}

double cusum_p(long long n, long long z) {
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const auto zd = static_cast<double>(z);
  double sum1 = 0.0;
  for (long long k = (-n / z + 1) / 4; k <= (n / z - 1) / 4; ++k) {
    sum1 += normal_cdf((4.0 * k + 1.0) * zd / sqrt_n) - normal_cdf((4.0 * k - 1.0) * zd / sqrt_n);
  }
  double sum2 = 0.0;
  for (long long k = (-n / z - 3) / 4; k <= (n / z - 1) / 4; ++k) {
    sum2 += normal_cdf((4.0 * k + 3.0) * zd / sqrt_n) - normal_cdf((4.0 * k + 1.0) * zd / sqrt_n);
  }
  return clamp_p(1.0 - sum1 + sum2);
}

std::vector<double> cumulative_sums(const BitSequence& s) {
  const auto n = static_cast<long long>(s.size());
  long long sum = 0;
  long long forward = 0;
  for (auto b : s) {
    sum += b ? 1 : -1;
    forward = std::max(forward, std::llabs(sum));
  }
  sum = 0;
  long long backward = 0;
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    sum += *it ? 1 : -1;
    backward = std::max(backward, std::llabs(sum));
  }
  return {cusum_p(n, forward), cusum_p(n, backward)};
}

// Overlapping m-bit pattern counts with the sequence wrapped around.
std::vector<std::size_t> pattern_counts(const BitSequence& s, std::size_t m) {
  std::vector<std::size_t> counts(std::size_t{1} << m, 0);
  const std::size_t n = s.size();
  const std::size_t mask = (std::size_t{1} << m) - 1;
  std::size_t window = 0;
  for (std::size_t i = 0; i + 1 < m; ++i) window = (window << 1) | s[i];
  for (std::size_t i = 0; i < n; ++i) {
    window = ((window << 1) | s[(i + m - 1) % n]) & mask;
    ++counts[window];
  }
  return counts;
}

double psi_squared(const BitSequence& s, long long m) {
  if (m <= 0) return 0.0;
  const auto counts = pattern_counts(s, static_cast<std::size_t>(m));
  double sum = 0.0;
  for (auto c : counts) sum += static_cast<double>(c) * static_cast<double>(c);
  const auto n = static_cast<double>(s.size());
  return std::ldexp(sum, static_cast<int>(m)) / n - n;
}

std::vector<double> serial(const BitSequence& s, std::size_t m) {
  const auto mm = static_cast<long long>(m);
  const double p0 = psi_squared(s, mm);
  const double p1 = psi_squared(s, mm - 1);
  const double p2 = psi_squared(s, mm - 2);
  const double del1 = p0 - p1;
  const double del2 = p0 - 2.0 * p1 + p2;
  return {igamc(std::ldexp(1.0, static_cast<int>(m) - 2), del1 / 2.0),
          igamc(std::ldexp(1.0, static_cast<int>(m) - 3), del2 / 2.0)};
}

double phi(const BitSequence& s, std::size_t m) {
  if (m == 0) return 0.0;
  const auto counts = pattern_counts(s, m);
  const auto n = static_cast<double>(s.size());
  double sum = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double freq = static_cast<double>(c) / n;
    sum += freq * std::log(freq);
  }
  return sum;
}

double approximate_entropy(const BitSequence& s, std::size_t m) {
  const auto n = static_cast<double>(s.size());
  const double apen = phi(s, m) - phi(s, m + 1);
  const double chi2 = 2.0 * n * (std::log(2.0) - apen);
  return igamc(std::ldexp(1.0, static_cast<int>(m) - 1), chi2 / 2.0);
}

}  // namespace

double igamc(double a, double x) {
  if (!(a > 0.0)) throw PreconditionError("igamc needs a > 0");
  if (x <= 0.0) return 1.0;
  if (x < a + 1.0) return clamp_p(1.0 - gamma_series(a, x));
  return clamp_p(gamma_continued_fraction(a, x));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::string_view test_name(TestKind kind) {
  switch (kind) {
    case TestKind::monobit: return "monobit";
    case TestKind::block_frequency: return "block_frequency";
    case TestKind::runs: return "runs";
    case TestKind::longest_run: return "longest_run";
    case TestKind::cumulative_sums: return "cumulative_sums";
    case TestKind::serial: return "serial";
    case TestKind::approximate_entropy: return "approximate_entropy";
  }
  return "unknown";
}

std::optional<TestKind> parse_test_name(std::string_view name) {
  for (auto kind : kAllTests) {
    if (test_name(kind) == name) return kind;
  }
  return std::nullopt;
}

std::size_t minimum_length(TestKind kind, const TestParams& params) {
  switch (kind) {
    case TestKind::monobit:
    case TestKind::runs:
    case TestKind::cumulative_sums:
      return 100;
    case TestKind::block_frequency:
      return std::max<std::size_t>(100, params.block_frequency_m);
    case TestKind::longest_run:
      return 128;
    case TestKind::serial:
      return std::size_t{1} << (params.serial_m + 3);
    case TestKind::approximate_entropy:
      return std::size_t{1} << (params.entropy_m + 3);
  }
  return 0;
}

std::vector<double> run_test_variants(TestKind kind, const BitSequence& s,
                                      const TestParams& params) {
  if (kind == TestKind::block_frequency && params.block_frequency_m == 0) {
    throw PreconditionError("block frequency needs a block size of at least 1");
  }
  if (kind == TestKind::serial && (params.serial_m < 3 || params.serial_m > 24)) {
    throw PreconditionError("serial test supports 3 <= m <= 24");
  }
  if (kind == TestKind::approximate_entropy && (params.entropy_m < 1 || params.entropy_m > 23)) {
    throw PreconditionError("approximate entropy supports 1 <= m <= 23");
  }
  require_length(kind, s, params);
  switch (kind) {
    case TestKind::monobit: return {clamp_p(monobit(s))};
    case TestKind::block_frequency: return {block_frequency(s, params.block_frequency_m)};
    case TestKind::runs: return {clamp_p(runs(s))};
    case TestKind::longest_run: return {longest_run(s)};
    case TestKind::cumulative_sums: return cumulative_sums(s);
    case TestKind::serial: return serial(s, params.serial_m);
    case TestKind::approximate_entropy: return {approximate_entropy(s, params.entropy_m)};
  }
  return {};
}

double run_test(TestKind kind, const BitSequence& s, const TestParams& params) {
  const auto ps = run_test_variants(kind, s, params);
  return *std::min_element(ps.begin(), ps.end());
}

double pt_uniformity(const std::vector<double>& p_values) {
  if (p_values.size() < 10) {
    throw PreconditionError("uniformity needs at least 10 p-values, got " +
                            std::to_string(p_values.size()));
  }
  std::array<double, 10> bins{};
  for (double p : p_values) {
    const auto bin = std::min<std::size_t>(9, static_cast<std::size_t>(std::max(0.0, p) * 10.0));
    bins[bin] += 1.0;
  }
  const double expected = static_cast<double>(p_values.size()) / 10.0;
  double chi2 = 0.0;
  for (double f : bins) chi2 += (f - expected) * (f - expected) / expected;
  return igamc(9.0 / 2.0, chi2 / 2.0);
}

double minimum_pass_proportion(std::size_t sequences, double alpha) {
  const double p = 1.0 - alpha;
  return p - 3.0 * std::sqrt(p * alpha / static_cast<double>(sequences));
}

const TestSummary& TestReport::get(TestKind kind) const {
  for (const auto& t : tests) {
    if (t.kind == kind) return t;
  }
  throw PreconditionError("report has no " + std::string(test_name(kind)) + " entry");
}

std::size_t TestReport::passed_count() const {
  return static_cast<std::size_t>(
      std::count_if(tests.begin(), tests.end(), [](const TestSummary& t) { return t.passed; }));
}

TestReport analyze_sequences(const std::vector<BitSequence>& sequences,
                             const BatteryOptions& options) {
  if (sequences.empty()) throw PreconditionError("battery needs at least one sequence");
  const std::size_t count = sequences.size();
  const std::size_t ntests = options.tests.size();

  // results[test][sequence] -> variant p-values
  std::vector<std::vector<std::vector<double>>> results(
      ntests, std::vector<std::vector<double>>(count));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        for (std::size_t t = 0; t < ntests; ++t) {
          results[t][i] = run_test_variants(options.tests[t], sequences[i], options.params);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, count);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  TestReport report;
  report.sequences = count;
  report.bits_per_sequence = sequences.front().size();
  report.alpha = options.alpha;
  report.min_proportion = minimum_pass_proportion(count, options.alpha);

  for (std::size_t t = 0; t < ntests; ++t) {
    TestSummary summary;
    summary.kind = options.tests[t];
    const std::size_t nvariants = results[t][0].size();
    summary.variants.resize(nvariants);
    summary.headline.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      summary.headline[i] = *std::min_element(results[t][i].begin(), results[t][i].end());
      for (std::size_t v = 0; v < nvariants; ++v) {
        summary.variants[v].p_values.push_back(results[t][i][v]);
      }
    }
    summary.proportion = 1.0;
    for (auto& variant : summary.variants) {
      const auto ok = std::count_if(variant.p_values.begin(), variant.p_values.end(),
                                    [&](double p) { return p >= options.alpha; });
      variant.proportion = static_cast<double>(ok) / static_cast<double>(count);
      summary.proportion = std::min(summary.proportion, variant.proportion);
      if (count >= 10) {
        variant.p_t = pt_uniformity(variant.p_values);
        summary.p_t = std::min(summary.p_t.value_or(1.0), *variant.p_t);
      }
    }
    summary.passed = summary.proportion >= report.min_proportion &&
                     (!summary.p_t || *summary.p_t >= kUniformityThreshold);
    report.tests.push_back(std::move(summary));
  }
  return report;
}

TestReport run_battery(BitStream& gen, std::size_t sequences, std::size_t bits_per_sequence,
                       const BatteryOptions& options) {
  if (sequences == 0 || bits_per_sequence == 0) {
    throw PreconditionError("battery needs at least one sequence of at least one bit");
  }
  std::vector<BitSequence> data;
  data.reserve(sequences);
  for (std::size_t i = 0; i < sequences; ++i) {
    data.push_back(stream_bits(gen, static_cast<long long>(bits_per_sequence)));
  }
  return analyze_sequences(data, options);
}

namespace {

std::string fmt_double(double v, int digits = 6) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double headline_p(const TestSummary& t) { return t.p_t ? *t.p_t : t.headline.front(); }

}  // namespace

std::string format_table(const TestReport& report) {
  std::ostringstream out;
  out << "sequences: " << report.sequences << "  bits/sequence: " << report.bits_per_sequence
      << "  alpha: " << report.alpha
      << "  min proportion: " << fmt_double(report.min_proportion, 4) << "\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-22s %12s %12s %10s  %s\n", "test", "P_T", "p(first)",
                "proportion", "result");
  out << line;
  for (const auto& t : report.tests) {
    const std::string pt = t.p_t ? fmt_double(*t.p_t) : std::string("-");
    std::snprintf(line, sizeof line, "%-22s %12s %12s %10s  %s\n",
                  std::string(test_name(t.kind)).c_str(), pt.c_str(),
                  fmt_double(t.headline.front()).c_str(), fmt_double(t.proportion, 4).c_str(),
                  t.passed ? "PASS" : "FAIL");
    out << line;
  }
  out << "passed " << report.passed_count() << "/" << report.tests.size() << "\n";
  return out.str();
}

std::string format_lines(const TestReport& report) {
  std::ostringstream out;
  for (const auto& t : report.tests) {
    out << test_name(t.kind) << '\t' << fmt_double(headline_p(t)) << '\t'
        << fmt_double(t.proportion, 4) << '\t' << (t.passed ? "PASS" : "FAIL") << '\n';
  }
  return out.str();
}

}  // namespace cirng::stats
