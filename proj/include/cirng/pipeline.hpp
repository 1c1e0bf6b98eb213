// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// Cycle-level model of the combined 16-bit generator in hardware.
//
// Phase A runs xorshift1, xorshift2 and BBS in parallel and latches their
// outputs into an input register. Phase B combines the latched inputs into
// the 16-bit output. In the two-phase schedule the phases alternate; in the
// overlapped schedule phase B of round n and phase A of round n + 1 share a
// cycle, with B reading the register before A overwrites it.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "cirng/engines.hpp"

namespace cirng {

enum class Schedule { two_phase, overlapped };

struct CycleEvent {
  std::uint64_t cycle = 0;          // 1-based
  bool phase_a = false;             // sources advanced this cycle
  bool phase_b = false;             // an output word was produced this cycle
  FpgaRoundInputs latched{};        // register contents after the cycle
  std::optional<std::uint16_t> output;
};

// "cycle=<n> phase=<A|B|AB|-> xs1=<hex> xs2=<hex> bbs=<hex> out=<hex|->".
std::string format_trace_line(const CycleEvent& ev);

class PipelineModel {
 public:
  PipelineModel(const FpgaSeeds& seeds, Schedule schedule, double clock_mhz = 400.0);

  CycleEvent step_cycle();

  Schedule schedule() const { return schedule_; }
  double clock_mhz() const { return clock_mhz_; }
  std::uint64_t cycles() const { return cycles_; }
  std::uint64_t completed_rounds() const { return rounds_; }
  std::uint64_t emitted_bits() const { return 16 * rounds_; }

 private:
  FpgaCiprng gen_;
  Schedule schedule_;
  double clock_mhz_;
  std::uint64_t cycles_ = 0;
  std::uint64_t rounds_ = 0;
  std::optional<FpgaRoundInputs> reg_;
};

struct ThroughputReport {
  std::uint64_t cycles = 0;
  std::uint64_t rounds = 0;
  std::uint64_t bits = 0;
  double measured_bits_per_cycle = 0.0;
  double steady_bits_per_cycle = 0.0;
  double clock_mhz = 0.0;
  double mbps = 0.0;  // steady_bits_per_cycle * clock_mhz
  int xorshift1_logic_elements = 0;
  int xorshift2_logic_elements = 0;
};

// 192 - a - b - c.
int xorshift_logic_elements(const XorshiftTriple& triple);

// Report over the cycles `model` has run so far. At least one cycle.
ThroughputReport summarize(const PipelineModel& model, const FpgaSeeds& seeds);

// Runs `cycles` more cycles on `model`, then summarizes. cycles >= 1.
ThroughputReport throughput_report(PipelineModel& model, std::uint64_t cycles,
                                   const FpgaSeeds& seeds);

std::string format_report(const ThroughputReport& r, Schedule schedule);

std::string_view schedule_name(Schedule s);
std::optional<Schedule> parse_schedule(std::string_view name);

}  // namespace cirng
