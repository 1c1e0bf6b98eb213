// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "cirng/pipeline.hpp"

#include <cstdio>

#include "cirng/errors.hpp"

namespace cirng {

PipelineModel::PipelineModel(const FpgaSeeds& seeds, Schedule schedule, double clock_mhz)
    : gen_(FpgaCiprng::from_seeds(seeds)), schedule_(schedule), clock_mhz_(clock_mhz) {
  if (!(clock_mhz > 0.0)) throw PreconditionError("clock frequency must be positive");
}

CycleEvent PipelineModel::step_cycle() {
  CycleEvent ev;
  ev.cycle = ++cycles_;
  const bool run_b = reg_.has_value();
  const bool run_a = schedule_ == Schedule::overlapped || !run_b;

  if (run_b) {
    ev.output = gen_.apply(*reg_);
    ev.phase_b = true;
    ++rounds_;
    reg_.reset();
  }
  if (run_a) {
    reg_ = gen_.draw_inputs();
    ev.phase_a = true;
  }
  if (reg_) ev.latched = *reg_;
  return ev;
}

std::string format_trace_line(const CycleEvent& ev) {
  const char* phase = ev.phase_a && ev.phase_b ? "AB" : ev.phase_a ? "A" : ev.phase_b ? "B" : "-";
  char buf[160];
  std::snprintf(buf, sizeof buf, "cycle=%llu phase=%s xs1=%016llx xs2=%016llx bbs=%x out=",
                static_cast<unsigned long long>(ev.cycle), phase,
                static_cast<unsigned long long>(ev.latched.x),
                static_cast<unsigned long long>(ev.latched.y), ev.latched.t & 0xfu);
  std::string line = buf;
  if (ev.output) {
    std::snprintf(buf, sizeof buf, "%04x", *ev.output);
    line += buf;
  } else {
    line += "-";
  }
  return line;
}

int xorshift_logic_elements(const XorshiftTriple& triple) {
  return 192 - static_cast<int>(triple.a) - static_cast<int>(triple.b) - static_cast<int>(triple.c);
}

ThroughputReport throughput_report(PipelineModel& model, std::uint64_t cycles,
                                   const FpgaSeeds& seeds) {
  if (cycles == 0) throw PreconditionError("cycles must be at least 1");
  for (std::uint64_t i = 0; i < cycles; ++i) model.step_cycle();
  return summarize(model, seeds);
}

ThroughputReport summarize(const PipelineModel& model, const FpgaSeeds& seeds) {
  if (model.cycles() == 0) throw PreconditionError("no cycles have run");
  ThroughputReport r;
  r.cycles = model.cycles();
  r.rounds = model.completed_rounds();
  r.bits = model.emitted_bits();
  r.measured_bits_per_cycle = static_cast<double>(r.bits) / static_cast<double>(r.cycles);
  r.steady_bits_per_cycle = model.schedule() == Schedule::overlapped ? 16.0 : 8.0;
  r.clock_mhz = model.clock_mhz();
  r.mbps = r.steady_bits_per_cycle * r.clock_mhz;
  r.xorshift1_logic_elements = xorshift_logic_elements(seeds.triple1);
  r.xorshift2_logic_elements = xorshift_logic_elements(seeds.triple2);
  return r;
}

std::string format_report(const ThroughputReport& r, Schedule schedule) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "schedule: %s\n"
                "cycles: %llu\n"
                "rounds: %llu\n"
                "bits: %llu\n"
                "measured_bits_per_cycle: %.4f\n"
                "steady_bits_per_cycle: %.0f\n"
                "clock_mhz: %.2f\n"
                "throughput_mbps: %.2f\n"
                "xorshift1_logic_elements: %d\n"
                "xorshift2_logic_elements: %d\n",
                std::string(schedule_name(schedule)).c_str(),
                static_cast<unsigned long long>(r.cycles),
                static_cast<unsigned long long>(r.rounds),
                static_cast<unsigned long long>(r.bits), r.measured_bits_per_cycle,
                r.steady_bits_per_cycle, r.clock_mhz, r.mbps, r.xorshift1_logic_elements,
                r.xorshift2_logic_elements);
  return buf;
}

std::string_view schedule_name(Schedule s) {
  return s == Schedule::overlapped ? "overlapped" : "two-phase";
}

std::optional<Schedule> parse_schedule(std::string_view name) {
  if (name == "overlapped") return Schedule::overlapped;
  if (name == "two-phase") return Schedule::two_phase;
  return std::nullopt;
}

}  // namespace cirng
