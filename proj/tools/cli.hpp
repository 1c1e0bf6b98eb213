// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cirng/engines.hpp"
#include "cirng/errors.hpp"

namespace cirng::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kMalformedInput = 3,
  kPrecondition = 4,
  kIo = 5,
  kGeneratorStopped = 6,
};

// A malformed command-line value that CLI11 itself cannot check.
class UsageError : public Error {
 public:
  using Error::Error;
};

enum class GeneratorKind { xorshift, bbs, ciprng_v1, ciprng_v2, ciprng_fpga };

std::string_view generator_name(GeneratorKind kind);
std::optional<GeneratorKind> parse_generator_name(std::string_view name);

// Labeled lines of decimal integers, e.g. "prng1: 0 1 0". '#' starts a
// comment. Labels: prng1, prng2, x0, n, c (versions 1 and 2) and xs1,
// xs2, bbs, z (combined generator). An x0 line is either one token of
// 0/1 characters or one integer per component.
struct StreamScript {
  std::vector<std::uint64_t> prng1;
  std::vector<std::uint64_t> prng2;
  std::optional<BitSequence> x0;
  std::optional<std::size_t> n;
  std::optional<unsigned> c;
  std::vector<std::uint64_t> xs1;
  std::vector<std::uint64_t> xs2;
  std::vector<std::uint64_t> bbs;
  std::optional<std::uint16_t> z;
};

StreamScript parse_stream_script(std::string_view text);

struct GeneratorConfig {
  GeneratorKind kind = GeneratorKind::ciprng_fpga;
  std::vector<std::uint64_t> seeds{1};
  std::optional<StreamScript> script;
  std::size_t n = 32;        // state size for versions 1 and 2
  unsigned c = 4;            // version 1 decimation offset
  unsigned k = 4;            // BBS output bits for the raw bbs generator
  std::uint32_t modulus = kDefaultBlumModulus;
};

// Live seed layouts (missing words are expanded):
//   xorshift     [seed]
//   bbs          [seed]                  k low bits per squaring
//   ciprng-v1    [x0, bbs, xorshift]     PRNG1 = BBS (32 bits), PRNG2 = xorshift
//   ciprng-v2    [x0, xorshift1, xorshift2]
//   ciprng-fpga  [xorshift1, xorshift2, bbs, z]
std::unique_ptr<BitStream> make_generator(const GeneratorConfig& config);

// "1f,0x2a" -> {0x1f, 0x2a}. Throws UsageError on malformed words.
std::vector<std::uint64_t> parse_hex_list(std::string_view text);

// Hex words, one per line; blank lines and '#' comments are skipped.
// Throws FormatError on malformed or missing words.
std::vector<std::uint64_t> parse_key_file(std::string_view text);

// Runs one command line. Diagnostics go to `err`, results to `out`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cirng::cli
