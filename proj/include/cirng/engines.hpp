// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// The composed chaotic-iteration generators: CIPRNG version 1, version 2
// and the 16-bit hardware-oriented combined generator.

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "cirng/core.hpp"
#include "cirng/entropy.hpp"

namespace cirng {

/// Anything that emits fixed-width blocks of bits.
class BitStream {
 public:
  virtual ~BitStream() = default;
  virtual std::size_t block_width() const = 0;
  // Appends exactly block_width() bits, first component first.
  virtual void emit_block(BitSequence& out) = 0;
};

/// Concatenates whole blocks and truncates to `n` bits. Bits of the last
/// block beyond `n` are discarded. Negative `n` throws PreconditionError.
BitSequence stream_bits(BitStream& gen, long long n);

class XorshiftStream final : public BitStream {
 public:
  explicit XorshiftStream(Xorshift64 gen) : gen_(gen) {}
  std::size_t block_width() const override { return 64; }
  void emit_block(BitSequence& out) override { append_word_bits(out, gen_.next(), 64); }

 private:
  Xorshift64 gen_;
};

// The raw BBS bit generator: k low bits per squaring.
class BbsStream final : public BitStream {
 public:
  BbsStream(Bbs gen, unsigned k);
  std::size_t block_width() const override { return k_; }
  void emit_block(BitSequence& out) override { append_word_bits(out, gen_.next(k_), k_); }

 private:
  Bbs gen_;
  unsigned k_;
};

// ---------------------------------------------------------------------------
// CIPRNG version 1

/// Each round draws a from PRNG1, performs m = (a mod 2) + c negations at
/// positions (b mod N) + 1 with b drawn from PRNG2, and outputs the state.
///
/// As a BitStream the seed state x^0 is emitted first, then one block per
/// round, so that the stream reads x^0 x^sigma(1) x^sigma(2) ...
class CiprngV1 final : public BitStream {
 public:
  CiprngV1(BooleanStateVector x0, std::unique_ptr<EntropySource> prng1,
           std::unique_ptr<EntropySource> prng2, unsigned c = 4, bool emit_seed_block = true);

  // One round.
  const BooleanStateVector& next_block();

  const BooleanStateVector& state() const { return x_; }
  std::uint64_t sigma() const { return sigma_; }
  std::size_t last_iterations() const { return last_m_; }

  std::size_t block_width() const override { return x_.size(); }
  void emit_block(BitSequence& out) override;

 private:
  BooleanStateVector x_;
  std::unique_ptr<EntropySource> prng1_;
  std::unique_ptr<EntropySource> prng2_;
  unsigned c_;
  bool seed_pending_;
  std::uint64_t sigma_ = 0;
  std::size_t last_m_ = 0;
};

// ---------------------------------------------------------------------------
// CIPRNG version 2

/// Binomial decimation: the bin i whose cumulative Binomial(n, 1/2) range
/// contains a / 2^32. For n = 32 this is the integer-exact map
///   sum_{j<i} C(32,j) <= a < sum_{j<=i} C(32,j).
/// Other n in [1, 64] scale the thresholds by 2^32 / 2^n.
unsigned g1_map(std::uint32_t a, std::size_t n = 32);

/// Each round clears the touch flags, sets m = g1_map(PRNG1), and negates
/// positions (PRNG2 mod N) + 1, skipping already-touched ones, until m
/// distinct positions have been negated. A round that needs more than 64*N
/// draws throws RoundLimitExceeded.
class CiprngV2 final : public BitStream {
 public:
  CiprngV2(BooleanStateVector x0, std::unique_ptr<EntropySource> prng1,
           std::unique_ptr<EntropySource> prng2);

  const BooleanStateVector& next_block();

  const BooleanStateVector& state() const { return x_; }
  // Flags set during the most recent round.
  const BitSequence& touched() const { return touched_; }
  std::size_t last_iterations() const { return last_m_; }
  std::size_t last_draws() const { return last_draws_; }

  std::size_t block_width() const override { return x_.size(); }
  void emit_block(BitSequence& out) override;

 private:
  BooleanStateVector x_;
  std::unique_ptr<EntropySource> prng1_;
  std::unique_ptr<EntropySource> prng2_;
  BitSequence touched_;
  std::size_t last_m_ = 0;
  std::size_t last_draws_ = 0;
};

// ---------------------------------------------------------------------------
// Combined 16-bit generator (two XORshifts + BBS)

// XOR over i = 0..11 of 1 << ((z_word >> 2i) & 3), plus 1 << ((z_word >> 24) & 3)
// when t_bit is set.
std::uint8_t derive_nibble_mask(std::uint32_t z_word, bool t_bit);

struct FpgaRoundInputs {
  std::uint64_t x = 0;  // xorshift1
  std::uint64_t y = 0;  // xorshift2
  std::uint32_t t = 0;  // bbs, only the 4 low bits matter
};

// The 16-bit update word of one round, built lane by lane with
// derive_nibble_mask (the loop form).
std::uint16_t loop_form_delta(const FpgaRoundInputs& in);

// The same update word via the mask form x^n = x^{n-1} ^ d^n: each lane's
// 2-bit chunk stream w^0..w^{C-1}, C = 12 + t_lane, sets bit b of d^n iff b
// occurs an odd number of times among the chunks.
std::uint16_t mask_form_delta(const FpgaRoundInputs& in);

enum class RoundForm { loop, mask };

struct FpgaSeeds {
  std::uint64_t xs1 = 1;
  std::uint64_t xs2 = 2;
  XorshiftTriple triple1{};
  XorshiftTriple triple2{};
  std::uint64_t bbs_seed = 2;
  std::uint32_t modulus = kDefaultBlumModulus;
  std::uint16_t z = 0;

  // Words are [xs1, xs2, bbs, z]; missing ones are expanded with
  // expand_seed. Zero xorshift seeds are replaced by SplitMix output.
  static FpgaSeeds from_words(const std::vector<std::uint64_t>& words);
};

class FpgaCiprng final : public BitStream {
 public:
  // The bbs source must yield words whose 4 low bits are the BBS output.
  FpgaCiprng(std::uint16_t z0, std::unique_ptr<EntropySource> xorshift1,
             std::unique_ptr<EntropySource> xorshift2, std::unique_ptr<EntropySource> bbs,
             RoundForm form = RoundForm::loop);

  static FpgaCiprng from_seeds(const FpgaSeeds& seeds, RoundForm form = RoundForm::loop);

  // Draws x, y and t for one round without updating z.
  FpgaRoundInputs draw_inputs();
  // z <- z ^ delta(in); returns z.
  std::uint16_t apply(const FpgaRoundInputs& in);
  // One full round.
  std::uint16_t next();

  std::uint16_t state() const { return z_; }

  std::size_t block_width() const override { return 16; }
  void emit_block(BitSequence& out) override { append_word_bits(out, next(), 16); }

 private:
  std::uint16_t z_;
  std::unique_ptr<EntropySource> xs1_;
  std::unique_ptr<EntropySource> xs2_;
  std::unique_ptr<EntropySource> bbs_;
  RoundForm form_;
};

}  // namespace cirng
