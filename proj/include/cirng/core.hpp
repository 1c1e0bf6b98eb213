// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// Primitive entropy sources and the single-step chaotic iteration.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cirng/bits.hpp"

namespace cirng {

struct XorshiftTriple {
  unsigned a = 13;
  unsigned b = 7;
  unsigned c = 17;

  friend bool operator==(const XorshiftTriple&, const XorshiftTriple&) = default;
};

/// 64-bit Marsaglia XORshift: x ^= x << a; x ^= x >> b; x ^= x << c.
///
/// Zero is a fixed point of the round, so a zero seed is refused. Every
/// shift amount must lie in [1, 63].
class Xorshift64 {
 public:
  explicit Xorshift64(std::uint64_t seed, XorshiftTriple triple = {});

  std::uint64_t next();

  std::uint64_t state() const { return x_; }
  const XorshiftTriple& triple() const { return triple_; }

 private:
  std::uint64_t x_;
  XorshiftTriple triple_;
};

// 65519 * 65479; both primes are 3 mod 4 and the product fits in 32 bits.
inline constexpr std::uint32_t kDefaultBlumModulus = 4290118601u;
// 7 * 11, for hand-checkable vectors.
inline constexpr std::uint32_t kSmallBlumModulus = 77u;

bool is_prime(std::uint64_t n);

// True when m = p*q for distinct primes p, q with p = q = 3 (mod 4).
bool is_blum_integer(std::uint64_t m);

/// Blum Blum Shub over a modulus of at most 32 bits. Squaring is done in a
/// 64-bit accumulator, so b*b never overflows.
class Bbs {
 public:
  // Throws PreconditionError if `modulus` is not a Blum integer, or if the
  // seed is not in (1, m) or shares a factor with m.
  Bbs(std::uint32_t seed, std::uint32_t modulus);

  // Deterministic seed derivation: b = seed mod m (at least 2), stepped upward
  // until coprime with m.
  static Bbs from_user_seed(std::uint64_t seed, std::uint32_t modulus = kDefaultBlumModulus);

  // b <- b^2 mod m; returns the new b mod 2^k. k in [1, 32].
  std::uint32_t next(unsigned k);

  std::uint32_t state() const { return b_; }
  std::uint32_t modulus() const { return m_; }

 private:
  std::uint32_t b_;
  std::uint32_t m_;
};

/// Position in [1, N] selected by a strategy.
struct StrategyElement {
  std::size_t position;
};

/// The N-bit state of a chaotic iteration. Components are 1-indexed;
/// component 1 is the leftmost character when rendered and the most
/// significant bit when packed into a word.
class BooleanStateVector {
 public:
  explicit BooleanStateVector(std::size_t n);
  explicit BooleanStateVector(BitSequence bits);

  static BooleanStateVector from_string(std::string_view bits);
  // The low n bits of `word`, bit n-1 becoming component 1. n <= 64.
  static BooleanStateVector from_word(std::uint64_t word, std::size_t n);

  std::size_t size() const { return bits_.size(); }
  bool at(std::size_t position) const;
  void flip(std::size_t position);

  const BitSequence& bits() const { return bits_; }
  std::uint64_t to_word() const;
  std::string to_string() const;
  std::size_t hamming_weight() const;

  friend bool operator==(const BooleanStateVector&, const BooleanStateVector&) = default;

 private:
  void check_position(std::size_t position) const;

  BitSequence bits_;
};

// Copy of `x` with component `s` negated.
BooleanStateVector ci_step(const BooleanStateVector& x, StrategyElement s);

// x XOR s over the low `width` bits (width in [1, 64]).
std::uint64_t xor_ci_step(std::uint64_t x, std::uint64_t s_mask, std::size_t width = 64);

// SplitMix64 step; used only to expand user seed material.
std::uint64_t splitmix64(std::uint64_t& state);

// Expand a possibly short list of seed words to `count` words. Given words
// are used verbatim; missing ones are drawn from SplitMix64 seeded by the
// last given word (or zero).
std::vector<std::uint64_t> expand_seed(const std::vector<std::uint64_t>& given, std::size_t count);

}  // namespace cirng
