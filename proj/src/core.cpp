// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "cirng/core.hpp"

#include <algorithm>
#include <numeric>

#include "cirng/errors.hpp"

namespace cirng {

std::string to_bit_string(const BitSequence& bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

BitSequence from_bit_string(std::string_view text) {
  BitSequence bits;
  bits.reserve(text.size());
  for (char ch : text) {
    if (ch == '0' || ch == '1') {
      bits.push_back(static_cast<std::uint8_t>(ch - '0'));
    } else if (ch == ' ' || ch == '\n' || ch == '\r' || ch == '\t') {
      continue;
    } else {
      throw FormatError("bit string contains '" + std::string(1, ch) + "'");
    }
  }
  return bits;
}

void append_word_bits(BitSequence& out, std::uint64_t word, std::size_t width) {
  for (std::size_t i = width; i-- > 0;) out.push_back(static_cast<std::uint8_t>((word >> i) & 1u));
}

std::vector<std::uint8_t> pack_bits(const BitSequence& bits) {
  std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return bytes;
}

std::size_t count_ones(const BitSequence& bits) {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

// --- XORshift --------------------------------------------------------------

Xorshift64::Xorshift64(std::uint64_t seed, XorshiftTriple triple) : x_(seed), triple_(triple) {
  if (seed == 0) throw PreconditionError("xorshift seed must be nonzero");
  for (unsigned s : {triple.a, triple.b, triple.c}) {
    if (s < 1 || s > 63) throw PreconditionError("xorshift shift amounts must lie in [1,63]");
  }
}

std::uint64_t Xorshift64::next() {
  x_ ^= x_ << triple_.a;
  x_ ^= x_ >> triple_.b;
  x_ ^= x_ << triple_.c;
  return x_;
}

// --- BBS -------------------------------------------------------------------

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

bool is_blum_integer(std::uint64_t m) {
  if (m < 21) return false;  // 3 * 7 is the smallest
  for (std::uint64_t p = 3; p * p <= m; p += 2) {
    if (m % p != 0) continue;
    const std::uint64_t q = m / p;
    return p != q && p % 4 == 3 && q % 4 == 3 && is_prime(p) && is_prime(q);
  }
  return false;
}

Bbs::Bbs(std::uint32_t seed, std::uint32_t modulus) : b_(seed), m_(modulus) {
  if (!is_blum_integer(modulus)) {
    throw PreconditionError("bbs modulus " + std::to_string(modulus) + " is not a Blum integer");
  }
  if (seed <= 1 || seed >= modulus) throw PreconditionError("bbs seed must satisfy 1 < b < m");
  if (std::gcd(seed, modulus) != 1) throw PreconditionError("bbs seed must be coprime with m");
}

Bbs Bbs::from_user_seed(std::uint64_t seed, std::uint32_t modulus) {
  if (!is_blum_integer(modulus)) {
    throw PreconditionError("bbs modulus " + std::to_string(modulus) + " is not a Blum integer");
  }
  auto b = static_cast<std::uint32_t>(seed % modulus);
  if (b < 2) b = 2;
  while (std::gcd(b, modulus) != 1) b = (b + 1 >= modulus) ? 2 : b + 1;
  return Bbs(b, modulus);
}

std::uint32_t Bbs::next(unsigned k) {
  if (k < 1 || k > 32) throw PreconditionError("bbs output width must lie in [1,32]");
  const std::uint64_t wide = static_cast<std::uint64_t>(b_) * b_;
  b_ = static_cast<std::uint32_t>(wide % m_);
  return k == 32 ? b_ : (b_ & ((1u << k) - 1u));
}

// --- Chaotic iteration state -------------------------------------------------

BooleanStateVector::BooleanStateVector(std::size_t n) : bits_(n, 0) {
  if (n == 0) throw PreconditionError("state vector length must be at least 1");
}

BooleanStateVector::BooleanStateVector(BitSequence bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw PreconditionError("state vector length must be at least 1");
  for (auto& b : bits_) b = b ? 1 : 0;
}

BooleanStateVector BooleanStateVector::from_string(std::string_view bits) {
  return BooleanStateVector(from_bit_string(bits));
}

BooleanStateVector BooleanStateVector::from_word(std::uint64_t word, std::size_t n) {
  if (n == 0 || n > 64) throw PreconditionError("word-backed state needs 1 <= N <= 64");
  BitSequence bits;
  bits.reserve(n);
  append_word_bits(bits, word, n);
  return BooleanStateVector(std::move(bits));
}

void BooleanStateVector::check_position(std::size_t position) const {
  if (position < 1 || position > bits_.size()) {
    throw PreconditionError("strategy position " + std::to_string(position) + " outside [1," +
                            std::to_string(bits_.size()) + "]");
  }
}

bool BooleanStateVector::at(std::size_t position) const {
  check_position(position);
  return bits_[position - 1] != 0;
}

void BooleanStateVector::flip(std::size_t position) {
  check_position(position);
  bits_[position - 1] ^= 1u;
}

std::uint64_t BooleanStateVector::to_word() const {
  if (bits_.size() > 64) throw PreconditionError("state wider than 64 bits");
  std::uint64_t w = 0;
  for (auto b : bits_) w = (w << 1) | b;
  return w;
}

std::string BooleanStateVector::to_string() const { return to_bit_string(bits_); }

std::size_t BooleanStateVector::hamming_weight() const { return count_ones(bits_); }

BooleanStateVector ci_step(const BooleanStateVector& x, StrategyElement s) {
  BooleanStateVector next = x;
  next.flip(s.position);
  return next;
}

std::uint64_t xor_ci_step(std::uint64_t x, std::uint64_t s_mask, std::size_t width) {
  if (width == 0 || width > 64) throw PreconditionError("xor_ci_step width must lie in [1,64]");
  const std::uint64_t keep = width == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
  return (x ^ s_mask) & keep;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<std::uint64_t> expand_seed(const std::vector<std::uint64_t>& given, std::size_t count) {
  std::vector<std::uint64_t> out(given.begin(), given.begin() + std::min(given.size(), count));
  std::uint64_t sm = given.empty() ? 0 : given.back();
  while (out.size() < count) out.push_back(splitmix64(sm));
  return out;
}

}  // namespace cirng
