// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "cirng/engines.hpp"

#include <algorithm>
#include <string>

#include "cirng/errors.hpp"

namespace cirng {

BitSequence stream_bits(BitStream& gen, long long n) {
  if (n < 0) throw PreconditionError("bit count must be nonnegative");
  const auto want = static_cast<std::size_t>(n);
  BitSequence out;
  out.reserve(want + gen.block_width());
  while (out.size() < want) gen.emit_block(out);
  out.resize(want);
  return out;
}

BbsStream::BbsStream(Bbs gen, unsigned k) : gen_(gen), k_(k) {
  if (k < 1 || k > 32) throw PreconditionError("bbs output width must lie in [1,32]");
}

// --- version 1 ---------------------------------------------------------------

CiprngV1::CiprngV1(BooleanStateVector x0, std::unique_ptr<EntropySource> prng1,
                   std::unique_ptr<EntropySource> prng2, unsigned c, bool emit_seed_block)
    : x_(std::move(x0)),
      prng1_(std::move(prng1)),
      prng2_(std::move(prng2)),
      c_(c),
      seed_pending_(emit_seed_block) {
  if (!prng1_ || !prng2_) throw PreconditionError("CIPRNG v1 needs two entropy sources");
}

const BooleanStateVector& CiprngV1::next_block() {
  const std::uint64_t a = prng1_->next();
  const std::size_t m = static_cast<std::size_t>(a % 2) + c_;
  const std::size_t n = x_.size();
  for (std::size_t i = 0; i < m; ++i) {
    const std::uint64_t b = prng2_->next();
    x_.flip(static_cast<std::size_t>(b % n) + 1);
  }
  last_m_ = m;
  sigma_ += m;
  return x_;
}

void CiprngV1::emit_block(BitSequence& out) {
  if (seed_pending_) {
    seed_pending_ = false;
  } else {
    next_block();
  }
  out.insert(out.end(), x_.bits().begin(), x_.bits().end());
}

// --- version 2 ---------------------------------------------------------------

unsigned g1_map(std::uint32_t a, std::size_t n) {
  if (n < 1 || n > 64) throw PreconditionError("g1_map supports 1 <= N <= 64");
  __extension__ typedef unsigned __int128 u128;
  const u128 scaled = static_cast<u128>(a) << n;  // a * 2^n
  u128 binom = 1;                                 // C(n, 0)
  u128 cumulative = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    cumulative += binom;
    if (scaled < (cumulative << 32)) return static_cast<unsigned>(i);
    binom = binom * (n - i) / (i + 1);
  }
  return static_cast<unsigned>(n);
}

CiprngV2::CiprngV2(BooleanStateVector x0, std::unique_ptr<EntropySource> prng1,
                   std::unique_ptr<EntropySource> prng2)
    : x_(std::move(x0)), prng1_(std::move(prng1)), prng2_(std::move(prng2)) {
  if (!prng1_ || !prng2_) throw PreconditionError("CIPRNG v2 needs two entropy sources");
  if (x_.size() > 64) throw PreconditionError("CIPRNG v2 supports N <= 64");
  touched_.assign(x_.size(), 0);
}

const BooleanStateVector& CiprngV2::next_block() {
  const std::size_t n = x_.size();
  std::fill(touched_.begin(), touched_.end(), std::uint8_t{0});
  const auto a = static_cast<std::uint32_t>(prng1_->next());
  const std::size_t m = g1_map(a, n);
  const std::size_t cap = 64 * n;
  std::size_t negated = 0;
  std::size_t draws = 0;
  while (negated < m) {
    if (draws == cap) {
      throw RoundLimitExceeded("CIPRNG v2 round exceeded " + std::to_string(cap) + " draws");
    }
    const auto s = static_cast<std::size_t>(prng2_->next() % n);
    ++draws;
    if (touched_[s]) continue;
    x_.flip(s + 1);
    touched_[s] = 1;
    ++negated;
  }
  last_m_ = m;
  last_draws_ = draws;
  return x_;
}

void CiprngV2::emit_block(BitSequence& out) {
  next_block();
  out.insert(out.end(), x_.bits().begin(), x_.bits().end());
}

// --- combined 16-bit generator -------------------------------------------------

std::uint8_t derive_nibble_mask(std::uint32_t z_word, bool t_bit) {
  unsigned w = 0;
  for (unsigned i = 0; i < 12; ++i) w ^= 1u << ((z_word >> (i * 2)) & 3u);
  if (t_bit) w ^= 1u << ((z_word >> 24) & 3u);
  return static_cast<std::uint8_t>(w);
}

namespace {

std::array<std::uint32_t, 4> lane_words(const FpgaRoundInputs& in) {
  return {static_cast<std::uint32_t>(in.x & 0xffffffffu),
          static_cast<std::uint32_t>((in.x >> 32) & 0xffffffffu),
          static_cast<std::uint32_t>(in.y & 0xffffffffu),
          static_cast<std::uint32_t>((in.y >> 32) & 0xffffffffu)};
}

}  // namespace

std::uint16_t loop_form_delta(const FpgaRoundInputs& in) {
  const auto z = lane_words(in);
  unsigned delta = 0;
  for (unsigned lane = 0; lane < 4; ++lane) {
    const bool t_bit = (in.t & (1u << lane)) != 0;
    delta ^= static_cast<unsigned>(derive_nibble_mask(z[lane], t_bit)) << (4 * lane);
  }
  return static_cast<std::uint16_t>(delta);
}

std::uint16_t mask_form_delta(const FpgaRoundInputs& in) {
  const auto words = lane_words(in);
  unsigned d = 0;
  for (unsigned lane = 0; lane < 4; ++lane) {
    const unsigned count = 12 + ((in.t >> lane) & 1u);
    std::array<unsigned, 4> occurrences{};
    for (unsigned j = 0; j < count; ++j) ++occurrences[(words[lane] >> (2 * j)) & 3u];
    for (unsigned b = 0; b < 4; ++b) {
      if (occurrences[b] % 2 == 1) d |= 1u << (4 * lane + b);
    }
  }
  return static_cast<std::uint16_t>(d);
}

FpgaSeeds FpgaSeeds::from_words(const std::vector<std::uint64_t>& words) {
  auto w = expand_seed(words, 4);
  std::uint64_t sm = w[0] ^ 0x5eedULL;
  FpgaSeeds s;
  s.xs1 = w[0] != 0 ? w[0] : (splitmix64(sm) | 1u);
  s.xs2 = w[1] != 0 ? w[1] : (splitmix64(sm) | 1u);
  s.bbs_seed = w[2];
  s.z = static_cast<std::uint16_t>(w[3] & 0xffffu);
  return s;
}

FpgaCiprng::FpgaCiprng(std::uint16_t z0, std::unique_ptr<EntropySource> xorshift1,
                       std::unique_ptr<EntropySource> xorshift2,
                       std::unique_ptr<EntropySource> bbs, RoundForm form)
    : z_(z0),
      xs1_(std::move(xorshift1)),
      xs2_(std::move(xorshift2)),
      bbs_(std::move(bbs)),
      form_(form) {
  if (!xs1_ || !xs2_ || !bbs_) throw PreconditionError("combined generator needs three sources");
}

FpgaCiprng FpgaCiprng::from_seeds(const FpgaSeeds& seeds, RoundForm form) {
  return FpgaCiprng(seeds.z, make_xorshift_source(seeds.xs1, seeds.triple1),
                    make_xorshift_source(seeds.xs2, seeds.triple2),
                    make_bbs_source(seeds.bbs_seed, 4, seeds.modulus), form);
}

FpgaRoundInputs FpgaCiprng::draw_inputs() {
  FpgaRoundInputs in;
  in.x = xs1_->next();
  in.y = xs2_->next();
  in.t = static_cast<std::uint32_t>(bbs_->next());
  return in;
}

std::uint16_t FpgaCiprng::apply(const FpgaRoundInputs& in) {
  const std::uint16_t delta = form_ == RoundForm::loop ? loop_form_delta(in) : mask_form_delta(in);
  z_ ^= delta;
  return z_;
}

std::uint16_t FpgaCiprng::next() { return apply(draw_inputs()); }

}  // namespace cirng
