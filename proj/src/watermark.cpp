// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "cirng/watermark.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

#include "cirng/errors.hpp"

namespace cirng {

void EmbeddingKey::validate() const {
  if (seed_words.empty()) throw PreconditionError("embedding key needs at least one seed word");
  if (lsc_bits < 1 || lsc_bits > 4) throw PreconditionError("lsc_bits must lie in [1,4]");
}

PlaneSplit decompose_planes(const GrayImage& img, unsigned lsc_bits) {
  if (lsc_bits < 1 || lsc_bits > 4) throw PreconditionError("lsc_bits must lie in [1,4]");
  PlaneSplit split;
  split.width = img.width();
  split.height = img.height();
  split.lsc_bits = lsc_bits;
  split.msc.reserve(img.size() * (8 - lsc_bits));
  split.lsc.reserve(img.size() * lsc_bits);
  for (auto px : img.pixels()) {
    append_word_bits(split.msc, px >> lsc_bits, 8 - lsc_bits);
    append_word_bits(split.lsc, px, lsc_bits);
  }
  return split;
}

GrayImage PlaneSplit::reassemble() const {
  const std::size_t hi = 8 - lsc_bits;
  if (msc.size() != width * height * hi || lsc.size() != width * height * lsc_bits) {
    throw PreconditionError("plane sizes do not match the image dimensions");
  }
  std::vector<std::uint8_t> pixels(width * height);
  for (std::size_t p = 0; p < pixels.size(); ++p) {
    unsigned v = 0;
    for (std::size_t j = 0; j < hi; ++j) v = (v << 1) | msc[p * hi + j];
    for (std::size_t j = 0; j < lsc_bits; ++j) v = (v << 1) | lsc[p * lsc_bits + j];
    pixels[p] = static_cast<std::uint8_t>(v);
  }
  return GrayImage(width, height, std::move(pixels));
}

std::uint64_t msc_digest(const BitSequence& msc) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto b : msc) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::uint64_t remix(std::uint64_t v) {
  std::uint64_t s = v;
  return splitmix64(s);
}

std::optional<std::uint64_t> digest_for(const EmbeddingKey& key, const BitSequence* msc) {
  if (key.mode == WatermarkMode::unauthenticated) return std::nullopt;
  if (msc == nullptr) throw PreconditionError("authenticated mode needs the carrier MSCs");
  return msc_digest(*msc);
}

}  // namespace

FpgaCiprng keyed_generator(const EmbeddingKey& key, std::optional<std::uint64_t> digest,
                           KeyStream stream) {
  key.validate();
  std::uint64_t state = remix(0x243f6a8885a308d3ULL ^ key.seed_words.size());
  for (auto w : key.seed_words) state = remix(state ^ w);
  if (digest) state = remix(state ^ *digest);
  state = remix(state ^ static_cast<std::uint64_t>(stream));

  FpgaSeeds seeds;
  seeds.xs1 = splitmix64(state);
  seeds.xs2 = splitmix64(state);
  if (seeds.xs1 == 0) seeds.xs1 = 1;
  if (seeds.xs2 == 0) seeds.xs2 = 1;
  seeds.bbs_seed = splitmix64(state);
  seeds.z = static_cast<std::uint16_t>(splitmix64(state) & 0xffffu);
  return FpgaCiprng::from_seeds(seeds);
}

BitSequence mix_bits(const BitSequence& bits, BitStream& mask) {
  const BitSequence keystream = stream_bits(mask, static_cast<long long>(bits.size()));
  BitSequence out;
  out.reserve(bits.size());
  // XOR chaotic iteration x' = x ^ s, one 64-bit word at a time.
  for (std::size_t start = 0; start < bits.size(); start += 64) {
    const std::size_t width = std::min<std::size_t>(64, bits.size() - start);
    std::uint64_t x = 0;
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < width; ++i) {
      x = (x << 1) | bits[start + i];
      s = (s << 1) | keystream[start + i];
    }
    append_word_bits(out, xor_ci_step(x, s, width), width);
  }
  return out;
}

BitSequence mix_watermark(const BitSequence& wm_bits, const EmbeddingKey& key,
                          const BitSequence* msc) {
  auto gen = keyed_generator(key, digest_for(key, msc), KeyStream::mixing);
  return mix_bits(wm_bits, gen);
}

LscPlan select_positions(BitStream& gen, std::size_t count, std::size_t total_lsc) {
  if (count > total_lsc) {
    throw PreconditionError("cannot select " + std::to_string(count) + " positions among " +
                            std::to_string(total_lsc) + " LSCs");
  }
  if (total_lsc > std::numeric_limits<std::uint32_t>::max()) {
    throw PreconditionError("too many LSCs for 32-bit position draws");
  }
  LscPlan plan;
  plan.indices.reserve(count);
  std::vector<bool> used(total_lsc, false);
  // Coupon collecting a full permutation needs about n ln n draws.
  const std::size_t cap = 64 * total_lsc + 4096;
  std::size_t draws = 0;
  while (plan.indices.size() < count) {
    if (draws++ == cap) throw RoundLimitExceeded("position selection exceeded its draw budget");
    std::uint64_t word = 0;
    for (auto b : stream_bits(gen, 32)) word = (word << 1) | b;
    const auto index = static_cast<std::size_t>(word % total_lsc);
    if (used[index]) continue;
    used[index] = true;
    plan.indices.push_back(index);
  }
  return plan;
}

LscPlan select_positions(const EmbeddingKey& key, const BitSequence* msc, std::size_t count,
                         std::size_t total_lsc) {
  auto gen = keyed_generator(key, digest_for(key, msc), KeyStream::positions);
  return select_positions(gen, count, total_lsc);
}

namespace {

struct LscAddress {
  std::size_t pixel;
  unsigned plane;
};

LscAddress locate(std::size_t index, unsigned lsc_bits) {
  return {index / lsc_bits, lsc_bits - 1 - static_cast<unsigned>(index % lsc_bits)};
}

void check_plan(const GrayImage& img, const LscPlan& plan, unsigned lsc_bits) {
  if (lsc_bits < 1 || lsc_bits > 4) throw PreconditionError("lsc_bits must lie in [1,4]");
  const std::size_t total = img.size() * lsc_bits;
  for (auto u : plan.indices) {
    if (u >= total) throw PreconditionError("plan index outside the carrier's LSCs");
  }
}

}  // namespace

GrayImage embed_with_plan(const GrayImage& cover, const BitSequence& bits, const LscPlan& plan,
                          unsigned lsc_bits) {
  if (bits.size() != plan.indices.size()) {
    throw PreconditionError("plan length does not match the watermark bit count");
  }
  check_plan(cover, plan, lsc_bits);
  GrayImage out = cover;
  auto& px = out.pixels();
  for (std::size_t k = 0; k < bits.size(); ++k) {
    const auto at = locate(plan.indices[k], lsc_bits);
    const auto bit = static_cast<std::uint8_t>(1u << at.plane);
    px[at.pixel] = static_cast<std::uint8_t>(bits[k] ? (px[at.pixel] | bit) : (px[at.pixel] & ~bit));
  }
  return out;
}

BitSequence read_plan(const GrayImage& img, const LscPlan& plan, unsigned lsc_bits) {
  check_plan(img, plan, lsc_bits);
  BitSequence bits;
  bits.reserve(plan.indices.size());
  for (auto u : plan.indices) {
    const auto at = locate(u, lsc_bits);
    bits.push_back(static_cast<std::uint8_t>((img.pixels()[at.pixel] >> at.plane) & 1u));
  }
  return bits;
}

GrayImage embed(const GrayImage& cover, const BitMatrix& wm, const EmbeddingKey& key) {
  key.validate();
  const std::size_t total = cover.size() * key.lsc_bits;
  if (wm.size() > total) {
    throw PreconditionError("watermark of " + std::to_string(wm.size()) +
                            " bits does not fit in " + std::to_string(total) + " LSCs");
  }
  std::optional<PlaneSplit> planes;
  if (key.mode == WatermarkMode::authenticated) planes = decompose_planes(cover, key.lsc_bits);
  const BitSequence* msc = planes ? &planes->msc : nullptr;

  const BitSequence mixed = mix_watermark(wm.bits(), key, msc);
  const LscPlan plan = select_positions(key, msc, wm.size(), total);
  return embed_with_plan(cover, mixed, plan, key.lsc_bits);
}

BitMatrix extract(const GrayImage& stego, const EmbeddingKey& key, std::size_t wm_width,
                  std::size_t wm_height) {
  key.validate();
  if (wm_width == 0 || wm_height == 0) throw PreconditionError("watermark dimensions must be positive");
  const std::size_t count = wm_width * wm_height;
  const std::size_t total = stego.size() * key.lsc_bits;
  if (count > total) {
    throw PreconditionError("watermark of " + std::to_string(count) +
                            " bits cannot be carried by " + std::to_string(total) + " LSCs");
  }
  std::optional<PlaneSplit> planes;
  if (key.mode == WatermarkMode::authenticated) planes = decompose_planes(stego, key.lsc_bits);
  const BitSequence* msc = planes ? &planes->msc : nullptr;

  const LscPlan plan = select_positions(key, msc, count, total);
  const BitSequence mixed = read_plan(stego, plan, key.lsc_bits);
  return BitMatrix(wm_width, wm_height, mix_watermark(mixed, key, msc));
}

double similarity(const BitMatrix& a, const BitMatrix& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw PreconditionError("watermark dimensions differ");
  }
  if (a.size() == 0) throw PreconditionError("empty watermark");
  std::size_t equal = 0;
  for (std::size_t i = 0; i < a.size(); ++i) equal += a.bits()[i] == b.bits()[i];
  return 100.0 * static_cast<double>(equal) / static_cast<double>(a.size());
}

namespace {

int triangle(int t, int period) { return std::abs(t % period - period / 2); }

}  // namespace

GrayImage reference_carrier() {
  constexpr int kSide = 256;
  GrayImage img(kSide, kSide);
  for (int y = 0; y < kSide; ++y) {
    for (int x = 0; x < kSide; ++x) {
      int v = 64 + x / 4 + y / 5;
      v += triangle(x, 38) * triangle(y, 54) / 8 - 32;
      v += (7 * x + 13 * y) % 5 - 2;
      img.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) =
          static_cast<std::uint8_t>(std::clamp(v, 0, 255));
    }
  }
  return img;
}

BitMatrix reference_watermark(std::size_t width, std::size_t height) {
  BitMatrix wm(width, height);
  const auto cx = static_cast<long>(width / 2);
  const auto cy = static_cast<long>(height / 2);
  const long r = static_cast<long>(std::min(width, height) / 3);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const long dx = static_cast<long>(x) - cx;
      const long dy = static_cast<long>(y) - cy;
      const bool disc = dx * dx + dy * dy <= r * r;
      const bool checker = ((x / 8) + (y / 8)) % 2 == 1;
      wm.at(x, y) = static_cast<std::uint8_t>(disc != checker);
    }
  }
  return wm;
}

}  // namespace cirng
