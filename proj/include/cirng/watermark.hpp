// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// Spatial-domain chaotic watermarking. The lsc_bits low bit planes of each
// pixel are the least significant coefficients (LSCs) that carry the mixed
// watermark; the remaining high planes are the most significant
// coefficients (MSCs), which also key the generator in authenticated mode.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cirng/bits.hpp"
#include "cirng/engines.hpp"
#include "cirng/image.hpp"

namespace cirng {

enum class WatermarkMode { unauthenticated, authenticated };

struct EmbeddingKey {
  std::vector<std::uint64_t> seed_words;
  WatermarkMode mode = WatermarkMode::unauthenticated;
  unsigned lsc_bits = 3;

  // Throws PreconditionError unless there is at least one seed word and
  // lsc_bits lies in [1, 4].
  void validate() const;
};

struct PlaneSplit {
  std::size_t width = 0;
  std::size_t height = 0;
  unsigned lsc_bits = 3;
  BitSequence msc;  // 8 - lsc_bits bits per pixel, row-major, high bit first
  BitSequence lsc;  // lsc_bits bits per pixel, row-major, high bit first

  GrayImage reassemble() const;
};

PlaneSplit decompose_planes(const GrayImage& img, unsigned lsc_bits);

// LSC index u addresses pixel u / lsc_bits, bit plane lsc_bits - 1 - u % lsc_bits.
struct LscPlan {
  std::vector<std::size_t> indices;
};

// 64-bit FNV-1a fold over the MSC bits, one bit per step.
std::uint64_t msc_digest(const BitSequence& msc);

// Domain separation between the two keyed streams.
enum class KeyStream : std::uint64_t { mixing = 0x6d6978, positions = 0x706f73 };

// Combined 16-bit generator seeded from the key words and, when given, the
// MSC digest. Seeds go through SplitMix64 so a one-bit change anywhere in
// the inputs reseeds every sub-generator.
FpgaCiprng keyed_generator(const EmbeddingKey& key, std::optional<std::uint64_t> digest,
                           KeyStream stream);

// bits[i] ^ mask[i] over consecutive mask blocks.
BitSequence mix_bits(const BitSequence& bits, BitStream& mask);

// `msc` is required (non-null) in authenticated mode and ignored otherwise.
BitSequence mix_watermark(const BitSequence& wm_bits, const EmbeddingKey& key,
                          const BitSequence* msc = nullptr);

// `count` distinct indices in [0, total_lsc): 32-bit draws reduced mod
// total_lsc, repeats skipped.
LscPlan select_positions(BitStream& gen, std::size_t count, std::size_t total_lsc);
LscPlan select_positions(const EmbeddingKey& key, const BitSequence* msc, std::size_t count,
                         std::size_t total_lsc);

GrayImage embed_with_plan(const GrayImage& cover, const BitSequence& bits, const LscPlan& plan,
                          unsigned lsc_bits);
BitSequence read_plan(const GrayImage& img, const LscPlan& plan, unsigned lsc_bits);

GrayImage embed(const GrayImage& cover, const BitMatrix& wm, const EmbeddingKey& key);
BitMatrix extract(const GrayImage& stego, const EmbeddingKey& key, std::size_t wm_width,
                  std::size_t wm_height);

// Percentage of equal bits.
double similarity(const BitMatrix& a, const BitMatrix& b);

// At or below 50% the image reads as not watermarked.
inline constexpr double kWatermarkedThreshold = 50.0;
inline bool reads_as_watermarked(double similarity_percent) {
  return similarity_percent > kWatermarkedThreshold;
}

// Deterministic 256x256 gradient-plus-texture carrier, integer arithmetic
// only. Shipped as data/reference_carrier.pgm.
GrayImage reference_carrier();
// Deterministic checker-and-disc pattern.
BitMatrix reference_watermark(std::size_t width = 64, std::size_t height = 64);

}  // namespace cirng
