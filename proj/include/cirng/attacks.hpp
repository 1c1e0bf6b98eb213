// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// Image attacks used to probe watermark robustness. All of them keep the
// image dimensions and are deterministic for fixed parameters.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "cirng/image.hpp"

namespace cirng::attacks {

struct Anchor {
  std::size_t x = 0;
  std::size_t y = 0;
};

// Blanks (sets to 0) the size x size square at `anchor`, centered when no
// anchor is given.
GrayImage crop(const GrayImage& img, std::size_t size, std::optional<Anchor> anchor = std::nullopt);

enum class Interpolation { nearest, bilinear };

// Rotates by theta about (w/2, h/2), then by -theta. Samples falling outside
// the source are 0. Bilinear output is rounded and clamped after each pass.
GrayImage rotate_roundtrip(const GrayImage& img, double theta_degrees,
                           Interpolation interp = Interpolation::nearest);

// One rotation pass, exposed for inspection.
GrayImage rotate(const GrayImage& img, double theta_degrees, Interpolation interp);

// Quantization step for coefficient (u, v) at compression `level`: the
// standard JPEG luminance table scaled by level / 100, floored at 1.
double jpeg_quant_step(std::size_t u, std::size_t v, double level);

// Per 8x8 block: forward DCT, quantize/dequantize, inverse DCT, round and
// clamp. Partial edge blocks are padded by edge
// replication. level >= 1.
GrayImage jpeg_like(const GrayImage& img, double level);

// Adds N(0, sigma^2) noise from Box-Muller over a seeded mt19937_64 stream,
// rounds and clamps. sigma >= 0; sigma == 0 returns the input.
GrayImage gaussian_noise(const GrayImage& img, double sigma, std::uint64_t noise_seed);

enum class AttackKind { crop, rotation, jpeg, gaussian };

std::string_view attack_name(AttackKind kind);
std::optional<AttackKind> parse_attack_name(std::string_view name);

struct AttackSpec {
  AttackKind kind = AttackKind::crop;
  double parameter = 0.0;  // size | degrees | level | sigma
  std::uint64_t noise_seed = 0;
  Interpolation interpolation = Interpolation::nearest;
};

GrayImage apply(const GrayImage& img, const AttackSpec& spec);

}  // namespace cirng::attacks
