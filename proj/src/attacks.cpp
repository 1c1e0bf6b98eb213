// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "cirng/attacks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "cirng/errors.hpp"

namespace cirng::attacks {

GrayImage crop(const GrayImage& img, std::size_t size, std::optional<Anchor> anchor) {
  if (size > std::min(img.width(), img.height())) {
    throw PreconditionError("crop size " + std::to_string(size) + " exceeds the image side");
  }
  const Anchor at = anchor.value_or(Anchor{(img.width() - size) / 2, (img.height() - size) / 2});
  if (at.x + size > img.width() || at.y + size > img.height()) {
    throw PreconditionError("crop square leaves the image");
  }
  GrayImage out = img;
  for (std::size_t y = at.y; y < at.y + size; ++y) {
    for (std::size_t x = at.x; x < at.x + size; ++x) out.at(x, y) = 0;
  }
  return out;
}

namespace {

std::uint8_t clamp_pixel(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace

GrayImage rotate(const GrayImage& img, double theta_degrees, Interpolation interp) {
  const double theta = theta_degrees * std::numbers::pi / 180.0;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double cx = static_cast<double>(img.width()) / 2.0;
  const double cy = static_cast<double>(img.height()) / 2.0;
  const auto w = static_cast<long>(img.width());
  const auto h = static_cast<long>(img.height());

  auto sample = [&](long x, long y) -> double {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0.0;
    return img.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
  };

  GrayImage out(img.width(), img.height());
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      // Inverse map: destination p reads the source at R(-theta)(p - c) + c.
      const double dx = static_cast<double>(x) - cx;
      const double dy = static_cast<double>(y) - cy;
      const double sx = c * dx + s * dy + cx;
      const double sy = -s * dx + c * dy + cy;
      double v;
      if (interp == Interpolation::nearest) {
        v = sample(std::lround(sx), std::lround(sy));
      } else {
        const auto x0 = static_cast<long>(std::floor(sx));
        const auto y0 = static_cast<long>(std::floor(sy));
        const double fx = sx - static_cast<double>(x0);
        const double fy = sy - static_cast<double>(y0);
        v = sample(x0, y0) * (1 - fx) * (1 - fy) + sample(x0 + 1, y0) * fx * (1 - fy) +
            sample(x0, y0 + 1) * (1 - fx) * fy + sample(x0 + 1, y0 + 1) * fx * fy;
      }
      out.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = clamp_pixel(v);
    }
  }
  return out;
}

GrayImage rotate_roundtrip(const GrayImage& img, double theta_degrees, Interpolation interp) {
  if (theta_degrees == 0.0) return img;
  return rotate(rotate(img, theta_degrees, interp), -theta_degrees, interp);
}

namespace {

constexpr std::array<int, 64> kLuminance = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};

struct DctBasis {
  std::array<std::array<double, 8>, 8> c{};  // c[u][x]
  DctBasis() {
    for (int u = 0; u < 8; ++u) {
      const double alpha = u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      for (int x = 0; x < 8; ++x) {
        c[u][x] = alpha * std::cos((2.0 * x + 1.0) * u * std::numbers::pi / 16.0);
      }
    }
  }
};

const DctBasis& basis() {
  static const DctBasis b;
  return b;
}

using Block = std::array<std::array<double, 8>, 8>;

// Separable orthonormal 2-D DCT-II (forward) or DCT-III (inverse).
Block transform(const Block& in, bool forward) {
  const auto& c = basis().c;
  Block tmp{};
  Block out{};
  for (int i = 0; i < 8; ++i) {
    for (int k = 0; k < 8; ++k) {
      double acc = 0.0;
      for (int j = 0; j < 8; ++j) acc += (forward ? c[k][j] : c[j][k]) * in[i][j];
      tmp[i][k] = acc;
    }
  }
  for (int k = 0; k < 8; ++k) {
    for (int i = 0; i < 8; ++i) {
      double acc = 0.0;
      for (int j = 0; j < 8; ++j) acc += (forward ? c[i][j] : c[j][i]) * tmp[j][k];
      out[i][k] = acc;
    }
  }
  return out;
}

}  // namespace

double jpeg_quant_step(std::size_t u, std::size_t v, double level) {
  return std::max(1.0, kLuminance[v * 8 + u] * level / 100.0);
}

GrayImage jpeg_like(const GrayImage& img, double level) {
  if (!(level >= 1.0)) throw PreconditionError("compression level must be at least 1");
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  GrayImage out(w, h);
  for (std::size_t by = 0; by < h; by += 8) {
    for (std::size_t bx = 0; bx < w; bx += 8) {
      Block block{};
      for (std::size_t y = 0; y < 8; ++y) {
        for (std::size_t x = 0; x < 8; ++x) {
          const std::size_t sx = std::min(bx + x, w - 1);
          const std::size_t sy = std::min(by + y, h - 1);
          block[y][x] = static_cast<double>(img.at(sx, sy));
        }
      }
      Block coeff = transform(block, true);
      for (std::size_t v = 0; v < 8; ++v) {
        for (std::size_t u = 0; u < 8; ++u) {
          const double q = jpeg_quant_step(u, v, level);
          coeff[v][u] = std::round(coeff[v][u] / q) * q;
        }
      }
      const Block back = transform(coeff, false);
      for (std::size_t y = 0; y < 8 && by + y < h; ++y) {
        for (std::size_t x = 0; x < 8 && bx + x < w; ++x) {
          out.at(bx + x, by + y) = clamp_pixel(back[y][x]);
        }
      }
    }
  }
  return out;
}

GrayImage gaussian_noise(const GrayImage& img, double sigma, std::uint64_t noise_seed) {
  if (!(sigma >= 0.0)) throw PreconditionError("noise standard deviation must be nonnegative");
  if (sigma == 0.0) return img;
  std::mt19937_64 rng(noise_seed);
  // Uniform in (0, 1]: 53 random mantissa bits, shifted off zero.
  auto uniform = [&rng] { return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53; };
  GrayImage out = img;
  auto& px = out.pixels();
  for (std::size_t i = 0; i < px.size(); i += 2) {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double phase = 2.0 * std::numbers::pi * uniform();
    px[i] = clamp_pixel(px[i] + sigma * r * std::cos(phase));
    if (i + 1 < px.size()) px[i + 1] = clamp_pixel(px[i + 1] + sigma * r * std::sin(phase));
  }
  return out;
}

std::string_view attack_name(AttackKind kind) {
  switch (kind) {
    case AttackKind::crop: return "crop";
    case AttackKind::rotation: return "rotate";
    case AttackKind::jpeg: return "jpeg";
    case AttackKind::gaussian: return "noise";
  }
  return "unknown";
}

std::optional<AttackKind> parse_attack_name(std::string_view name) {
  for (auto kind : {AttackKind::crop, AttackKind::rotation, AttackKind::jpeg, AttackKind::gaussian}) {
    if (attack_name(kind) == name) return kind;
  }
  return std::nullopt;
}

GrayImage apply(const GrayImage& img, const AttackSpec& spec) {
  if (!(spec.parameter >= 0.0)) throw PreconditionError("attack parameter must be nonnegative");
  switch (spec.kind) {
    case AttackKind::crop: {
      const double size = spec.parameter;
      if (size != std::floor(size)) throw PreconditionError("crop size must be an integer");
      return crop(img, static_cast<std::size_t>(size));
    }
    case AttackKind::rotation: return rotate_roundtrip(img, spec.parameter, spec.interpolation);
    case AttackKind::jpeg: return jpeg_like(img, spec.parameter);
    case AttackKind::gaussian: return gaussian_noise(img, spec.parameter, spec.noise_seed);
  }
  return img;
}

}  // namespace cirng::attacks
