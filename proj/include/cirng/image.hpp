// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cirng/bits.hpp"

namespace cirng {

/// 8-bit grayscale image, row-major.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(std::size_t width, std::size_t height, std::uint8_t fill = 0);
  GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }

  std::uint8_t at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }
  std::uint8_t& at(std::size_t x, std::size_t y) { return pixels_[y * width_ + x]; }

  const std::vector<std::uint8_t>& pixels() const { return pixels_; }
  std::vector<std::uint8_t>& pixels() { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Binary image, row-major, one 0/1 byte per bit. 1 is black in PBM terms.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t width, std::size_t height);
  BitMatrix(std::size_t width, std::size_t height, BitSequence bits);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return bits_.size(); }

  std::uint8_t at(std::size_t x, std::size_t y) const { return bits_[y * width_ + x]; }
  std::uint8_t& at(std::size_t x, std::size_t y) { return bits_[y * width_ + x]; }

  const BitSequence& bits() const { return bits_; }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  BitSequence bits_;
};

// Binary PGM (P5, maxval 255) and PBM (P4). Headers may carry comments.
// Malformed input throws FormatError with "unsupported format",
// "unexpected end of data", or a description of the bad header field.
GrayImage decode_pgm(std::string_view bytes);
std::string encode_pgm(const GrayImage& img);
BitMatrix decode_pbm(std::string_view bytes);
std::string encode_pbm(const BitMatrix& wm);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);
BitMatrix read_pbm(const std::filesystem::path& path);
void write_pbm(const std::filesystem::path& path, const BitMatrix& wm);

}  // namespace cirng
