// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "cirng/image.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <limits>

#include "cirng/errors.hpp"

namespace cirng {

GrayImage::GrayImage(std::size_t width, std::size_t height, std::uint8_t fill)
    : width_(width), height_(height), pixels_(width * height, fill) {}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != width * height) {
    throw PreconditionError("pixel buffer does not match " + std::to_string(width) + "x" +
                            std::to_string(height));
  }
}

BitMatrix::BitMatrix(std::size_t width, std::size_t height)
    : width_(width), height_(height), bits_(width * height, 0) {
  if (width == 0 || height == 0) throw PreconditionError("bit matrix dimensions must be positive");
}

BitMatrix::BitMatrix(std::size_t width, std::size_t height, BitSequence bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  if (width == 0 || height == 0) throw PreconditionError("bit matrix dimensions must be positive");
  if (bits_.size() != width * height) {
    throw PreconditionError("bit buffer does not match " + std::to_string(width) + "x" +
                            std::to_string(height));
  }
  for (auto& b : bits_) b = b ? 1 : 0;
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  std::string_view magic() {
    if (bytes_.size() < 2) throw FormatError("unexpected end of data");
    pos_ = 2;
    return bytes_.substr(0, 2);
  }

  std::size_t number(const char* field) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) throw FormatError("unexpected end of data");
    if (!std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      throw FormatError(std::string("malformed header: bad ") + field);
    }
    std::size_t value = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
      if (value > (std::size_t{1} << 31)) throw FormatError(std::string("malformed header: ") + field);
      ++pos_;
    }
    return value;
  }

  // Exactly one whitespace byte separates the header from the raster.
  std::string_view payload() {
    if (pos_ >= bytes_.size()) throw FormatError("unexpected end of data");
    if (!std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw FormatError("malformed header: missing separator");
    }
    return bytes_.substr(pos_ + 1);
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage decode_pgm(std::string_view bytes) {
  HeaderReader header(bytes);
  if (header.magic() != "P5") throw FormatError("unsupported format (expected binary PGM P5)");
  const std::size_t w = header.number("width");
  const std::size_t h = header.number("height");
  const std::size_t maxval = header.number("maxval");
  if (maxval != 255) throw FormatError("unsupported maxval " + std::to_string(maxval));
  if (w == 0 || h == 0) throw FormatError("malformed header: zero dimension");
  const auto raster = header.payload();
  if (raster.size() < w * h) throw FormatError("unexpected end of data");
  return GrayImage(w, h, std::vector<std::uint8_t>(raster.begin(), raster.begin() + w * h));
}

std::string encode_pgm(const GrayImage& img) {
  std::string out = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) +
                    "\n255\n";
  out.append(img.pixels().begin(), img.pixels().end());
  return out;
}

BitMatrix decode_pbm(std::string_view bytes) {
  HeaderReader header(bytes);
  if (header.magic() != "P4") throw FormatError("unsupported format (expected binary PBM P4)");
  const std::size_t w = header.number("width");
  const std::size_t h = header.number("height");
  if (w == 0 || h == 0) throw FormatError("malformed header: zero dimension");
  const auto raster = header.payload();
  const std::size_t row_bytes = (w + 7) / 8;
  if (raster.size() < row_bytes * h) throw FormatError("unexpected end of data");
  BitSequence bits(w * h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const auto byte = static_cast<unsigned char>(raster[y * row_bytes + x / 8]);
      bits[y * w + x] = (byte >> (7 - x % 8)) & 1u;
    }
  }
  return BitMatrix(w, h, std::move(bits));
}

std::string encode_pbm(const BitMatrix& wm) {
  std::string out = "P4\n" + std::to_string(wm.width()) + " " + std::to_string(wm.height()) + "\n";
  const std::size_t row_bytes = (wm.width() + 7) / 8;
  for (std::size_t y = 0; y < wm.height(); ++y) {
    std::string row(row_bytes, '\0');
    for (std::size_t x = 0; x < wm.width(); ++x) {
      if (wm.at(x, y)) row[x / 8] = static_cast<char>(row[x / 8] | (0x80 >> (x % 8)));
    }
    out += row;
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

GrayImage read_pgm(const std::filesystem::path& path) { return decode_pgm(read_file(path)); }
void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  write_file(path, encode_pgm(img));
}
BitMatrix read_pbm(const std::filesystem::path& path) { return decode_pbm(read_file(path)); }
void write_pbm(const std::filesystem::path& path, const BitMatrix& wm) {
  write_file(path, encode_pbm(wm));
}

}  // namespace cirng
