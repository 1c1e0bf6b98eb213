// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cirng {

// One bit per element, each 0 or 1.
using BitSequence = std::vector<std::uint8_t>;

std::string to_bit_string(const BitSequence& bits);

// Accepts '0' and '1'; whitespace is skipped, anything else throws
// FormatError.
BitSequence from_bit_string(std::string_view text);

// Appends the low `width` bits of `word`, most significant first.
void append_word_bits(BitSequence& out, std::uint64_t word, std::size_t width);

// Packs bits MSB-first into bytes; the final byte is zero padded.
std::vector<std::uint8_t> pack_bits(const BitSequence& bits);

std::size_t count_ones(const BitSequence& bits);

}  // namespace cirng
