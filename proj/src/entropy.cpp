// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "cirng/entropy.hpp"

#include "cirng/errors.hpp"

namespace cirng {

BbsSource::BbsSource(Bbs gen, unsigned k) : gen_(gen), k_(k) {
  if (k < 1 || k > 32) throw PreconditionError("bbs output width must lie in [1,32]");
}

ScriptedSource::ScriptedSource(std::vector<std::uint64_t> values, std::string name)
    : values_(std::move(values)), name_(std::move(name)) {}

std::uint64_t ScriptedSource::next() {
  if (pos_ >= values_.size()) {
    throw EntropyExhausted(name_ + " stream exhausted after " + std::to_string(values_.size()) +
                           " values");
  }
  return values_[pos_++];
}

std::unique_ptr<EntropySource> make_xorshift_source(std::uint64_t seed, XorshiftTriple triple) {
  return std::make_unique<XorshiftSource>(Xorshift64(seed, triple));
}

std::unique_ptr<EntropySource> make_bbs_source(std::uint64_t seed, unsigned k,
                                               std::uint32_t modulus) {
  return std::make_unique<BbsSource>(Bbs::from_user_seed(seed, modulus), k);
}

std::unique_ptr<EntropySource> make_scripted_source(std::vector<std::uint64_t> values,
                                                    std::string name) {
  return std::make_unique<ScriptedSource>(std::move(values), std::move(name));
}

}  // namespace cirng
