// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cirng/core.hpp"

namespace cirng {

/// A word-producing input to a CIPRNG engine. Engines own their sources and
/// draw from them sequentially.
class EntropySource {
 public:
  virtual ~EntropySource() = default;
  virtual std::uint64_t next() = 0;
};

class XorshiftSource final : public EntropySource {
 public:
  explicit XorshiftSource(Xorshift64 gen) : gen_(gen) {}
  std::uint64_t next() override { return gen_.next(); }

 private:
  Xorshift64 gen_;
};

// Each draw advances the BBS once and yields its `k` low bits.
class BbsSource final : public EntropySource {
 public:
  BbsSource(Bbs gen, unsigned k);
  std::uint64_t next() override { return gen_.next(k_); }

 private:
  Bbs gen_;
  unsigned k_;
};

/// Replays a fixed list of words; throws EntropyExhausted past the end.
class ScriptedSource final : public EntropySource {
 public:
  explicit ScriptedSource(std::vector<std::uint64_t> values, std::string name = "scripted");
  std::uint64_t next() override;

  std::size_t consumed() const { return pos_; }
  std::size_t remaining() const { return values_.size() - pos_; }

 private:
  std::vector<std::uint64_t> values_;
  std::size_t pos_ = 0;
  std::string name_;
};

std::unique_ptr<EntropySource> make_xorshift_source(std::uint64_t seed, XorshiftTriple triple = {});
std::unique_ptr<EntropySource> make_bbs_source(std::uint64_t seed, unsigned k,
                                               std::uint32_t modulus = kDefaultBlumModulus);
std::unique_ptr<EntropySource> make_scripted_source(std::vector<std::uint64_t> values,
                                                    std::string name = "scripted");

}  // namespace cirng
