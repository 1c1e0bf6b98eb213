// Copyright The cirng Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace cirng {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition (bad seed, out-of-range index,
// sequence too short, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed or unsupported file contents.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// A scripted entropy source ran out of values.
class EntropyExhausted : public Error {
 public:
  using Error::Error;
};

// CIPRNG v2 hit its per-round draw cap.
class RoundLimitExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace cirng
