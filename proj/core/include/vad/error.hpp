// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace vad {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree with what an operation expects.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A NaN or Inf appeared in a forward value or a gradient.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A file on disk does not match the expected binary or JSON layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument, configuration, or call sequence.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace vad
