// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace winlayer {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller supplied something outside an operation's preconditions.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure did not reach its target (non-convergence,
/// factorization breakdown, incomplete eigenvalue set, rejected fit).
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// The tabulated data is too short to decide the requested quantity.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

}  // namespace winlayer
