// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace isvd {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (vector length vs. weight dimension, etc.).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// The input stream cannot be factored as requested: zero first column,
/// collapsed Gram-Schmidt column, singular right-factor update, rank cap.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf encountered, or an iterative kernel failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent external file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace isvd
