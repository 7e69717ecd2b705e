// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace orbent {

/// Base class for all orbent errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class WordError : public Error {
 public:
  using Error::Error;
};

class MeasureError : public Error {
 public:
  using Error::Error;
};

class TupleError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Word degree exceeded the free-product evaluation cap.
class DegreeCapError : public Error {
 public:
  DegreeCapError(int degree, int cap)
      : Error("word degree " + std::to_string(degree) +
              " exceeds free-product degree cap " + std::to_string(cap)),
        degree(degree),
        cap(cap) {}
  int degree;
  int cap;
};

/// Power iteration failed to converge; carries the best estimate seen.
class NormConvergenceError : public Error {
 public:
  explicit NormConvergenceError(double best)
      : Error("operator norm power iteration did not converge (best estimate " +
              std::to_string(best) + ")"),
        best_estimate(best) {}
  double best_estimate;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace orbent
