// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <limits>

#include <nlohmann/json_fwd.hpp>

namespace orbent {

/// A real value extended by a -infinity flag (atomic log-energy, empty
/// volumes). Sums absorb -infinity.
struct ExtendedReal {
  double value = 0.0;

  static ExtendedReal neg_infinity() {
    return {-std::numeric_limits<double>::infinity()};
  }
  static ExtendedReal finite(double v) { return {v}; }

  bool is_neg_inf() const { return std::isinf(value) && value < 0; }

  ExtendedReal operator+(const ExtendedReal& o) const {
    if (is_neg_inf() || o.is_neg_inf()) return neg_infinity();
    return {value + o.value};
  }
  ExtendedReal& operator+=(const ExtendedReal& o) { return *this = *this + o; }

  friend bool operator==(const ExtendedReal&, const ExtendedReal&) = default;

  nlohmann::json to_json() const;
  static ExtendedReal from_json(const nlohmann::json& j);
};

}  // namespace orbent
