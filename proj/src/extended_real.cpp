// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbent/extended_real.hpp"

#include <nlohmann/json.hpp>

#include "orbent/errors.hpp"

namespace orbent {

nlohmann::json ExtendedReal::to_json() const {
  if (is_neg_inf()) return "-inf";
  return value;
}

ExtendedReal ExtendedReal::from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "-inf") return neg_infinity();
    throw Error("bad extended real literal '" + j.get<std::string>() + "'");
  }
  return finite(j.get<double>());
}

}  // namespace orbent
