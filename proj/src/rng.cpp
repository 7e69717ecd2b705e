// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbent/rng.hpp"

#include <cmath>

namespace orbent {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream substream(RngStream base, std::uint64_t lane) {
  std::uint64_t state = base.stream ^ 0xD1B54A32D192ED03ULL;
  splitmix64(state);
  state ^= lane;
  return RngStream{base.seed, splitmix64(state)};
}

Rng::Rng(RngStream s) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(s.seed), static_cast<std::uint32_t>(s.seed >> 32),
      static_cast<std::uint32_t>(s.stream),
      static_cast<std::uint32_t>(s.stream >> 32)};
  engine_.seed(seq);
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0,1] keeps the log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = kTau * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::complex<double> Rng::complex_gaussian() {
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  const double re = gaussian();
  const double im = gaussian();
  return {re * inv_sqrt2, im * inv_sqrt2};
}

}  // namespace orbent
