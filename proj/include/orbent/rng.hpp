// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace orbent {

/// Identifies one reproducible random stream. Identical (seed, stream) pairs
/// reproduce identical draws regardless of thread scheduling; concurrent work
/// uses disjoint stream ids.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Derives a child stream; lanes fan out per trial / sweep cell / purpose.
RngStream substream(RngStream base, std::uint64_t lane);

/// Deterministic generator over an RngStream. Uniforms and gaussians are
/// produced from raw engine words (not std distributions, whose output is
/// implementation-defined), so sequences are identical across platforms.
class Rng {
 public:
  explicit Rng(RngStream s);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0,1) with 53-bit resolution.
  double uniform();
  /// Standard normal via Box-Muller.
  double gaussian();
  /// Standard complex normal: E z = 0, E|z|^2 = 1.
  std::complex<double> complex_gaussian();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace orbent
