// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace orbent {

inline constexpr int kDefaultCells = 4096;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// A probability measure on the unit circle: a finite list of atoms plus a
/// piecewise-constant density on a uniform grid of `cells()` arcs. Atoms are
/// kept symbolic so atom detection (log-energy = -inf) is exact.
struct SpectralMeasure {
  std::vector<std::pair<double, double>> atoms;  // (angle in [0,2pi), mass)
  std::vector<double> density;                   // per-cell values, may be empty

  int cells() const { return static_cast<int>(density.size()); }
  double cell_width() const;
  bool has_atoms() const { return !atoms.empty(); }
  double atom_mass() const;
  double density_mass() const;
  double total_mass() const { return atom_mass() + density_mass(); }

  /// Throws MeasureError unless mass is 1 within 1e-12, atom masses are
  /// positive, and atom angles are distinct.
  void validate() const;

  static SpectralMeasure haar(int cells = kDefaultCells);
  static SpectralMeasure roots_of_unity(int m);
  static SpectralMeasure point_mass(double angle);
  static SpectralMeasure from_atoms(std::vector<std::pair<double, double>> atoms);
  /// Midpoint-samples `f` on the grid and normalizes the density mass to
  /// 1 - atom_mass (here: 1).
  static SpectralMeasure from_density(const std::function<double(double)>& f,
                                      int cells = kDefaultCells);

  nlohmann::json to_json() const;
  static SpectralMeasure from_json(const nlohmann::json& j);
};

/// k-th moment: sum of atom contributions plus the exact integral of the
/// piecewise-constant density against e^{ik t}. Returns exactly 1 for k = 0.
std::complex<double> measure_moment(const SpectralMeasure& mu, std::int64_t k);

/// Quantile angle at p in (0,1) of the combined atom+density distribution.
double quantile_angle(const SpectralMeasure& mu, double p);

/// Rotates the measure by `cells_shift` grid cells (density) and the matching
/// angle (atoms). Used for rotation-invariance checks.
SpectralMeasure rotated_by_cells(const SpectralMeasure& mu, int cells_shift);

/// A law on the real line described by its quantile function; used for
/// deterministic self-adjoint microstate representatives.
struct RealLineMeasure {
  std::function<double(double)> quantile;  // p in (0,1) -> x
  double support_bound = 0.0;              // sup |x| over the support
};

/// Standard semicircle law (variance 1, support [-2,2]).
RealLineMeasure semicircle_law();

}  // namespace orbent
