// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbent/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "orbent/errors.hpp"

namespace orbent {

namespace {

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a;
}

}  // namespace

double SpectralMeasure::cell_width() const {
  if (density.empty()) return 0.0;
  return kTwoPi / static_cast<double>(density.size());
}

double SpectralMeasure::atom_mass() const {
  double s = 0;
  for (const auto& [a, m] : atoms) s += m;
  return s;
}

double SpectralMeasure::density_mass() const {
  if (density.empty()) return 0.0;
  return std::accumulate(density.begin(), density.end(), 0.0) * cell_width();
}

void SpectralMeasure::validate() const {
  if (std::abs(total_mass() - 1.0) > 1e-12)
    throw MeasureError("spectral measure mass " + std::to_string(total_mass()) +
                       " != 1");
  for (const auto& [a, m] : atoms) {
    if (m <= 0) throw MeasureError("atom mass must be positive");
    if (a < 0 || a >= kTwoPi) throw MeasureError("atom angle outside [0,2pi)");
  }
  for (size_t i = 0; i < atoms.size(); ++i)
    for (size_t j = i + 1; j < atoms.size(); ++j)
      if (atoms[i].first == atoms[j].first)
        throw MeasureError("atom angles must be distinct");
  for (double d : density)
    if (d < 0) throw MeasureError("density must be nonnegative");
}

SpectralMeasure SpectralMeasure::haar(int cells) {
  SpectralMeasure mu;
  mu.density.assign(static_cast<size_t>(cells), 1.0 / kTwoPi);
  return mu;
}

SpectralMeasure SpectralMeasure::roots_of_unity(int m) {
  if (m < 1) throw MeasureError("roots_of_unity needs m >= 1");
  SpectralMeasure mu;
  mu.atoms.reserve(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j)
    mu.atoms.emplace_back(kTwoPi * j / m, 1.0 / m);
  return mu;
}

SpectralMeasure SpectralMeasure::point_mass(double angle) {
  SpectralMeasure mu;
  mu.atoms.emplace_back(wrap_angle(angle), 1.0);
  return mu;
}

SpectralMeasure SpectralMeasure::from_atoms(
    std::vector<std::pair<double, double>> atoms) {
  SpectralMeasure mu;
  mu.atoms = std::move(atoms);
  for (auto& [a, m] : mu.atoms) a = wrap_angle(a);
  std::sort(mu.atoms.begin(), mu.atoms.end());
  mu.validate();
  return mu;
}

SpectralMeasure SpectralMeasure::from_density(
    const std::function<double(double)>& f, int cells) {
  if (cells < 1) throw MeasureError("density grid needs >= 1 cell");
  SpectralMeasure mu;
  mu.density.resize(static_cast<size_t>(cells));
  const double h = kTwoPi / cells;
  for (int c = 0; c < cells; ++c) {
    const double v = f((c + 0.5) * h);
    if (v < 0) throw MeasureError("density function must be nonnegative");
    mu.density[static_cast<size_t>(c)] = v;
  }
  const double mass = mu.density_mass();
  if (mass <= 0) throw MeasureError("density integrates to zero");
  for (double& d : mu.density) d /= mass;
  return mu;
}

nlohmann::json SpectralMeasure::to_json() const {
  nlohmann::json j;
  j["atoms"] = nlohmann::json::array();
  for (const auto& [a, m] : atoms) j["atoms"].push_back({a, m});
  j["grid"] = density;
  j["cells"] = cells();
  return j;
}

SpectralMeasure SpectralMeasure::from_json(const nlohmann::json& j) {
  SpectralMeasure mu;
  for (const auto& pair : j.at("atoms"))
    mu.atoms.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
  mu.density = j.at("grid").get<std::vector<double>>();
  if (j.contains("cells") && j.at("cells").get<int>() != mu.cells())
    throw MeasureError("cells field disagrees with grid length");
  mu.validate();
  return mu;
}

namespace {

// Order m when the atoms are exactly the uniform m-th roots of unity (as laid
// out by the factory); 0 otherwise. Root-of-unity sums then evaluate exactly
// instead of cancelling in floating point, which downstream free-product
// pruning relies on.
int uniform_roots_order(const SpectralMeasure& mu) {
  const int m = static_cast<int>(mu.atoms.size());
  if (m == 0) return 0;
  for (int j = 0; j < m; ++j) {
    if (mu.atoms[static_cast<size_t>(j)].first != kTwoPi * j / m) return 0;
    if (mu.atoms[static_cast<size_t>(j)].second != mu.atoms[0].second) return 0;
  }
  return m;
}

bool uniform_density(const SpectralMeasure& mu) {
  for (double d : mu.density)
    if (d != mu.density[0]) return false;
  return !mu.density.empty();
}

}  // namespace

std::complex<double> measure_moment(const SpectralMeasure& mu, std::int64_t k) {
  if (k == 0) return {1.0, 0.0};
  std::complex<double> total{0.0, 0.0};
  const double kd = static_cast<double>(k);
  if (const int m = uniform_roots_order(mu); m > 0) {
    if (k % m == 0) total += mu.atom_mass();
  } else {
    for (const auto& [a, m2] : mu.atoms) total += m2 * std::polar(1.0, kd * a);
  }
  if (!mu.density.empty() && !uniform_density(mu)) {
    // Exact per-cell integral of d_c e^{ikt}:
    //   d_c (e^{ikb} - e^{ika}) / (ik) = d_c e^{ik(a+b)/2} 2 sin(k h / 2) / k.
    const double h = mu.cell_width();
    const double w = 2.0 * std::sin(kd * h / 2.0) / kd;
    for (int c = 0; c < mu.cells(); ++c) {
      const double mid = (c + 0.5) * h;
      total += mu.density[static_cast<size_t>(c)] * w * std::polar(1.0, kd * mid);
    }
  }
  // A uniform density block integrates e^{ikt} over the full circle: zero.
  return total;
}

double quantile_angle(const SpectralMeasure& mu, double p) {
  if (!(p > 0.0 && p < 1.0)) throw MeasureError("quantile needs p in (0,1)");
  // Walk atoms and density cells in angle order, accumulating mass.
  auto atoms = mu.atoms;
  std::sort(atoms.begin(), atoms.end());
  size_t ai = 0;
  double cum = 0;
  const double h = mu.cell_width();
  const int G = mu.cells();
  auto take_atoms_below = [&](double angle) -> double {
    while (ai < atoms.size() && atoms[ai].first <= angle) {
      cum += atoms[ai].second;
      if (cum >= p) return atoms[ai].first;
      ++ai;
    }
    return -1.0;
  };
  if (G == 0) {
    const double hit = take_atoms_below(kTwoPi);
    if (hit >= 0) return hit;
    return atoms.empty() ? 0.0 : atoms.back().first;
  }
  for (int c = 0; c < G; ++c) {
    const double lo = c * h, hi = (c + 1) * h;
    const double hit = take_atoms_below(lo);
    if (hit >= 0) return hit;
    const double cell_mass = mu.density[static_cast<size_t>(c)] * h;
    if (cell_mass > 0 && cum + cell_mass >= p)
      return lo + (p - cum) / mu.density[static_cast<size_t>(c)];
    cum += cell_mass;
    (void)hi;
  }
  const double hit = take_atoms_below(kTwoPi);
  if (hit >= 0) return hit;
  return kTwoPi - 0.5 * h;  // p ~ 1 under roundoff
}

SpectralMeasure rotated_by_cells(const SpectralMeasure& mu, int cells_shift) {
  SpectralMeasure out = mu;
  const int G = mu.cells();
  if (G > 0) {
    const int s = ((cells_shift % G) + G) % G;
    for (int c = 0; c < G; ++c)
      out.density[static_cast<size_t>((c + s) % G)] =
          mu.density[static_cast<size_t>(c)];
    const double angle = s * mu.cell_width();
    for (auto& [a, m] : out.atoms) a = wrap_angle(a + angle);
  }
  return out;
}

RealLineMeasure semicircle_law() {
  // CDF of the standard semicircle on [-2,2]:
  //   F(x) = 1/2 + x sqrt(4-x^2) / (4 pi) + asin(x/2) / pi.
  auto cdf = [](double x) {
    return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::acos(-1.0)) +
           std::asin(x / 2.0) / std::acos(-1.0);
  };
  RealLineMeasure law;
  law.support_bound = 2.0;
  law.quantile = [cdf](double p) {
    double lo = -2.0, hi = 2.0;
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      (cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  return law;
}

}  // namespace orbent
