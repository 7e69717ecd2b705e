// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "orbent/entropy.hpp"
#include "orbent/microstates.hpp"

namespace orbent {

/// Comparison verdicts are interval-aware: a violation is only declared when
/// the confidence intervals separate in the wrong order.
enum class ChainVerdict {
  ConsistentSeparated,  // lhs interval entirely below rhs interval
  ConsistentOverlap,    // intervals overlap
  Violated,             // lhs interval entirely above rhs interval
};

std::string to_string(ChainVerdict v);

struct Theorem1Config {
  std::vector<SpectralMeasure> v_measures;  // n unitaries; may be empty (degenerate)
  int x_arity = 1;                          // r of the semicircular family X
  std::vector<int> dims;                    // N sweep
  std::vector<int> degrees;                 // m sweep
  std::vector<double> deltas;               // delta sweep
  std::int64_t trials = 200;
  int calibration_trials = 8;
  int witness_count = 8;
  bool prop1_mode = false;  // use W_i Xi W_i* microstates and the Eq (8) transform
  int degree_cap = kDefaultDegreeCap;
  RngStream stream;
  int threads = 1;
};

struct Theorem1Cell {
  int dim = 0;
  int degree = 0;
  double delta = 0.0;
  double delta_prime = 0.0;
  bool delta_prime_vacuous = false;
  bool delta_prime_failed = false;
  int calibration_instances = 0;
  VolumeEstimate gamma_u;    // Gamma_u(v; N, 2m, delta')
  double lhs_half_p = 0.0;   // (1/2) pHat(gamma_u)
  VolumeEstimate gamma_orb;  // presence variant, witness list, accuracy delta
  ExtendedReal chi_u;        // sum of Sigma(mu_i)
  ChainVerdict verdict = ChainVerdict::ConsistentOverlap;
  std::string mode;          // "fixed" or "prop1"
  std::string note;

  nlohmann::json to_json() const;
};

struct Theorem1Report {
  std::vector<Theorem1Cell> cells;
  nlohmann::json to_json() const;
};

/// Runs the finite-N shadow of the Eq (6) chain over the sweep: estimates
/// (1/2) gamma^{(x)n}(Gamma_u(v; N, 2m, delta')) and
/// gamma^{(x)(n+1)}(Gamma_orb(v_1 X v_1*, ..., X : (Xi,...,Xi) : v; N, m, delta))
/// and compares them interval-aware, reporting chi_u(v) = sum Sigma(mu_i)
/// alongside. In prop1 mode the fixed representative is replaced by the
/// free-copy microstates W_i Xi W_i* and membership is probed through the
/// transformed unitaries (V_1 U W_1*, ..., U W_{n+1}*).
Theorem1Report run_theorem1_experiment(const Theorem1Config& cfg);

}  // namespace orbent
