// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbent/theorem1.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "orbent/errors.hpp"

namespace orbent {

std::string to_string(ChainVerdict v) {
  switch (v) {
    case ChainVerdict::ConsistentSeparated: return "consistent-separated";
    case ChainVerdict::ConsistentOverlap: return "consistent-overlap";
    case ChainVerdict::Violated: return "violated";
  }
  return "?";
}

namespace {

ChainVerdict compare_chain(double lhs_lo, double lhs_hi, double rhs_lo,
                           double rhs_hi) {
  if (lhs_hi <= rhs_lo) return ChainVerdict::ConsistentSeparated;
  if (lhs_lo > rhs_hi) return ChainVerdict::Violated;
  return ChainVerdict::ConsistentOverlap;
}

OraclePtr v_joint_oracle(const std::vector<SpectralMeasure>& mus, int cap) {
  std::vector<OraclePtr> factors;
  for (size_t i = 0; i < mus.size(); ++i)
    factors.push_back(make_measure_oracle(mus[i], "v" + std::to_string(i + 1)));
  return make_free_product_oracle(std::move(factors), cap);
}

/// Witness pool: quantile diagonals of each v measure conjugated by fresh
/// Haar unitaries.
std::vector<std::vector<Matrix>> make_witness_pool(
    const std::vector<SpectralMeasure>& mus, int dim, int count, Rng& rng) {
  std::vector<std::vector<Matrix>> pool;
  pool.reserve(static_cast<size_t>(count));
  for (int w = 0; w < count; ++w) {
    std::vector<Matrix> witness;
    witness.reserve(mus.size());
    for (const auto& mu : mus) {
      const Matrix d = quantile_diagonal(mu, dim);
      const Matrix h = sample_haar_unitary(dim, rng);
      witness.push_back(h * d * h.adjoint());
    }
    pool.push_back(std::move(witness));
  }
  return pool;
}

}  // namespace

Theorem1Report run_theorem1_experiment(const Theorem1Config& cfg) {
  Theorem1Report report;
  const int n = static_cast<int>(cfg.v_measures.size());
  const auto x_oracle = make_semicircular_oracle(cfg.x_arity);

  ExtendedReal chi_u = chi_u_free_tuple(cfg.v_measures);

  std::uint64_t cell_lane = 0;
  for (int dim : cfg.dims) {
    for (int degree : cfg.degrees) {
      for (double delta : cfg.deltas) {
        const RngStream cell_stream = substream(cfg.stream, cell_lane++);
        Theorem1Cell cell;
        cell.dim = dim;
        cell.degree = degree;
        cell.delta = delta;
        cell.chi_u = chi_u;
        cell.mode = cfg.prop1_mode ? "prop1" : "fixed";

        MicrostateParams params{dim, degree, delta, 2.0 + delta};
        MatrixTuple xi = MatrixTuple::selfadjoint(
            [&] {
              std::vector<Matrix> mats;
              const RealLineMeasure law = semicircle_law();
              for (int j = 0; j < cfg.x_arity; ++j)
                mats.push_back(quantile_diagonal(law, dim));
              return mats;
            }(),
            params.norm_cap);

        // Degenerate n = 0: the chain collapses to the Gamma_R volume, which
        // is 1 when Xi is a microstate (membership does not depend on U).
        if (n == 0) {
          const auto pred = [&](std::span<const Matrix> us) -> TrialOutcome {
            const MatrixTuple tuples[1] = {xi};
            const auto res = in_gamma_orb(us, tuples, *x_oracle, params,
                                          ScanPolicy::EarlyExit);
            return {res.member, res.boundary};
          };
          cell.gamma_orb = estimate_volume(pred, 1, params, cfg.trials,
                                           substream(cell_stream, 1), cfg.threads);
          cell.gamma_u.hits = cell.gamma_u.trials = 1;
          cell.gamma_u.p_hat = cell.gamma_u.ci_lo = cell.gamma_u.ci_hi = 1.0;
          cell.lhs_half_p = 0.5;
          cell.verdict = compare_chain(0.5, 0.5, cell.gamma_orb.ci_lo,
                                       cell.gamma_orb.ci_hi);
          cell.note = "degenerate n=0 cell: gamma_orb reduces to the Gamma_R check";
          report.cells.push_back(std::move(cell));
          continue;
        }

        // delta' calibration (empirical stand-in for the paper's
        // uniform-continuity step).
        ConjugationInstanceSpec spec{x_oracle, cfg.v_measures, xi, params,
                                     cfg.degree_cap};
        const CalibrationOutcome cal = choose_delta_prime(
            spec, cfg.calibration_trials, substream(cell_stream, 0), cfg.threads);
        cell.delta_prime_failed = !cal.ok;
        if (!cal.ok) {
          cell.note = "delta' calibration failed: " + cal.detail;
          report.cells.push_back(std::move(cell));
          continue;
        }
        cell.delta_prime = cal.delta_prime;
        cell.delta_prime_vacuous = cal.vacuous;
        cell.calibration_instances = cal.instances;

        // (a) gamma^{(x)n}(Gamma_u(v; N, 2m, delta')).
        const auto v_joint = v_joint_oracle(cfg.v_measures, cfg.degree_cap);
        MicrostateParams pu = params;
        pu.degree = 2 * degree;
        pu.delta = cal.delta_prime;
        const auto pred_u = [&](std::span<const Matrix> vs) -> TrialOutcome {
          const auto res = in_gamma_u(vs, *v_joint, pu, ScanPolicy::EarlyExit);
          return {res.member, res.boundary};
        };
        cell.gamma_u = estimate_volume(pred_u, n, pu, cfg.trials,
                                       substream(cell_stream, 1), cfg.threads);
        cell.lhs_half_p = 0.5 * cell.gamma_u.p_hat;

        // (b) gamma^{(x)(n+1)} of the presence-variant orbital set.
        const auto target =
            make_conjugated_family_oracle(x_oracle, cfg.v_measures, cfg.degree_cap);
        Rng witness_rng(substream(cell_stream, 2));
        const auto witnesses = make_witness_pool(cfg.v_measures, dim,
                                                 cfg.witness_count, witness_rng);

        std::vector<MatrixTuple> tuples;
        std::vector<Matrix> copies_w;  // Prop 1 conjugators W_i
        if (cfg.prop1_mode) {
          Rng copy_rng(substream(cell_stream, 3));
          // Record the W_i so membership can run through the Eq (8) transform.
          for (int i = 0; i < n + 1; ++i)
            copies_w.push_back(sample_haar_unitary(dim, copy_rng));
          for (int i = 0; i < n + 1; ++i) {
            MatrixTuple t;
            t.dim = dim;
            t.norm_cap = xi.norm_cap;
            for (const auto& s : xi.slots)
              t.slots.push_back({copies_w[static_cast<size_t>(i)] * s.mat *
                                     copies_w[static_cast<size_t>(i)].adjoint(),
                                 s.kind});
            tuples.push_back(std::move(t));
          }
        } else {
          tuples.assign(static_cast<size_t>(n + 1), xi);
        }

        const auto pred_orb = [&](std::span<const Matrix> us) -> TrialOutcome {
          // us = (V_1, ..., V_n, U).
          std::vector<Matrix> conjugators;
          conjugators.reserve(static_cast<size_t>(n + 1));
          const Matrix& u_last = us[static_cast<size_t>(n)];
          for (int i = 0; i < n; ++i) {
            Matrix c = us[static_cast<size_t>(i)] * u_last;
            if (cfg.prop1_mode) c = c * copies_w[static_cast<size_t>(i)].adjoint();
            conjugators.push_back(std::move(c));
          }
          conjugators.push_back(cfg.prop1_mode
                                    ? (u_last * copies_w.back().adjoint()).eval()
                                    : u_last);
          const auto res =
              in_gamma_orb_presence(conjugators, tuples, *target, witnesses,
                                    params, ScanPolicy::EarlyExit);
          return {res.member, res.best.boundary};
        };
        cell.gamma_orb = estimate_volume(pred_orb, n + 1, params, cfg.trials,
                                         substream(cell_stream, 4), cfg.threads);

        cell.verdict =
            compare_chain(0.5 * cell.gamma_u.ci_lo, 0.5 * cell.gamma_u.ci_hi,
                          cell.gamma_orb.ci_lo, cell.gamma_orb.ci_hi);
        report.cells.push_back(std::move(cell));
      }
    }
  }
  return report;
}

nlohmann::json Theorem1Cell::to_json() const {
  nlohmann::json j{{"N", dim},
                   {"m", degree},
                   {"delta", delta},
                   {"deltaPrime", delta_prime},
                   {"deltaPrimeVacuous", delta_prime_vacuous},
                   {"deltaPrimeFailed", delta_prime_failed},
                   {"calibrationInstances", calibration_instances},
                   {"gammaU", gamma_u.to_json()},
                   {"lhsHalfPHat", lhs_half_p},
                   {"gammaOrb", gamma_orb.to_json()},
                   {"chiU", chi_u.to_json()},
                   {"verdict", to_string(verdict)},
                   {"mode", mode}};
  if (!note.empty()) j["note"] = note;
  return j;
}

nlohmann::json Theorem1Report::to_json() const {
  nlohmann::json cells_json = nlohmann::json::array();
  for (const auto& c : cells) cells_json.push_back(c.to_json());
  return nlohmann::json{{"cells", cells_json}};
}

}  // namespace orbent
