// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbent/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "orbent/errors.hpp"

namespace orbent {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

}  // namespace

double sigma_cell_pair_integral(int cells, int offset) {
  // The second antiderivative of L(u) = log(2|sin(u/2)|) on [0, 2pi] is the
  // quartic Psi(u) = zeta(3) - pi^2 u^2/12 + pi u^3/12 - u^4/48, extended
  // evenly, and the cell-pair integral is the second difference
  // Psi(u+h) - 2 Psi(u) + Psi(u-h). Written naively that cancels zeta(3)-size
  // terms down to h^2-size results; the forms below are algebraically equal
  // and cancellation-free.
  const double h = kTwoPi / cells;
  if (offset == 0) {
    // 2 (Psi(h) - Psi(0)), all three points on the even extension's kink
    const double h2 = h * h;
    return 2.0 * (-kPi * kPi * h2 / 12.0 + kPi * h2 * h / 12.0 - h2 * h2 / 48.0);
  }
  // interior: exact second difference of a quartic,
  //   h^2 Psi''(u) + h^4/12 Psi''''(u) with Psi'' = L's closed form
  const double u = offset * h;
  const double second = -kPi * kPi / 6.0 + kPi * u / 2.0 - u * u / 4.0;
  return h * h * second - h * h * h * h / 24.0;
}

ExtendedReal sigma(const SpectralMeasure& mu) {
  mu.validate();
  if (mu.has_atoms()) return ExtendedReal::neg_infinity();
  const int g = mu.cells();
  if (g == 0) return ExtendedReal::neg_infinity();  // no mass at all

  std::vector<double> kernel(static_cast<size_t>(g));
  for (int o = 0; o < g; ++o)
    kernel[static_cast<size_t>(o)] = sigma_cell_pair_integral(g, o);

  // Circular autocorrelation of the density against the kernel.
  double total = 0.0;
  for (int o = 0; o < g; ++o) {
    double corr = 0.0;
    for (int c = 0; c < g; ++c)
      corr += mu.density[static_cast<size_t>(c)] *
              mu.density[static_cast<size_t>((c + o) % g)];
    total += corr * kernel[static_cast<size_t>(o)];
  }
  return ExtendedReal::finite(total);
}

ExtendedReal chi_u_single(const SpectralMeasure& mu) { return sigma(mu); }

ExtendedReal chi_u_free_tuple(std::span<const SpectralMeasure> mus) {
  ExtendedReal total = ExtendedReal::finite(0.0);
  for (const auto& mu : mus) total += sigma(mu);
  return total;
}

// ---------------------------------------------------------------------------
// Theorem 1 machinery
// ---------------------------------------------------------------------------

namespace {

OraclePtr make_v_joint_oracle(const std::vector<SpectralMeasure>& mus,
                              int degree_cap) {
  std::vector<OraclePtr> factors;
  factors.reserve(mus.size());
  for (size_t i = 0; i < mus.size(); ++i)
    factors.push_back(make_measure_oracle(mus[i], "v" + std::to_string(i + 1)));
  return make_free_product_oracle(std::move(factors), degree_cap);
}

}  // namespace

bool theta_membership(std::span<const Matrix> v, const Matrix& u,
                      const MatrixTuple& xi, int m, double delta_prime,
                      int degree_cap) {
  MatrixTuple vset = MatrixTuple::unitary({v.begin(), v.end()});
  MatrixTuple conj;
  conj.dim = xi.dim;
  conj.norm_cap = xi.norm_cap;
  for (const auto& s : xi.slots)
    conj.slots.push_back({u * s.mat * u.adjoint(), s.kind});
  const MatrixTuple sets[2] = {std::move(vset), std::move(conj)};
  return is_m_eps_free(sets, 3 * m, delta_prime, degree_cap,
                       ScanPolicy::EarlyExit)
      .free;
}

Eq5Check eq5_implication_check(const ConjugationInstanceSpec& spec,
                               std::span<const Matrix> v, const Matrix& u,
                               double delta_prime) {
  const int n = static_cast<int>(spec.v_measures.size());
  if (static_cast<int>(v.size()) != n)
    throw DimensionError("witness tuple size != number of v measures");
  Eq5Check out;

  const auto v_joint = make_v_joint_oracle(spec.v_measures, spec.degree_cap);
  MicrostateParams pv = spec.params;
  pv.degree = 3 * spec.params.degree;
  pv.delta = delta_prime;
  out.premise_gamma_u =
      in_gamma_u(v, *v_joint, pv, ScanPolicy::EarlyExit).member;
  out.premise_theta =
      out.premise_gamma_u &&
      theta_membership(v, u, spec.xi, spec.params.degree, delta_prime,
                       spec.degree_cap);
  if (!out.premise_gamma_u || !out.premise_theta) {
    out.outcome = ImplicationOutcome::Vacuous;
    return out;
  }

  const auto target = make_conjugated_family_oracle(
      spec.x_oracle, spec.v_measures, spec.degree_cap);
  std::vector<Matrix> conjugators;
  conjugators.reserve(static_cast<size_t>(n + 1));
  for (int i = 0; i < n; ++i) conjugators.push_back(v[static_cast<size_t>(i)] * u);
  conjugators.push_back(u);
  std::vector<MatrixTuple> tuples(static_cast<size_t>(n + 1), spec.xi);
  const std::vector<std::vector<Matrix>> witnesses{{v.begin(), v.end()}};
  out.conclusion = in_gamma_orb_presence(conjugators, tuples, *target, witnesses,
                                         spec.params, ScanPolicy::EarlyExit);
  out.outcome = out.conclusion.member ? ImplicationOutcome::Held
                                      : ImplicationOutcome::Violated;
  return out;
}

namespace {

struct InstanceOutcome {
  bool sampled = false;
  bool held = false;
  std::string detail;
};

constexpr int kMaxPremiseAttempts = 12;

InstanceOutcome run_calibration_instance(const ConjugationInstanceSpec& spec,
                                         double t, RngStream stream) {
  const int n = static_cast<int>(spec.v_measures.size());
  Rng rng(stream);
  const auto v_joint = make_v_joint_oracle(spec.v_measures, spec.degree_cap);

  MicrostateParams pu = spec.params;  // Gamma_u window 2m at accuracy t
  pu.degree = 2 * spec.params.degree;
  pu.delta = t;

  InstanceOutcome out;
  for (int attempt = 0; attempt < kMaxPremiseAttempts; ++attempt) {
    std::vector<Matrix> v;
    v.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) v.push_back(sample_haar_unitary(spec.params.dim, rng));
    if (!in_gamma_u(v, *v_joint, pu, ScanPolicy::EarlyExit).member) continue;
    const Matrix u = sample_haar_unitary(spec.params.dim, rng);
    if (!theta_membership(v, u, spec.xi, spec.params.degree, t, spec.degree_cap))
      continue;

    // Premise satisfied; check the conclusion at the ambient delta.
    out.sampled = true;
    const auto target = make_conjugated_family_oracle(
        spec.x_oracle, spec.v_measures, spec.degree_cap);
    std::vector<Matrix> conjugators;
    for (int i = 0; i < n; ++i) conjugators.push_back(v[static_cast<size_t>(i)] * u);
    conjugators.push_back(u);
    std::vector<MatrixTuple> tuples(static_cast<size_t>(n + 1), spec.xi);
    const std::vector<std::vector<Matrix>> witnesses{v};
    const PresenceResult res =
        in_gamma_orb_presence(conjugators, tuples, *target, witnesses,
                              spec.params, ScanPolicy::EarlyExit);
    out.held = res.member;
    if (!out.held) {
      std::ostringstream os;
      os << "conclusion violated at delta'=" << t
         << " (deviation " << res.best.max_deviation << " vs delta "
         << spec.params.delta << ")";
      out.detail = os.str();
    }
    return out;
  }
  return out;  // premise never sampled at this accuracy
}

}  // namespace

CalibrationOutcome choose_delta_prime(const ConjugationInstanceSpec& spec,
                                      int calibration_trials, RngStream stream,
                                      int threads) {
  if (calibration_trials < 1)
    throw Error("choose_delta_prime needs calibrationTrials >= 1");
  spec.params.validate();

  std::string last_violation;

  // Accepts t when the fixed representative is valid at accuracy t and every
  // sampled premise instance satisfies the conclusion. Zero sampled (V, U)
  // instances accept vacuously: the premise set is then empty at desk scale
  // and the implication carries no content. An invalid representative
  // rejects outright; the construction requires Xi(N) in Gamma_R.
  auto try_accept = [&](double t, int step,
                        CalibrationOutcome& result) -> bool {
    // A = U Xi U* lies in Gamma_R iff Xi does (conjugation invariance), so
    // the Gamma_R part of the premise is a single deterministic check.
    MicrostateParams pr = spec.params;
    pr.delta = t;
    if (!in_gamma_R(spec.xi, *spec.x_oracle, pr, ScanPolicy::EarlyExit).member) {
      std::ostringstream os;
      os << "representative Xi outside Gamma_R at accuracy " << t;
      last_violation = os.str();
      return false;
    }

    std::vector<InstanceOutcome> outcomes(static_cast<size_t>(calibration_trials));
    parallel_for(calibration_trials, threads, [&](std::int64_t i) {
      outcomes[static_cast<size_t>(i)] = run_calibration_instance(
          spec, t,
          substream(stream, (static_cast<std::uint64_t>(step) << 32) |
                                static_cast<std::uint64_t>(i)));
    });
    int sampled = 0;
    for (const auto& o : outcomes) {
      if (!o.sampled) continue;
      ++sampled;
      if (!o.held) {
        last_violation = o.detail;
        return false;
      }
    }
    result.ok = true;
    result.delta_prime = t;
    result.instances = sampled;
    result.vacuous = (sampled == 0);
    return true;
  };

  CalibrationOutcome result;
  if (try_accept(spec.params.delta, 0, result)) return result;

  double lo = 0.0, hi = spec.params.delta;
  for (int step = 1; step <= 8; ++step) {
    const double mid = 0.5 * (lo + hi);
    CalibrationOutcome candidate;
    if (try_accept(mid, step, candidate)) {
      if (mid > result.delta_prime) result = candidate;
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (result.ok) return result;
  result.detail = last_violation.empty()
                      ? "no delta' accepted down to delta/2^8"
                      : last_violation;
  return result;
}

std::vector<MatrixTuple> build_free_copy_microstates(const MatrixTuple& xi,
                                                     int count, Rng& rng) {
  if (count < 2) throw Error("free-copy construction needs count >= 2");
  std::vector<MatrixTuple> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    const Matrix w = sample_haar_unitary(xi.dim, rng);
    MatrixTuple t;
    t.dim = xi.dim;
    t.norm_cap = xi.norm_cap;
    for (const auto& s : xi.slots)
      t.slots.push_back({w * s.mat * w.adjoint(), s.kind});
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace orbent
