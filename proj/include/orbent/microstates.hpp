// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "orbent/extended_real.hpp"
#include "orbent/matrixlab.hpp"
#include "orbent/oracles.hpp"
#include "orbent/rng.hpp"

namespace orbent {

/// Strict-inequality ties within this band of delta are flagged; membership
/// at a measure-zero boundary is not trustworthy in floating point.
inline constexpr double kBoundaryGuard = 1e-9;

/// (N, m, delta, R): the approximation degree and accuracy of a Gamma set.
struct MicrostateParams {
  int dim = 0;
  int degree = 1;
  double delta = 0.1;
  double norm_cap = std::numeric_limits<double>::infinity();

  void validate() const;
};

enum class ScanPolicy {
  Full,       // scan every word; exact max deviation
  EarlyExit,  // stop at the first violation; max_deviation is a lower bound
};

struct MembershipResult {
  bool member = false;
  double max_deviation = 0.0;
  bool boundary = false;  // some word within kBoundaryGuard of delta
  bool complete = true;   // full scan performed
  StarWord worst_word;
};

/// |tr_N(h(A)) - tau(h)| < delta for every *-monomial h of degree <= m, plus
/// the operator norm cap on every slot.
MembershipResult in_gamma_R(const MatrixTuple& a, const MomentOracle& target,
                            const MicrostateParams& p,
                            ScanPolicy policy = ScanPolicy::Full);

/// Orbital microstates: words over the joint family evaluated on
/// (U_i A_i U_i*)_{i=1..n} against the joint target.
MembershipResult in_gamma_orb(std::span<const Matrix> u,
                              std::span<const MatrixTuple> a,
                              const MomentOracle& target,
                              const MicrostateParams& p,
                              ScanPolicy policy = ScanPolicy::Full);

/// Unitary microstates: words over (V_i, V_i*) against the unitary target.
MembershipResult in_gamma_u(std::span<const Matrix> v,
                            const MomentOracle& target,
                            const MicrostateParams& p,
                            ScanPolicy policy = ScanPolicy::Full);

struct PresenceResult {
  bool member = false;
  int witness_index = -1;   // first passing witness
  MembershipResult best;    // result for the passing witness, or closest miss
};

/// Existential variant: some witness V makes all mixed words (conjugated
/// family and v letters) pass. Decided against the finite witness list only,
/// so a negative answer may be a false negative (sound, not complete).
PresenceResult in_gamma_orb_presence(std::span<const Matrix> u,
                                     std::span<const MatrixTuple> a,
                                     const MomentOracle& target_with_v,
                                     std::span<const std::vector<Matrix>> witnesses,
                                     const MicrostateParams& p,
                                     ScanPolicy policy = ScanPolicy::Full);

struct FreenessResult {
  bool free = false;
  double max_deviation = 0.0;
  bool complete = true;
};

/// (m,eps)-freeness of matrix sets: every labelled word of length <= m over
/// elements of the sets (adjoints adjoined for unitary elements) has
/// |tr_N(word) - phi^{*I}(word)| < eps, with phi^{*I} the free product of the
/// sets' empirical states.
FreenessResult is_m_eps_free(std::span<const MatrixTuple> sets, int m, double eps,
                             int degree_cap = kDefaultDegreeCap,
                             ScanPolicy policy = ScanPolicy::Full);

/// (U_1,...,U_n) -> (U_n* U_1, ..., U_n* U_{n-1}, I). Preserves in_gamma_orb
/// membership exactly (trace conjugation-invariance). Requires n >= 2.
std::vector<Matrix> reduce_last_to_identity(std::span<const Matrix> u);

struct VolumeEstimate {
  std::int64_t hits = 0;
  std::int64_t trials = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;  // 95% Clopper-Pearson
  double ci_hi = 1.0;
  ExtendedReal log_proxy;     // (1/N^2) ln(p_hat); -inf when hits = 0
  ExtendedReal log_proxy_lo;  // from ci_lo
  ExtendedReal log_proxy_hi;  // from ci_hi
  std::int64_t boundary_trials = 0;

  nlohmann::json to_json() const;
};

/// Exact binomial (Clopper-Pearson) interval at confidence 1 - alpha.
std::pair<double, double> clopper_pearson(std::int64_t hits, std::int64_t trials,
                                          double alpha = 0.05);

struct TrialOutcome {
  bool hit = false;
  bool boundary = false;
};

/// Monte-Carlo estimate of gamma_{U(N)}^{(x)k}(pred): samples k-tuples of Haar
/// unitaries with per-trial substreams and counts hits. Bitwise reproducible
/// for a fixed stream regardless of thread count.
VolumeEstimate estimate_volume(
    const std::function<TrialOutcome(std::span<const Matrix>)>& pred, int k,
    const MicrostateParams& p, std::int64_t trials, RngStream stream,
    int threads = 1);

/// Runs fn(i) for i in [0, n) on `threads` workers.
void parallel_for(std::int64_t n, int threads,
                  const std::function<void(std::int64_t)>& fn);

}  // namespace orbent
