// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "orbent/entropy.hpp"
#include "orbent/errors.hpp"
#include "orbent/microstates.hpp"

using namespace orbent;
using doctest::Approx;

namespace {

MatrixTuple semicircle_rep(int n, double cap = 2.0) {
  return MatrixTuple::selfadjoint({quantile_diagonal(semicircle_law(), n)}, cap);
}

}  // namespace

TEST_CASE("in_gamma_R: semicircle quantile diagonal is a microstate") {
  const auto target = make_semicircular_oracle(1);
  const MicrostateParams p{128, 4, 0.1, 2.0};
  const auto res = in_gamma_R(semicircle_rep(128), *target, p);
  CHECK(res.member);
  CHECK(res.max_deviation < 0.1);
  CHECK(res.complete);
}

TEST_CASE("in_gamma_R: zero matrix misses tau(x^2) = 1 by 1") {
  const auto target = make_semicircular_oracle(1);
  const MicrostateParams p{16, 2, 0.1, 2.0};
  const MatrixTuple zero = MatrixTuple::selfadjoint({Matrix::Zero(16, 16)}, 2.0);
  const auto res = in_gamma_R(zero, *target, p);
  CHECK_FALSE(res.member);
  CHECK(res.max_deviation == Approx(1.0));
}

TEST_CASE("in_gamma_R: huge delta dominates any bounded tuple") {
  const auto target = make_semicircular_oracle(1);
  const MicrostateParams p{16, 1, 10.0,
                           std::numeric_limits<double>::infinity()};
  Rng rng({3, 0});
  const MatrixTuple a = MatrixTuple::selfadjoint({sample_gue(16, rng)});
  CHECK(in_gamma_R(a, *target, p).member);
}

TEST_CASE("in_gamma_R: norm cap rejection") {
  const auto target = make_semicircular_oracle(1);
  const MicrostateParams p{4, 1, 10.0, 1.0};
  const MatrixTuple big = MatrixTuple::selfadjoint(
      {(Matrix(4, 4) << 5, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0)
           .finished()});
  CHECK_FALSE(in_gamma_R(big, *target, p).member);
}

TEST_CASE("in_gamma_orb with n = 1 is U-independent and matches in_gamma_R") {
  const auto target = make_semicircular_oracle(1);
  const MicrostateParams p{64, 3, 0.1, 2.0};
  const MatrixTuple a = semicircle_rep(64);
  const auto base = in_gamma_R(a, *target, p);
  Rng rng({17, 0});
  const MatrixTuple tuples[1] = {a};
  for (int i = 0; i < 5; ++i) {
    const Matrix u[1] = {sample_haar_unitary(64, rng)};
    const auto res = in_gamma_orb(u, tuples, *target, p);
    CHECK(res.member == base.member);
    CHECK(res.max_deviation == Approx(base.max_deviation).epsilon(1e-9));
  }
}

TEST_CASE("in_gamma_orb: haar pair of exact microstates is usually free") {
  const auto target = make_free_product_oracle(
      {make_semicircular_oracle(1, "x1"), make_semicircular_oracle(1, "x2")});
  const MicrostateParams p{128, 3, 0.15, 2.0};
  const std::vector<MatrixTuple> tuples{semicircle_rep(128), semicircle_rep(128)};
  Rng rng({19, 0});
  int hits = 0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    const Matrix u[2] = {sample_haar_unitary(128, rng),
                         sample_haar_unitary(128, rng)};
    if (in_gamma_orb(u, tuples, *target, p, ScanPolicy::EarlyExit).member)
      ++hits;
  }
  CHECK(hits >= 18);
}

TEST_CASE("in_gamma_orb: identical untwisted copies fail the mixed word") {
  const auto target = make_free_product_oracle(
      {make_semicircular_oracle(1, "x1"), make_semicircular_oracle(1, "x2")});
  const MicrostateParams p{64, 2, 0.1, 2.0};
  const MatrixTuple a = semicircle_rep(64);
  const std::vector<MatrixTuple> tuples{a, a};
  const Matrix u[2] = {Matrix::Identity(64, 64), Matrix::Identity(64, 64)};
  const auto res = in_gamma_orb(u, tuples, *target, p);
  CHECK_FALSE(res.member);
  // word x1 x2 evaluates to tr(A^2) ~ 1 against a target of 0
  CHECK(res.max_deviation > 0.9);
}

TEST_CASE("in_gamma_u: haar sample against the haar target") {
  const auto target = make_measure_oracle(SpectralMeasure::haar());
  const MicrostateParams p{64, 3, 0.2, 1.0};
  Rng rng({23, 0});
  int hits = 0;
  for (int t = 0; t < 20; ++t) {
    const Matrix v[1] = {sample_haar_unitary(64, rng)};
    if (in_gamma_u(v, *target, p).member) ++hits;
  }
  CHECK(hits == 20);
}

TEST_CASE("in_gamma_u: identity fails the haar target at m = 1") {
  const auto target = make_measure_oracle(SpectralMeasure::haar());
  const MicrostateParams p{16, 1, 0.5, 1.0};
  const Matrix v[1] = {Matrix::Identity(16, 16)};
  const auto res = in_gamma_u(v, *target, p);
  CHECK_FALSE(res.member);
  CHECK(res.max_deviation == Approx(1.0));
}

TEST_CASE("in_gamma_u: root-of-unity diagonal is exact for the Z_m target") {
  const auto target = make_measure_oracle(SpectralMeasure::roots_of_unity(4));
  const MicrostateParams p{16, 5, 1e-9, 1.0};
  const Matrix v[1] = {quantile_diagonal(SpectralMeasure::roots_of_unity(4), 16)};
  CHECK(in_gamma_u(v, *target, p).member);
}

TEST_CASE("presence: generating witness passes, identity witness fails") {
  const int n = 32;
  const auto x = make_semicircular_oracle(1);
  const std::vector<SpectralMeasure> mus{SpectralMeasure::haar()};
  const auto target = make_conjugated_family_oracle(x, mus);
  const MatrixTuple xi = semicircle_rep(n);
  Rng rng({29, 0});
  const Matrix v = sample_haar_unitary(n, rng);
  const Matrix u = sample_haar_unitary(n, rng);
  // the Theorem construction: conjugators (V U, U), witness V
  const std::vector<Matrix> conj{v * u, u};
  const std::vector<MatrixTuple> tuples{xi, xi};
  const MicrostateParams p{n, 2, 0.35, 2.35};
  const std::vector<std::vector<Matrix>> with_v{{v}};
  const auto good = in_gamma_orb_presence(conj, tuples, *target, with_v, p);
  CHECK(good.member);
  CHECK(good.witness_index == 0);

  const std::vector<std::vector<Matrix>> with_id{{Matrix::Identity(n, n)}};
  const MicrostateParams p1{n, 1, 0.5, 2.5};
  const auto bad = in_gamma_orb_presence(conj, tuples, *target, with_id, p1);
  CHECK_FALSE(bad.member);  // |tr(I) - tau(v)| = 1 at the v word

  CHECK_THROWS_AS(in_gamma_orb_presence(conj, tuples, *target, {}, p), Error);
}

TEST_CASE("presence with huge delta accepts any witness") {
  const int n = 8;
  const auto target = make_conjugated_family_oracle(
      make_semicircular_oracle(1), {SpectralMeasure::haar()});
  const MatrixTuple xi = semicircle_rep(n);
  Rng rng({31, 0});
  const std::vector<Matrix> conj{sample_haar_unitary(n, rng),
                                 sample_haar_unitary(n, rng)};
  const std::vector<MatrixTuple> tuples{xi, xi};
  const MicrostateParams p{n, 2, 50.0, std::numeric_limits<double>::infinity()};
  const std::vector<std::vector<Matrix>> ws{{Matrix::Identity(n, n)}};
  CHECK(in_gamma_orb_presence(conj, tuples, *target, ws, p).member);
}

TEST_CASE("presence membership implies membership on the family alphabet") {
  const int n = 24;
  const auto full = make_conjugated_family_oracle(
      make_semicircular_oracle(1), {SpectralMeasure::haar()});
  const auto family = restrict_to_prefix_groups(full, 2);
  const MatrixTuple xi = semicircle_rep(n);
  const std::vector<MatrixTuple> tuples{xi, xi};
  Rng rng({37, 0});
  int checked = 0;
  for (int t = 0; t < 12; ++t) {
    const Matrix v = sample_haar_unitary(n, rng);
    const Matrix u = sample_haar_unitary(n, rng);
    const std::vector<Matrix> conj{v * u, u};
    const MicrostateParams p{n, 2, 0.25 + 0.1 * (t % 3), 3.0};
    const std::vector<std::vector<Matrix>> ws{{v}};
    const auto pres = in_gamma_orb_presence(conj, tuples, *full, ws, p);
    if (!pres.member) continue;
    ++checked;
    CHECK(in_gamma_orb(conj, tuples, *family, p).member);
  }
  CHECK(checked > 0);
}

TEST_CASE("is_m_eps_free: one set is always free (deviation 0)") {
  Rng rng({41, 0});
  const MatrixTuple sets[1] = {MatrixTuple::selfadjoint({sample_gue(32, rng)})};
  const auto res = is_m_eps_free(sets, 4, 1e-12);
  CHECK(res.free);
  CHECK(res.max_deviation < 1e-12);
}

TEST_CASE("is_m_eps_free: identical copies fail at the cross word") {
  // Omega_0 = Omega_1 = {A}, tr A = 0, tr A^2 = 1: word a(0) a(1) has
  // phi = 1 but phi* = 0.
  const MatrixTuple a = semicircle_rep(64);
  const MatrixTuple sets[2] = {a, a};
  const auto res = is_m_eps_free(sets, 2, 0.5);
  CHECK_FALSE(res.free);
  CHECK(res.max_deviation > 0.9);
}

TEST_CASE("is_m_eps_free: haar-rotated copy is usually free at desk scale") {
  const MatrixTuple a = semicircle_rep(128);
  Rng rng({43, 0});
  int hits = 0;
  for (int t = 0; t < 10; ++t) {
    const Matrix u = sample_haar_unitary(128, rng);
    MatrixTuple rotated;
    rotated.dim = 128;
    rotated.slots.push_back({u * a.mat(0) * u.adjoint(), SlotKind::SelfAdjoint});
    const MatrixTuple sets[2] = {a, rotated};
    if (is_m_eps_free(sets, 4, 0.15, kDefaultDegreeCap, ScanPolicy::EarlyExit)
            .free)
      ++hits;
  }
  CHECK(hits >= 9);
}

TEST_CASE("is_m_eps_free: unitary elements contribute their adjoints") {
  Rng rng({44, 0});
  const int n = 32;
  MatrixTuple vs;
  vs.dim = n;
  vs.slots.push_back({sample_haar_unitary(n, rng), SlotKind::Unitary});
  const MatrixTuple sets[2] = {vs, semicircle_rep(n)};
  // with only one scan letter per set this would be 2 letters; the starred
  // unitary makes 3, so the full scan covers 3 + 9 + 27 words at m = 3
  const auto res = is_m_eps_free(sets, 3, 10.0);
  CHECK(res.free);
  CHECK(res.complete);
}

TEST_CASE("is_m_eps_free: degree cap error") {
  const MatrixTuple sets[1] = {semicircle_rep(8)};
  CHECK_THROWS_AS(is_m_eps_free(sets, 13, 0.1, 12), DegreeCapError);
}

TEST_CASE("reduce_last_to_identity basics") {
  Rng rng({47, 0});
  const Matrix u = sample_haar_unitary(16, rng);
  const std::vector<Matrix> pair{u, u};
  const auto reduced = reduce_last_to_identity(pair);
  CHECK((reduced[0] - Matrix::Identity(16, 16)).norm() < 1e-12);
  CHECK((reduced[1] - Matrix::Identity(16, 16)).norm() < 1e-12);

  const std::vector<Matrix> with_id{u, Matrix::Identity(16, 16)};
  const auto same = reduce_last_to_identity(with_id);
  CHECK((same[0] - u).norm() < 1e-12);

  const std::vector<Matrix> single{u};
  CHECK_THROWS_AS(reduce_last_to_identity(single), Error);
}

TEST_CASE("remark 2: reduction preserves orbital membership exactly") {
  const auto target = make_free_product_oracle(
      {make_semicircular_oracle(1, "x1"), make_semicircular_oracle(1, "x2"),
       make_semicircular_oracle(1, "x3")});
  const MatrixTuple a = semicircle_rep(32);
  int agreements = 0, excluded = 0;
  for (int t = 0; t < 30; ++t) {
    Rng rng({53, static_cast<std::uint64_t>(t)});
    const int n = 2 + (t % 2);
    std::vector<Matrix> us;
    std::vector<MatrixTuple> tuples;
    for (int i = 0; i < n; ++i) {
      us.push_back(sample_haar_unitary(32, rng));
      tuples.push_back(a);
    }
    const auto sub_target = n == 3 ? target : restrict_to_prefix_groups(target, 2);
    const MicrostateParams p{32, 1 + (t % 4), 0.05 + 0.45 * rng.uniform(), 3.0};
    const auto lhs = in_gamma_orb(us, tuples, *sub_target, p);
    const auto rhs =
        in_gamma_orb(reduce_last_to_identity(us), tuples, *sub_target, p);
    if (lhs.boundary || rhs.boundary) {
      ++excluded;
      continue;
    }
    CHECK(lhs.member == rhs.member);
    ++agreements;
  }
  CHECK(agreements + excluded == 30);
  CHECK(agreements > 0);
}

TEST_CASE("membership is monotone in (m, delta)") {
  const auto target = make_free_product_oracle(
      {make_semicircular_oracle(1, "x1"), make_semicircular_oracle(1, "x2")});
  const MatrixTuple a = semicircle_rep(48);
  const std::vector<MatrixTuple> tuples{a, a};
  for (int t = 0; t < 10; ++t) {
    Rng rng({59, static_cast<std::uint64_t>(t)});
    const std::vector<Matrix> us{sample_haar_unitary(48, rng),
                                 sample_haar_unitary(48, rng)};
    const double delta = 0.05 + 0.3 * rng.uniform();
    const MicrostateParams strict{48, 4, delta * 0.8, 2.5};
    const MicrostateParams loose{48, 2, delta, 2.5};
    if (in_gamma_orb(us, tuples, *target, strict).member)
      CHECK(in_gamma_orb(us, tuples, *target, loose).member);
  }
}

TEST_CASE("clopper-pearson endpoints") {
  auto [lo0, hi0] = clopper_pearson(0, 20);
  CHECK(lo0 == 0.0);
  CHECK(hi0 == Approx(1.0 - std::pow(0.025, 1.0 / 20)).epsilon(1e-9));
  auto [loN, hiN] = clopper_pearson(20, 20);
  CHECK(hiN == 1.0);
  CHECK(loN == Approx(std::pow(0.025, 1.0 / 20)).epsilon(1e-9));
  auto [lo, hi] = clopper_pearson(10, 20);
  CHECK(lo < 0.5);
  CHECK(hi > 0.5);
}

TEST_CASE("estimate_volume: always-false and trivially-true predicates") {
  const MicrostateParams p{8, 1, 0.1, 1.0};
  const auto never = [](std::span<const Matrix>) { return TrialOutcome{false, false}; };
  const auto est0 = estimate_volume(never, 1, p, 50, {7, 7});
  CHECK(est0.hits == 0);
  CHECK(est0.p_hat == 0.0);
  CHECK(est0.log_proxy.is_neg_inf());
  CHECK(est0.ci_hi < 1.0);
  CHECK(!est0.log_proxy_hi.is_neg_inf());

  const auto always = [](std::span<const Matrix>) { return TrialOutcome{true, false}; };
  const auto est1 = estimate_volume(always, 1, p, 50, {7, 7});
  CHECK(est1.p_hat == 1.0);
  CHECK(est1.log_proxy.value == 0.0);
}

TEST_CASE("estimate_volume: n = 1 orbital volume is exactly 1 on a microstate") {
  const auto target = make_semicircular_oracle(1);
  const MicrostateParams p{48, 3, 0.1, 2.0};
  const MatrixTuple a = semicircle_rep(48);
  REQUIRE(in_gamma_R(a, *target, p).member);
  const MatrixTuple tuples[1] = {a};
  const auto pred = [&](std::span<const Matrix> us) -> TrialOutcome {
    const auto res = in_gamma_orb(us, tuples, *target, p, ScanPolicy::EarlyExit);
    return {res.member, res.boundary};
  };
  const auto est = estimate_volume(pred, 1, p, 40, {11, 0});
  CHECK(est.hits == 40);
  CHECK(est.p_hat == 1.0);
  CHECK(est.log_proxy.value == 0.0);
  CHECK(est.log_proxy.is_neg_inf() == false);
}

TEST_CASE("estimate_volume is bitwise reproducible across thread counts") {
  const MicrostateParams p{16, 2, 0.2, 1.0};
  const auto target = make_measure_oracle(SpectralMeasure::haar());
  const auto pred = [&](std::span<const Matrix> us) -> TrialOutcome {
    const auto res = in_gamma_u(us, *target, p, ScanPolicy::EarlyExit);
    return {res.member, res.boundary};
  };
  const auto a = estimate_volume(pred, 1, p, 60, {13, 5}, 1);
  const auto b = estimate_volume(pred, 1, p, 60, {13, 5}, 4);
  const auto c = estimate_volume(pred, 1, p, 60, {13, 5}, 3);
  CHECK(a.hits == b.hits);
  CHECK(a.hits == c.hits);
  CHECK(a.p_hat == b.p_hat);
  CHECK(a.ci_lo == b.ci_lo);
  CHECK(a.ci_hi == c.ci_hi);
}

TEST_CASE("volume log proxies are never positive") {
  const MicrostateParams p{8, 1, 0.3, 1.0};
  const auto target = make_measure_oracle(SpectralMeasure::haar());
  const auto pred = [&](std::span<const Matrix> us) -> TrialOutcome {
    const auto res = in_gamma_u(us, *target, p, ScanPolicy::EarlyExit);
    return {res.member, res.boundary};
  };
  const auto est = estimate_volume(pred, 1, p, 80, {17, 2});
  if (!est.log_proxy.is_neg_inf()) CHECK(est.log_proxy.value <= 0.0);
  CHECK(est.ci_lo <= est.p_hat);
  CHECK(est.p_hat <= est.ci_hi);
}
