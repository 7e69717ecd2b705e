// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbent/microstates.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include <boost/math/special_functions/beta.hpp>
#include <nlohmann/json.hpp>

#include "orbent/errors.hpp"

namespace orbent {

void MicrostateParams::validate() const {
  if (dim < 1) throw Error("microstate params need N >= 1");
  if (degree < 1) throw Error("microstate params need m >= 1");
  if (!(delta > 0)) throw Error("microstate params need delta > 0");
  if (!(norm_cap > 0)) throw Error("microstate params need R > 0");
}

namespace {

/// Sweeps all words of degree <= m through the evaluator, comparing against
/// the target. Shared by every Gamma-set predicate.
MembershipResult scan_words(const WordEvaluator& ev, const MomentOracle& target,
                            int max_degree, double delta, ScanPolicy policy) {
  MembershipResult res;
  res.member = true;
  ev.for_each_word(max_degree, [&](const StarWord& w, Complex tr) {
    const double dev = std::abs(tr - target.eval(w));
    if (dev > res.max_deviation) {
      res.max_deviation = dev;
      res.worst_word = w;
    }
    if (std::abs(dev - delta) < kBoundaryGuard) res.boundary = true;
    if (dev >= delta) {
      res.member = false;
      if (policy == ScanPolicy::EarlyExit) {
        res.complete = false;
        return false;
      }
    }
    return true;
  });
  return res;
}

}  // namespace

MembershipResult in_gamma_R(const MatrixTuple& a, const MomentOracle& target,
                            const MicrostateParams& p, ScanPolicy policy) {
  p.validate();
  if (a.dim != p.dim) throw DimensionError("tuple dimension != params N");
  if (a.slot_count() != target.signature().slot_count())
    throw DimensionError("tuple arity != target signature");
  if (std::isfinite(p.norm_cap)) {
    for (const auto& s : a.slots) {
      if (operator_norm(s.mat) > p.norm_cap + 1e-8) {
        MembershipResult res;
        res.member = false;
        res.max_deviation = std::numeric_limits<double>::infinity();
        res.complete = false;
        return res;
      }
    }
  }
  WordEvaluator ev(target.signature(), p.dim);
  for (int s = 0; s < a.slot_count(); ++s) ev.set_slot(s, &a.mat(s));
  return scan_words(ev, target, p.degree, p.delta, policy);
}

MembershipResult in_gamma_orb(std::span<const Matrix> u,
                              std::span<const MatrixTuple> a,
                              const MomentOracle& target,
                              const MicrostateParams& p, ScanPolicy policy) {
  p.validate();
  if (u.size() != a.size() || u.empty())
    throw DimensionError("in_gamma_orb needs one unitary per tuple, n >= 1");
  if (target.signature().group_count() != static_cast<int>(a.size()))
    throw DimensionError("target group count != number of tuples");
  WordEvaluator ev(target.signature(), p.dim);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].dim != p.dim || u[i].rows() != p.dim)
      throw DimensionError("dimension mismatch in orbital microstate");
    const int base = target.signature().first_slot(static_cast<int>(i));
    if (a[i].slot_count() !=
        static_cast<int>(target.signature().group(static_cast<int>(i)).kinds.size()))
      throw DimensionError("tuple arity != target group arity");
    for (int j = 0; j < a[i].slot_count(); ++j)
      ev.set_conjugated_slot(base + j, &u[i], &a[i].mat(j));
  }
  return scan_words(ev, target, p.degree, p.delta, policy);
}

MembershipResult in_gamma_u(std::span<const Matrix> v,
                            const MomentOracle& target,
                            const MicrostateParams& p, ScanPolicy policy) {
  p.validate();
  if (static_cast<int>(v.size()) != target.signature().slot_count())
    throw DimensionError("unitary count != target signature");
  WordEvaluator ev(target.signature(), p.dim);
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i].rows() != p.dim) throw DimensionError("unitary dimension != N");
    ev.set_slot(static_cast<int>(i), &v[i]);
  }
  return scan_words(ev, target, p.degree, p.delta, policy);
}

PresenceResult in_gamma_orb_presence(std::span<const Matrix> u,
                                     std::span<const MatrixTuple> a,
                                     const MomentOracle& target_with_v,
                                     std::span<const std::vector<Matrix>> witnesses,
                                     const MicrostateParams& p,
                                     ScanPolicy policy) {
  p.validate();
  if (witnesses.empty()) throw Error("presence variant needs a witness list");
  const VariableSignature& sig = target_with_v.signature();
  const int groups = sig.group_count();
  if (groups != static_cast<int>(a.size()) + 1)
    throw DimensionError("target must have one v group after the family groups");
  if (u.size() != a.size())
    throw DimensionError("one unitary per family tuple required");

  PresenceResult out;
  bool have_best = false;
  for (size_t w = 0; w < witnesses.size(); ++w) {
    const auto& witness = witnesses[w];
    if (static_cast<int>(witness.size()) !=
        static_cast<int>(sig.group(groups - 1).kinds.size()))
      throw DimensionError("witness arity != v group arity");
    WordEvaluator ev(sig, p.dim);
    for (size_t i = 0; i < a.size(); ++i) {
      const int base = sig.first_slot(static_cast<int>(i));
      for (int j = 0; j < a[i].slot_count(); ++j)
        ev.set_conjugated_slot(base + j, &u[i], &a[i].mat(j));
    }
    const int vbase = sig.first_slot(groups - 1);
    for (size_t i = 0; i < witness.size(); ++i)
      ev.set_slot(vbase + static_cast<int>(i), &witness[i]);

    MembershipResult res =
        scan_words(ev, target_with_v, p.degree, p.delta, ScanPolicy::EarlyExit);
    if (res.member) {
      if (policy == ScanPolicy::Full)
        res = scan_words(ev, target_with_v, p.degree, p.delta, ScanPolicy::Full);
      out.member = true;
      out.witness_index = static_cast<int>(w);
      out.best = res;
      return out;
    }
    if (!have_best || res.max_deviation < out.best.max_deviation) {
      out.best = res;
      have_best = true;
    }
  }
  return out;
}

namespace {

struct LabelledLetter {
  int set = 0;
  int element = 0;
  bool star = false;
};

}  // namespace

FreenessResult is_m_eps_free(std::span<const MatrixTuple> sets, int m, double eps,
                             int degree_cap, ScanPolicy policy) {
  if (sets.empty()) throw Error("freeness check needs >= 1 set");
  if (m > degree_cap) throw DegreeCapError(m, degree_cap);
  const int dim = sets.front().dim;
  for (const auto& s : sets)
    if (s.dim != dim) throw DimensionError("freeness sets must share N");

  // Factor states are the sets' empirical distributions.
  std::vector<OraclePtr> factors;
  factors.reserve(sets.size());
  for (size_t i = 0; i < sets.size(); ++i)
    factors.push_back(
        make_empirical_oracle(sets[i], "w" + std::to_string(i + 1)));
  const auto product = make_free_product_oracle(factors, degree_cap);

  // Labelled alphabet: (set, element, star?) with adjoints for unitaries.
  std::vector<LabelledLetter> alphabet;
  std::vector<int> slot_offset(sets.size(), 0);
  {
    int off = 0;
    for (size_t i = 0; i < sets.size(); ++i) {
      slot_offset[i] = off;
      for (int e = 0; e < sets[i].slot_count(); ++e) {
        alphabet.push_back({static_cast<int>(i), e, false});
        if (sets[i].slots[static_cast<size_t>(e)].kind == SlotKind::Unitary)
          alphabet.push_back({static_cast<int>(i), e, true});
      }
      off += sets[i].slot_count();
    }
  }

  FreenessResult res;
  res.free = true;
  if (alphabet.empty() || m < 1) return res;

  std::vector<Matrix> stack(static_cast<size_t>(m));
  StarWord word;  // over the concatenated free-product signature
  const double n = static_cast<double>(dim);

  std::function<bool(int)> descend = [&](int depth) -> bool {
    for (const LabelledLetter& l : alphabet) {
      const Matrix& base = sets[static_cast<size_t>(l.set)].mat(l.element);
      const Matrix factor = l.star ? Matrix(base.adjoint()) : base;
      if (depth == 0)
        stack[0] = factor;
      else
        stack[static_cast<size_t>(depth)] =
            stack[static_cast<size_t>(depth - 1)] * factor;
      word.letters.push_back(
          Letter{slot_offset[static_cast<size_t>(l.set)] + l.element, l.star});

      const Complex phi = stack[static_cast<size_t>(depth)].trace() / n;
      const Complex phi_star = product->eval(word);
      const double dev = std::abs(phi - phi_star);
      if (dev > res.max_deviation) res.max_deviation = dev;
      if (dev >= eps) {
        res.free = false;
        if (policy == ScanPolicy::EarlyExit) {
          res.complete = false;
          return false;
        }
      }
      if (depth + 1 < m && !descend(depth + 1)) return false;
      word.letters.pop_back();
    }
    return true;
  };
  descend(0);
  return res;
}

std::vector<Matrix> reduce_last_to_identity(std::span<const Matrix> u) {
  if (u.size() < 2) throw Error("reduce_last_to_identity needs n >= 2");
  const Matrix last_adj = u.back().adjoint();
  std::vector<Matrix> out;
  out.reserve(u.size());
  for (size_t i = 0; i + 1 < u.size(); ++i) out.push_back(last_adj * u[i]);
  out.push_back(Matrix::Identity(u.back().rows(), u.back().cols()));
  return out;
}

std::pair<double, double> clopper_pearson(std::int64_t hits, std::int64_t trials,
                                          double alpha) {
  if (trials < 1) throw Error("interval needs trials >= 1");
  if (hits < 0 || hits > trials) throw Error("hits outside [0, trials]");
  const double h = static_cast<double>(hits);
  const double t = static_cast<double>(trials);
  const double lo =
      hits == 0 ? 0.0 : boost::math::ibeta_inv(h, t - h + 1.0, alpha / 2);
  const double hi = hits == trials
                        ? 1.0
                        : boost::math::ibeta_inv(h + 1.0, t - h, 1.0 - alpha / 2);
  return {lo, hi};
}

namespace {

ExtendedReal log_proxy_of(double p, int dim) {
  if (p <= 0.0) return ExtendedReal::neg_infinity();
  return ExtendedReal::finite(std::log(p) /
                              (static_cast<double>(dim) * static_cast<double>(dim)));
}

}  // namespace

void parallel_for(std::int64_t n, int threads,
                  const std::function<void(std::int64_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  const int workers = static_cast<int>(std::min<std::int64_t>(threads, n));
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

VolumeEstimate estimate_volume(
    const std::function<TrialOutcome(std::span<const Matrix>)>& pred, int k,
    const MicrostateParams& p, std::int64_t trials, RngStream stream,
    int threads) {
  p.validate();
  if (trials < 1) throw Error("estimate_volume needs trials >= 1");
  if (k < 1) throw Error("estimate_volume needs k >= 1 unitaries");

  // Per-trial outcomes land in preallocated slots; the reduction below is
  // then independent of scheduling.
  std::vector<TrialOutcome> outcomes(static_cast<size_t>(trials));
  parallel_for(trials, threads, [&](std::int64_t t) {
    Rng rng(substream(stream, static_cast<std::uint64_t>(t)));
    std::vector<Matrix> us;
    us.reserve(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) us.push_back(sample_haar_unitary(p.dim, rng));
    outcomes[static_cast<size_t>(t)] = pred(us);
  });

  VolumeEstimate est;
  est.trials = trials;
  for (const auto& o : outcomes) {
    if (o.hit) ++est.hits;
    if (o.boundary) ++est.boundary_trials;
  }
  est.p_hat = static_cast<double>(est.hits) / static_cast<double>(trials);
  std::tie(est.ci_lo, est.ci_hi) = clopper_pearson(est.hits, trials);
  est.log_proxy = log_proxy_of(est.p_hat, p.dim);
  est.log_proxy_lo = log_proxy_of(est.ci_lo, p.dim);
  est.log_proxy_hi = log_proxy_of(est.ci_hi, p.dim);
  return est;
}

nlohmann::json VolumeEstimate::to_json() const {
  return nlohmann::json{{"hits", hits},
                        {"trials", trials},
                        {"pHat", p_hat},
                        {"ci", {ci_lo, ci_hi}},
                        {"logProxy", log_proxy.to_json()},
                        {"logProxyCI", {log_proxy_lo.to_json(), log_proxy_hi.to_json()}},
                        {"boundaryTrials", boundary_trials}};
}

}  // namespace orbent
