// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbent/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

#include "orbent/errors.hpp"

namespace orbent {

namespace {

std::string word_key(const StarWord& w) {
  std::string key;
  key.reserve(w.letters.size());
  for (const Letter& l : w.letters) {
    if (l.slot >= 127) throw WordError("slot index too large for word key");
    key.push_back(static_cast<char>((l.slot << 1) | (l.star ? 1 : 0)));
  }
  return key;
}

}  // namespace

MomentOracle::MomentOracle(VariableSignature sig, Exactness exactness,
                           std::vector<double> norm_bounds)
    : sig_(std::move(sig)),
      exactness_(exactness),
      norm_bounds_(std::move(norm_bounds)) {
  if (norm_bounds_.size() != static_cast<size_t>(sig_.slot_count()))
    throw Error("norm bound count must match slot count");
}

double MomentOracle::norm_bound(int slot) const {
  return norm_bounds_.at(static_cast<size_t>(slot));
}

Complex MomentOracle::eval(const StarWord& w) const {
  if (w.empty()) return {1.0, 0.0};
  const StarWord nw = normalize(sig_, w);
  const std::string key = word_key(nw);
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  const Complex value = eval_impl(nw);
  std::lock_guard<std::mutex> lock(memo_mutex_);
  memo_.emplace(key, value);
  return value;
}

double semicircular_moment(const StarWord& w) {
  const int n = w.degree();
  if (n == 0) return 1.0;
  if (n % 2 != 0) return 0.0;
  // f(i, j) = noncrossing color-matching pairings of positions [i, j).
  // Pair position i with k (same slot, odd gap), splitting inside/outside.
  std::vector<std::vector<double>> memo(
      static_cast<size_t>(n + 1),
      std::vector<double>(static_cast<size_t>(n + 1), -1.0));
  std::function<double(int, int)> count = [&](int i, int j) -> double {
    if (i >= j) return 1.0;
    if ((j - i) % 2 != 0) return 0.0;
    double& m = memo[static_cast<size_t>(i)][static_cast<size_t>(j)];
    if (m >= 0) return m;
    double total = 0;
    for (int k = i + 1; k < j; k += 2) {
      if (w.letters[static_cast<size_t>(k)].slot ==
          w.letters[static_cast<size_t>(i)].slot)
        total += count(i + 1, k) * count(k + 1, j);
    }
    return m = total;
  };
  return count(0, n);
}

namespace {

class SemicircularOracle final : public MomentOracle {
 public:
  SemicircularOracle(int r, std::string label)
      : MomentOracle(
            VariableSignature({make_group(std::move(label), r, SlotKind::SelfAdjoint)}),
            Exactness::Exact, std::vector<double>(static_cast<size_t>(r), 2.0)) {}

 protected:
  Complex eval_impl(const StarWord& w) const override {
    return {semicircular_moment(w), 0.0};
  }
};

class MeasureOracle final : public MomentOracle {
 public:
  MeasureOracle(SpectralMeasure mu, std::string label)
      : MomentOracle(
            VariableSignature({make_group(std::move(label), 1, SlotKind::Unitary)}),
            mu.density.empty() ? Exactness::Exact : Exactness::Quadrature, {1.0}),
        mu_(std::move(mu)) {
    mu_.validate();
  }

 protected:
  Complex eval_impl(const StarWord& w) const override {
    // The algebra of one normal unitary is commutative: only the signed
    // star count matters.
    std::int64_t k = 0;
    for (const Letter& l : w.letters) k += l.star ? -1 : 1;
    return measure_moment(mu_, k);
  }

 private:
  SpectralMeasure mu_;
};

class EmpiricalOracle final : public MomentOracle {
 public:
  EmpiricalOracle(MatrixTuple t, std::string label, std::vector<double> bounds)
      : MomentOracle(t.signature(label), Exactness::Empirical, std::move(bounds)),
        evaluator_(WordEvaluator::direct(t, label)),
        tuple_(std::make_shared<MatrixTuple>(std::move(t))) {}

 protected:
  Complex eval_impl(const StarWord& w) const override {
    return evaluator_.trace(w);
  }

 private:
  WordEvaluator evaluator_;
  std::shared_ptr<MatrixTuple> tuple_;
};

}  // namespace

OraclePtr make_semicircular_oracle(int r, std::string label) {
  return std::make_shared<SemicircularOracle>(r, std::move(label));
}

OraclePtr make_measure_oracle(SpectralMeasure mu, std::string label) {
  return std::make_shared<MeasureOracle>(std::move(mu), std::move(label));
}

OraclePtr make_empirical_oracle(MatrixTuple t, std::string label) {
  std::vector<double> bounds;
  bounds.reserve(t.slots.size());
  for (const auto& s : t.slots) bounds.push_back(operator_norm(s.mat));
  return std::make_shared<EmpiricalOracle>(std::move(t), std::move(label),
                                           std::move(bounds));
}

namespace {

// Weakest exactness across the factor states.
MomentOracle::Exactness combined_exactness(const std::vector<OraclePtr>& factors) {
  auto worst = MomentOracle::Exactness::Exact;
  for (const auto& f : factors) {
    if (f->exactness() == MomentOracle::Exactness::Empirical)
      return MomentOracle::Exactness::Empirical;
    if (f->exactness() == MomentOracle::Exactness::Quadrature)
      worst = MomentOracle::Exactness::Quadrature;
  }
  return worst;
}

}  // namespace

FreeProductOracle::FreeProductOracle(std::vector<OraclePtr> factors,
                                     int degree_cap)
    : MomentOracle(
          [&factors] {
            if (factors.empty()) throw Error("free product needs >= 1 factor");
            VariableSignature sig = factors.front()->signature();
            for (size_t i = 1; i < factors.size(); ++i)
              sig = concat_signatures(sig, factors[i]->signature());
            return sig;
          }(),
          combined_exactness(factors),
          [&factors] {
            std::vector<double> bounds;
            for (const auto& f : factors)
              for (int s = 0; s < f->signature().slot_count(); ++s)
                bounds.push_back(f->norm_bound(s));
            return bounds;
          }()),
      factors_(std::move(factors)),
      degree_cap_(degree_cap) {
  for (size_t i = 0; i < factors_.size(); ++i) {
    const int n = factors_[i]->signature().slot_count();
    for (int s = 0; s < n; ++s) {
      factor_of_slot_.push_back(static_cast<int>(i));
      local_slot_.push_back(s);
    }
  }
}

int FreeProductOracle::factor_of_slot(int slot) const {
  return factor_of_slot_.at(static_cast<size_t>(slot));
}

int FreeProductOracle::local_slot(int slot) const {
  return local_slot_.at(static_cast<size_t>(slot));
}

Complex FreeProductOracle::factor_value(const Run& run) const {
  return factors_[static_cast<size_t>(run.factor)]->eval(StarWord{run.letters});
}

std::string FreeProductOracle::run_key(const RunWord& runs) {
  std::string key;
  for (const Run& r : runs) {
    key.push_back(static_cast<char>(r.factor + 1));
    key.push_back(static_cast<char>(r.letters.size()));
    for (const Letter& l : r.letters)
      key.push_back(static_cast<char>((l.slot << 1) | (l.star ? 1 : 0)));
    key.push_back('\0');
  }
  return key;
}

Complex FreeProductOracle::eval_impl(const StarWord& w) const {
  if (w.degree() > degree_cap_) throw DegreeCapError(w.degree(), degree_cap_);
  RunWord runs;
  for (const Letter& l : w.letters) {
    const int f = factor_of_slot(l.slot);
    const Letter local{local_slot(l.slot), l.star};
    if (!runs.empty() && runs.back().factor == f)
      runs.back().letters.push_back(local);
    else
      runs.push_back(Run{f, {local}});
  }
  return eval_runs(runs);
}

Complex FreeProductOracle::eval_runs(const RunWord& runs) const {
  if (runs.empty()) return {1.0, 0.0};
  if (runs.size() == 1) return factor_value(runs.front());
  if (runs.size() > 20) {
    // The subset expansion is 2^k in the run count; refuse pathological
    // inputs rather than hang.
    throw DegreeCapError(static_cast<int>(runs.size()), 20);
  }
  const std::string key = run_key(runs);
  {
    std::lock_guard<std::mutex> lock(runs_mutex_);
    auto it = runs_memo_.find(key);
    if (it != runs_memo_.end()) return it->second;
  }

  // Alternating word a_1 ... a_k with c_i = phi(a_i). Expanding every letter
  // as (a_i - c_i) + c_i and using that the fully centered alternating word
  // has phi^* = 0 gives
  //   phi^*(a_[k]) = sum over proper subsets S of [k] of
  //                  (-1)^{k-|S|-1} (prod_{i not in S} c_i) phi^*(a_S),
  // where a_S is the (merged) subword at positions S.
  const int k = static_cast<int>(runs.size());
  std::vector<Complex> c(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<size_t>(i)] = factor_value(runs[static_cast<size_t>(i)]);

  Complex total{0.0, 0.0};
  const std::uint32_t full = (1u << k) - 1u;
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    Complex coeff{1.0, 0.0};
    for (int i = 0; i < k; ++i)
      if (!(mask & (1u << i))) coeff *= c[static_cast<size_t>(i)];
    if (coeff == Complex{0.0, 0.0}) continue;
    RunWord sub;
    for (int i = 0; i < k; ++i) {
      if (!(mask & (1u << i))) continue;
      const Run& r = runs[static_cast<size_t>(i)];
      if (!sub.empty() && sub.back().factor == r.factor)
        sub.back().letters.insert(sub.back().letters.end(), r.letters.begin(),
                                  r.letters.end());
      else
        sub.push_back(r);
    }
    const int removed = k - std::popcount(mask);
    const double sign = (removed % 2 == 1) ? 1.0 : -1.0;
    total += sign * coeff * eval_runs(sub);
  }

  std::lock_guard<std::mutex> lock(runs_mutex_);
  runs_memo_.emplace(key, total);
  return total;
}

std::shared_ptr<const FreeProductOracle> make_free_product_oracle(
    std::vector<OraclePtr> factors, int degree_cap) {
  return std::make_shared<FreeProductOracle>(std::move(factors), degree_cap);
}

Complex free_product_moment(const std::vector<OraclePtr>& factors,
                            const StarWord& word_over_concat, int degree_cap) {
  FreeProductOracle oracle(factors, degree_cap);
  return oracle.eval(word_over_concat);
}

namespace {

ConjugationMap build_conjugated_map(const VariableSignature& x_sig, int n,
                                    int x_arity) {
  // Extended alphabet: y1,...,yn (copies of X), x, v. Base alphabet: x, v.
  std::vector<VariableGroup> ext_groups;
  for (int i = 0; i < n; ++i)
    ext_groups.push_back(make_group("y" + std::to_string(i + 1), x_arity,
                                    SlotKind::SelfAdjoint));
  ext_groups.push_back(x_sig.group(0));
  ext_groups.push_back(make_group("v", n, SlotKind::Unitary));
  VariableSignature extended{std::move(ext_groups)};

  std::vector<VariableGroup> base_groups{x_sig.group(0),
                                         make_group("v", n, SlotKind::Unitary)};
  VariableSignature base{std::move(base_groups)};

  ConjugationMap map(std::move(extended), std::move(base));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < x_arity; ++j)
      map.set_conjugated(map.extended().slot_index(i, j),
                         map.base().slot_index(1, i),
                         map.base().slot_index(0, j));
  for (int j = 0; j < x_arity; ++j)
    map.set_plain(map.extended().slot_index(n, j), map.base().slot_index(0, j));
  for (int i = 0; i < n; ++i)
    map.set_plain(map.extended().slot_index(n + 1, i),
                  map.base().slot_index(1, i));
  return map;
}

}  // namespace

ConjugatedFamilyOracle::ConjugatedFamilyOracle(
    OraclePtr x, std::vector<SpectralMeasure> v_measures, int degree_cap)
    : MomentOracle(
          [&x, &v_measures] {
            if (x->signature().group_count() != 1)
              throw Error("conjugated family expects a single-group X oracle");
            const int n = static_cast<int>(v_measures.size());
            if (n < 1) throw Error("conjugated family needs >= 1 unitary");
            return build_conjugated_map(x->signature(), n,
                                        x->signature().slot_count())
                .extended();
          }(),
          x->exactness(),
          [&x, &v_measures] {
            const int n = static_cast<int>(v_measures.size());
            const int r = x->signature().slot_count();
            std::vector<double> bounds;
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < r; ++j) bounds.push_back(x->norm_bound(j));
            for (int j = 0; j < r; ++j) bounds.push_back(x->norm_bound(j));
            for (int i = 0; i < n; ++i) bounds.push_back(1.0);
            return bounds;
          }()),
      map_(build_conjugated_map(x->signature(),
                                static_cast<int>(v_measures.size()),
                                x->signature().slot_count())),
      n_(static_cast<int>(v_measures.size())),
      x_arity_(x->signature().slot_count()),
      degree_cap_(degree_cap) {
  std::vector<OraclePtr> factors;
  factors.push_back(std::move(x));
  for (size_t i = 0; i < v_measures.size(); ++i)
    factors.push_back(make_measure_oracle(std::move(v_measures[i]),
                                          "v" + std::to_string(i + 1)));
  // Conjugated letters triple in length under expansion.
  product_ = make_free_product_oracle(std::move(factors), 3 * degree_cap);
}

VariableSignature ConjugatedFamilyOracle::family_signature() const {
  std::vector<VariableGroup> groups;
  for (int g = 0; g + 1 < signature().group_count(); ++g)
    groups.push_back(signature().group(g));
  return VariableSignature{std::move(groups)};
}

Complex ConjugatedFamilyOracle::eval_impl(const StarWord& w) const {
  if (w.degree() > degree_cap_) throw DegreeCapError(w.degree(), degree_cap_);
  const StarWord base_word = conjugation_expand(map_, w);
  // The base alphabet (x, v) maps onto the free-product alphabet
  // (x factor, v1, ..., vn factors) slot for slot.
  return product_->eval(base_word);
}

std::shared_ptr<const ConjugatedFamilyOracle> make_conjugated_family_oracle(
    OraclePtr x, std::vector<SpectralMeasure> v_measures, int degree_cap) {
  return std::make_shared<ConjugatedFamilyOracle>(
      std::move(x), std::move(v_measures), degree_cap);
}

namespace {

class PrefixRestrictedOracle final : public MomentOracle {
 public:
  PrefixRestrictedOracle(OraclePtr full, int group_count)
      : MomentOracle(
            [&full, group_count] {
              std::vector<VariableGroup> groups;
              for (int g = 0; g < group_count; ++g)
                groups.push_back(full->signature().group(g));
              return VariableSignature{std::move(groups)};
            }(),
            full->exactness(),
            [&full, group_count] {
              std::vector<double> bounds;
              int slots = 0;
              for (int g = 0; g < group_count; ++g)
                slots += static_cast<int>(full->signature().group(g).kinds.size());
              for (int s = 0; s < slots; ++s) bounds.push_back(full->norm_bound(s));
              return bounds;
            }()),
        full_(std::move(full)) {}

 protected:
  Complex eval_impl(const StarWord& w) const override { return full_->eval(w); }

 private:
  OraclePtr full_;
};

}  // namespace

OraclePtr restrict_to_prefix_groups(OraclePtr full, int group_count) {
  return std::make_shared<PrefixRestrictedOracle>(std::move(full), group_count);
}

}  // namespace orbent
