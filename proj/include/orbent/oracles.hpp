// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "orbent/matrixlab.hpp"
#include "orbent/measures.hpp"
#include "orbent/words.hpp"

namespace orbent {

inline constexpr int kDefaultDegreeCap = 12;

/// Target moment map tau(h(.)) over a fixed signature. Oracles are immutable
/// after construction; eval memoizes on the normalized word under a mutex so
/// concurrent lookups are safe.
class MomentOracle {
 public:
  enum class Exactness { Exact, Quadrature, Empirical };

  virtual ~MomentOracle() = default;

  const VariableSignature& signature() const { return sig_; }
  Exactness exactness() const { return exactness_; }
  /// Operator-norm bound R for microstate caps; one value per slot.
  double norm_bound(int slot) const;

  Complex eval(const StarWord& w) const;

 protected:
  MomentOracle(VariableSignature sig, Exactness exactness,
               std::vector<double> norm_bounds);
  virtual Complex eval_impl(const StarWord& normalized) const = 0;

 private:
  VariableSignature sig_;
  Exactness exactness_;
  std::vector<double> norm_bounds_;
  mutable std::mutex memo_mutex_;
  mutable std::unordered_map<std::string, Complex> memo_;
};

using OraclePtr = std::shared_ptr<const MomentOracle>;

/// Number of noncrossing pair partitions of the word's positions pairing only
/// equal slots; 0 for odd degree. Stars are ignored (self-adjoint letters).
double semicircular_moment(const StarWord& w);

/// Standard free semicircular family X = (X_1,...,X_r), tau(X_j^2) = 1.
OraclePtr make_semicircular_oracle(int r, std::string label = "x");

/// Single unitary with spectral measure mu: tau(word) = moment(mu, k) where k
/// counts unstarred minus starred letters.
OraclePtr make_measure_oracle(SpectralMeasure mu, std::string label = "v");

/// Normalized-trace moments of a concrete matrix tuple; exactness Empirical,
/// R = max slot operator norm.
OraclePtr make_empirical_oracle(MatrixTuple t, std::string label = "a");

/// Reduced free product of the factor states. Words over the concatenated
/// signature are evaluated by the centering recursion: letters split as
/// a = (a - tau(a)) + tau(a), fully centered alternating words vanish, and
/// same-factor runs merge into the factor oracle. Cost is exponential in the
/// degree, hence the cap.
class FreeProductOracle final : public MomentOracle {
 public:
  FreeProductOracle(std::vector<OraclePtr> factors, int degree_cap);

  int degree_cap() const { return degree_cap_; }
  int factor_count() const { return static_cast<int>(factors_.size()); }
  const OraclePtr& factor(int i) const { return factors_.at(static_cast<size_t>(i)); }
  int factor_of_slot(int slot) const;
  int local_slot(int slot) const;

 protected:
  Complex eval_impl(const StarWord& normalized) const override;

 private:
  struct Run {
    int factor;
    std::vector<Letter> letters;  // local to the factor signature
  };
  using RunWord = std::vector<Run>;

  Complex eval_runs(const RunWord& runs) const;
  Complex factor_value(const Run& run) const;
  static std::string run_key(const RunWord& runs);

  std::vector<OraclePtr> factors_;
  std::vector<int> factor_of_slot_;
  std::vector<int> local_slot_;
  int degree_cap_;
  mutable std::mutex runs_mutex_;
  mutable std::unordered_map<std::string, Complex> runs_memo_;
};

std::shared_ptr<const FreeProductOracle> make_free_product_oracle(
    std::vector<OraclePtr> factors, int degree_cap = kDefaultDegreeCap);

/// phi^{*I} of a colored word; letters carry their factor through the
/// concatenated signature's slot ranges.
Complex free_product_moment(const std::vector<OraclePtr>& factors,
                            const StarWord& word_over_concat,
                            int degree_cap = kDefaultDegreeCap);

/// Joint distribution of (v_1 X v_1*, ..., v_n X v_n*, X, v) where X follows
/// `x` (single-group oracle), the v_i have spectral measures `v_measures`,
/// and X, v_1, ..., v_n are freely independent. Words over the extended
/// alphabet are conjugation-expanded and fed to the free product.
class ConjugatedFamilyOracle final : public MomentOracle {
 public:
  ConjugatedFamilyOracle(OraclePtr x, std::vector<SpectralMeasure> v_measures,
                         int degree_cap);

  const ConjugationMap& map() const { return map_; }
  /// Signature restricted to the family part (conjugated copies + plain X),
  /// i.e. everything except the trailing v group.
  VariableSignature family_signature() const;

 protected:
  Complex eval_impl(const StarWord& normalized) const override;

 private:
  ConjugationMap map_;
  std::shared_ptr<const FreeProductOracle> product_;
  int n_;
  int x_arity_;
  int degree_cap_;  // on the extended word; the expansion may triple it
};

std::shared_ptr<const ConjugatedFamilyOracle> make_conjugated_family_oracle(
    OraclePtr x, std::vector<SpectralMeasure> v_measures,
    int degree_cap = kDefaultDegreeCap);

/// View of an oracle restricted to a prefix of its groups (slot indices are
/// shared). Used to drop the trailing v alphabet from presence targets.
OraclePtr restrict_to_prefix_groups(OraclePtr full, int group_count);

}  // namespace orbent
