// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <filesystem>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "orbent/measures.hpp"
#include "orbent/rng.hpp"
#include "orbent/words.hpp"

namespace orbent {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

struct TupleSlot {
  Matrix mat;
  SlotKind kind = SlotKind::SelfAdjoint;
};

/// A tuple of N x N matrices with per-slot kind flags and an operator-norm
/// cap (infinity by default).
struct MatrixTuple {
  int dim = 0;
  std::vector<TupleSlot> slots;
  double norm_cap = std::numeric_limits<double>::infinity();

  int slot_count() const { return static_cast<int>(slots.size()); }
  const Matrix& mat(int s) const { return slots.at(static_cast<size_t>(s)).mat; }

  /// Single-group signature ("a" by default) matching the slot kinds.
  VariableSignature signature(const std::string& label = "a") const;

  /// Checks dimensions, self-adjointness / unitarity within tolerance, and
  /// the norm cap (reject-and-report; matrices are never clipped).
  void validate(double sa_tol = 1e-10, double unitary_tol = 1e-8) const;

  static MatrixTuple selfadjoint(std::vector<Matrix> mats,
                                 double norm_cap = std::numeric_limits<double>::infinity());
  static MatrixTuple unitary(std::vector<Matrix> mats);
};

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the diagonal
/// phases of R absorbed into Q. Without the phase correction the law of the
/// bare Householder Q is not Haar.
Matrix sample_haar_unitary(int N, Rng& rng);

/// GUE normalized so tr_N(A^2) -> 1: hermitized Ginibre with entry variance 1/N.
Matrix sample_gue(int N, Rng& rng);

/// Diagonal unitary whose j-th eigenvalue is e^{i theta} at the mu-quantile of
/// (j - 1/2)/N. Midpoint quantiles avoid double-counting boundary atoms; for
/// purely atomic mu with masses k/N the moments are exact.
Matrix quantile_diagonal(const SpectralMeasure& mu, int N);

/// Real-diagonal self-adjoint analogue for laws on the real line.
Matrix quantile_diagonal(const RealLineMeasure& law, int N);

/// Largest singular value by power iteration on A*A (deterministic start,
/// <= 500 iterations, relative tolerance 1e-6). Throws NormConvergenceError
/// carrying the best estimate when it fails to settle.
double operator_norm(const Matrix& a);

/// Evaluates traces of words against per-slot factor chains. A slot may stand
/// for a single matrix or for a conjugated product U A U*; starred letters
/// use the reversed chain with adjoint flags flipped.
class WordEvaluator {
 public:
  WordEvaluator(const VariableSignature& sig, int dim);

  static WordEvaluator direct(const MatrixTuple& t,
                              const std::string& label = "a");

  void set_slot(int slot, const Matrix* m);
  void set_conjugated_slot(int slot, const Matrix* u, const Matrix* a);

  const VariableSignature& signature() const { return sig_; }
  int dim() const { return dim_; }

  /// Normalized trace tr_N of the word product; the empty word gives 1.
  Complex trace(const StarWord& w) const;

  /// Visits every word of degree 1..max_degree (depth-first over the letter
  /// alphabet, prefix products shared). Stops early when `visit` returns
  /// false. The visited set equals enumerate_words(signature, max_degree).
  void for_each_word(
      int max_degree,
      const std::function<bool(const StarWord&, Complex)>& visit) const;

 private:
  const Matrix& letter_matrix(const Letter& l) const;

  VariableSignature sig_;
  int dim_ = 0;
  // Materialized matrix per (slot, star); adjoints stored explicitly so the
  // DFS costs one multiply per node.
  std::vector<Matrix> plain_;
  std::vector<Matrix> starred_;
  std::vector<bool> ready_;
};

/// tr_N(h(T)): letters index the tuple's slots directly.
Complex evaluate_trace(const StarWord& w, const MatrixTuple& t);

/// tr_N over word slots expanded as U_i A_i U_i* without materializing the
/// conjugated tuple: conjugation[s] supplies the unitary for slot s (nullptr
/// for plain slots).
Complex evaluate_trace(const StarWord& w, const MatrixTuple& t,
                       std::span<const Matrix* const> conjugation);

/// Binary container (dimension header + row-major complex doubles) for
/// experiment replay.
void save_matrix_tuple(const std::filesystem::path& path, const MatrixTuple& t);
MatrixTuple load_matrix_tuple(const std::filesystem::path& path);

}  // namespace orbent
