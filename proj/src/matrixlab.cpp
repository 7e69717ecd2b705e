// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbent/matrixlab.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "orbent/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "matrix container assumes a little-endian host");

namespace orbent {

VariableSignature MatrixTuple::signature(const std::string& label) const {
  VariableGroup g;
  g.label = label;
  g.kinds.reserve(slots.size());
  for (const auto& s : slots) g.kinds.push_back(s.kind);
  return VariableSignature({std::move(g)});
}

void MatrixTuple::validate(double sa_tol, double unitary_tol) const {
  for (const auto& s : slots) {
    if (s.mat.rows() != dim || s.mat.cols() != dim)
      throw TupleError("matrix tuple slot has wrong dimension");
    if (s.kind == SlotKind::SelfAdjoint) {
      const double scale = std::max(1.0, s.mat.norm());
      if ((s.mat - s.mat.adjoint()).norm() > sa_tol * scale)
        throw TupleError("self-adjoint slot fails A = A*");
    } else {
      const Matrix gram = s.mat.adjoint() * s.mat;
      if ((gram - Matrix::Identity(dim, dim)).norm() > unitary_tol)
        throw TupleError("unitary slot fails U*U = I");
    }
    if (std::isfinite(norm_cap) && operator_norm(s.mat) > norm_cap + 1e-8)
      throw TupleError("slot operator norm exceeds cap R");
  }
}

MatrixTuple MatrixTuple::selfadjoint(std::vector<Matrix> mats, double norm_cap) {
  MatrixTuple t;
  t.dim = mats.empty() ? 0 : static_cast<int>(mats.front().rows());
  t.norm_cap = norm_cap;
  for (auto& m : mats) t.slots.push_back({std::move(m), SlotKind::SelfAdjoint});
  return t;
}

MatrixTuple MatrixTuple::unitary(std::vector<Matrix> mats) {
  MatrixTuple t;
  t.dim = mats.empty() ? 0 : static_cast<int>(mats.front().rows());
  for (auto& m : mats) t.slots.push_back({std::move(m), SlotKind::Unitary});
  return t;
}

Matrix sample_haar_unitary(int N, Rng& rng) {
  Matrix g(N, N);
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) g(i, j) = rng.complex_gaussian();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& qrmat = qr.matrixQR();
  // Absorb the phases of diag(R) so that R's diagonal becomes positive real;
  // only then is Q Haar-distributed.
  for (int j = 0; j < N; ++j) {
    const Complex r = qrmat(j, j);
    const double a = std::abs(r);
    const Complex phase = (a == 0.0) ? Complex{1.0, 0.0} : r / a;
    q.col(j) *= phase;
  }
  return q;
}

Matrix sample_gue(int N, Rng& rng) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  Matrix g(N, N);
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) g(i, j) = rng.complex_gaussian() * scale;
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  return (g + g.adjoint()) * inv_sqrt2;
}

Matrix quantile_diagonal(const SpectralMeasure& mu, int N) {
  Matrix d = Matrix::Zero(N, N);
  for (int j = 0; j < N; ++j) {
    const double p = (j + 0.5) / N;
    d(j, j) = std::polar(1.0, quantile_angle(mu, p));
  }
  return d;
}

Matrix quantile_diagonal(const RealLineMeasure& law, int N) {
  Matrix d = Matrix::Zero(N, N);
  for (int j = 0; j < N; ++j) d(j, j) = law.quantile((j + 0.5) / N);
  return d;
}

double operator_norm(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) return 0.0;
  Eigen::VectorXcd x = Eigen::VectorXcd::Ones(n);
  x(0) += Complex{0.25, 0.125};  // break symmetry deterministically
  x.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 500; ++it) {
    Eigen::VectorXcd y = a.adjoint() * (a * x);
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    const double next = std::sqrt(norm);
    y /= norm;
    if (it > 0 && std::abs(next - lambda) <= 1e-6 * std::max(next, 1e-300)) {
      return next;
    }
    lambda = next;
    x = std::move(y);
  }
  throw NormConvergenceError(lambda);
}

WordEvaluator::WordEvaluator(const VariableSignature& sig, int dim)
    : sig_(sig),
      dim_(dim),
      plain_(static_cast<size_t>(sig.slot_count())),
      starred_(static_cast<size_t>(sig.slot_count())),
      ready_(static_cast<size_t>(sig.slot_count()), false) {}

WordEvaluator WordEvaluator::direct(const MatrixTuple& t, const std::string& label) {
  WordEvaluator ev(t.signature(label), t.dim);
  for (int s = 0; s < t.slot_count(); ++s) ev.set_slot(s, &t.mat(s));
  return ev;
}

void WordEvaluator::set_slot(int slot, const Matrix* m) {
  if (m->rows() != dim_ || m->cols() != dim_)
    throw DimensionError("slot matrix dimension mismatch");
  plain_[static_cast<size_t>(slot)] = *m;
  starred_[static_cast<size_t>(slot)] = m->adjoint();
  ready_[static_cast<size_t>(slot)] = true;
}

void WordEvaluator::set_conjugated_slot(int slot, const Matrix* u, const Matrix* a) {
  if (u->rows() != dim_ || a->rows() != dim_ || u->cols() != dim_ ||
      a->cols() != dim_)
    throw DimensionError("conjugated slot dimension mismatch");
  Matrix m = (*u) * (*a) * u->adjoint();
  starred_[static_cast<size_t>(slot)] = m.adjoint();
  plain_[static_cast<size_t>(slot)] = std::move(m);
  ready_[static_cast<size_t>(slot)] = true;
}

const Matrix& WordEvaluator::letter_matrix(const Letter& l) const {
  if (l.slot < 0 || l.slot >= sig_.slot_count() ||
      !ready_[static_cast<size_t>(l.slot)])
    throw DimensionError("word references an unassigned slot");
  return l.star ? starred_[static_cast<size_t>(l.slot)]
                : plain_[static_cast<size_t>(l.slot)];
}

Complex WordEvaluator::trace(const StarWord& w) const {
  if (w.empty()) return {1.0, 0.0};
  Matrix p = letter_matrix(w.letters.front());
  for (size_t i = 1; i < w.letters.size(); ++i)
    p = p * letter_matrix(w.letters[i]);
  return p.trace() / static_cast<double>(dim_);
}

void WordEvaluator::for_each_word(
    int max_degree,
    const std::function<bool(const StarWord&, Complex)>& visit) const {
  std::vector<Letter> alphabet;
  for (int s = 0; s < sig_.slot_count(); ++s) {
    alphabet.push_back(Letter{s, false});
    if (sig_.slot_kind(s) == SlotKind::Unitary) alphabet.push_back(Letter{s, true});
  }
  if (alphabet.empty() || max_degree < 1) return;
  std::vector<Matrix> stack(static_cast<size_t>(max_degree));
  StarWord word;
  const double n = static_cast<double>(dim_);
  // Depth-first: each node costs one multiply against the parent product.
  std::function<bool(int)> descend = [&](int depth) -> bool {
    for (const Letter& l : alphabet) {
      const Matrix& m = letter_matrix(l);
      if (depth == 0)
        stack[0] = m;
      else
        stack[static_cast<size_t>(depth)] = stack[static_cast<size_t>(depth - 1)] * m;
      word.letters.push_back(l);
      const bool keep = visit(word, stack[static_cast<size_t>(depth)].trace() / n);
      if (!keep) return false;
      if (depth + 1 < max_degree && !descend(depth + 1)) return false;
      word.letters.pop_back();
    }
    return true;
  };
  descend(0);
}

Complex evaluate_trace(const StarWord& w, const MatrixTuple& t) {
  if (w.empty()) return {1.0, 0.0};
  const double n = static_cast<double>(t.dim);
  Matrix p;
  bool first = true;
  for (const Letter& l : w.letters) {
    if (l.slot < 0 || l.slot >= t.slot_count())
      throw DimensionError("word slot outside tuple");
    const Matrix& m = t.mat(l.slot);
    if (m.rows() != t.dim) throw DimensionError("tuple slot dimension mismatch");
    if (first) {
      p = l.star ? Matrix(m.adjoint()) : m;
      first = false;
    } else {
      p = l.star ? (p * m.adjoint()).eval() : (p * m).eval();
    }
  }
  return p.trace() / n;
}

Complex evaluate_trace(const StarWord& w, const MatrixTuple& t,
                       std::span<const Matrix* const> conjugation) {
  if (w.empty()) return {1.0, 0.0};
  const double n = static_cast<double>(t.dim);
  Matrix p = Matrix::Identity(t.dim, t.dim);
  for (const Letter& l : w.letters) {
    if (l.slot < 0 || l.slot >= t.slot_count())
      throw DimensionError("word slot outside tuple");
    const Matrix& m = t.mat(l.slot);
    const Matrix* u = l.slot < static_cast<int>(conjugation.size())
                          ? conjugation[static_cast<size_t>(l.slot)]
                          : nullptr;
    // U A U* (or its adjoint) multiplied through without forming the
    // conjugated tuple.
    if (u) {
      if (u->rows() != t.dim) throw DimensionError("conjugating unitary dimension");
      p = p * (*u);
      p = l.star ? (p * m.adjoint()).eval() : (p * m).eval();
      p = p * u->adjoint();
    } else {
      p = l.star ? (p * m.adjoint()).eval() : (p * m).eval();
    }
  }
  return p.trace() / n;
}

namespace {

constexpr char kMagic[8] = {'O', 'R', 'B', 'M', 'T', '1', '\n', '\0'};

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void save_matrix_tuple(const std::filesystem::path& path, const MatrixTuple& t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path.string() + "' for writing");
  os.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(t.dim));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(t.slot_count()));
  put<double>(os, t.norm_cap);
  for (const auto& s : t.slots) {
    put<std::uint8_t>(os, s.kind == SlotKind::Unitary ? 1 : 0);
    for (int i = 0; i < t.dim; ++i)
      for (int j = 0; j < t.dim; ++j) {
        put<double>(os, s.mat(i, j).real());
        put<double>(os, s.mat(i, j).imag());
      }
  }
  if (!os) throw Error("write failed for '" + path.string() + "'");
}

MatrixTuple load_matrix_tuple(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path.string() + "'");
  char magic[sizeof(kMagic)];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw Error("'" + path.string() + "' is not a matrix tuple container");
  MatrixTuple t;
  t.dim = static_cast<int>(get<std::uint32_t>(is));
  const auto slots = get<std::uint32_t>(is);
  t.norm_cap = get<double>(is);
  for (std::uint32_t s = 0; s < slots; ++s) {
    TupleSlot slot;
    slot.kind = get<std::uint8_t>(is) ? SlotKind::Unitary : SlotKind::SelfAdjoint;
    slot.mat.resize(t.dim, t.dim);
    for (int i = 0; i < t.dim; ++i)
      for (int j = 0; j < t.dim; ++j) {
        const double re = get<double>(is);
        const double im = get<double>(is);
        slot.mat(i, j) = Complex{re, im};
      }
    t.slots.push_back(std::move(slot));
  }
  if (!is) throw Error("truncated matrix tuple container '" + path.string() + "'");
  return t;
}

}  // namespace orbent
