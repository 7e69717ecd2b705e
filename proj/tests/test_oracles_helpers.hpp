// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used only by tests. These stay
// deliberately naive and follow different computational routes than the
// library: exhaustive pair partitions for semicircular moments, reduced-word
// multiplication in the algebraic free product for phi^{*I}, and the Fourier
// series of the log kernel for the circle log-energy.

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "orbent/measures.hpp"
#include "orbent/words.hpp"

namespace orbent::testing {

using Complex = std::complex<double>;

/// Counts pairings of {0..n-1} that are noncrossing and join equal slots, by
/// enumerating every perfect matching and filtering.
inline double brute_noncrossing_pairings(const StarWord& w) {
  const int n = w.degree();
  if (n == 0) return 1.0;
  if (n % 2) return 0.0;
  std::vector<int> partner(static_cast<size_t>(n), -1);
  double count = 0;
  std::function<void()> recurse = [&] {
    int first = -1;
    for (int i = 0; i < n; ++i)
      if (partner[static_cast<size_t>(i)] < 0) {
        first = i;
        break;
      }
    if (first < 0) {
      // complete matching: test noncrossing and color match
      for (int a = 0; a < n; ++a) {
        const int b = partner[static_cast<size_t>(a)];
        if (b < a) continue;
        if (w.letters[static_cast<size_t>(a)].slot !=
            w.letters[static_cast<size_t>(b)].slot)
          return;
        for (int c = a + 1; c < b; ++c) {
          const int d = partner[static_cast<size_t>(c)];
          if (d < b && d > a) continue;
          return;  // crossing pair (a<c<b<d) or (d<a)
        }
      }
      count += 1.0;
      return;
    }
    for (int j = first + 1; j < n; ++j) {
      if (partner[static_cast<size_t>(j)] >= 0) continue;
      partner[static_cast<size_t>(first)] = j;
      partner[static_cast<size_t>(j)] = first;
      recurse();
      partner[static_cast<size_t>(first)] = -1;
      partner[static_cast<size_t>(j)] = -1;
    }
  };
  recurse();
  return count;
}

/// phi^{*I} by reduced-word multiplication in the algebraic free product:
/// states are linear combinations of alternating words of centered factor
/// polynomials. Independent of the library's centering recursion.
class ReducedWordFreeProduct {
 public:
  using Monomial = std::vector<Letter>;          // local to the factor
  using Poly = std::map<Monomial, Complex>;      // finite support
  using FactorState = std::function<Complex(int factor, const Monomial&)>;

  explicit ReducedWordFreeProduct(FactorState phi) : phi_(std::move(phi)) {}

  /// Word letters carry (factor, local letter).
  Complex evaluate(const std::vector<std::pair<int, Letter>>& word) const {
    State state;
    state[{}] = Complex{1.0, 0.0};
    for (const auto& [factor, letter] : word) state = multiply(state, factor, letter);
    auto it = state.find({});
    return it == state.end() ? Complex{0.0, 0.0} : it->second;
  }

 private:
  struct PolyLetter {
    int factor;
    Poly poly;  // centered: phi(poly) == 0
    bool operator<(const PolyLetter& o) const {
      if (factor != o.factor) return factor < o.factor;
      auto a = poly.begin(), b = o.poly.begin();
      for (; a != poly.end() && b != o.poly.end(); ++a, ++b) {
        if (a->first != b->first) return a->first < b->first;
        const auto lhs = std::pair{a->second.real(), a->second.imag()};
        const auto rhs = std::pair{b->second.real(), b->second.imag()};
        if (lhs != rhs) return lhs < rhs;
      }
      return a == poly.end() && b != o.poly.end();
    }
  };
  using Word = std::vector<PolyLetter>;
  using State = std::map<Word, Complex>;

  Complex phi_poly(int factor, const Poly& p) const {
    Complex total{0, 0};
    for (const auto& [mono, coeff] : p) total += coeff * phi_(factor, mono);
    return total;
  }

  static Poly poly_product(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a)
      for (const auto& [mb, cb] : b) {
        Monomial m = ma;
        m.insert(m.end(), mb.begin(), mb.end());
        out[m] += ca * cb;
      }
    return out;
  }

  static void add_term(State& state, Word w, Complex c) {
    if (c == Complex{0, 0}) return;
    state[std::move(w)] += c;
  }

  State multiply(const State& state, int factor, const Letter& letter) const {
    // new element p = letter, split as centered part + scalar
    Poly p;
    p[{letter}] = Complex{1, 0};
    const Complex mean = phi_poly(factor, p);
    Poly centered = p;
    centered[{}] -= mean;

    State out;
    for (const auto& [word, coeff] : state) {
      // scalar part passes through
      add_term(out, word, coeff * mean);
      // centered part appends, merging with a same-factor tail
      if (word.empty() || word.back().factor != factor) {
        Word w = word;
        w.push_back({factor, centered});
        add_term(out, std::move(w), coeff);
      } else {
        const Poly merged = poly_product(word.back().poly, centered);
        const Complex merged_mean = phi_poly(factor, merged);
        Poly merged_centered = merged;
        merged_centered[{}] -= merged_mean;
        Word shorter(word.begin(), word.end() - 1);
        // scalar piece drops the tail entirely
        add_term(out, shorter, coeff * merged_mean);
        bool zero = true;
        for (const auto& [m, c] : merged_centered)
          if (c != Complex{0, 0}) zero = false;
        if (!zero) {
          Word w = shorter;
          w.push_back({factor, merged_centered});
          add_term(out, std::move(w), coeff);
        }
      }
    }
    return out;
  }

  FactorState phi_;
};

/// Sigma(mu) = -sum_{k>=1} |m_k|^2 / k for atomless mu (Fourier expansion of
/// log|1 - z|). Exact once the moments vanish beyond the truncation.
inline double fourier_log_energy(const SpectralMeasure& mu, int k_max) {
  double total = 0;
  for (int k = 1; k <= k_max; ++k)
    total -= std::norm(measure_moment(mu, k)) / k;
  return total;
}

}  // namespace orbent::testing
