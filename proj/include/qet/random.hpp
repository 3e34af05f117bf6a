#pragma once

// Seeded random fixtures: Gaussian matrices, contractions, Haar unitaries,
// bounded polynomials. Everything takes the generator explicitly.

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include "qet/gqsp.hpp"
#include "qet/linalg.hpp"

namespace qet {

using Rng = std::mt19937_64;

inline Complex random_gaussian(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

inline ComplexMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  ComplexMatrix m(rows, cols);
  for (Complex& z : m.entries()) z = random_gaussian(rng);
  return m;
}

/// Random d x d matrix rescaled to operator norm exactly `norm`.
inline ComplexMatrix random_contraction(Rng& rng, std::size_t d, double norm = 0.9) {
  const ComplexMatrix m = random_matrix(rng, d, d);
  return m * Complex{norm / operator_norm(m), 0.0};
}

/// Haar-distributed unitary: Gram–Schmidt on a Gaussian matrix.
inline ComplexMatrix random_unitary(Rng& rng, std::size_t d) {
  ComplexMatrix q = random_matrix(rng, d, d);
  for (std::size_t j = 0; j < d; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex dot = 0.0;
        for (std::size_t i = 0; i < d; ++i) dot += std::conj(q(i, k)) * q(i, j);
        for (std::size_t i = 0; i < d; ++i) q(i, j) -= dot * q(i, k);
      }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < d; ++i) norm += std::norm(q(i, j));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < d; ++i) q(i, j) /= norm;
  }
  return q;
}

/// Gaussian coefficients, rescaled so that sup |P| on the unit circle equals `sup`.
inline PolynomialSpec random_bounded_polynomial(Rng& rng, std::size_t degree, double sup = 0.9) {
  std::vector<Complex> c(degree + 1);
  for (Complex& z : c) z = random_gaussian(rng);
  const PolynomialSpec p(std::move(c));
  return p.scaled(sup / gqsp::sup_norm_on_circle(p, std::max(gqsp::kDefaultSupGrid, 4 * (degree + 1))));
}

}  // namespace qet
