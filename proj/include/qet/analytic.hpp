#pragma once

// Truncated Taylor series with certified error on the closed unit disk, and
// polynomials of matrices given in Jordan form.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qet/errors.hpp"
#include "qet/linalg.hpp"

namespace qet::analytic {

enum class TruncatedFunction { kShiftedInverse, kExponential, kGeneric };

inline std::string to_string(TruncatedFunction f) {
  switch (f) {
    case TruncatedFunction::kShiftedInverse: return "shifted_inverse";
    case TruncatedFunction::kExponential: return "exponential";
    case TruncatedFunction::kGeneric: return "generic";
  }
  return "unknown";
}

struct TruncationPlan {
  TruncatedFunction function;
  std::size_t order;           // N
  PolynomialSpec coefficients; // a_0 .. a_N
  double certified_error;      // sup over the closed disk of |f - sum|
  Complex shift{0.0, 0.0};     // c, shifted inverse only
  double radius = 0.0;         // R (generic) or |c|
  double bound = 0.0;          // M (generic) or 1/eta
  double scale = 1.0;          // prefactor, exponential only
};

/// Deterministic sample of the closed unit disk: a sunflower spiral in the
/// interior plus equispaced points on the boundary.
inline std::vector<Complex> disk_samples(std::size_t count) {
  std::vector<Complex> pts;
  pts.reserve(count);
  const std::size_t boundary = std::max<std::size_t>(count / 4, 1);
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < boundary; ++i) {
    pts.push_back(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(i) /
                                      static_cast<double>(boundary)));
  }
  const std::size_t interior = count - boundary;
  for (std::size_t i = 0; i < interior; ++i) {
    const double r = std::sqrt((static_cast<double>(i) + 0.5) / static_cast<double>(interior));
    pts.push_back(std::polar(r, golden_angle * static_cast<double>(i)));
  }
  return pts;
}

/// max over disk_samples(samples) of |f(z) - P(z)|.
inline double max_disk_error(const PolynomialSpec& p, const std::function<Complex(Complex)>& f,
                             std::size_t samples = 1000) {
  double worst = 0.0;
  for (const Complex& z : disk_samples(samples)) worst = std::max(worst, std::abs(f(z) - p(z)));
  return worst;
}

namespace detail {

inline std::size_t clamped_ceil(double x) {
  if (!(x > 0.0)) return 0;
  return static_cast<std::size_t>(std::ceil(x - 1e-12));
}

/// Sampling cannot resolve errors below the rounding noise of evaluating P and f;
/// Horner on the disk is off by at most about 2(N+1) u sum|a_k|.
inline void check_certificate(const TruncationPlan& plan, const std::function<Complex(Complex)>& f) {
  const double sampled = max_disk_error(plan.coefficients, f, 1000);
  double mass = 0.0;
  for (const Complex& a : plan.coefficients.coefficients()) mass += std::abs(a);
  const double u = std::numeric_limits<double>::epsilon();
  const double noise = 2.0 * static_cast<double>(plan.order + 2) * u * (mass + plan.bound);
  if (sampled > plan.certified_error * (1.0 + 1e-9) + noise) {
    std::ostringstream os;
    os << to_string(plan.function) << ": sampled error " << sampled
       << " exceeds the certified bound " << plan.certified_error;
    throw NumericalError("analytic", os.str());
  }
}

}  // namespace detail

/// ⌈log_R(M / ((R - 1) eps))⌉, clamped at 0.
inline std::size_t taylor_truncation_order(double r, double m, double eps) {
  if (!(r > 1.0)) throw std::invalid_argument("taylor_truncation_order: radius R must exceed 1");
  if (!(m > 0.0) || !(eps > 0.0)) {
    throw std::invalid_argument("taylor_truncation_order: M and eps must be positive");
  }
  return detail::clamped_ceil(std::log(m / ((r - 1.0) * eps)) / std::log(r));
}

/// Truncation of f with Taylor coefficients `coefficient(k)`, analytic on |z| < R
/// with |f| <= M there. The certificate is M / (R^N (R - 1)).
inline TruncationPlan taylor_plan(const std::function<Complex(std::size_t)>& coefficient, double r,
                                  double m, double eps) {
  const std::size_t order = taylor_truncation_order(r, m, eps);
  std::vector<Complex> c(order + 1);
  for (std::size_t k = 0; k <= order; ++k) c[k] = coefficient(k);
  TruncationPlan plan{TruncatedFunction::kGeneric, order, PolynomialSpec(std::move(c)),
                      m / (std::pow(r, static_cast<double>(order)) * (r - 1.0))};
  plan.radius = r;
  plan.bound = m;
  return plan;
}

/// ⌈log_|c| (1 / (eta eps))⌉ with eta = |c| - 1, clamped at 0.
inline std::size_t shifted_inverse_order(Complex c, double eps) {
  const double mod = std::abs(c);
  if (!(mod > 1.0)) {
    throw std::invalid_argument("shifted_inverse: |c| must exceed 1 (pole inside the unit disk)");
  }
  if (!(eps > 0.0)) throw std::invalid_argument("shifted_inverse: eps must be positive");
  const double eta = mod - 1.0;
  return detail::clamped_ceil(std::log(1.0 / (eta * eps)) / std::log(mod));
}

/// 1/(c - z) ≈ sum_{k<=N} z^k / c^{k+1}; the geometric tail gives |c|^{-(N+1)} / eta.
inline TruncationPlan shifted_inverse_plan(Complex c, double eps) {
  const std::size_t order = shifted_inverse_order(c, eps);
  const double mod = std::abs(c);
  const double eta = mod - 1.0;
  std::vector<Complex> coeffs(order + 1);
  Complex term = 1.0 / c;
  for (std::size_t k = 0; k <= order; ++k) {
    coeffs[k] = term;
    term /= c;
  }
  TruncationPlan plan{TruncatedFunction::kShiftedInverse, order, PolynomialSpec(std::move(coeffs)),
                      std::pow(mod, -static_cast<double>(order + 1)) / eta};
  plan.shift = c;
  plan.radius = mod;
  plan.bound = 1.0 / eta;
  detail::check_certificate(plan, [c](Complex z) { return 1.0 / (c - z); });
  return plan;
}

/// Smallest N with 2/(N+1)! <= eps.
inline std::size_t exp_order(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("exp_plan: eps must be positive");
  std::size_t n = 0;
  double factorial = 1.0;  // (n+1)!
  while (2.0 / factorial > eps) {
    ++n;
    factorial *= static_cast<double>(n + 1);
  }
  return n;
}

/// scale * e^z ≈ sum_{k<=N} scale z^k / k!. For |z| <= 1 the tail is bounded by
/// 2/(N+1)! since consecutive terms shrink by at least 1/2.
inline TruncationPlan exp_plan(double eps, double scale = 1.0 / 3.0) {
  const std::size_t order = exp_order(eps);
  std::vector<Complex> coeffs(order + 1);
  double term = scale;
  double factorial = 1.0;
  for (std::size_t k = 0; k <= order; ++k) {
    if (k > 0) factorial *= static_cast<double>(k);
    coeffs[k] = term / factorial;
  }
  factorial *= static_cast<double>(order + 1);
  TruncationPlan plan{TruncatedFunction::kExponential, order, PolynomialSpec(std::move(coeffs)),
                      scale * 2.0 / factorial};
  plan.scale = scale;
  detail::check_certificate(plan, [scale](Complex z) { return scale * std::exp(z); });
  return plan;
}

// ---------------------------------------------------------------------------
// Jordan forms

struct JordanBlockSpec {
  Complex eigenvalue;
  std::size_t size;
};

struct JordanForm {
  ComplexMatrix similarity;  // S
  std::vector<JordanBlockSpec> blocks;
};

/// λ on the diagonal, ones on the superdiagonal.
inline ComplexMatrix jordan_block(Complex lambda, std::size_t d) {
  if (d == 0) throw DimensionError("jordan_block: size must be positive");
  ComplexMatrix j(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    j(i, i) = lambda;
    if (i + 1 < d) j(i, i + 1) = 1.0;
  }
  return j;
}

/// P^(k)(λ)/k! = sum_j C(j, k) a_j λ^(j-k), with exact binomial weights.
inline Complex scaled_derivative(const PolynomialSpec& p, Complex lambda, std::size_t k) {
  const auto& a = p.coefficients();
  if (k >= a.size()) return 0.0;
  Complex acc = 0.0;
  // Horner over j = n..k with weights C(j, k).
  for (std::size_t j = a.size(); j-- > k;) {
    double binom = 1.0;
    for (std::size_t i = 1; i <= k; ++i) {
      binom = binom * static_cast<double>(j - k + i) / static_cast<double>(i);
    }
    acc = acc * lambda + std::round(binom) * a[j];
  }
  return acc;
}

/// P(J) for the d x d Jordan block of λ: upper-triangular Toeplitz with P^(k)(λ)/k!
/// on the k-th superdiagonal.
inline ComplexMatrix jordan_poly(const PolynomialSpec& p, Complex lambda, std::size_t d) {
  if (d == 0) throw DimensionError("jordan_poly: size must be positive");
  ComplexMatrix m(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    const Complex v = scaled_derivative(p, lambda, k);
    for (std::size_t i = 0; i + k < d; ++i) m(i, i + k) = v;
  }
  return m;
}

inline ComplexMatrix jordan_matrix(const std::vector<JordanBlockSpec>& blocks) {
  std::vector<ComplexMatrix> parts;
  for (const auto& b : blocks) parts.push_back(jordan_block(b.eigenvalue, b.size));
  return block_diag(parts);
}

inline double condition_number(const ComplexMatrix& s) {
  return operator_norm(s) * operator_norm(inverse(s));
}

namespace detail {

inline ComplexMatrix checked_inverse(const JordanForm& jf) {
  std::size_t dim = 0;
  for (const auto& b : jf.blocks) dim += b.size;
  if (!jf.similarity.is_square() || jf.similarity.rows() != dim) {
    throw DimensionError("JordanForm: similarity is " + jf.similarity.shape() +
                         " but blocks sum to dimension " + std::to_string(dim));
  }
  const ComplexMatrix inv = inverse(jf.similarity);
  const double cond = operator_norm(jf.similarity) * operator_norm(inv);
  if (cond > 1e6) {
    std::ostringstream os;
    os << "JordanForm: similarity is ill-conditioned (cond = " << cond << ")";
    throw NumericalError("analytic", os.str());
  }
  return inv;
}

}  // namespace detail

/// A = S J S^{-1}.
inline ComplexMatrix assemble_from_jordan(const JordanForm& jf) {
  const ComplexMatrix inv = detail::checked_inverse(jf);
  return jf.similarity * jordan_matrix(jf.blocks) * inv;
}

/// P(A) = S diag(P(J_i)) S^{-1}, each P(J_i) from jordan_poly.
inline ComplexMatrix polynomial_via_jordan(const JordanForm& jf, const PolynomialSpec& p) {
  const ComplexMatrix inv = detail::checked_inverse(jf);
  std::vector<ComplexMatrix> parts;
  for (const auto& b : jf.blocks) parts.push_back(jordan_poly(p, b.eigenvalue, b.size));
  return jf.similarity * block_diag(parts) * inv;
}

}  // namespace qet::analytic
