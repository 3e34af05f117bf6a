#pragma once

// Generalized quantum signal processing.
//
// A sequence R_0..R_n of 2x2 unitaries realizes P when
//   <0| R_0 w R_1 w ... w R_n |0> = P(z),   w = diag(1, z).
// Phases are found by completing P to a pair (P, Q) with |P|^2 + |Q|^2 = 1 on
// the unit circle (Fejér–Riesz) and peeling one rotation per degree.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "qet/errors.hpp"
#include "qet/linalg.hpp"

namespace qet::gqsp {

inline constexpr double kSynthesisMargin = 1e-6;
inline constexpr double kBoundarySlack = 1e-9;
inline constexpr std::size_t kDefaultSupGrid = std::size_t{1} << 14;

struct GqspSequence {
  std::vector<ComplexMatrix> rotations;  // R_0 .. R_n
  std::size_t degree() const noexcept { return rotations.empty() ? 0 : rotations.size() - 1; }
};

// ---------------------------------------------------------------------------
// Sup norm on the unit circle

namespace detail {

inline Complex unit(double theta) { return {std::cos(theta), std::sin(theta)}; }

inline double golden_max(const PolynomialSpec& p, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double t) { return std::abs(p(unit(t))); };
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return std::max(f1, f2);
}

}  // namespace detail

/// max |P(e^{iθ})| over an equispaced grid, refined by golden-section search
/// around the largest grid maxima.
inline double sup_norm_on_circle(const PolynomialSpec& p, std::size_t grid = kDefaultSupGrid) {
  if (grid < 4 * (p.degree() + 1)) {
    throw DimensionError("sup_norm_on_circle: grid of " + std::to_string(grid) +
                         " points is too coarse for degree " + std::to_string(p.degree()));
  }
  if (p.degree() == 0) return std::abs(p[0]);
  const double h = 2.0 * std::numbers::pi / static_cast<double>(grid);
  std::vector<double> values(grid);
  for (std::size_t j = 0; j < grid; ++j) values[j] = std::abs(p(detail::unit(h * j)));

  std::vector<std::size_t> peaks;
  for (std::size_t j = 0; j < grid; ++j) {
    const double prev = values[(j + grid - 1) % grid];
    const double next = values[(j + 1) % grid];
    if (values[j] >= prev && values[j] >= next) peaks.push_back(j);
  }
  std::sort(peaks.begin(), peaks.end(),
            [&](std::size_t i, std::size_t j) { return values[i] > values[j]; });
  if (peaks.size() > 8) peaks.resize(8);

  double best = *std::max_element(values.begin(), values.end());
  for (std::size_t j : peaks) {
    const double t = h * static_cast<double>(j);
    best = std::max(best, detail::golden_max(p, t - h, t + h));
  }
  return best;
}

struct ScaledPolynomial {
  PolynomialSpec polynomial;  // scale * P
  double scale;               // in (0, 1]
  double sup_norm;            // of the original P
};

/// Shrinks P so that its sup norm is at most 1 - margin; scale = 1 when already inside.
inline ScaledPolynomial fit_to_unit_circle(const PolynomialSpec& p,
                                           double margin = kSynthesisMargin,
                                           std::size_t grid = kDefaultSupGrid) {
  const double sup = sup_norm_on_circle(p, std::max(grid, 4 * (p.degree() + 1)));
  if (sup <= 1.0 - margin) return {p, 1.0, sup};
  const double scale = (1.0 - margin) / sup;
  return {p.scaled(scale), scale, sup};
}

// ---------------------------------------------------------------------------
// Polynomial roots (Aberth–Ehrlich)

/// All roots of sum_k c_k z^k. The leading coefficient must be nonzero.
inline std::vector<Complex> aberth_roots(const std::vector<Complex>& c, int max_iterations = 500) {
  const std::size_t m = c.size() - 1;
  if (c.empty() || c.back() == Complex{}) {
    throw DimensionError("aberth_roots: leading coefficient must be nonzero");
  }
  if (m == 0) return {};
  const double eps = std::numeric_limits<double>::epsilon();

  double radius = 1.0;
  if (c.front() != Complex{}) {
    radius = std::pow(std::abs(c.front()) / std::abs(c.back()), 1.0 / static_cast<double>(m));
  }
  std::vector<Complex> z(m);
  for (std::size_t k = 0; k < m; ++k) {
    z[k] = radius * detail::unit(2.0 * std::numbers::pi * static_cast<double>(k) /
                                     static_cast<double>(m) + 0.4);
  }
  std::vector<bool> done(m, false);
  std::size_t remaining = m;

  for (int it = 0; it < max_iterations && remaining > 0; ++it) {
    for (std::size_t k = 0; k < m; ++k) {
      if (done[k]) continue;
      const Complex x = z[k];
      Complex p = c[m], dp = 0.0;
      double bound = std::abs(c[m]);
      const double ax = std::abs(x);
      for (std::size_t j = m; j-- > 0;) {
        dp = dp * x + p;
        p = p * x + c[j];
        bound = bound * ax + std::abs(c[j]);
      }
      if (std::abs(p) <= 4.0 * static_cast<double>(m) * eps * bound) {
        done[k] = true;
        --remaining;
        continue;
      }
      Complex repulsion = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        if (j != k) repulsion += 1.0 / (x - z[j]);
      Complex step;
      if (dp == Complex{}) {
        step = Complex{1e-8 * std::max(1.0, ax), 1e-8 * std::max(1.0, ax)};
      } else {
        const Complex ratio = p / dp;
        step = ratio / (1.0 - ratio * repulsion);
      }
      z[k] = x - step;
      if (std::abs(step) <= 2.0 * eps * std::max(1.0, std::abs(z[k]))) {
        done[k] = true;
        --remaining;
      }
    }
  }
  if (remaining > 0) {
    throw NumericalError("gqsp", "root finding did not converge for " +
                                     std::to_string(remaining) + " of " + std::to_string(m) +
                                     " roots within " + std::to_string(max_iterations) +
                                     " iterations");
  }
  return z;
}

// ---------------------------------------------------------------------------
// Completion

namespace detail {

/// Coefficients of prod_i (z - r_i). Expanding factor by factor loses accuracy
/// to cancellation at high degree, so the product is sampled at roots of unity
/// and interpolated with an inverse DFT instead.
inline std::vector<Complex> monic_from_roots(const std::vector<Complex>& roots) {
  const std::size_t size = roots.size() + 1;
  std::vector<Complex> values(size);
  for (std::size_t j = 0; j < size; ++j) {
    const Complex w = unit(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(size));
    Complex prod = 1.0;
    for (const Complex& r : roots) prod *= w - r;
    values[j] = prod;
  }
  std::vector<Complex> coeffs(size);
  for (std::size_t k = 0; k < size; ++k) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < size; ++j) {
      acc += values[j] * unit(-2.0 * std::numbers::pi * static_cast<double>((j * k) % size) /
                              static_cast<double>(size));
    }
    coeffs[k] = acc / static_cast<double>(size);
  }
  coeffs.back() = 1.0;
  return coeffs;
}

/// Newton on p' from an approximate double root of p.
inline Complex polish_double_root(const std::vector<Complex>& c, Complex z) {
  for (int it = 0; it < 30; ++it) {
    Complex d1 = 0.0, d2 = 0.0;
    for (std::size_t j = c.size(); j-- > 2;) {
      const double jj = static_cast<double>(j);
      d2 = d2 * z + jj * (jj - 1.0) * c[j];
    }
    for (std::size_t j = c.size(); j-- > 1;) d1 = d1 * z + static_cast<double>(j) * c[j];
    if (d2 == Complex{}) break;
    const Complex step = d1 / d2;
    if (!std::isfinite(step.real()) || std::abs(step) > 1e-4) break;
    z -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon()) break;
  }
  return z;
}

}  // namespace detail

/// max over `grid` points of | |P|^2 + |Q|^2 - 1 |.
inline double complementarity_residual(const PolynomialSpec& p, const PolynomialSpec& q,
                                       std::size_t grid = 4096) {
  double worst = 0.0;
  const double h = 2.0 * std::numbers::pi / static_cast<double>(grid);
  for (std::size_t j = 0; j < grid; ++j) {
    const Complex z = detail::unit(h * static_cast<double>(j));
    worst = std::max(worst, std::abs(std::norm(p(z)) + std::norm(q(z)) - 1.0));
  }
  return worst;
}

/// Q with |P|^2 + |Q|^2 = 1 on the unit circle and deg Q <= deg P.
///
/// The Laurent polynomial 1 - |P|^2 is factored through the roots of
/// z^n (1 - |P(z)|^2); one root of every pair (r, 1/conj(r)) is kept (the one
/// inside the disk), and double roots on the circle contribute once.
inline PolynomialSpec complete(const PolynomialSpec& p) {
  const std::size_t n = p.degree();
  const double sup = sup_norm_on_circle(p, std::max(kDefaultSupGrid, 4 * (n + 1)));
  if (sup > 1.0 + kBoundarySlack) {
    std::ostringstream os;
    os.precision(17);
    os << "complete: sup |P| on the unit circle is " << sup
       << " > 1; rescale the polynomial (e.g. fit_to_unit_circle) before synthesis";
    throw NormError(os.str(), sup);
  }
  const auto& a = p.coefficients();
  if (n == 0) return PolynomialSpec{Complex{std::sqrt(std::max(0.0, 1.0 - std::norm(a[0]))), 0.0}};

  // l_k = coefficient of z^k in 1 - P(z) conj(P(1/conj z)), k = 0..n.
  std::vector<Complex> l(n + 1);
  double energy = 0.0;
  for (const Complex& x : a) energy += std::norm(x);
  l[0] = 1.0 - energy;
  for (std::size_t k = 1; k <= n; ++k) {
    Complex s = 0.0;
    for (std::size_t j = 0; j + k <= n; ++j) s += a[j + k] * std::conj(a[j]);
    l[k] = -s;
  }
  std::vector<Complex> c(2 * n + 1);
  for (std::size_t m = 0; m <= 2 * n; ++m) c[m] = m >= n ? l[m - n] : std::conj(l[n - m]);

  double scale = 0.0;
  for (const Complex& x : c) scale = std::max(scale, std::abs(x));
  if (scale <= 1e-14) return PolynomialSpec{};  // |P| == 1 on the circle

  const double trim = 1e-14 * scale;
  std::size_t k0 = 0;
  while (k0 < n && std::abs(c[k0]) <= trim && std::abs(c[2 * n - k0]) <= trim) ++k0;
  const std::vector<Complex> reduced(c.begin() + static_cast<std::ptrdiff_t>(k0),
                                     c.end() - static_cast<std::ptrdiff_t>(k0));
  const std::size_t half = n - k0;
  if (half == 0) return PolynomialSpec{Complex{std::sqrt(std::max(0.0, l[0].real())), 0.0}};

  const auto roots = aberth_roots(reduced);
  constexpr double circle_band = 1e-6;
  std::vector<Complex> chosen, on_circle;
  std::size_t inside = 0, outside = 0;
  for (const Complex& r : roots) {
    const double mod = std::abs(r);
    if (mod < 1.0 - circle_band) {
      chosen.push_back(r);
      ++inside;
    } else if (mod > 1.0 + circle_band) {
      ++outside;
    } else {
      on_circle.push_back(r);
    }
  }
  // Roots on the circle have even multiplicity; pair nearest neighbours and keep the mean.
  while (!on_circle.empty()) {
    const Complex r = on_circle.back();
    on_circle.pop_back();
    if (on_circle.empty()) {
      throw NumericalError("gqsp", "complete: unpaired root on the unit circle");
    }
    auto nearest = std::min_element(on_circle.begin(), on_circle.end(), [&](Complex x, Complex y) {
      return std::abs(x - r) < std::abs(y - r);
    });
    const Complex mean = detail::polish_double_root(reduced, 0.5 * (r + *nearest));
    on_circle.erase(nearest);
    chosen.push_back(mean / std::abs(mean));
  }
  if (chosen.size() != half || inside != outside) {
    throw NumericalError("gqsp", "complete: root pairing failed (" + std::to_string(chosen.size()) +
                                     " roots selected, expected " + std::to_string(half) + ")");
  }

  std::vector<Complex> q = detail::monic_from_roots(chosen);
  double q_energy = 0.0;
  for (const Complex& x : q) q_energy += std::norm(x);
  const double gamma = std::sqrt(std::max(0.0, l[0].real()) / q_energy);
  for (Complex& x : q) x *= gamma;
  PolynomialSpec result(std::move(q));
  const double residual = complementarity_residual(p, result, 4096);
  if (residual > 1e-6) {
    std::ostringstream os;
    os << "complete: |P|^2 + |Q|^2 deviates from 1 by " << residual;
    throw NumericalError("gqsp", os.str());
  }
  return result;
}

// ---------------------------------------------------------------------------
// Synthesis and evaluation

/// top-left entry of R_0 w R_1 ... w R_n with w = diag(1, z).
inline Complex evaluate_scalar(const GqspSequence& seq, Complex z) {
  if (seq.rotations.empty()) throw DimensionError("evaluate_scalar: empty sequence");
  const auto& last = seq.rotations.back();
  std::array<Complex, 2> v{last(0, 0), last(1, 0)};
  for (std::size_t k = seq.rotations.size() - 1; k-- > 0;) {
    const auto& r = seq.rotations[k];
    const Complex lower = z * v[1];
    v = {r(0, 0) * v[0] + r(0, 1) * lower, r(1, 0) * v[0] + r(1, 1) * lower};
  }
  return v[0];
}

/// max_j |evaluate_scalar(seq, z_j) - P(z_j)| over `grid` points of the circle.
inline double synthesis_residual(const GqspSequence& seq, const PolynomialSpec& p,
                                 std::size_t grid = 1024) {
  double worst = 0.0;
  const double h = 2.0 * std::numbers::pi / static_cast<double>(grid);
  for (std::size_t j = 0; j < grid; ++j) {
    const Complex z = detail::unit(h * static_cast<double>(j));
    worst = std::max(worst, std::abs(evaluate_scalar(seq, z) - p(z)));
  }
  return worst;
}

/// Rotation sequence realizing P, which must satisfy |P| <= 1 on the circle.
inline GqspSequence synthesize(const PolynomialSpec& p) {
  const std::size_t n = p.degree();
  const PolynomialSpec q_poly = complete(p);

  std::vector<Complex> pc(n + 1), qc(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    pc[k] = p[k];
    qc[k] = q_poly[k];
  }

  GqspSequence seq;
  seq.rotations.reserve(n + 1);
  for (std::size_t m = n; m > 0; --m) {
    // Rows (a, b), (c, d) of R^dag: a p_m + b q_m = 0 drops the top degree,
    // c p_0 + d q_0 = 0 makes the lower component divisible by z.
    const double nu = std::hypot(std::abs(pc[m]), std::abs(qc[m]));
    const double nv = std::hypot(std::abs(pc[0]), std::abs(qc[0]));
    Complex a, b, c, d;
    if (std::max(nu, nv) <= 1e-13) {
      // Both constraints are vacuous; any unitary strips this layer.
      a = 1.0, b = 0.0, c = 0.0, d = 1.0;
    } else if (nu >= nv) {
      a = -qc[m] / nu, b = pc[m] / nu;
      c = std::conj(pc[m]) / nu, d = std::conj(qc[m]) / nu;
    } else {
      a = std::conj(pc[0]) / nv, b = std::conj(qc[0]) / nv;
      c = -qc[0] / nv, d = pc[0] / nv;
    }
    seq.rotations.push_back(ComplexMatrix{{std::conj(a), std::conj(c)}, {std::conj(b), std::conj(d)}});

    std::vector<Complex> np(m), nq(m);
    for (std::size_t j = 0; j < m; ++j) {
      np[j] = a * pc[j] + b * qc[j];
      nq[j] = c * pc[j + 1] + d * qc[j + 1];
    }
    pc = std::move(np);
    qc = std::move(nq);
  }
  const double norm = std::hypot(std::abs(pc[0]), std::abs(qc[0]));
  Complex p0 = pc[0], q0 = qc[0];
  if (norm > 0.0) {
    p0 /= norm;
    q0 /= norm;
  } else {
    p0 = 1.0;
  }
  seq.rotations.push_back(ComplexMatrix{{p0, std::conj(q0)}, {q0, -std::conj(p0)}});
  return seq;
}

// ---------------------------------------------------------------------------
// Operator lift

/// Controlled application C(U) = diag(I, U) with the control as the most
/// significant qubit. Counts how many times it has been applied.
class ControlledOracle {
 public:
  explicit ControlledOracle(const ComplexMatrix& u) : u_(&u) {
    if (!u.is_square()) throw DimensionError("ControlledOracle: non-square unitary " + u.shape());
  }

  std::size_t target_dim() const noexcept { return u_->rows(); }
  std::size_t calls() const noexcept { return calls_; }

  /// state <- C(U) state, for a state with 2 * target_dim() rows.
  void apply(ComplexMatrix& state) {
    const std::size_t dim = target_dim();
    if (state.rows() != 2 * dim) {
      throw DimensionError("ControlledOracle: state has " + std::to_string(state.rows()) +
                           " rows, expected " + std::to_string(2 * dim));
    }
    ++calls_;
    const ComplexMatrix lower = block(state, dim, 0, dim, state.cols());
    set_block(state, dim, 0, (*u_) * lower);
  }

 private:
  const ComplexMatrix* u_;
  std::size_t calls_ = 0;
};

namespace detail {

/// state <- (R ⊗ I) state, R acting on the most significant qubit.
inline void apply_rotation(const ComplexMatrix& r, ComplexMatrix& state) {
  const std::size_t half = state.rows() / 2;
  for (std::size_t i = 0; i < half; ++i)
    for (std::size_t j = 0; j < state.cols(); ++j) {
      const Complex top = state(i, j), bottom = state(half + i, j);
      state(i, j) = r(0, 0) * top + r(0, 1) * bottom;
      state(half + i, j) = r(1, 0) * top + r(1, 1) * bottom;
    }
}

}  // namespace detail

/// (R_0 ⊗ I) C(U) (R_1 ⊗ I) ... C(U) (R_n ⊗ I); R_n acts first, and C(U) is
/// applied exactly seq.degree() times.
inline ComplexMatrix lift(const GqspSequence& seq, ControlledOracle& oracle) {
  if (seq.rotations.empty()) throw DimensionError("lift: empty sequence");
  const std::size_t dim = oracle.target_dim();
  ComplexMatrix state = kron(seq.rotations.back(), ComplexMatrix::identity(dim));
  for (std::size_t k = seq.rotations.size() - 1; k-- > 0;) {
    oracle.apply(state);
    detail::apply_rotation(seq.rotations[k], state);
  }
  return state;
}

/// Full circuit whose top-left d x d block is P(U).
inline ComplexMatrix apply_to_operator(const GqspSequence& seq, const ComplexMatrix& u) {
  if (!is_unitary(u, 1e-9)) {
    throw DimensionError("apply_to_operator: operator is not unitary");
  }
  ControlledOracle oracle(u);
  return lift(seq, oracle);
}

}  // namespace qet::gqsp
