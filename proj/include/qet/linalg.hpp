#pragma once

// Dense complex linear algebra for desk-scale simulation of block-encodings.
//
// Register convention: in kron(a, b) the first factor is the more significant
// register, so basis index = i_a * dim(b) + i_b. Every other module relies on it.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qet/errors.hpp"

namespace qet {

using Complex = std::complex<double>;

/// Row-major dense complex matrix. Value type; all operations return new matrices.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw DimensionError("ComplexMatrix: " + std::to_string(data_.size()) +
                           " entries supplied for a " + std::to_string(rows_) + "x" +
                           std::to_string(cols_) + " matrix");
    }
    for (const Complex& z : data_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw DimensionError("ComplexMatrix: non-finite entry");
      }
    }
  }

  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw DimensionError("ComplexMatrix: ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }

  static ComplexMatrix diagonal(std::span<const Complex> d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Complex> entries() noexcept { return data_; }
  std::span<const Complex> entries() const noexcept { return data_; }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o, "operator+");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o, "operator-");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexMatrix& operator*=(Complex s) {
    for (Complex& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  void require_same_shape(const ComplexMatrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw DimensionError(std::string(op) + ": shape mismatch " + shape() + " vs " + o.shape());
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: cannot multiply " + a.shape() + " by " + b.shape());
  }
  ComplexMatrix c(a.rows(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex* crow = &c(i, 0);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      const Complex* brow = &b(k, 0);
      for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  return matmul(a, b);
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
  return t;
}

/// Kronecker product; `a` occupies the more significant register.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c)
          k(i * b.rows() + r, j * b.cols() + c) = aij * b(r, c);
    }
  return k;
}

/// Copy of the `rows` x `cols` submatrix starting at (row0, col0).
inline ComplexMatrix block(const ComplexMatrix& a, std::size_t row0, std::size_t col0,
                           std::size_t rows, std::size_t cols) {
  if (row0 + rows > a.rows() || col0 + cols > a.cols()) {
    throw DimensionError("block: " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " window at (" + std::to_string(row0) + "," + std::to_string(col0) +
                         ") exceeds " + a.shape());
  }
  ComplexMatrix b(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) b(i, j) = a(row0 + i, col0 + j);
  return b;
}

inline void set_block(ComplexMatrix& target, std::size_t row0, std::size_t col0,
                      const ComplexMatrix& src) {
  if (row0 + src.rows() > target.rows() || col0 + src.cols() > target.cols()) {
    throw DimensionError("set_block: " + src.shape() + " does not fit into " + target.shape());
  }
  for (std::size_t i = 0; i < src.rows(); ++i)
    for (std::size_t j = 0; j < src.cols(); ++j) target(row0 + i, col0 + j) = src(i, j);
}

inline ComplexMatrix block_diag(std::span<const ComplexMatrix> blocks) {
  std::size_t rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  ComplexMatrix m(rows, cols);
  std::size_t r = 0, c = 0;
  for (const auto& b : blocks) {
    set_block(m, r, c, b);
    r += b.rows();
    c += b.cols();
  }
  return m;
}

inline double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const Complex& z : a.entries()) s += std::norm(z);
  return std::sqrt(s);
}

inline double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (const Complex& z : a.entries()) m = std::max(m, std::abs(z));
  return m;
}

inline bool all_finite(const ComplexMatrix& a) {
  return std::all_of(a.entries().begin(), a.entries().end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

// ---------------------------------------------------------------------------
// Hermitian eigensolver (cyclic complex Jacobi)

struct HermitianEigen {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns are eigenvectors
};

struct JacobiOptions {
  double relative_tolerance = 1e-14;  // on off-diagonal Frobenius norm vs ||H||_F
  int max_sweeps = 100;
};

inline HermitianEigen hermitian_eigen(const ComplexMatrix& h, JacobiOptions opt = {}) {
  if (!h.is_square()) throw DimensionError("hermitian_eigen: non-square input " + h.shape());
  const std::size_t n = h.rows();
  // Work on the Hermitian part so tiny asymmetries from rounding do not leak in.
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = frobenius_norm(a);
  const double eps = std::numeric_limits<double>::epsilon();

  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        if (p != q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= opt.relative_tolerance * scale) break;

    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        if (mag <= 1e-18 * scale || mag <= 1e-2 * eps * std::sqrt(std::abs(app * aqq))) continue;
        rotated = true;

        const Complex phase = apq / mag;  // e^{i phi}
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on (p, q); A <- G^H A G, V <- V G.
        const Complex ph_conj = std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * ph_conj * akq;
          a(k, q) = s * akp + c * ph_conj * akq;
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * ph_conj * vkq;
          v(k, q) = s * vkp + c * ph_conj * vkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * apk + c * phase * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
    if (!rotated) break;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t col = 0; col < n; ++col) {
    out.values[col] = a(order[col], order[col]).real();
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, col) = v(k, order[col]);
  }
  return out;
}

/// Largest singular value, via the Hermitian eigensolver on the smaller Gram matrix.
inline double operator_norm(const ComplexMatrix& a) {
  if (a.empty()) return 0.0;
  const ComplexMatrix gram = a.rows() < a.cols() ? a * adjoint(a) : adjoint(a) * a;
  const auto eig = hermitian_eigen(gram);
  return std::sqrt(std::max(0.0, eig.values.back()));
}

inline bool is_hermitian(const ComplexMatrix& h, double tol) {
  return h.is_square() && operator_norm(h - adjoint(h)) <= tol;
}

/// ||U^dag U - I||.
inline double unitarity_defect(const ComplexMatrix& u) {
  if (!u.is_square()) throw DimensionError("unitarity_defect: non-square " + u.shape());
  ComplexMatrix g = adjoint(u) * u;
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
  return operator_norm(g);
}

/// Cheap sufficient test first (Frobenius bounds the operator norm), exact norm otherwise.
inline bool is_unitary(const ComplexMatrix& u, double tol) {
  if (!u.is_square()) return false;
  ComplexMatrix g = adjoint(u) * u;
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
  if (frobenius_norm(g) <= tol) return true;
  return operator_norm(g) <= tol;
}

/// Principal square root of a Hermitian PSD matrix. Eigenvalues at or below
/// `floor` (and small negative rounding noise) are treated as zero.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& h, double floor = 0.0) {
  if (!h.is_square()) throw DimensionError("psd_sqrt: non-square input " + h.shape());
  const double asym = operator_norm(h - adjoint(h));
  if (asym > 1e-8) {
    std::ostringstream os;
    os << "psd_sqrt: input is not Hermitian (||H - H^dag|| = " << asym << ")";
    throw DimensionError(os.str());
  }
  const auto eig = hermitian_eigen(h);
  if (!eig.values.empty() && eig.values.front() < -1e-8) {
    std::ostringstream os;
    os << "psd_sqrt: eigenvalue " << eig.values.front() << " is negative";
    throw DimensionError(os.str());
  }
  const std::size_t n = h.rows();
  ComplexMatrix s(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = eig.values[k];
    if (lambda <= floor) continue;
    const double root = std::sqrt(lambda);
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vi = eig.vectors(i, k) * root;
      for (std::size_t j = 0; j < n; ++j) s(i, j) += vi * std::conj(eig.vectors(j, k));
    }
  }
  return s;
}

/// Inverse by LU with partial pivoting.
inline ComplexMatrix inverse(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionError("inverse: non-square input " + a.shape());
  const std::size_t n = a.rows();
  ComplexMatrix lu = a;
  ComplexMatrix inv = ComplexMatrix::identity(n);
  const double scale = std::max(max_abs(a), std::numeric_limits<double>::min());
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(lu(r, col)) > std::abs(lu(piv, col))) piv = r;
    if (std::abs(lu(piv, col)) <= 1e-14 * scale) {
      throw NumericalError("linalg", "inverse: matrix is singular to working precision");
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(lu(piv, j), lu(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    const Complex d = lu(col, col);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Complex f = lu(r, col) / d;
      if (f == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) {
        lu(r, j) -= f * lu(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    const Complex d = lu(r, r);
    for (std::size_t j = 0; j < n; ++j) inv(r, j) /= d;
  }
  return inv;
}

inline ComplexMatrix matrix_power(const ComplexMatrix& a, std::size_t k) {
  if (!a.is_square()) throw DimensionError("matrix_power: non-square input " + a.shape());
  ComplexMatrix r = ComplexMatrix::identity(a.rows());
  for (std::size_t i = 0; i < k; ++i) r = r * a;
  return r;
}

// ---------------------------------------------------------------------------
// Polynomials

/// P(z) = sum_k a_k z^k with trailing zeros trimmed (at least one coefficient kept).
class PolynomialSpec {
 public:
  PolynomialSpec() : coeffs_{Complex{0.0, 0.0}} {}
  PolynomialSpec(std::vector<Complex> coefficients) : coeffs_(std::move(coefficients)) {
    normalize();
  }
  PolynomialSpec(std::initializer_list<Complex> coefficients)
      : coeffs_(coefficients.begin(), coefficients.end()) {
    normalize();
  }

  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  const std::vector<Complex>& coefficients() const noexcept { return coeffs_; }
  Complex operator[](std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Complex{}; }
  bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == Complex{}; }

  Complex operator()(Complex z) const {
    Complex acc = coeffs_.back();
    for (std::size_t k = coeffs_.size() - 1; k-- > 0;) acc = acc * z + coeffs_[k];
    return acc;
  }

  PolynomialSpec derivative() const {
    if (coeffs_.size() == 1) return {};
    std::vector<Complex> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return PolynomialSpec(std::move(d));
  }

  PolynomialSpec scaled(Complex s) const {
    auto c = coeffs_;
    for (auto& x : c) x *= s;
    return PolynomialSpec(std::move(c));
  }

  /// Q(z) = P(s z).
  PolynomialSpec argument_scaled(Complex s) const {
    auto c = coeffs_;
    Complex pw = 1.0;
    for (auto& x : c) {
      x *= pw;
      pw *= s;
    }
    return PolynomialSpec(std::move(c));
  }

  friend bool operator==(const PolynomialSpec&, const PolynomialSpec&) = default;

 private:
  void normalize() {
    for (const Complex& z : coeffs_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw DimensionError("PolynomialSpec: non-finite coefficient");
      }
    }
    while (coeffs_.size() > 1 && coeffs_.back() == Complex{}) coeffs_.pop_back();
    if (coeffs_.empty()) coeffs_.push_back(Complex{});
  }

  std::vector<Complex> coeffs_;
};

/// P(A) by Horner's scheme.
inline ComplexMatrix horner_eval(const PolynomialSpec& p, const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionError("horner_eval: non-square input " + a.shape());
  const std::size_t n = a.rows();
  const auto& c = p.coefficients();
  ComplexMatrix r = ComplexMatrix::identity(n) * c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    r = r * a;
    for (std::size_t i = 0; i < n; ++i) r(i, i) += c[k];
  }
  return r;
}

}  // namespace qet
