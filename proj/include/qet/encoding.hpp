#pragma once

// Block-encodings: a unitary U on (ancillas ⊗ system) whose all-zero-ancilla
// corner approximates a target matrix A. Ancillas are the most significant
// register, so the encoded block is U[0:d, 0:d].

#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "qet/errors.hpp"
#include "qet/linalg.hpp"

namespace qet {

inline constexpr double kUnitarityTolerance = 1e-9;
inline constexpr double kContractionSlack = 1e-12;

class BlockEncoding {
 public:
  /// Validates the dimension 2^a * d and unitarity within kUnitarityTolerance.
  BlockEncoding(ComplexMatrix unitary, std::size_t ancilla_qubits, std::size_t system_dim)
      : unitary_(std::move(unitary)), ancilla_qubits_(ancilla_qubits), system_dim_(system_dim) {
    if (system_dim_ == 0) throw DimensionError("BlockEncoding: system dimension must be positive");
    if (ancilla_qubits_ >= 8 * sizeof(std::size_t) - 1) {
      throw DimensionError("BlockEncoding: too many ancilla qubits");
    }
    const std::size_t expected = (std::size_t{1} << ancilla_qubits_) * system_dim_;
    if (!unitary_.is_square() || unitary_.rows() != expected) {
      throw DimensionError("BlockEncoding: unitary is " + unitary_.shape() + ", expected " +
                           std::to_string(expected) + "x" + std::to_string(expected) + " for a=" +
                           std::to_string(ancilla_qubits_) + ", d=" + std::to_string(system_dim_));
    }
    if (!is_unitary(unitary_, kUnitarityTolerance)) {
      std::ostringstream os;
      os << "BlockEncoding: matrix is not unitary (||U^dag U - I|| = "
         << unitarity_defect(unitary_) << ")";
      throw DimensionError(os.str());
    }
  }

  const ComplexMatrix& unitary() const noexcept { return unitary_; }
  std::size_t ancilla_qubits() const noexcept { return ancilla_qubits_; }
  std::size_t system_dim() const noexcept { return system_dim_; }
  std::size_t dimension() const noexcept { return unitary_.rows(); }

 private:
  ComplexMatrix unitary_;
  std::size_t ancilla_qubits_;
  std::size_t system_dim_;
};

/// (<0|^a ⊗ I) U (|0>^a ⊗ I)
inline ComplexMatrix top_left_block(const BlockEncoding& be) {
  return block(be.unitary(), 0, 0, be.system_dim(), be.system_dim());
}

struct Rescaled {
  ComplexMatrix matrix;  // A / alpha
  double alpha;          // subnormalization, >= 1
};

/// A/alpha with alpha = max(1, ||A||), so the result can be dilated.
inline Rescaled rescale(const ComplexMatrix& a) {
  const double norm = operator_norm(a);
  const double alpha = norm > 1.0 ? norm : 1.0;
  return {a * Complex{1.0 / alpha, 0.0}, alpha};
}

/// One-ancilla unitary completion U = [[A, (I - AA†)^½], [(I - A†A)^½, -A†]].
inline BlockEncoding dilate(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionError("dilate: matrix must be square, got " + a.shape());
  const double norm = operator_norm(a);
  if (norm > 1.0 + kContractionSlack) {
    std::ostringstream os;
    os.precision(17);
    os << "dilate: ||A|| = " << norm << " exceeds 1; rescale to A/" << norm
       << " and account for the subnormalization";
    throw NormError(os.str(), norm);
  }
  const std::size_t d = a.rows();
  const ComplexMatrix id = ComplexMatrix::identity(d);
  const ComplexMatrix a_dag = adjoint(a);
  // Defects below the floor are dropped in both square roots alike, which keeps the
  // off-diagonal blocks consistent when singular values sit at 1.
  constexpr double floor = 1e-10;
  const ComplexMatrix top_right = psd_sqrt(id - a * a_dag, floor);
  const ComplexMatrix bottom_left = psd_sqrt(id - a_dag * a, floor);

  ComplexMatrix u(2 * d, 2 * d);
  set_block(u, 0, 0, a);
  set_block(u, 0, d, top_right);
  set_block(u, d, 0, bottom_left);
  set_block(u, d, d, -a_dag);
  return BlockEncoding(std::move(u), 1, d);
}

inline double encoding_error(const BlockEncoding& be, const ComplexMatrix& a) {
  if (a.rows() != be.system_dim() || a.cols() != be.system_dim()) {
    throw DimensionError("encoding_error: target is " + a.shape() + " but encoding system dim is " +
                         std::to_string(be.system_dim()));
  }
  return operator_norm(top_left_block(be) - a);
}

/// True iff U (a, eps)-block-encodes A.
inline bool verify_encoding(const BlockEncoding& be, const ComplexMatrix& a, double eps) {
  return encoding_error(be, a) <= eps;
}

inline constexpr double kPowerErrorFloor = 1e-10;

/// ||top_left(U^k) - A^k|| for k = 0..k_max.
inline std::vector<double> power_errors(const BlockEncoding& be, const ComplexMatrix& a,
                                        std::size_t k_max) {
  if (a.rows() != be.system_dim() || a.cols() != be.system_dim()) {
    throw DimensionError("power_errors: target is " + a.shape() + " but encoding system dim is " +
                         std::to_string(be.system_dim()));
  }
  const std::size_t d = be.system_dim();
  std::vector<double> errors{0.0};
  ComplexMatrix u_pow = ComplexMatrix::identity(be.dimension());
  ComplexMatrix a_pow = ComplexMatrix::identity(d);
  for (std::size_t k = 1; k <= k_max; ++k) {
    u_pow = u_pow * be.unitary();
    a_pow = a_pow * a;
    errors.push_back(operator_norm(block(u_pow, 0, 0, d, d) - a_pow));
  }
  return errors;
}

/// Largest k <= k_max with ||top_left(U^j) - A^j|| <= j*tol + 1e-10 for every j <= k.
/// Throws EncodingMismatch when U does not block-encode A at all (j = 1 fails).
inline std::size_t regularity_order(const BlockEncoding& be, const ComplexMatrix& a, double tol,
                                    std::size_t k_max) {
  if (k_max == 0) throw DimensionError("regularity_order: k_max must be positive");
  const std::size_t d = be.system_dim();
  if (a.rows() != d || a.cols() != d) {
    throw DimensionError("regularity_order: target is " + a.shape() +
                         " but encoding system dim is " + std::to_string(d));
  }
  ComplexMatrix u_pow = be.unitary();
  ComplexMatrix a_pow = a;
  for (std::size_t k = 1; k <= k_max; ++k) {
    if (k > 1) {
      u_pow = u_pow * be.unitary();
      a_pow = a_pow * a;
    }
    const double err = operator_norm(block(u_pow, 0, 0, d, d) - a_pow);
    if (err > static_cast<double>(k) * tol + kPowerErrorFloor) {
      if (k == 1) {
        std::ostringstream os;
        os << "regularity_order: unitary does not block-encode the matrix (error " << err
           << " > tolerance " << tol << ")";
        throw EncodingMismatch(os.str());
      }
      return k - 1;
    }
  }
  return k_max;
}

}  // namespace qet
