#pragma once

// Regularization of block-encodings by branch counting.
//
// Registers, most significant first: C (counter, b qubits), O (the encoding's
// own ancillas, a qubits), S (system, dimension d). After each call to U_A the
// counter is incremented whenever O is not |0...0>, so garbage branches can
// never flow back into the |0>_C |0>_O corner during the first n = 2^b calls.

#include <bit>
#include <cstddef>
#include <string>

#include "qet/encoding.hpp"
#include "qet/errors.hpp"
#include "qet/linalg.hpp"

namespace qet {

struct RegularizedEncoding {
  BlockEncoding base;            // ancilla_qubits == counter_qubits + source_ancillas
  std::size_t counter_qubits;    // b
  std::size_t order;             // n = 2^b
  std::size_t source_ancillas;   // a
};

namespace detail {
inline void require_power_of_two(std::size_t n, const char* where) {
  if (n == 0 || !std::has_single_bit(n)) {
    throw DimensionError(std::string(where) + ": n = " + std::to_string(n) +
                         " is not a positive power of two");
  }
}
}  // namespace detail

/// Smallest power of two >= degree (1 for degree <= 1).
inline std::size_t order_for_degree(std::size_t degree) {
  return degree <= 1 ? 1 : std::bit_ceil(degree);
}

/// Q_n |x> = |(x + 1) mod n>
inline ComplexMatrix incrementer(std::size_t n) {
  detail::require_power_of_two(n, "incrementer");
  ComplexMatrix q(n, n);
  for (std::size_t x = 0; x < n; ++x) q((x + 1) % n, x) = 1.0;
  return q;
}

/// The permutation on C ⊗ O ⊗ S that increments C iff O != |0>.
inline ComplexMatrix branch_shift(std::size_t n, std::size_t a, std::size_t d) {
  detail::require_power_of_two(n, "branch_shift");
  if (d == 0) throw DimensionError("branch_shift: system dimension must be positive");
  const std::size_t o_dim = std::size_t{1} << a;
  const std::size_t dim = n * o_dim * d;
  ComplexMatrix m(dim, dim);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t o = 0; o < o_dim; ++o)
      for (std::size_t s = 0; s < d; ++s) {
        const std::size_t src = (c * o_dim + o) * d + s;
        const std::size_t c_out = o == 0 ? c : (c + 1) % n;
        m((c_out * o_dim + o) * d + s, src) = 1.0;
      }
  return m;
}

/// Same operator as branch_shift, built from the two gates of the circuit:
/// Q_n on C, then Q_n† on C open-controlled on O = |0...0>.
inline ComplexMatrix branch_shift_circuit(std::size_t n, std::size_t a, std::size_t d) {
  detail::require_power_of_two(n, "branch_shift_circuit");
  const std::size_t o_dim = std::size_t{1} << a;
  const ComplexMatrix q = incrementer(n);
  const ComplexMatrix id_n = ComplexMatrix::identity(n);
  const ComplexMatrix id_o = ComplexMatrix::identity(o_dim);
  const ComplexMatrix id_s = ComplexMatrix::identity(d);
  ComplexMatrix zero_proj(o_dim, o_dim);
  zero_proj(0, 0) = 1.0;

  const ComplexMatrix increment = kron(q, kron(id_o, id_s));
  const ComplexMatrix open_controlled_dec =
      kron(adjoint(q), kron(zero_proj, id_s)) + kron(id_n, kron(id_o - zero_proj, id_s));
  return open_controlled_dec * increment;
}

/// U_reg = branch_shift(n, a, d) · (I_n ⊗ U_A): an n-regular (b + a)-ancilla encoding.
inline RegularizedEncoding regularize(const BlockEncoding& be, std::size_t n) {
  detail::require_power_of_two(n, "regularize");
  const std::size_t b = static_cast<std::size_t>(std::countr_zero(n));
  const std::size_t a = be.ancilla_qubits();
  if (n == 1) return {be, 0, 1, a};
  const std::size_t d = be.system_dim();
  ComplexMatrix u = branch_shift(n, a, d) * kron(ComplexMatrix::identity(n), be.unitary());
  return {BlockEncoding(std::move(u), b + a, d), b, n, a};
}

}  // namespace qet
