#pragma once

// Eigenvalue transformation of arbitrary square matrices.
//
// Pipeline: dilate A into U_A, regularize U_A with a counter of n = 2^b >= deg P
// branches, synthesize the GQSP rotations for P and interleave them with
// controlled applications of the regularized unitary. The top-left block of
// the resulting circuit (GQSP qubit, counter and original ancillas all |0>)
// is P(A), including for non-diagonalizable A.

#include <cmath>
#include <cstddef>
#include <sstream>

#include "qet/encoding.hpp"
#include "qet/errors.hpp"
#include "qet/gqsp.hpp"
#include "qet/linalg.hpp"
#include "qet/regularize.hpp"

namespace qet {

/// sqrt(n(n+1)(2n+1)/6) * eps: error of P(U) for an n-regular eps-encoding.
inline double lemma1_bound(std::size_t n, double eps) {
  const double x = static_cast<double>(n);
  return std::sqrt(x * (x + 1.0) * (2.0 * x + 1.0) / 6.0) * eps;
}

/// Checks ||P(A + E) - P(A)|| against lemma1_bound(deg P, ||E||).
inline bool verify_lemma1(const ComplexMatrix& a, const ComplexMatrix& e, const PolynomialSpec& p) {
  if (!a.is_square() || a.rows() != e.rows() || a.cols() != e.cols()) {
    throw DimensionError("verify_lemma1: incompatible shapes " + a.shape() + " and " + e.shape());
  }
  const ComplexMatrix perturbed = a + e;
  for (const ComplexMatrix* m : {&a, &perturbed}) {
    const double norm = operator_norm(*m);
    if (norm > 1.0 + kContractionSlack) {
      throw NormError("verify_lemma1: matrix norm exceeds 1", norm);
    }
  }
  const double sup = gqsp::sup_norm_on_circle(p, std::max(gqsp::kDefaultSupGrid, 4 * (p.degree() + 1)));
  if (sup > 1.0 + gqsp::kBoundarySlack) {
    throw NormError("verify_lemma1: polynomial exceeds 1 on the unit circle", sup);
  }
  const double diff = operator_norm(horner_eval(p, perturbed) - horner_eval(p, a));
  return diff <= lemma1_bound(p.degree(), operator_norm(e)) + 1e-10;
}

/// Fig.-1 circuit: (R_0 ⊗ I) C(U_reg) (R_1 ⊗ I) ... C(U_reg) (R_n ⊗ I), the GQSP
/// qubit most significant. C(U_reg) is applied seq.degree() times.
inline ComplexMatrix assemble_circuit(const gqsp::GqspSequence& seq, const RegularizedEncoding& reg) {
  if (seq.degree() > reg.order) {
    throw DimensionError("assemble_circuit: polynomial degree " + std::to_string(seq.degree()) +
                         " exceeds regularity order " + std::to_string(reg.order));
  }
  gqsp::ControlledOracle oracle(reg.base.unitary());
  return gqsp::lift(seq, oracle);
}

struct TransformOptions {
  std::size_t sup_grid = gqsp::kDefaultSupGrid;
  std::size_t residual_grid = 1024;
  double margin = gqsp::kSynthesisMargin;
  /// Encode A / ||A|| and transform with P(||A|| z) when ||A|| > 1, instead of failing.
  bool rescale_matrix = false;
};

struct TransformReport {
  ComplexMatrix result_block;  // extracted block times encoding_scale
  ComplexMatrix oracle_block;  // P(A) by Horner
  double achieved_error = 0.0;
  double predicted_bound = 0.0;
  std::size_t total_ancillas = 0;  // 1 + b + a
  std::size_t circuit_dim = 0;
  double encoding_scale = 1.0;  // the circuit block-encodes P(A) / encoding_scale
  double matrix_scale = 1.0;    // A entered the circuit as A / matrix_scale
  std::size_t degree = 0;
  std::size_t order = 1;  // regularity order n = 2^b
  std::size_t counter_qubits = 0;
  std::size_t source_ancillas = 0;
  std::size_t block_encoding_calls = 0;
  double synthesis_residual = 0.0;
  double encoding_error = 0.0;
};

/// Transform through a caller-supplied block-encoding `be` of `a` (possibly approximate).
inline TransformReport transform(const BlockEncoding& be, const ComplexMatrix& a,
                                 const PolynomialSpec& p, const TransformOptions& opt = {}) {
  const std::size_t d = be.system_dim();
  if (!a.is_square() || a.rows() != d) {
    throw DimensionError("transform: matrix " + a.shape() + " does not match encoding system dim " +
                         std::to_string(d));
  }
  TransformReport r;
  r.degree = p.degree();
  r.encoding_error = encoding_error(be, a);

  const RegularizedEncoding reg = regularize(be, order_for_degree(r.degree));
  r.order = reg.order;
  r.counter_qubits = reg.counter_qubits;
  r.source_ancillas = reg.source_ancillas;
  r.total_ancillas = 1 + reg.counter_qubits + reg.source_ancillas;
  r.circuit_dim = 2 * reg.base.dimension();

  const auto fitted = gqsp::fit_to_unit_circle(p, opt.margin, opt.sup_grid);
  r.encoding_scale = 1.0 / fitted.scale;
  const auto seq = gqsp::synthesize(fitted.polynomial);
  r.synthesis_residual = gqsp::synthesis_residual(seq, fitted.polynomial, opt.residual_grid);

  gqsp::ControlledOracle oracle(reg.base.unitary());
  const ComplexMatrix circuit = gqsp::lift(seq, oracle);
  r.block_encoding_calls = oracle.calls();

  r.result_block = block(circuit, 0, 0, d, d) * Complex{r.encoding_scale, 0.0};
  r.oracle_block = horner_eval(p, a);
  r.achieved_error = operator_norm(r.result_block - r.oracle_block);
  r.predicted_bound =
      r.encoding_scale * (r.synthesis_residual + lemma1_bound(r.degree, r.encoding_error));
  return r;
}

/// Block-encoding of P(A) for a square A with ||A|| <= 1 (or any A with
/// opt.rescale_matrix), verified against the Horner oracle.
inline TransformReport transform(const ComplexMatrix& a, const PolynomialSpec& p,
                                 const TransformOptions& opt = {}) {
  if (!a.is_square()) throw DimensionError("transform: matrix must be square, got " + a.shape());
  const double norm = operator_norm(a);
  if (norm <= 1.0 + kContractionSlack || !opt.rescale_matrix) {
    return transform(dilate(a), a, p, opt);  // dilate reports the norm violation
  }
  const ComplexMatrix scaled = a * Complex{1.0 / norm, 0.0};
  TransformReport r = transform(dilate(scaled), scaled, p.argument_scaled(norm), opt);
  r.matrix_scale = norm;
  r.oracle_block = horner_eval(p, a);
  r.achieved_error = operator_norm(r.result_block - r.oracle_block);
  return r;
}

}  // namespace qet
