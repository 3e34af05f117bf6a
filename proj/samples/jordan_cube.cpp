// P(J) for a non-diagonalizable J. The block has norm above 1, so it is
// encoded as J/||J|| and the polynomial is rescaled to compensate.

#include <cstdio>

#include "qet/qet.hpp"

int main() {
  using namespace qet;
  const Complex lambda{0.5, 0.0};
  const ComplexMatrix j = analytic::jordan_block(lambda, 3);
  const PolynomialSpec cube{0.0, 0.0, 0.0, 1.0};

  TransformOptions opt;
  opt.rescale_matrix = true;
  const TransformReport r = transform(j, cube, opt);

  std::printf("||J|| = %.4f, circuit encodes P(J)/%.4f\n", r.matrix_scale, r.encoding_scale);
  for (std::size_t row = 0; row < 3; ++row) {
    for (std::size_t col = 0; col < 3; ++col) std::printf("%9.5f", r.result_block(row, col).real());
    std::printf("\n");
  }
  const double err = operator_norm(r.result_block - analytic::jordan_poly(cube, lambda, 3));
  std::printf("distance to the Toeplitz form: %.2e\n", err);
  return err < 1e-9 ? 0 : 1;
}
