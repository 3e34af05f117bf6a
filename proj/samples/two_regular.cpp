// The smallest case where a plain dilation is not enough: P(z) = (1 + z^2)/2.
//
// U_A squared has top-left block A^2 + BC, so it does not encode A^2. One
// counter qubit fixes that, and the resulting 2-regular encoding feeds a
// degree-2 GQSP circuit that calls it twice.

#include <cstdio>

#include "qet/qet.hpp"

int main() {
  using namespace qet;
  const ComplexMatrix a{{{0.3, 0.1}, {0.2, -0.4}}, {{0.0, 0.5}, {0.1, 0.0}}};
  const PolynomialSpec p{0.5, 0.0, 0.5};

  const BlockEncoding u_a = dilate(a);
  std::printf("plain dilation:  regularity order %zu\n", regularity_order(u_a, a, 1e-10, 4));

  const RegularizedEncoding reg = regularize(u_a, 2);
  const auto errs = power_errors(reg.base, a, 3);
  std::printf("2-regular:       errors k=1..3  %.2e  %.2e  %.2e\n", errs[1], errs[2], errs[3]);

  const TransformReport r = transform(a, p);
  std::printf("transform:       |P~(A) - P(A)| = %.2e with %zu calls and %zu ancillas\n",
              r.achieved_error, r.block_encoding_calls, r.total_ancillas);
  return r.achieved_error < 1e-9 ? 0 : 1;
}
