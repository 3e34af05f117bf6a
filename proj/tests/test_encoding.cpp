#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qet/encoding.hpp"
#include "qet/random.hpp"

using namespace qet;

TEST(TopLeftBlock, ZeroAncillasIsWholeUnitary) {
  Rng rng(1);
  const ComplexMatrix u = random_unitary(rng, 4);
  EXPECT_EQ(top_left_block(BlockEncoding(u, 0, 4)), u);
}

TEST(TopLeftBlock, SwapGivesZero) {
  const ComplexMatrix x{{0.0, 1.0}, {1.0, 0.0}};
  const BlockEncoding be(kron(x, ComplexMatrix::identity(3)), 1, 3);
  EXPECT_EQ(top_left_block(be), ComplexMatrix(3, 3));
}

TEST(BlockEncoding, ValidatesShapeAndUnitarity) {
  EXPECT_THROW(BlockEncoding(ComplexMatrix::identity(6), 1, 2), DimensionError);
  EXPECT_THROW(BlockEncoding(ComplexMatrix::identity(4) * Complex{1.1, 0.0}, 1, 2), DimensionError);
  EXPECT_NO_THROW(BlockEncoding(ComplexMatrix::identity(8), 2, 2));
}

TEST(BlockEncoding, EncodedBlockIsContraction) {
  Rng rng(2);
  for (int t = 0; t < 30; ++t) {
    const std::size_t a = t % 3, d = 1 + t % 4;
    const BlockEncoding be(random_unitary(rng, (std::size_t{1} << a) * d), a, d);
    EXPECT_LE(oracle::norm2(top_left_block(be)), 1.0 + 1e-9);
  }
}

TEST(Dilate, ZeroMatrixGivesSwap) {
  const BlockEncoding be = dilate(ComplexMatrix(2, 2));
  ComplexMatrix swap(4, 4);
  set_block(swap, 0, 2, ComplexMatrix::identity(2));
  set_block(swap, 2, 0, ComplexMatrix::identity(2));
  EXPECT_LE(oracle::dist(be.unitary(), swap), 1e-14);
}

TEST(Dilate, UnitaryInputIsBlockDiagonal) {
  Rng rng(3);
  const ComplexMatrix v = random_unitary(rng, 3);
  const BlockEncoding be = dilate(v);
  EXPECT_LE(oracle::norm2(block(be.unitary(), 0, 3, 3, 3)), 1e-12);
  EXPECT_LE(oracle::norm2(block(be.unitary(), 3, 0, 3, 3)), 1e-12);
  EXPECT_LE(oracle::dist(block(be.unitary(), 3, 3, 3, 3), -adjoint(v)), 1e-14);
}

TEST(Dilate, RandomContractionIsUnitaryAndExact) {
  Rng rng(4);
  for (std::size_t d = 1; d <= 16; d += 3) {
    const ComplexMatrix a = random_contraction(rng, d, 0.8);
    const BlockEncoding be = dilate(a);
    EXPECT_EQ(be.ancilla_qubits(), 1u);
    EXPECT_LE(oracle::unitarity_defect(be.unitary()), 1e-10);
    EXPECT_LE(oracle::dist(top_left_block(be), a), 1e-10);
  }
}

TEST(Dilate, NormBoundary) {
  Rng rng(5);
  const ComplexMatrix a = random_contraction(rng, 4, 1.0);
  const BlockEncoding be = dilate(a);
  EXPECT_LE(oracle::unitarity_defect(be.unitary()), 1e-9);
  EXPECT_TRUE(verify_encoding(be, a, 1e-10));
}

TEST(Dilate, RejectsLargeNormWithHint) {
  const Complex d[] = {1.5, 0.2};
  try {
    (void)dilate(ComplexMatrix::diagonal(d));
    FAIL() << "no throw";
  } catch (const NormError& e) {
    EXPECT_NEAR(e.norm(), 1.5, 1e-12);
    EXPECT_NE(std::string(e.what()).find("rescale"), std::string::npos);
  }
  EXPECT_THROW(dilate(ComplexMatrix(2, 3)), DimensionError);
}

TEST(Rescale, ReturnsSubnormalization) {
  const Complex d[] = {-3.0, 0.5};
  const Rescaled r = rescale(ComplexMatrix::diagonal(d));
  EXPECT_NEAR(r.alpha, 3.0, 1e-12);
  EXPECT_NEAR(oracle::norm2(r.matrix), 1.0, 1e-12);
  EXPECT_NO_THROW(dilate(r.matrix));
}

TEST(VerifyEncoding, ExactDilation) {
  Rng rng(6);
  const ComplexMatrix a = random_contraction(rng, 3, 0.7);
  EXPECT_TRUE(verify_encoding(dilate(a), a, 1e-12));
}

TEST(VerifyEncoding, PerturbedTarget) {
  Rng rng(7);
  const ComplexMatrix a = random_contraction(rng, 3, 0.7);
  const ComplexMatrix e0 = random_matrix(rng, 3, 3);
  const ComplexMatrix e = e0 * Complex{1e-3 / oracle::norm2(e0), 0.0};
  const BlockEncoding be = dilate(a);
  EXPECT_TRUE(verify_encoding(be, a + e, 1e-2));
  EXPECT_FALSE(verify_encoding(be, a + e, 1e-4));
  EXPECT_THROW(verify_encoding(be, ComplexMatrix(2, 2), 1.0), DimensionError);
}

TEST(RegularityOrder, PlainDilationIsOnlyOneRegular) {
  Rng rng(8);
  const ComplexMatrix a = random_contraction(rng, 3, 0.8);
  EXPECT_EQ(regularity_order(dilate(a), a, 1e-8, 8), 1u);
}

TEST(RegularityOrder, UnitariesAreFullyRegular) {
  Rng rng(9);
  const ComplexMatrix u = random_unitary(rng, 3);
  const BlockEncoding be(u, 0, 3);
  for (std::size_t k_max : {1u, 2u, 7u, 16u, 64u}) EXPECT_EQ(regularity_order(be, u, 1e-10, k_max), k_max);
}

TEST(RegularityOrder, MonotoneInTolerance) {
  Rng rng(10);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix a = random_contraction(rng, 2, 0.9);
    const BlockEncoding be = dilate(a);
    // A slightly wrong target makes the order depend on the tolerance.
    const ComplexMatrix target = a + random_matrix(rng, 2, 2) * Complex{1e-4, 0.0};
    std::size_t prev = 100;
    for (double tol : {1.0, 1e-1, 1e-2, 1e-3}) {
      std::size_t order = 0;
      try {
        order = regularity_order(be, target, tol, 12);
      } catch (const EncodingMismatch&) {
        order = 0;
      }
      EXPECT_LE(order, prev);
      prev = order;
    }
  }
}

TEST(RegularityOrder, ThrowsWhenNotAnEncoding) {
  Rng rng(11);
  const ComplexMatrix a = random_contraction(rng, 2, 0.5);
  EXPECT_THROW(regularity_order(dilate(a), ComplexMatrix(2, 2), 1e-8, 4), EncodingMismatch);
}

TEST(PowerErrors, ZeroPowerIsExact) {
  Rng rng(12);
  const ComplexMatrix a = random_contraction(rng, 2, 0.5);
  const auto errs = power_errors(dilate(a), a, 3);
  ASSERT_EQ(errs.size(), 4u);
  EXPECT_EQ(errs[0], 0.0);
  EXPECT_LE(errs[1], 1e-12);
  EXPECT_GT(errs[2], 1e-3);
}
