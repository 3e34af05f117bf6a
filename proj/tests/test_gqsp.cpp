#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "qet/gqsp.hpp"
#include "qet/random.hpp"

using namespace qet;
using namespace qet::gqsp;

namespace {

Complex on_circle(std::size_t j, std::size_t grid) {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(grid));
}

const PolynomialSpec kHalfOnePlusZ2{0.5, 0.0, 0.5};

}  // namespace

TEST(SupNorm, Monomials) {
  for (std::size_t k = 0; k <= 10; ++k) {
    std::vector<Complex> c(k + 1, 0.0);
    c[k] = 1.0;
    EXPECT_NEAR(sup_norm_on_circle(PolynomialSpec(c)), 1.0, 1e-12);
  }
}

TEST(SupNorm, HalfOnePlusZSquared) { EXPECT_NEAR(sup_norm_on_circle(kHalfOnePlusZ2), 1.0, 1e-12); }

TEST(SupNorm, MatchesDenseGrid) {
  Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    std::vector<Complex> c(9);
    for (auto& z : c) z = random_gaussian(rng);
    EXPECT_NEAR(sup_norm_on_circle(PolynomialSpec(c)), oracle::dense_sup(c), 1e-7);
  }
}

TEST(SupNorm, NeverBelowDenseGridAtDegree64) {
  Rng rng(2);
  std::vector<Complex> c(65);
  for (auto& z : c) z = random_gaussian(rng);
  const double dense = oracle::dense_sup(c);
  const double got = sup_norm_on_circle(PolynomialSpec(c));
  EXPECT_GE(got, dense - 1e-8 * dense);
  EXPECT_LE(got, dense * (1.0 + 1e-6));
}

TEST(SupNorm, RejectsCoarseGrid) {
  EXPECT_THROW(sup_norm_on_circle(PolynomialSpec(std::vector<Complex>(10, 1.0)), 16), DimensionError);
}

TEST(Invariants, ParsevalBound) {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const PolynomialSpec p = random_bounded_polynomial(rng, 1 + t % 20, 1.0);
    double energy = 0.0;
    for (const Complex& a : p.coefficients()) energy += std::norm(a);
    EXPECT_LE(energy, 1.0 + 1e-8);
  }
}

TEST(Invariants, MaximumModulus) {
  Rng rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const PolynomialSpec p = random_bounded_polynomial(rng, 1 + t % 12, 0.9);
    const double sup = sup_norm_on_circle(p);
    for (int s = 0; s < 1000; ++s) {
      const Complex z = std::polar(std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
      EXPECT_LE(std::abs(p(z)), sup + 1e-8);
    }
  }
}

TEST(FitToUnitCircle, ReportsScale) {
  const PolynomialSpec p{1.0, 1.0};
  const auto fit = fit_to_unit_circle(p);
  EXPECT_NEAR(fit.sup_norm, 2.0, 1e-12);
  EXPECT_NEAR(fit.scale, (1.0 - kSynthesisMargin) / 2.0, 1e-12);
  EXPECT_NEAR(sup_norm_on_circle(fit.polynomial), 1.0 - kSynthesisMargin, 1e-12);
  EXPECT_EQ(fit_to_unit_circle(PolynomialSpec{0.5}).scale, 1.0);
}

TEST(AberthRoots, RecoverKnownRoots) {
  const std::vector<Complex> roots{{0.5, 0.1}, {-1.2, 0.0}, {0.0, 2.0}, {0.3, -0.7}};
  std::vector<Complex> c{1.0};
  for (const Complex& r : roots) {
    std::vector<Complex> next(c.size() + 1, 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
      next[j + 1] += c[j];
      next[j] -= r * c[j];
    }
    c = next;
  }
  const auto got = aberth_roots(c);
  ASSERT_EQ(got.size(), roots.size());
  for (const Complex& r : roots) {
    double best = 1e9;
    for (const Complex& g : got) best = std::min(best, std::abs(g - r));
    EXPECT_LE(best, 1e-12);
  }
}

TEST(Complete, ConstantCompletion) {
  const PolynomialSpec q = complete(PolynomialSpec{0.0, 0.5});
  EXPECT_EQ(q.degree(), 0u);
  EXPECT_NEAR(std::abs(q[0]), std::sqrt(3.0) / 2.0, 1e-12);
}

TEST(Complete, HalfOneMinusZSquaredUpToPhase) {
  const PolynomialSpec q = complete(kHalfOnePlusZ2);
  ASSERT_EQ(q.degree(), 2u);
  // Q = e^{i phi} (1 - z^2)/2, compare phase-free quantities.
  EXPECT_NEAR(std::abs(q[0]), 0.5, 1e-8);
  EXPECT_NEAR(std::abs(q[1]), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(q[2]), 0.5, 1e-8);
  EXPECT_NEAR(std::abs(q[0] + q[2]), 0.0, 1e-8);
  for (std::size_t j = 0; j < 64; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / 64.0;
    EXPECT_NEAR(std::norm(q(std::polar(1.0, theta))), std::pow(std::sin(theta), 2), 1e-8);
  }
}

TEST(Complete, RandomPolynomialsAreComplementary) {
  Rng rng(5);
  for (std::size_t deg : {1u, 2u, 8u, 16u, 32u, 64u}) {
    const PolynomialSpec p = random_bounded_polynomial(rng, deg, 0.9);
    const PolynomialSpec q = complete(p);
    EXPECT_LE(q.degree(), deg);
    EXPECT_LE(complementarity_residual(p, q, 4096), 1e-8) << "degree " << deg;
  }
}

TEST(Complete, ZeroGapGivesZeroCompletion) {
  EXPECT_TRUE(complete(PolynomialSpec{0.0, 0.0, 1.0}).is_zero());
}

TEST(Complete, RejectsOversizedPolynomial) {
  try {
    (void)complete(PolynomialSpec{0.8, 0.8});
    FAIL() << "no throw";
  } catch (const NormError& e) {
    EXPECT_NEAR(e.norm(), 1.6, 1e-9);
    EXPECT_NE(std::string(e.what()).find("rescale"), std::string::npos);
  }
}

TEST(Synthesize, IdentityPolynomialUsesPauliX) {
  const GqspSequence seq = synthesize(PolynomialSpec{0.0, 1.0});
  ASSERT_EQ(seq.degree(), 1u);
  const ComplexMatrix x{{0.0, 1.0}, {1.0, 0.0}};
  EXPECT_LE(oracle::dist(seq.rotations[0], x), 1e-14);
  EXPECT_LE(oracle::dist(seq.rotations[1], x), 1e-14);
  EXPECT_LE(std::abs(evaluate_scalar(seq, {0.0, 1.0}) - Complex(0.0, 1.0)), 1e-15);
}

TEST(Synthesize, DegreeZero) {
  const Complex c{0.3, -0.4};
  const GqspSequence seq = synthesize(PolynomialSpec{c});
  ASSERT_EQ(seq.rotations.size(), 1u);
  EXPECT_LE(std::abs(seq.rotations[0](0, 0) - c), 1e-15);
}

TEST(Synthesize, HalfOnePlusZSquared) {
  const GqspSequence seq = synthesize(kHalfOnePlusZ2);
  EXPECT_LE(synthesis_residual(seq, kHalfOnePlusZ2, 1024), 1e-9);
}

TEST(Synthesize, RotationsAreUnitary) {
  Rng rng(6);
  for (std::size_t deg : {1u, 4u, 9u, 16u}) {
    const GqspSequence seq = synthesize(random_bounded_polynomial(rng, deg, 0.9));
    ASSERT_EQ(seq.rotations.size(), deg + 1);
    for (const auto& r : seq.rotations) EXPECT_LE(oracle::unitarity_defect(r), 1e-12);
  }
}

TEST(Synthesize, RandomPolynomialsOnGrid) {
  Rng rng(7);
  for (std::size_t deg : {2u, 5u, 8u, 16u, 24u}) {
    const PolynomialSpec p = random_bounded_polynomial(rng, deg, 0.9);
    const GqspSequence seq = synthesize(p);
    double worst = 0.0;
    for (std::size_t j = 0; j < 1024; ++j) {
      const Complex z = on_circle(j, 1024);
      worst = std::max(worst, std::abs(evaluate_scalar(seq, z) - oracle::poly_at(p.coefficients(), z)));
    }
    EXPECT_LE(worst, 1e-8) << "degree " << deg;
  }
}

TEST(EvaluateScalar, AtOriginGivesConstantTerm) {
  Rng rng(8);
  const PolynomialSpec p = random_bounded_polynomial(rng, 6, 0.9);
  EXPECT_LE(std::abs(evaluate_scalar(synthesize(p), 0.0) - p[0]), 1e-12);
}

TEST(EvaluateScalar, InsideDiskMatchesPolynomial) {
  Rng rng(9);
  const PolynomialSpec p = random_bounded_polynomial(rng, 7, 0.9);
  const GqspSequence seq = synthesize(p);
  for (double r : {0.2, 0.7}) {
    const Complex z = std::polar(r, 1.1);
    EXPECT_LE(std::abs(evaluate_scalar(seq, z) - p(z)), 1e-10);
  }
}

TEST(ApplyToOperator, LinearPolynomialGivesU) {
  Rng rng(10);
  const ComplexMatrix u = random_unitary(rng, 3);
  const ComplexMatrix circuit = apply_to_operator(synthesize(PolynomialSpec{0.0, 1.0}), u);
  EXPECT_LE(oracle::dist(block(circuit, 0, 0, 3, 3), u), 1e-13);
}

TEST(ApplyToOperator, ConstantGivesScaledIdentity) {
  Rng rng(11);
  const Complex c{0.6, 0.2};
  const ComplexMatrix circuit = apply_to_operator(synthesize(PolynomialSpec{c}), random_unitary(rng, 3));
  EXPECT_LE(oracle::dist(block(circuit, 0, 0, 3, 3), ComplexMatrix::identity(3) * c), 1e-14);
}

TEST(ApplyToOperator, MatchesHornerOnRandomUnitary) {
  Rng rng(12);
  const ComplexMatrix u = random_unitary(rng, 4);
  const PolynomialSpec p = random_bounded_polynomial(rng, 6, 0.9);
  const ComplexMatrix circuit = apply_to_operator(synthesize(p), u);
  EXPECT_LE(oracle::dist(block(circuit, 0, 0, 4, 4), oracle::power_sum(p.coefficients(), u)), 1e-9);
  EXPECT_LE(oracle::unitarity_defect(circuit), 1e-10);
}

TEST(ApplyToOperator, SpectralConsistency) {
  Rng rng(13);
  const PolynomialSpec p = random_bounded_polynomial(rng, 5, 0.9);
  std::vector<Complex> phases;
  for (double t : {0.1, 1.7, -2.4, 3.0}) phases.push_back(std::polar(1.0, t));
  const ComplexMatrix circuit = apply_to_operator(synthesize(p), ComplexMatrix::diagonal(phases));
  std::vector<Complex> expected;
  for (const Complex& z : phases) expected.push_back(oracle::poly_at(p.coefficients(), z));
  EXPECT_LE(oracle::dist(block(circuit, 0, 0, 4, 4), ComplexMatrix::diagonal(expected)), 1e-9);
}

TEST(ApplyToOperator, RejectsNonUnitary) {
  EXPECT_THROW(apply_to_operator(synthesize(PolynomialSpec{0.0, 1.0}), ComplexMatrix::identity(2) * Complex{0.5, 0.0}),
               DimensionError);
}

TEST(ControlledOracle, CountsCalls) {
  Rng rng(14);
  const ComplexMatrix u = random_unitary(rng, 2);
  ControlledOracle oracle(u);
  (void)lift(synthesize(random_bounded_polynomial(rng, 5, 0.9)), oracle);
  EXPECT_EQ(oracle.calls(), 5u);
}
