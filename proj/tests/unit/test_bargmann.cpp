#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "gribov/bargmann.hpp"

using namespace gribov;
using cd = std::complex<double>;

namespace {

GribovParams<double> params(double lpp, double mu, double lambda) {
  return GribovParams<double>{lpp, mu, lambda};
}

void expect_complex_near(cd actual, cd expected, double tol) {
  EXPECT_NEAR(actual.real(), expected.real(), tol);
  EXPECT_NEAR(actual.imag(), expected.imag(), tol);
}

}  // namespace

TEST(EigenvalueG, MatchesCubicFormula) {
  EXPECT_EQ(eigenvalue_G(3), 6u);
  EXPECT_EQ(eigenvalue_G(0), 0u);
  EXPECT_EQ(eigenvalue_G(1), 0u);
  EXPECT_EQ(eigenvalue_G(2), 0u);
  EXPECT_EQ(eigenvalue_G(5), 60u);
}

TEST(EigenvalueG, ConsecutiveGapIsThreeNTimesNMinusOne) {
  for (std::uint64_t n = 1; n <= 200000; ++n)
    ASSERT_EQ(eigenvalue_G(n + 1) - eigenvalue_G(n), 3 * n * (n - 1)) << n;
}

TEST(BuildPerturbation, TwoByTwo) {
  const auto op = build_perturbation(params(0, 1, 1), {2, 1});
  ASSERT_EQ(op.dim(), 2u);
  expect_complex_near(op.diag[0], 1.0, 0);
  expect_complex_near(op.diag[1], 2.0, 0);
  expect_complex_near(op.off[0], cd(0, std::sqrt(2.0)), 1e-15);
}

TEST(BuildPerturbation, DirectSubstitution) {
  const auto op = build_perturbation(params(0, 2, 0.5), {3, 1});
  expect_complex_near(op.diag[0], 2.0, 0);
  expect_complex_near(op.diag[1], 4.0, 0);
  expect_complex_near(op.diag[2], 6.0, 0);
  expect_complex_near(op.off[0], cd(0, 0.5 * std::sqrt(2.0)), 1e-15);
  expect_complex_near(op.off[1], cd(0, std::sqrt(3.0)), 1e-15);
}

TEST(BuildPerturbation, ZeroCouplingsGiveZeroMatrix) {
  const auto op = build_perturbation(params(1, 0, 0), {7, 1});
  EXPECT_EQ(op.frobenius_norm(), 0.0);
}

TEST(BuildPerturbation, RejectsStartIndexZero) {
  EXPECT_THROW(build_perturbation(params(1, 1, 1), {4, 0}), InvalidArgument);
  EXPECT_THROW(build_full_operator(params(1, 1, 1), {4, 0}), InvalidArgument);
}

TEST(BuildPerturbation, RejectsBadSpecAndParams) {
  EXPECT_THROW(build_perturbation(params(1, 1, 1), {1, 1}), InvalidArgument);
  EXPECT_THROW(build_perturbation(params(1, NAN, 1), {4, 1}), InvalidArgument);
}

TEST(BuildFullOperator, DiagonalCase) {
  const auto op = build_full_operator(params(1, 1, 0), {4, 1});
  const double want[] = {1, 2, 9, 28};
  for (int i = 0; i < 4; ++i) expect_complex_near(op.diag[i], want[i], 0);
  for (const auto& o : op.off) EXPECT_EQ(o, cd(0));
}

TEST(BuildFullOperator, PureG) {
  const auto op = build_full_operator(params(1, 0, 0), {5, 1});
  const double want[] = {0, 0, 6, 24, 60};
  for (int i = 0; i < 5; ++i) expect_complex_near(op.diag[i], want[i], 0);
}

TEST(BuildFullOperator, DirectSubstitution) {
  const auto op = build_full_operator(params(2, 1, 0.1), {3, 1});
  expect_complex_near(op.diag[0], 1.0, 0);
  expect_complex_near(op.diag[1], 2.0, 0);
  expect_complex_near(op.diag[2], 15.0, 0);
  expect_complex_near(op.off[0], cd(0, 0.1 * std::sqrt(2.0)), 1e-15);
  expect_complex_near(op.off[1], cd(0, 0.2 * std::sqrt(3.0)), 1e-15);
}

TEST(BuildFullOperator, ShiftedDiagonalIsExactDifference) {
  const auto p = params(1, 1, 0.1);
  const TruncationSpec spec{60, 1};
  const auto full = build_full_operator(p, spec);
  const auto shifted = build_full_operator_shifted(p, spec, 40);
  const double origin = static_cast<double>(eigenvalue_G(40));
  for (std::size_t i = 0; i < spec.dim; ++i)
    EXPECT_EQ(shifted.diag[i], full.diag[i] - origin);
  EXPECT_EQ(shifted.off, full.off);
}

TEST(BuildFullOperator, StructureIsRealDiagonalImaginaryOffDiagonal) {
  const auto op = build_full_operator(params(1.5, 0.7, -0.3), {40, 1});
  for (const auto& d : op.diag) EXPECT_EQ(d.imag(), 0.0);
  for (const auto& o : op.off) EXPECT_EQ(o.real(), 0.0);
  const auto m = op.dense();
  EXPECT_EQ((m - m.transpose()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Ladder, AnnihilationEntries) {
  const auto a = build_ladder({3, 0}, Ladder::annihilation);
  EXPECT_EQ(a(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(a(1, 2), std::sqrt(2.0));
  EXPECT_EQ(a.cwiseAbs().sum(), 1.0 + std::sqrt(2.0));
}

TEST(Ladder, CreationIsTranspose) {
  const auto a = build_ladder({3, 0}, Ladder::annihilation);
  const auto c = build_ladder({3, 0}, Ladder::creation);
  EXPECT_EQ((c - a.transpose()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Ladder, CommutatorIsIdentityAwayFromEdge) {
  const std::size_t n = 12;
  const auto a = build_ladder({n, 0}, Ladder::annihilation);
  const auto c = build_ladder({n, 0}, Ladder::creation);
  const Eigen::MatrixXd comm = a * c - c * a;
  const auto k = static_cast<Eigen::Index>(n - 1);
  EXPECT_LT((comm.topLeftCorner(k, k) - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff(),
            1e-13);
}

TEST(Ladder, RequiresStartIndexZero) {
  EXPECT_THROW(build_ladder({3, 1}, Ladder::annihilation), InvalidArgument);
}

// The tridiagonal formula must agree with mu a*a + i lambda (a*a^2 + a*^2 a)
// assembled from ladder matrices, away from the truncation edge.
TEST(BuildPerturbation, AgreesWithLadderAssembly) {
  const double mu = 0.8, lambda = 0.35;
  for (std::size_t n = 6; n <= 30; n += 3) {
    const std::size_t big = n + 1;  // e_0 .. e_n
    const Eigen::MatrixXcd a = build_ladder({big, 0}, Ladder::annihilation).cast<cd>();
    const Eigen::MatrixXcd c = a.transpose();
    const Eigen::MatrixXcd h = mu * c * a + cd(0, lambda) * (c * a * a + c * c * a);
    const auto op = build_perturbation(params(0, mu, lambda), {n, 1});
    const Eigen::MatrixXcd m = op.dense();
    const auto interior = static_cast<Eigen::Index>(n - 3);
    // rows/cols of m index e_1.., rows/cols of h index e_0..
    const Eigen::MatrixXcd diff =
        m.topLeftCorner(interior, interior) - h.block(1, 1, interior, interior);
    EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-13) << "N=" << n;
  }
}

TEST(ResolventDiagonal, BelowFirstPole) {
  const auto r = resolvent_diagonal(params(1, 0, 0), cd(-1), {3, 1});
  expect_complex_near(r.values[0], 1.0, 1e-15);
  expect_complex_near(r.values[1], 1.0, 1e-15);
  expect_complex_near(r.values[2], 1.0 / 7.0, 1e-15);
}

TEST(ResolventDiagonal, MidpointRadius) {
  const auto r = resolvent_diagonal(params(1, 0, 0), cd(15), {4, 1});
  const double want[] = {-1.0 / 15, -1.0 / 15, -1.0 / 9, 1.0 / 9};
  for (int i = 0; i < 4; ++i) expect_complex_near(r.values[i], want[i], 1e-15);
  for (std::size_t i = 0; i < 4; ++i) {
    const double g = static_cast<double>(eigenvalue_G(i + 1));
    expect_complex_near(r.values[i] * (g - cd(15)), 1.0, 1e-15);
  }
}

TEST(ResolventDiagonal, PoleCollision) {
  EXPECT_THROW(resolvent_diagonal(params(1, 0, 0), cd(6), {4, 1}), PoleCollision);
  EXPECT_THROW(resolvent_diagonal(params(1, 0, 0), cd(6 + 1e-13), {4, 1}), PoleCollision);
  EXPECT_NO_THROW(resolvent_diagonal(params(1, 0, 0), cd(6 + 1e-9), {4, 1}));
}
