#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gribov/sturm.hpp"

using namespace gribov;

TEST(Potential, CatalogHasZeroMean) {
  for (auto p : {Potential::zero, Potential::cos2x, Potential::linear_centered}) {
    // composite Simpson on [0, pi]
    const int n = 2000;
    const double h = std::numbers::pi / n;
    double s = potential_value(p, 0) + potential_value(p, std::numbers::pi);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * potential_value(p, i * h);
    EXPECT_NEAR(s * h / 3, 0.0, 1e-12) << to_string(p);
  }
}

TEST(Potential, Targets) {
  EXPECT_EQ(gelfand_levitan_target(Potential::zero), 0.0);
  EXPECT_NEAR(gelfand_levitan_target(Potential::cos2x), 0.5, 1e-15);
  EXPECT_NEAR(gelfand_levitan_target(Potential::linear_centered), 0.0, 1e-15);
}

TEST(Potential, ParseRoundTrip) {
  for (auto p : {Potential::zero, Potential::cos2x, Potential::linear_centered})
    EXPECT_EQ(parse_potential(to_string(p)), p);
  EXPECT_THROW(parse_potential("sin"), InvalidArgument);
}

TEST(Discretize, SymmetricStructure) {
  const auto t = discretize({Potential::cos2x, 128, 10});
  EXPECT_EQ(t.dim(), 128u);
  EXPECT_EQ(t.off.size(), 127u);
  const double h = std::numbers::pi / 127;
  EXPECT_DOUBLE_EQ(t.off.front(), -std::numbers::sqrt2 / (h * h));
  EXPECT_DOUBLE_EQ(t.off[5], -1 / (h * h));
  EXPECT_DOUBLE_EQ(t.diag[0], 2 / (h * h) + 1);
}

TEST(Discretize, RejectsCoarseGridOrTooManyModes) {
  EXPECT_THROW(discretize({Potential::zero, 32, 2}), InvalidArgument);
  EXPECT_THROW(discretize({Potential::zero, 256, 33}), InvalidArgument);
  EXPECT_NO_THROW(discretize({Potential::zero, 256, 32}));
}

TEST(LowestEigenvalues, ZeroPotentialMatchesDiscreteDispersion) {
  for (std::size_t g : {64u, 256u, 1024u}) {
    const SturmProblem problem{Potential::zero, g, g / 8};
    const auto sigma = lowest_eigenvalues(discretize(problem), g / 8 + 1);
    const double h = problem.step();
    const double scale = 4 / (h * h);  // ||T||
    for (std::size_t k = 0; k < sigma.size(); ++k) {
      const double exact = 2 / (h * h) * (1 - std::cos(static_cast<double>(k) * h));
      EXPECT_LE(std::abs(sigma[k] - exact), 1e-12 * std::max(1.0, scale)) << g << " " << k;
    }
  }
}

TEST(LowestEigenvalues, ZeroPotentialCoarseGridAbsolute) {
  const SturmProblem problem{Potential::zero, 64, 8};
  const auto sigma = lowest_eigenvalues(discretize(problem), 9);
  const double h = problem.step();
  for (std::size_t k = 0; k < sigma.size(); ++k)
    EXPECT_NEAR(sigma[k], 2 / (h * h) * (1 - std::cos(static_cast<double>(k) * h)), 1e-12);
}

TEST(LowestEigenvalues, ApproximatesSquares) {
  const auto sigma = lowest_eigenvalues(discretize({Potential::zero, 256, 4}), 4);
  const double h = std::numbers::pi / 255;
  for (int n = 0; n < 4; ++n) EXPECT_NEAR(sigma[n], n * n, std::pow(n, 4) * h * h / 12 + 1e-12);
}

TEST(LowestEigenvalues, AscendingAndReal) {
  const auto sigma = lowest_eigenvalues(discretize({Potential::linear_centered, 512, 60}), 61);
  for (std::size_t k = 1; k < sigma.size(); ++k) EXPECT_LT(sigma[k - 1], sigma[k]);
}

TEST(GelfandLevitan, CosineTarget) {
  const auto rep = gelfand_levitan_residual(Potential::cos2x, {2048, 4096}, 40);
  EXPECT_NEAR(rep.extrapolated_sum, 0.5, 1e-2);
  EXPECT_EQ(rep.partial_sums.size(), 41u);
  EXPECT_EQ(rep.partial_sums.back(), rep.extrapolated_sum);
  EXPECT_LT(rep.max_late_increment, 1e-3);
}

TEST(GelfandLevitan, ZeroTargets) {
  for (auto p : {Potential::zero, Potential::linear_centered}) {
    const auto rep = gelfand_levitan_residual(p, {2048, 4096}, 40);
    EXPECT_LT(std::abs(rep.extrapolated_sum), 1e-2) << to_string(p);
    EXPECT_EQ(rep.residual, rep.extrapolated_sum - rep.target);
  }
}

TEST(GelfandLevitan, ExtrapolationBeatsFinestGrid) {
  const auto rep = gelfand_levitan_residual(Potential::zero, {512, 1024}, 40);
  EXPECT_LT(std::abs(rep.extrapolated_sum), std::abs(rep.grid_sums[1]));
}

TEST(GelfandLevitan, GridOrderDoesNotMatter) {
  const auto a = gelfand_levitan_residual(Potential::cos2x, {1024, 512}, 20);
  const auto b = gelfand_levitan_residual(Potential::cos2x, {512, 1024}, 20);
  EXPECT_EQ(a.extrapolated_sum, b.extrapolated_sum);
  EXPECT_EQ(a.grids, (std::vector<std::size_t>{512, 1024}));
}

TEST(GelfandLevitan, RejectsSingleOrRepeatedGrid) {
  EXPECT_THROW(gelfand_levitan_residual(Potential::zero, {1024}, 20), InvalidArgument);
  EXPECT_THROW(gelfand_levitan_residual(Potential::zero, {1024, 1024}, 20), InvalidArgument);
  EXPECT_THROW(gelfand_levitan_residual(Potential::zero, {128, 256}, 20), InvalidArgument);
}
