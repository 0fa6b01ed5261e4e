#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "gribov/trace_formula.hpp"

using namespace gribov;
using R = TraceReal;
using C = std::complex<R>;

namespace {

const GribovParams<R> kGribov{1, 1, 0.1L};
const GribovParams<R> kDiagonal{1, 1, 0};

TruncationSpec trunc_for(std::uint64_t m, std::size_t extra = 20) {
  return {static_cast<std::size_t>(4 * m + extra), 1};
}

// Residue calculus for Tr(K^2), K = H_{mu,lambda} R0: only the pair
// (m, m+1) straddles the circle, contributing
// 2 (i lambda m sqrt(m+1))^2 * (-1 / (l''(lambda_{m+1} - lambda_m))), times -1/2.
R j2_closed_form(const GribovParams<R>& p, std::uint64_t m) {
  const R mm = static_cast<R>(m);
  return -p.lambda * p.lambda * mm * (mm + 1) / (3 * p.lambda_pp * (mm - 1));
}

}  // namespace

TEST(RadiusSequence, Examples) {
  EXPECT_EQ(radius_sequence(GribovParams<R>{1, 0, 0}, 3), 15);
  EXPECT_EQ(radius_sequence(GribovParams<R>{2, 0, 0}, 3), 30);
  EXPECT_THROW(radius_sequence(GribovParams<R>{1, 0, 0}, 1), InvalidArgument);
  EXPECT_THROW(radius_sequence(GribovParams<R>{1, 0, 0}, 2), InvalidArgument);
  EXPECT_THROW(radius_sequence(GribovParams<R>{0, 1, 0}, 4), InvalidArgument);
}

TEST(ContourSpec, Validation) {
  EXPECT_NO_THROW(midpoint_contour(kGribov, 5, 16));
  EXPECT_THROW(midpoint_contour(kGribov, 5, 8), InvalidArgument);
  EXPECT_THROW(midpoint_contour(kGribov, 5, 100), InvalidArgument);
  ContourSpec<R> c{24, 64, 3};  // lambda_4 = 24 is on the circle
  EXPECT_THROW(c.validate(kGribov), InvalidArgument);
}

TEST(ContourNodes, ResidueInside) {
  const auto nodes = contour_nodes(ContourSpec<R>{1, 64, 3});
  CompensatedSum<C> s;
  for (const auto& q : nodes) s += q.weight / (C(0) - q.sigma);
  EXPECT_LT(std::abs(s.value() - C(-1)), 1e-12);
}

TEST(ContourNodes, PoleOutsideGivesZero) {
  const auto nodes = contour_nodes(ContourSpec<R>{1, 64, 3});
  CompensatedSum<C> s;
  for (const auto& q : nodes) s += q.weight / (C(2) - q.sigma);
  EXPECT_LT(std::abs(s.value()), 1e-12);
}

TEST(ContourNodes, FirstMomentMatchesCauchy) {
  const C a(0.3L, -0.2L);
  const auto nodes = contour_nodes(ContourSpec<R>{1, 64, 3});
  CompensatedSum<C> s;
  for (const auto& q : nodes) s += q.weight * q.sigma / (a - q.sigma);
  EXPECT_LT(std::abs(s.value() + a), 1e-12);
}

TEST(ContourNodes, CounterclockwiseOrientation) {
  const auto nodes = contour_nodes(ContourSpec<R>{2, 16, 3});
  EXPECT_EQ(nodes[0].sigma, C(2));
  EXPECT_NEAR(static_cast<double>(nodes[4].sigma.imag()), 2.0, 1e-15);
  EXPECT_NEAR(static_cast<double>(std::abs(nodes[4].sigma.real())), 0.0, 1e-15);
}

TEST(CorrectionIntegral, DiagonalCaseFirstOrder) {
  for (std::uint64_t m : {3u, 7u, 15u}) {
    const auto c = midpoint_contour(kDiagonal, m, 512);
    const auto t = correction_integral(kDiagonal, 1, c, trunc_for(m));
    const R want = -static_cast<R>(m * (m + 1)) / 2;
    EXPECT_LT(std::abs(t.value - want), 1e-10 * std::abs(want)) << m;
    EXPECT_EQ(t.order_j, 1);
  }
}

TEST(CorrectionIntegral, DiagonalCaseHigherOrdersVanish) {
  const std::uint64_t m = 8;
  const auto c = midpoint_contour(kDiagonal, m, 1024);
  const auto terms = correction_integrals(kDiagonal, c, trunc_for(m), 6);
  const R scale = 1 + std::abs(terms[0].value);
  for (int j = 2; j <= 6; ++j)
    EXPECT_LT(std::abs(terms[j - 1].value), 1e-10 * scale) << j;
}

TEST(CorrectionIntegral, FirstOrderIsLambdaIndependent) {
  for (R lambda : {0.05L, 0.1L, 0.3L})
    for (std::uint64_t m : {3u, 10u, 25u}) {
      const GribovParams<R> p{1, 1, lambda};
      const auto t = correction_integral(p, 1, midpoint_contour(p, m, 1024), trunc_for(m));
      const R want = -static_cast<R>(m * (m + 1)) / 2;
      EXPECT_LT(std::abs(t.value - want), 1e-9 * std::abs(want)) << lambda << " " << m;
    }
}

TEST(CorrectionIntegral, SecondOrderAtMThree) {
  const auto t = correction_integral(kGribov, 2, midpoint_contour(kGribov, 3, 1024), trunc_for(3));
  EXPECT_NEAR(static_cast<double>(t.value.real()), -0.02, 1e-12);
  EXPECT_NEAR(static_cast<double>(t.value.imag()), 0.0, 1e-12);
}

TEST(CorrectionIntegral, SecondOrderMatchesBoundaryPair) {
  for (std::uint64_t m = 3; m <= 40; ++m) {
    const auto t =
        correction_integral(kGribov, 2, midpoint_contour(kGribov, m, 1024), trunc_for(m));
    const R want = j2_closed_form(kGribov, m);
    EXPECT_LT(std::abs(t.value - want), 1e-8 * std::abs(want)) << m;
  }
}

TEST(CorrectionIntegral, SecondOrderScalesWithCouplings) {
  const GribovParams<R> p{2, 0.5L, 0.3L};
  const std::uint64_t m = 6;
  const auto t = correction_integral(p, 2, midpoint_contour(p, m, 1024), trunc_for(m));
  EXPECT_LT(std::abs(t.value - j2_closed_form(p, m)), 1e-10 * std::abs(j2_closed_form(p, m)));
}

TEST(CorrectionIntegral, NodeDoublingStable) {
  // pole distance from the circle is 3/(2m-1) r, at least 0.1 r for m <= 15
  for (std::uint64_t m = 3; m <= 15; ++m) {
    const auto a = correction_integrals(kGribov, midpoint_contour(kGribov, m, 512), trunc_for(m), 4);
    const auto b = correction_integrals(kGribov, midpoint_contour(kGribov, m, 1024), trunc_for(m), 4);
    for (int j = 0; j < 4; ++j)
      EXPECT_LT(std::abs(a[j].value - b[j].value), 1e-10 * std::abs(b[j].value)) << m << " " << j;
  }
}

TEST(CorrectionIntegral, ErrorEstimateIsDoublingDifference) {
  const std::uint64_t m = 5;
  const auto t16 = correction_integral(kGribov, 1, midpoint_contour(kGribov, m, 16), trunc_for(m), 1.0L);
  const auto t32 = correction_integral(kGribov, 1, midpoint_contour(kGribov, m, 32), trunc_for(m), 1.0L);
  EXPECT_NEAR(static_cast<double>(t32.quad_error_estimate),
              static_cast<double>(std::abs(t32.value - t16.value)), 1e-12);
}

TEST(CorrectionIntegral, ThrowsWhenQuadratureUnresolved) {
  const std::uint64_t m = 30;
  EXPECT_THROW(correction_integral(kGribov, 1, midpoint_contour(kGribov, m, 16), trunc_for(m)),
               QuadratureNotConverged);
}

TEST(CorrectionIntegral, RejectsBadInputs) {
  const auto c = midpoint_contour(kGribov, 5, 64);
  EXPECT_THROW(correction_integral(kGribov, 0, c, trunc_for(5)), InvalidArgument);
  EXPECT_THROW(correction_integral(kGribov, 9, c, trunc_for(5)), InvalidArgument);
  EXPECT_THROW(correction_integral(kGribov, 1, c, TruncationSpec{19, 1}), InvalidArgument);
  EXPECT_THROW(correction_integral(kGribov, 1, c, TruncationSpec{40, 0}), InvalidArgument);
}

TEST(PartialTraceSum, DiagonalCase) {
  for (std::uint64_t m : {3u, 10u, 25u}) {
    const auto pt = partial_trace_sum(kDiagonal, m, trunc_for(m));
    EXPECT_EQ(pt.sum, C(static_cast<R>(m * (m + 1)) / 2)) << m;
    EXPECT_EQ(pt.count_h, m);
    EXPECT_EQ(pt.count_g, m);
  }
}

TEST(PartialTraceSum, ZeroCouplings) {
  const auto pt = partial_trace_sum(GribovParams<R>{1, 0, 0}, 6, trunc_for(6));
  EXPECT_EQ(pt.sum, C(0));
}

TEST(PartialTraceSum, StableUnderTruncationGrowth) {
  const auto a = partial_trace_sum(kGribov, 10, TruncationSpec{60, 1});
  const auto b = partial_trace_sum(kGribov, 10, TruncationSpec{80, 1});
  EXPECT_LT(std::abs(a.sum - b.sum), 1e-8);
}

TEST(PartialTraceSum, ShiftsAgreeWithPlainEigenvalues) {
  const std::uint64_t m = 12;
  const auto pt = partial_trace_sum(kGribov, m, trunc_for(m));
  const auto spec = eigenvalues(build_full_operator(kGribov, trunc_for(m)), 1e-12L);
  for (std::uint64_t k = 1; k <= m; ++k) {
    EXPECT_LT(std::abs(pt.sigma[k - 1] - spec.values[k - 1]), 1e-10 * std::abs(spec.values[k - 1]));
    const R origin = static_cast<R>(eigenvalue_G(k));
    EXPECT_EQ(pt.sigma[k - 1], pt.shifts[k - 1] + origin);
  }
}

TEST(PartialTraceSum, CountMismatchWhenEigenvaluesEscape) {
  // sigma_k = lambda_k + 50k all lie outside r_3 = 15
  EXPECT_THROW(partial_trace_sum(GribovParams<R>{1, 50, 0}, 3, trunc_for(3)), CountMismatch);
}

TEST(PartialTraceSum, RejectsSmallTruncation) {
  EXPECT_THROW(partial_trace_sum(kGribov, 10, TruncationSpec{39, 1}), InvalidArgument);
}

TEST(RegularizedResidual, DiagonalClosure) {
  for (std::uint64_t m : {3u, 9u, 20u, 40u})
    for (int j_max : {1, 4}) {
      const auto rep = regularized_residual(kDiagonal, m, j_max, trunc_for(m),
                                            midpoint_contour(kDiagonal, m, 1024));
      EXPECT_LE(std::abs(rep.residual), 1e-9 * static_cast<R>(m * m)) << m << " " << j_max;
      EXPECT_EQ(rep.corrections.size(), static_cast<std::size_t>(j_max));
    }
}

TEST(RegularizedResidual, ResidualIsDefinitionalSum) {
  const auto rep = regularized_residual(kGribov, 7, 4, trunc_for(7), midpoint_contour(kGribov, 7, 512));
  C s = rep.partial_sum;
  for (const auto& c : rep.corrections) s += c.value;
  EXPECT_LT(std::abs(s - rep.residual), 1e-15);
  EXPECT_EQ(rep.count_h, rep.count_g);
  EXPECT_EQ(rep.truncation_dim, 48u);
}

TEST(RegularizedResidual, DecreasesAlongRadii) {
  R previous = std::numeric_limits<R>::infinity();
  for (std::uint64_t m : {5u, 10u, 20u, 40u}) {
    const auto rep = regularized_residual(kGribov, m, 4, trunc_for(m),
                                          midpoint_contour(kGribov, m, 1024));
    EXPECT_LT(std::abs(rep.residual), previous) << m;
    previous = std::abs(rep.residual);
  }
}

TEST(RegularizedResidual, MoreCorrectionsAbsorbMore) {
  const std::uint64_t m = 20;
  const auto c = midpoint_contour(kGribov, m, 1024);
  const auto one = regularized_residual(kGribov, m, 1, trunc_for(m), c);
  const auto four = regularized_residual(kGribov, m, 4, trunc_for(m), c);
  EXPECT_LT(std::abs(four.residual), std::abs(one.residual));
}

TEST(RegularizedResidual, RejectsBadJMaxAndForeignContour) {
  const auto c = midpoint_contour(kGribov, 5, 64);
  EXPECT_THROW(regularized_residual(kGribov, 5, 0, trunc_for(5), c), InvalidArgument);
  EXPECT_THROW(regularized_residual(kGribov, 5, 7, trunc_for(5), c), InvalidArgument);
  EXPECT_THROW(regularized_residual(kGribov, 6, 4, trunc_for(6), c), InvalidArgument);
}

TEST(RegularizedResidual, WorksInDoublePrecision) {
  const GribovParams<double> p{1, 1, 0.1};
  const auto rep = regularized_residual(p, 5, 4, TruncationSpec{40, 1}, midpoint_contour(p, 5, 256));
  EXPECT_LT(std::abs(rep.residual), 1e-6);
}

TEST(CorrectionCountRule, Examples) {
  EXPECT_EQ(correction_count_rule(0.5, 0.15), 5);
  EXPECT_EQ(correction_count_rule(0.6, 0.05), 13);
  EXPECT_EQ(correction_count_rule(0.5, 1.0 / 6.0 - 1e-9), 5);
  EXPECT_FALSE(correction_count_rule(0.55, 0.0).has_value());
  EXPECT_EQ(correction_count_limit(0.5), 5);
}

TEST(CorrectionCountRule, RejectsOutsideWindow) {
  EXPECT_THROW(correction_count_rule(0.4, 0.1), DomainError);
  EXPECT_THROW(correction_count_rule(2.0 / 3.0, 0.0), DomainError);
  EXPECT_THROW(correction_count_rule(0.5, 1.0 / 6.0), DomainError);
  EXPECT_THROW(correction_count_rule(0.5, -0.01), DomainError);
}

TEST(DimPolicy, Defaults) {
  const DimPolicy d;
  EXPECT_EQ(d.dim(3), 63u);
  EXPECT_EQ(d.dim(20), 80u);
  EXPECT_EQ(d.dim(40), 160u);
  EXPECT_EQ((DimPolicy{4, 20, 0}.dim(40)), 180u);
}
