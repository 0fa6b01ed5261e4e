#pragma once

// Regularized trace of the Gribov operator on the circles gamma_m:
//
//   sum_{k<=m} (sigma_k - l'' lambda_k)
//     + sum_{j=1}^{j_max} (1/2 pi i) oint ((-1)^{j-1}/j) Tr[(H_{mu,lambda} R0(s))^j] ds
//
// with R0(s) = (l''G - s)^{-1}. The sum tends to 0 along m when j_max >= 4.
//
// Both halves cancel to many digits, so the module is written for a generic
// Real and the acceptance runs use long double. Eigenvalue shifts
// sigma_k - l'' lambda_k are refined on H - l'' lambda_k I, whose diagonal
// is formed from exact integer differences.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "gribov/bargmann.hpp"
#include "gribov/errors.hpp"
#include "gribov/linalg.hpp"
#include "gribov/summation.hpp"

namespace gribov {

/// Precision used by the trace pipeline unless the caller picks another.
using TraceReal = long double;

/// N(m) = max(factor * m + offset, m + floor).
struct DimPolicy {
  std::size_t factor{4};
  std::size_t offset{0};
  std::size_t floor{60};

  std::size_t dim(std::size_t m) const { return std::max(factor * m + offset, m + floor); }
};

template <class Real = TraceReal>
struct ContourSpec {
  Real radius{0};
  std::size_t nodes{1024};  ///< power of two, >= 16; counterclockwise
  std::uint64_t m_index{3};

  void validate(const GribovParams<Real>& params) const {
    if (nodes < 16 || (nodes & (nodes - 1)) != 0)
      throw InvalidArgument("ContourSpec: nodes must be a power of two >= 16");
    const Real lo = params.lambda_pp * static_cast<Real>(eigenvalue_G(m_index));
    const Real hi = params.lambda_pp * static_cast<Real>(eigenvalue_G(m_index + 1));
    if (!(radius > lo && radius < hi))
      throw InvalidArgument("ContourSpec: radius must separate l''lambda_m from l''lambda_{m+1}");
  }
};

template <class Real = TraceReal>
struct QuadratureNode {
  Complex<Real> sigma;
  Complex<Real> weight;  ///< (1/2 pi i) d sigma
};

template <class Real = TraceReal>
struct CorrectionTerm {
  int order_j{1};
  Complex<Real> value;
  Real quad_error_estimate{0};  ///< |value(M) - value(M/2)|
};

template <class Real = TraceReal>
struct PartialTrace {
  Complex<Real> sum;
  std::vector<Complex<Real>> sigma;  ///< sigma_1..sigma_m, ascending real part
  std::vector<Complex<Real>> shifts;  ///< sigma_k - l'' lambda_k
  std::size_t count_h{0};
  std::size_t count_g{0};
};

template <class Real = TraceReal>
struct TraceReport {
  std::uint64_t m_index{0};
  Complex<Real> partial_sum;
  std::vector<CorrectionTerm<Real>> corrections;
  Complex<Real> residual;
  std::size_t truncation_dim{0};
  std::size_t count_h{0};
  std::size_t count_g{0};
  Real radius{0};
  std::size_t nodes{0};

  Real max_quad_error() const {
    Real e = 0;
    for (const auto& c : corrections) e = std::max(e, c.quad_error_estimate);
    return e;
  }
};

/// Tolerances shared by the trace operations.
template <class Real = TraceReal>
struct TraceOptions {
  Real eigen_tol{Real(1e-12)};  ///< backward error of each eigenpair, relative to ||H||_F
  Real quad_tol{Real(1e-6)};    ///< doubling estimate allowed per unit (1 + |value|)
};

/// l'' (lambda_m + lambda_{m+1}) / 2.
template <class Real>
Real radius_sequence(const GribovParams<Real>& params, std::uint64_t m) {
  params.validate(true);
  if (m < 3)
    throw InvalidArgument("radius_sequence: m >= 3 required (lambda_1 = lambda_2 = 0)");
  const auto sum = eigenvalue_G(m) + eigenvalue_G(m + 1);
  return params.lambda_pp * static_cast<Real>(sum) / 2;
}

template <class Real>
ContourSpec<Real> midpoint_contour(const GribovParams<Real>& params, std::uint64_t m,
                                   std::size_t nodes) {
  ContourSpec<Real> c{radius_sequence(params, m), nodes, m};
  c.validate(params);
  return c;
}

template <class Real>
std::vector<QuadratureNode<Real>> contour_nodes(const ContourSpec<Real>& spec) {
  const std::size_t n = spec.nodes;
  std::vector<QuadratureNode<Real>> out(n);
  const Real two_pi = 2 * std::numbers::pi_v<Real>;
  for (std::size_t k = 0; k < n; ++k) {
    const Real t = two_pi * static_cast<Real>(k) / static_cast<Real>(n);
    const Complex<Real> s = spec.radius * Complex<Real>(std::cos(t), std::sin(t));
    out[k] = {s, s / static_cast<Real>(n)};
  }
  return out;
}

namespace detail {

template <class Real>
void require_trunc_for(const TruncationSpec& trunc, std::uint64_t m) {
  require_start_one(trunc);
  if (trunc.dim < 4 * m)
    throw InvalidArgument("truncation dim " + std::to_string(trunc.dim) +
                          " is below 4m = " + std::to_string(4 * m));
}

template <class Real>
Real correction_sign(int j) {
  return (j % 2 ? Real(1) : Real(-1)) / static_cast<Real>(j);
}

}  // namespace detail

/// Correction integrals for j = 1..j_max from one pass over the contour.
/// Odd nodes are dropped for the M/2 comparison value.
template <class Real>
std::vector<CorrectionTerm<Real>> correction_integrals(const GribovParams<Real>& params,
                                                       const ContourSpec<Real>& contour,
                                                       const TruncationSpec& trunc, int j_max,
                                                       Real quad_tol = Real(1e-6)) {
  params.validate(true);
  contour.validate(params);
  detail::require_trunc_for<Real>(trunc, contour.m_index);
  if (j_max < 1 || j_max > kMaxTracePower)
    throw InvalidArgument("correction_integrals: j must lie in [1, 8]");

  const auto nodes = contour_nodes(contour);
  std::vector<CompensatedSum<Complex<Real>>> full(j_max), half(j_max);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto traces =
        traces_of_powers(perturbed_resolvent(params, nodes[k].sigma, trunc), j_max);
    for (int j = 0; j < j_max; ++j) {
      const Complex<Real> term = nodes[k].weight * traces[j];
      full[j] += term;
      if (k % 2 == 0) half[j] += Real(2) * term;
    }
  }

  std::vector<CorrectionTerm<Real>> out;
  for (int j = 1; j <= j_max; ++j) {
    const Real c = detail::correction_sign<Real>(j);
    CorrectionTerm<Real> t{j, c * full[j - 1].value(),
                           std::abs(c * (full[j - 1].value() - half[j - 1].value()))};
    if (!(t.quad_error_estimate <= quad_tol * (1 + std::abs(t.value))))
      throw QuadratureNotConverged(
          "correction j=" + std::to_string(j) + " at m=" + std::to_string(contour.m_index) +
          ": doubling estimate " + std::to_string(static_cast<double>(t.quad_error_estimate)));
    out.push_back(t);
  }
  return out;
}

template <class Real>
CorrectionTerm<Real> correction_integral(const GribovParams<Real>& params, int j,
                                         const ContourSpec<Real>& contour,
                                         const TruncationSpec& trunc,
                                         Real quad_tol = Real(1e-6)) {
  if (j < 1) throw InvalidArgument("correction_integral: j must be >= 1");
  return correction_integrals(params, contour, trunc, j, quad_tol).back();
}

/// sum_{k<=m} (sigma_k - l'' lambda_k) over the eigenvalues inside gamma_m.
template <class Real>
PartialTrace<Real> partial_trace_sum(const GribovParams<Real>& params, std::uint64_t m,
                                     const TruncationSpec& trunc,
                                     Real tol = Real(1e-12)) {
  params.validate(true);
  detail::require_trunc_for<Real>(trunc, m);
  const Real r = radius_sequence(params, m);
  const Spectrum<Real> spec = eigenvalues(build_full_operator(params, trunc), tol);

  PartialTrace<Real> out;
  std::vector<Complex<Real>> inside;
  for (const auto& s : spec.values) {
    if (std::abs(std::abs(s) - r) < Real(1e-6) * r)
      throw PoleCollision("partial_trace_sum: eigenvalue within 1e-6 r of gamma_" +
                          std::to_string(m));
    if (std::abs(s) < r) inside.push_back(s);
  }
  for (std::size_t i = 0; i < trunc.dim; ++i)
    if (params.lambda_pp * static_cast<Real>(eigenvalue_G(trunc.index_of(i))) < r) ++out.count_g;
  out.count_h = inside.size();
  if (out.count_h != out.count_g || out.count_h != m)
    throw CountMismatch("gamma_" + std::to_string(m) + " encloses " +
                        std::to_string(out.count_h) + " eigenvalues of H and " +
                        std::to_string(out.count_g) + " of l''G");

  // `inside` is already in ascending (Re, Im) order: pair it with lambda_1..m
  CompensatedSum<Complex<Real>> total;
  for (std::uint64_t k = 1; k <= m; ++k) {
    const Complex<Real> theta = inside[k - 1];
    Real gap = std::numeric_limits<Real>::infinity();
    for (const auto& s : spec.values)
      if (s != theta) gap = std::min(gap, std::abs(s - theta));
    const Real origin = params.lambda_pp * static_cast<Real>(eigenvalue_G(k));
    const auto shifted = build_full_operator_shifted(params, trunc, k);
    const auto refined =
        detail::refine_symmetric_tridiagonal(shifted, theta - origin, gap / 4);
    out.shifts.push_back(refined.value);
    out.sigma.push_back(refined.value + origin);
    total += refined.value;
  }
  out.sum = total.value();
  return out;
}

template <class Real>
TraceReport<Real> regularized_residual(const GribovParams<Real>& params, std::uint64_t m,
                                       int j_max, const TruncationSpec& trunc,
                                       const ContourSpec<Real>& contour,
                                       const TraceOptions<Real>& opts = {}) {
  if (j_max < 1 || j_max > 6)
    throw InvalidArgument("regularized_residual: j_max must lie in [1, 6]");
  if (contour.m_index != m)
    throw InvalidArgument("regularized_residual: contour belongs to another m");
  const auto pt = partial_trace_sum(params, m, trunc, opts.eigen_tol);

  TraceReport<Real> rep;
  rep.m_index = m;
  rep.partial_sum = pt.sum;
  rep.corrections = correction_integrals(params, contour, trunc, j_max, opts.quad_tol);
  rep.truncation_dim = trunc.dim;
  rep.count_h = pt.count_h;
  rep.count_g = pt.count_g;
  rep.radius = contour.radius;
  rep.nodes = contour.nodes;
  CompensatedSum<Complex<Real>> res;
  res += pt.sum;
  for (const auto& c : rep.corrections) res += c.value;
  rep.residual = res.value();
  return rep;
}

/// Smallest integer l >= delta/alpha + 1; nullopt stands for "unbounded"
/// (alpha = 0). Admissible: 1/2 <= delta < 2/3, 0 <= alpha < 2/3 - delta.
inline std::optional<int> correction_count_rule(double delta, double alpha) {
  if (!(delta >= 0.5 && delta < 2.0 / 3.0))
    throw DomainError("correction_count_rule: delta must lie in [1/2, 2/3)");
  if (!(alpha >= 0 && alpha < 2.0 / 3.0 - delta))
    throw DomainError("correction_count_rule: alpha must lie in [0, 2/3 - delta)");
  if (alpha == 0) return std::nullopt;
  const double x = delta / alpha + 1;
  // 0.6/0.05 lands a few ulps off 12; snap before taking the ceiling
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-12 * x) return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(x));
}

/// Limit of the rule as alpha approaches 2/3 - delta from below: the
/// smallest l strictly above delta/(2/3 - delta) + 1. Equals 5 at delta = 1/2.
inline int correction_count_limit(double delta) {
  if (!(delta >= 0.5 && delta < 2.0 / 3.0))
    throw DomainError("correction_count_limit: delta must lie in [1/2, 2/3)");
  const double bound = delta / (2.0 / 3.0 - delta) + 1;
  const double nearest = std::round(bound);
  if (std::abs(bound - nearest) <= 1e-12 * bound) return static_cast<int>(nearest) + 1;
  return static_cast<int>(std::floor(bound)) + 1;
}

}  // namespace gribov
