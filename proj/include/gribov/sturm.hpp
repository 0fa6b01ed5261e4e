#pragma once

// Neumann Sturm-Liouville problem -y'' + q y = sigma y on [0, pi] as an end
// to end check of trace sums: for mean-zero q,
//
//   sum_{n>=0} (sigma_n - n^2) = (q(0) + q(pi)) / 4.
//
// Second-order differences with ghost-point Neumann closure; the boundary
// rows are rescaled by sqrt(2) so the matrix is symmetric. Eigenvalues come
// from Sturm-sequence bisection, sums are Richardson-extrapolated in h^2.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "gribov/errors.hpp"

namespace gribov {

enum class Potential { zero, cos2x, linear_centered };

inline std::string_view to_string(Potential p) {
  switch (p) {
    case Potential::zero: return "zero";
    case Potential::cos2x: return "cos2x";
    case Potential::linear_centered: return "linear_centered";
  }
  return "unknown";
}

inline Potential parse_potential(std::string_view name) {
  if (name == "zero") return Potential::zero;
  if (name == "cos2x") return Potential::cos2x;
  if (name == "linear_centered") return Potential::linear_centered;
  throw InvalidArgument("unknown potential '" + std::string(name) +
                        "' (expected zero, cos2x or linear_centered)");
}

/// Catalog potentials; each integrates to zero over [0, pi].
inline double potential_value(Potential p, double x) {
  switch (p) {
    case Potential::zero: return 0;
    case Potential::cos2x: return std::cos(2 * x);
    case Potential::linear_centered: return x - std::numbers::pi / 2;
  }
  return 0;
}

/// (q(0) + q(pi)) / 4.
inline double gelfand_levitan_target(Potential p) {
  return (potential_value(p, 0) + potential_value(p, std::numbers::pi)) / 4;
}

struct SturmProblem {
  Potential potential{Potential::zero};
  std::size_t grid_points{256};  ///< nodes x_i = i h, h = pi/(grid_points - 1)
  std::size_t n_max{20};         ///< modes n = 0..n_max are summed

  void validate() const {
    if (grid_points < 64) throw InvalidArgument("SturmProblem: grid_points must be >= 64");
    if (8 * n_max > grid_points)
      throw InvalidArgument("SturmProblem: n_max must not exceed grid_points/8");
  }
  double step() const { return std::numbers::pi / static_cast<double>(grid_points - 1); }
};

/// Real symmetric tridiagonal matrix.
struct SymmetricTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
  std::size_t dim() const { return diag.size(); }
};

inline SymmetricTridiagonal discretize(const SturmProblem& problem) {
  problem.validate();
  const std::size_t n = problem.grid_points;
  const double h = problem.step();
  const double inv_h2 = 1 / (h * h);
  SymmetricTridiagonal t;
  t.diag.resize(n);
  t.off.assign(n - 1, -inv_h2);
  for (std::size_t i = 0; i < n; ++i)
    t.diag[i] = 2 * inv_h2 + potential_value(problem.potential, static_cast<double>(i) * h);
  // ghost points give rows (2y_0 - 2y_1)/h^2 and (2y_{n-1} - 2y_{n-2})/h^2;
  // scaling the end unknowns by 1/sqrt(2) symmetrizes them
  t.off.front() = -std::numbers::sqrt2 * inv_h2;
  t.off.back() = -std::numbers::sqrt2 * inv_h2;
  return t;
}

namespace detail {

// Smallest pivot magnitude allowed in the Sturm recurrence (LAPACK pivmin):
// large enough that off^2 / pivmin cannot overflow.
inline double sturm_pivmin(const SymmetricTridiagonal& t) {
  double m = 1;
  for (double o : t.off) m = std::max(m, o * o);
  return std::numeric_limits<double>::min() * m;
}

// Number of eigenvalues of t below x (Sturm count via LDL^T pivots).
inline std::size_t sturm_count(const SymmetricTridiagonal& t, double x, double pivmin) {
  std::size_t count = 0;
  double d = t.diag[0] - x;
  for (std::size_t i = 0;; ++i) {
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0) ++count;
    if (i + 1 == t.dim()) break;
    d = (t.diag[i + 1] - x) - t.off[i] * t.off[i] / d;
  }
  return count;
}

}  // namespace detail

/// The k lowest eigenvalues, ascending, by bisection on Gershgorin bounds.
inline std::vector<double> lowest_eigenvalues(const SymmetricTridiagonal& t, std::size_t k) {
  if (k > t.dim()) throw InvalidArgument("lowest_eigenvalues: k exceeds dimension");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < t.dim(); ++i) {
    double r = 0;
    if (i > 0) r += std::abs(t.off[i - 1]);
    if (i + 1 < t.dim()) r += std::abs(t.off[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  const double pivmin = detail::sturm_pivmin(t);
  std::vector<double> out(k);
  for (std::size_t j = 0; j < k; ++j) {
    double a = j > 0 ? out[j - 1] : lo, b = hi;
    while (true) {
      const double mid = a + (b - a) / 2;
      if (mid <= a || mid >= b) break;
      if (detail::sturm_count(t, mid, pivmin) > j)
        b = mid;
      else
        a = mid;
    }
    out[j] = a + (b - a) / 2;
  }
  return out;
}

struct GelfandLevitanReport {
  Potential potential{Potential::zero};
  double target{0};
  std::size_t n_max{0};
  std::vector<std::size_t> grids;
  std::vector<double> grid_sums;       ///< sum_{n<=n_max} (sigma_n - n^2) per grid
  std::vector<double> partial_sums;    ///< extrapolated S(N') for N' = 0..n_max
  double extrapolated_sum{0};
  double residual{0};                  ///< extrapolated_sum - target
  double max_late_increment{0};        ///< max |S(N') - S(N'-1)| for N' in [n_max/2, n_max]
  std::string index_convention{"n >= 0, lambda_n = n^2"};
};

/// Trace sums on each grid and their h^2 Richardson extrapolation from the
/// two finest grids.
inline GelfandLevitanReport gelfand_levitan_residual(Potential potential,
                                                     std::vector<std::size_t> grids,
                                                     std::size_t n_max) {
  if (grids.size() < 2) throw InvalidArgument("gelfand_levitan_residual: need two or more grids");
  std::sort(grids.begin(), grids.end());
  if (std::adjacent_find(grids.begin(), grids.end()) != grids.end())
    throw InvalidArgument("gelfand_levitan_residual: grids must be distinct");

  GelfandLevitanReport rep;
  rep.potential = potential;
  rep.target = gelfand_levitan_target(potential);
  rep.n_max = n_max;
  rep.grids = grids;
  std::vector<std::vector<double>> terms;
  for (auto g : grids) {
    const SturmProblem problem{potential, g, n_max};
    const auto sigma = lowest_eigenvalues(discretize(problem), n_max + 1);
    std::vector<double> t(n_max + 1);
    double s = 0;
    for (std::size_t n = 0; n <= n_max; ++n) {
      t[n] = sigma[n] - static_cast<double>(n * n);
      s += t[n];
    }
    rep.grid_sums.push_back(s);
    terms.push_back(std::move(t));
  }

  const std::size_t fine = grids.size() - 1, coarse = fine - 1;
  const double h1 = SturmProblem{potential, grids[coarse], n_max}.step();
  const double h2 = SturmProblem{potential, grids[fine], n_max}.step();
  const double w1 = h1 * h1, w2 = h2 * h2;
  double s = 0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    const double t = (w1 * terms[fine][n] - w2 * terms[coarse][n]) / (w1 - w2);
    s += t;
    rep.partial_sums.push_back(s);
    if (2 * n >= n_max) rep.max_late_increment = std::max(rep.max_late_increment, std::abs(t));
  }
  rep.extrapolated_sum = s;
  rep.residual = s - rep.target;
  return rep;
}

}  // namespace gribov
