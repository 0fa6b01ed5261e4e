#pragma once

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "gribov/bargmann.hpp"
#include "gribov/errors.hpp"
#include "gribov/summation.hpp"

namespace gribov {

namespace detail {

template <class Matrix>
std::vector<typename Matrix::RealScalar> bdc_singular_values(const Matrix& a) {
  using Real = typename Matrix::RealScalar;
  if (!a.allFinite()) throw InvalidArgument("singular_values: non-finite entries");
  if (a.size() == 0) return {};
  Eigen::BDCSVD<Matrix> svd(a);
  if (svd.info() != Eigen::Success) throw NoConvergence("singular_values: SVD failed");
  const auto& s = svd.singularValues();
  std::vector<Real> out(s.data(), s.data() + s.size());
  // BDCSVD already sorts; make the contract explicit for the tiny cases
  // that fall back to Jacobi sweeps.
  std::sort(out.begin(), out.end(), std::greater<Real>());
  for (auto& x : out)
    if (x < Real(0)) x = Real(0);
  return out;
}

}  // namespace detail

/// Nonincreasing singular values (s-numbers) of a dense matrix.
template <class Real>
std::vector<Real> singular_values(const DenseMatrix<Real>& a) {
  return detail::bdc_singular_values(a);
}

template <class Real>
std::vector<Real> singular_values(
    const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>& a) {
  return detail::bdc_singular_values(a);
}

template <class Real>
std::vector<Real> singular_values(const TridiagonalOperator<Real>& op) {
  return singular_values<Real>(op.dense());
}

template <class Real = double>
struct SchattenReport {
  Real order_p{1};
  /// (sum s^p)^(1/p) for p >= 1, the raw sum for p < 1.
  Real value{0};
  std::size_t singular_count{0};
};

template <class Real>
SchattenReport<Real> schatten_norm(std::span<const Real> s, Real p) {
  if (!(p > 0)) throw InvalidArgument("schatten_norm: p must be positive");
  CompensatedSum<Real> acc;
  for (const auto x : s) acc += std::pow(x, p);
  SchattenReport<Real> r;
  r.order_p = p;
  r.singular_count = s.size();
  r.value = p >= 1 ? std::pow(acc.value(), Real(1) / p) : acc.value();
  return r;
}

template <class Real>
SchattenReport<Real> schatten_norm(const DenseMatrix<Real>& a, Real p) {
  if (!(p > 0)) throw InvalidArgument("schatten_norm: p must be positive");
  const auto s = singular_values(a);
  return schatten_norm<Real>(std::span<const Real>(s), p);
}

}  // namespace gribov
