#pragma once

#include <cmath>
#include <complex>

#include "gribov/bargmann.hpp"
#include "gribov/errors.hpp"
#include "gribov/linalg/band_matrix.hpp"
#include "gribov/linalg/eigensolver.hpp"
#include "gribov/linalg/lu.hpp"
#include "gribov/linalg/singular.hpp"

namespace gribov {

/// det(I + K) by LU with partial pivoting. Zero is a legitimate answer and
/// signals that I + K is not invertible.
template <class Real>
Complex<Real> fredholm_det(const DenseMatrix<Real>& k) {
  if (k.rows() != k.cols()) throw InvalidArgument("fredholm_det: matrix must be square");
  DenseMatrix<Real> a = k;
  a.diagonal().array() += Complex<Real>(1);
  return DenseLU<Real>(std::move(a)).determinant();
}

/// prod (1 + kappa_n) over the eigenvalues of K.
template <class Real>
Complex<Real> eigenvalue_product_det(const DenseMatrix<Real>& k, Real tol) {
  const auto s = eigenvalues<Real>(k, tol);
  Complex<Real> p(1);
  for (const auto& kappa : s.values) p *= Complex<Real>(1) + kappa;
  return p;
}

/// Tr(K^j) by dense repeated multiplication.
template <class Real>
Complex<Real> dense_trace_of_power(const DenseMatrix<Real>& k, int j) {
  if (j < 1) throw InvalidArgument("dense_trace_of_power: j must be >= 1");
  DenseMatrix<Real> p = k;
  for (int i = 1; i < j; ++i) p = (p * k).eval();
  return p.trace();
}

/// Truncated Plemelj series exp(sum_{m<=terms} (-1)^{m+1} Tr(K^m)/m).
/// This is the sign under which the series reproduces det(I + K); with
/// (-1)^m in place of (-1)^{m+1} the exponent is -log det(I + K).
template <class Real>
Complex<Real> plemelj_det(const DenseMatrix<Real>& k, int terms) {
  if (terms < 1) throw InvalidArgument("plemelj_det: terms must be >= 1");
  const auto nuclear = schatten_norm<Real>(k, Real(1));
  if (!(nuclear.value < Real(1)))
    throw DomainError("plemelj_det: series requires ||K||_1 < 1, got " +
                      std::to_string(static_cast<double>(nuclear.value)));
  Complex<Real> log_det(0);
  DenseMatrix<Real> p = k;
  for (int m = 1; m <= terms; ++m) {
    if (m > 1) p = (p * k).eval();
    const Real sign = (m % 2 == 1) ? Real(1) : Real(-1);
    log_det += sign * p.trace() / static_cast<Real>(m);
  }
  return std::exp(log_det);
}

/// H_{mu,lambda} (l''G - sigma)^{-1} on the truncation, as a band matrix.
template <class Real>
BandMatrix<Complex<Real>> perturbed_resolvent(const GribovParams<Real>& params,
                                              const Complex<Real>& sigma,
                                              const TruncationSpec& spec) {
  const auto r = resolvent_diagonal(params, sigma, spec);
  const auto p = BandMatrix<Complex<Real>>::from(build_perturbation(params, spec));
  return p.scale_columns(std::span<const Complex<Real>>(r.values));
}

/// det(I + H_{mu,lambda} (l''G - sigma)^{-1}) on the truncation, i.e.
/// det(H - sigma) / det(l''G - sigma).
template <class Real>
Complex<Real> perturbation_determinant(const GribovParams<Real>& params,
                                       const Complex<Real>& sigma,
                                       const TruncationSpec& spec) {
  const auto k = perturbed_resolvent(params, sigma, spec);
  const std::size_t n = k.dim();
  std::vector<Complex<Real>> lower(n - 1), diag(n), upper(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = Complex<Real>(1) + k(i, i);
    if (i + 1 < n) {
      upper[i] = k(i, i + 1);
      lower[i] = k(i + 1, i);
    }
  }
  return TridiagonalLU<Real>(std::move(lower), std::move(diag), std::move(upper)).determinant();
}

}  // namespace gribov
