#pragma once

// Finite truncations of the magic Gribov operator
//
//   H = l'' G + H_{mu,lambda},   G = a*^3 a^3,
//   H_{mu,lambda} = mu a*a + i lambda a*(a + a*)a
//
// in the orthonormal Bargmann basis e_n(z) = z^n / sqrt(n!). G is diagonal
// with eigenvalues n(n-1)(n-2); the perturbation is tridiagonal and complex
// symmetric (never Hermitian unless lambda = 0).

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gribov/errors.hpp"

namespace gribov {

template <class Real>
using Complex = std::complex<Real>;

template <class Real>
using DenseMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <class Real>
using DenseVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

/// The three real couplings of the Gribov Hamiltonian.
template <class Real = double>
struct GribovParams {
  Real lambda_pp{1};  ///< magic coupling l''
  Real mu{0};         ///< Pomeron intercept
  Real lambda{0};     ///< triple coupling

  /// Throws InvalidArgument unless every coupling is finite. Trace-formula
  /// and contour code pass `require_positive_lambda_pp = true`.
  void validate(bool require_positive_lambda_pp = false) const {
    if (!std::isfinite(static_cast<double>(lambda_pp)) ||
        !std::isfinite(static_cast<double>(mu)) ||
        !std::isfinite(static_cast<double>(lambda)))
      throw InvalidArgument("GribovParams: couplings must be finite");
    if (require_positive_lambda_pp && !(lambda_pp > 0))
      throw InvalidArgument("GribovParams: lambda'' must be positive here");
  }

  template <class Other>
  GribovParams<Other> cast() const {
    return {static_cast<Other>(lambda_pp), static_cast<Other>(mu),
            static_cast<Other>(lambda)};
  }
};

/// Retained basis states e_{start}, ..., e_{start + dim - 1}.
struct TruncationSpec {
  std::size_t dim{2};
  int start_index{1};

  void validate() const {
    if (dim < 2) throw InvalidArgument("TruncationSpec: dim must be >= 2");
    if (start_index != 0 && start_index != 1)
      throw InvalidArgument("TruncationSpec: start_index must be 0 or 1");
  }
  std::uint64_t index_of(std::size_t row) const {
    return static_cast<std::uint64_t>(start_index) + row;
  }
};

/// Complex symmetric tridiagonal matrix. off[k] couples rows k and k+1 and
/// is stored once, so M = M^T holds structurally.
template <class Real = double>
struct TridiagonalOperator {
  std::vector<Complex<Real>> diag;
  std::vector<Complex<Real>> off;

  std::size_t dim() const { return diag.size(); }

  DenseMatrix<Real> dense() const {
    const auto n = static_cast<Eigen::Index>(dim());
    DenseMatrix<Real> m = DenseMatrix<Real>::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diag[i];
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      m(i, i + 1) = off[i];
      m(i + 1, i) = off[i];
    }
    return m;
  }

  Real frobenius_norm() const {
    Real s = 0;
    for (const auto& d : diag) s += std::norm(d);
    for (const auto& o : off) s += 2 * std::norm(o);
    return std::sqrt(s);
  }

  /// y = M x; x and y must have length dim().
  void apply(std::span<const Complex<Real>> x, std::span<Complex<Real>> y) const {
    const std::size_t n = dim();
    for (std::size_t i = 0; i < n; ++i) {
      Complex<Real> acc = diag[i] * x[i];
      if (i > 0) acc += off[i - 1] * x[i - 1];
      if (i + 1 < n) acc += off[i] * x[i + 1];
      y[i] = acc;
    }
  }

  bool all_finite() const {
    auto fin = [](const Complex<Real>& z) {
      return std::isfinite(static_cast<double>(z.real())) &&
             std::isfinite(static_cast<double>(z.imag()));
    };
    for (const auto& d : diag)
      if (!fin(d)) return false;
    for (const auto& o : off)
      if (!fin(o)) return false;
    return true;
  }
};

/// Values 1/(l'' lambda_n - sigma) of the diagonal resolvent of l''G.
template <class Real = double>
struct DiagonalResolvent {
  std::vector<Complex<Real>> values;
  Complex<Real> sigma;
  std::size_t dim() const { return values.size(); }
};

/// Eigenvalue n(n-1)(n-2) of G; exact in 64-bit for n up to ~2.6e6.
constexpr std::uint64_t eigenvalue_G(std::uint64_t n) {
  return n < 3 ? 0 : n * (n - 1) * (n - 2);
}

namespace detail {

inline void require_start_one(const TruncationSpec& spec) {
  spec.validate();
  if (spec.start_index != 1)
    throw InvalidArgument(
        "start_index 0 is rejected: e_0 is annihilated by H and spoils the "
        "n = 1, 2, ... indexing of the operator matrix");
}

template <class Real>
Complex<Real> offdiag_coupling(const GribovParams<Real>& p, std::uint64_t n) {
  // <H e_n, e_{n+1}> = <H e_{n+1}, e_n> = i lambda n sqrt(n+1)
  const Real nn = static_cast<Real>(n);
  return {Real(0), p.lambda * nn * std::sqrt(nn + 1)};
}

}  // namespace detail

/// Matrix of H_{mu,lambda}: diag mu n, off i lambda n sqrt(n+1).
template <class Real>
TridiagonalOperator<Real> build_perturbation(const GribovParams<Real>& params,
                                             const TruncationSpec& spec) {
  params.validate();
  detail::require_start_one(spec);
  TridiagonalOperator<Real> op;
  op.diag.resize(spec.dim);
  op.off.resize(spec.dim - 1);
  for (std::size_t i = 0; i < spec.dim; ++i) {
    const auto n = spec.index_of(i);
    op.diag[i] = params.mu * static_cast<Real>(n);
    if (i + 1 < spec.dim) op.off[i] = detail::offdiag_coupling(params, n);
  }
  return op;
}

/// Matrix of H = l'' G + H_{mu,lambda}.
template <class Real>
TridiagonalOperator<Real> build_full_operator(const GribovParams<Real>& params,
                                              const TruncationSpec& spec) {
  auto op = build_perturbation(params, spec);
  for (std::size_t i = 0; i < spec.dim; ++i) {
    const auto n = spec.index_of(i);
    op.diag[i] += params.lambda_pp * static_cast<Real>(eigenvalue_G(n));
  }
  return op;
}

/// H - l'' lambda_k I with the diagonal differences l''(lambda_n - lambda_k)
/// formed in integer arithmetic, so eigenvalue shifts sigma_k - l'' lambda_k
/// can be resolved far below the rounding level of sigma_k itself.
template <class Real>
TridiagonalOperator<Real> build_full_operator_shifted(
    const GribovParams<Real>& params, const TruncationSpec& spec,
    std::uint64_t origin_index) {
  auto op = build_perturbation(params, spec);
  const auto origin = static_cast<std::int64_t>(eigenvalue_G(origin_index));
  for (std::size_t i = 0; i < spec.dim; ++i) {
    const auto n = spec.index_of(i);
    const std::int64_t diff = static_cast<std::int64_t>(eigenvalue_G(n)) - origin;
    op.diag[i] += params.lambda_pp * static_cast<Real>(diff);
  }
  return op;
}

enum class Ladder { annihilation, creation };

/// Truncated Bose ladder operator on e_0..e_{N-1}; a e_n = sqrt(n) e_{n-1}.
inline Eigen::MatrixXd build_ladder(const TruncationSpec& spec, Ladder which) {
  spec.validate();
  if (spec.start_index != 0)
    throw InvalidArgument("build_ladder: ladder matrices start at e_0");
  const auto n = static_cast<Eigen::Index>(spec.dim);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  if (which == Ladder::creation) return a.transpose();
  return a;
}

/// Pole-collision threshold for a shift sigma.
template <class Real>
Real pole_margin(const Complex<Real>& sigma) {
  return Real(1e-12) * (1 + std::abs(sigma));
}

template <class Real>
DiagonalResolvent<Real> resolvent_diagonal(const GribovParams<Real>& params,
                                           const Complex<Real>& sigma,
                                           const TruncationSpec& spec) {
  params.validate();
  spec.validate();
  DiagonalResolvent<Real> r;
  r.sigma = sigma;
  r.values.resize(spec.dim);
  const Real margin = pole_margin(sigma);
  for (std::size_t i = 0; i < spec.dim; ++i) {
    const auto n = spec.index_of(i);
    const Complex<Real> gap =
        params.lambda_pp * static_cast<Real>(eigenvalue_G(n)) - sigma;
    if (std::abs(gap) < margin)
      throw PoleCollision("resolvent_diagonal: sigma hits l''*lambda_" +
                          std::to_string(n));
    r.values[i] = Real(1) / gap;
  }
  return r;
}

}  // namespace gribov
