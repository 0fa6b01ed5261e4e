#pragma once

// Eigenvalues of non-Hermitian matrices: Householder reduction to upper
// Hessenberg form (skipped for tridiagonal input), single-shift complex QR
// with Wilkinson shifts, then one round of inverse iteration per eigenvalue
// to certify a residual. For complex symmetric tridiagonal input the
// inverse-iteration vector also feeds the bilinear Rayleigh quotient
// v^T M v / v^T v, which recovers eigenvalues to the accuracy of the local
// matrix entries rather than of ||M||.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "gribov/bargmann.hpp"
#include "gribov/errors.hpp"
#include "gribov/linalg/lu.hpp"

namespace gribov {

/// Sorted eigenvalues of a truncation with per-eigenpair backward errors.
template <class Real = double>
struct Spectrum {
  std::vector<Complex<Real>> values;
  /// residuals[k] = ||M v - s v|| / ||M||_F for the unit vector v of pair k.
  std::vector<Real> residuals;
  Real tolerance{0};

  std::size_t dim() const { return values.size(); }
};

/// Real nonsymmetric tridiagonal matrix.
template <class Real = double>
struct RealTridiagonal {
  std::vector<Real> diag;
  std::vector<Real> upper;  ///< A(k, k+1)
  std::vector<Real> lower;  ///< A(k+1, k)

  std::size_t dim() const { return diag.size(); }

  DenseMatrix<Real> dense() const {
    const auto n = static_cast<Eigen::Index>(dim());
    DenseMatrix<Real> m = DenseMatrix<Real>::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diag[i];
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      m(i, i + 1) = upper[i];
      m(i + 1, i) = lower[i];
    }
    return m;
  }
};

/// Total (Re, Im) lexicographic order used for every spectrum.
template <class Real>
bool lexicographic_less(const Complex<Real>& a, const Complex<Real>& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

/// Greedy nearest-neighbour pairing: result[i] is the index in `b` matched
/// to a[i]. Each entry of b is used at most once; a must not be longer
/// than b.
template <class Real>
std::vector<std::size_t> nearest_pairing(const std::vector<Complex<Real>>& a,
                                         const std::vector<Complex<Real>>& b) {
  if (a.size() > b.size()) throw InvalidArgument("nearest_pairing: a longer than b");
  std::vector<bool> used(b.size(), false);
  std::vector<std::size_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t best = b.size();
    Real best_d = std::numeric_limits<Real>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const Real d = std::abs(a[i] - b[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    used[best] = true;
    out[i] = best;
  }
  return out;
}

namespace detail {

template <class Real>
void reduce_to_hessenberg(DenseMatrix<Real>& a) {
  using C = Complex<Real>;
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index len = n - k - 1;
    DenseVector<Real> v = a.block(k + 1, k, len, 1);
    const Real xnorm = v.norm();
    if (xnorm == Real(0)) continue;
    const C x0 = v(0);
    const C phase = std::abs(x0) > Real(0) ? x0 / std::abs(x0) : C(1);
    v(0) += phase * xnorm;
    const Real vnorm = v.norm();
    if (vnorm == Real(0)) continue;
    v /= vnorm;
    // A <- (I - 2 v v^H) A (I - 2 v v^H) on the trailing rows/columns
    auto rows = a.block(k + 1, 0, len, n);
    const Eigen::Matrix<C, 1, Eigen::Dynamic> vr = v.adjoint() * rows;
    rows.noalias() -= Real(2) * v * vr;
    auto cols = a.block(0, k + 1, n, len);
    const DenseVector<Real> cv = cols * v;
    cols.noalias() -= Real(2) * cv * v.adjoint();
    for (Eigen::Index i = k + 2; i < n; ++i) a(i, k) = C(0);
  }
}

template <class Real>
Complex<Real> wilkinson_shift(const DenseMatrix<Real>& h, Eigen::Index iu) {
  using C = Complex<Real>;
  C t00 = h(iu - 1, iu - 1), t01 = h(iu - 1, iu), t10 = h(iu, iu - 1), t11 = h(iu, iu);
  const Real scale = std::abs(t00) + std::abs(t01) + std::abs(t10) + std::abs(t11);
  if (scale == Real(0)) return C(0);
  t00 /= scale;
  t01 /= scale;
  t10 /= scale;
  t11 /= scale;
  const C b = t01 * t10;
  const C c = t00 - t11;
  const C disc = std::sqrt(c * c + Real(4) * b);
  const C det = t00 * t11 - b;
  const C trace = t00 + t11;
  C e1 = (trace + disc) / Real(2);
  C e2 = (trace - disc) / Real(2);
  // recompute the smaller root from the product to avoid cancellation
  if (std::abs(e1) > std::abs(e2)) {
    if (e1 != C(0)) e2 = det / e1;
  } else if (e2 != C(0)) {
    e1 = det / e2;
  }
  return scale * (std::abs(e1 - t11) < std::abs(e2 - t11) ? e1 : e2);
}

/// Eigenvalues of an upper Hessenberg matrix by implicit single-shift QR
/// restricted to the active window. Throws NoConvergence after
/// `iteration_cap` sweeps in total.
template <class Real>
std::vector<Complex<Real>> hessenberg_qr_eigenvalues(DenseMatrix<Real> h,
                                                     std::size_t iteration_cap) {
  using C = Complex<Real>;
  const Real eps = std::numeric_limits<Real>::epsilon();
  const Eigen::Index n = h.rows();
  std::vector<C> eig(static_cast<std::size_t>(n));
  const Real hnorm = std::max(h.norm(), std::numeric_limits<Real>::min());

  Eigen::Index iu = n - 1;
  std::size_t iter = 0, total = 0;
  while (iu >= 0) {
    Eigen::Index il = iu;
    while (il > 0) {
      Real ref = std::abs(h(il, il)) + std::abs(h(il - 1, il - 1));
      if (ref == Real(0)) ref = hnorm;
      if (std::abs(h(il, il - 1)) <= eps * ref) {
        h(il, il - 1) = C(0);
        break;
      }
      --il;
    }
    if (il == iu) {
      eig[static_cast<std::size_t>(iu)] = h(iu, iu);
      --iu;
      iter = 0;
      continue;
    }
    if (++total > iteration_cap)
      throw NoConvergence("QR iteration exceeded " + std::to_string(iteration_cap) +
                          " sweeps");
    ++iter;

    C shift;
    if (iter == 10 || iter == 30) {
      shift = h(iu, iu) + std::abs(h(iu, iu - 1).real()) +
              (iu >= 2 ? std::abs(h(iu - 1, iu - 2).real()) : Real(0));
    } else {
      shift = wilkinson_shift(h, iu);
    }

    for (Eigen::Index k = il; k < iu; ++k) {
      const C x = (k == il) ? h(k, k) - shift : h(k, k - 1);
      const C y = (k == il) ? h(k + 1, k) : h(k + 1, k - 1);
      const Real ax = std::abs(x);
      const Real nrm = std::hypot(ax, std::abs(y));
      Real c;
      C s;
      if (nrm == Real(0)) {
        c = 1;
        s = C(0);
      } else if (ax == Real(0)) {
        c = 0;
        s = C(1);
      } else {
        c = ax / nrm;
        s = (x / ax) * std::conj(y) / nrm;
      }
      // rows k, k+1 <- [c s; -conj(s) c] rows
      for (Eigen::Index j = (k == il ? il : k - 1); j <= iu; ++j) {
        const C a = h(k, j), b = h(k + 1, j);
        h(k, j) = c * a + s * b;
        h(k + 1, j) = -std::conj(s) * a + c * b;
      }
      // columns k, k+1 <- columns [c -s; conj(s) c]
      const Eigen::Index row_end = std::min(k + 2, iu);
      for (Eigen::Index i = il; i <= row_end; ++i) {
        const C a = h(i, k), b = h(i, k + 1);
        h(i, k) = a * c + b * std::conj(s);
        h(i, k + 1) = -a * s + b * c;
      }
      if (k > il) h(k + 1, k - 1) = C(0);
    }
  }
  return eig;
}

template <class Real>
DenseVector<Real> start_vector(Eigen::Index n) {
  // fixed, non-symmetric pattern so no eigenvector is orthogonal to it by
  // accident of symmetry
  DenseVector<Real> b(n);
  for (Eigen::Index i = 0; i < n; ++i)
    b(i) = Complex<Real>(Real(1), Real(1) / Real(i + 2));
  return b / b.norm();
}

template <class Real>
Real residual_norm(const TridiagonalOperator<Real>& op, const std::vector<Complex<Real>>& v,
                   const Complex<Real>& theta) {
  std::vector<Complex<Real>> mv(v.size());
  op.apply(v, mv);
  Real s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += std::norm(mv[i] - theta * v[i]);
  return std::sqrt(s);
}

template <class Real>
struct RefinedPair {
  Complex<Real> value;
  Real residual;  // absolute, unit vector
};

/// Inverse iteration plus bilinear Rayleigh quotient on a complex
/// symmetric tridiagonal matrix. Returns the best (value, residual) seen.
/// Updates that move farther than `max_move` from the starting value are
/// rejected so a neighbouring eigenvalue is never captured.
template <class Real>
RefinedPair<Real> refine_symmetric_tridiagonal(const TridiagonalOperator<Real>& op,
                                               Complex<Real> theta, Real max_move,
                                               int max_rounds = 4) {
  using C = Complex<Real>;
  const C theta0 = theta;
  const std::size_t n = op.dim();
  const Real tiny = std::numeric_limits<Real>::epsilon() *
                    std::max(op.frobenius_norm(), std::numeric_limits<Real>::min());
  const DenseVector<Real> b0 = start_vector<Real>(static_cast<Eigen::Index>(n));
  std::vector<C> v(b0.data(), b0.data() + n);

  RefinedPair<Real> best{theta, std::numeric_limits<Real>::infinity()};
  for (int round = 0; round < max_rounds; ++round) {
    const auto lu = TridiagonalLU<Real>::shifted(op, theta, tiny);
    for (int s = 0; s < 2; ++s) {
      lu.solve(v);
      Real nrm = 0;
      for (const auto& x : v) nrm += std::norm(x);
      nrm = std::sqrt(nrm);
      if (!(nrm > 0) || !std::isfinite(static_cast<double>(nrm))) return best;
      for (auto& x : v) x /= nrm;
    }
    const Real r_theta = residual_norm(op, v, theta);
    if (r_theta < best.residual) best = {theta, r_theta};

    std::vector<C> mv(n);
    op.apply(v, mv);
    C num(0), den(0);
    for (std::size_t i = 0; i < n; ++i) {
      num += v[i] * mv[i];
      den += v[i] * v[i];
    }
    if (std::abs(den) < Real(1e-8)) break;  // quasi-null vector, keep theta
    const C rq = num / den;
    if (std::abs(rq - theta0) > max_move) break;
    const Real r_rq = residual_norm(op, v, rq);
    if (!(r_rq < best.residual)) break;
    best = {rq, r_rq};
    if (rq == theta) break;
    theta = rq;
  }
  return best;
}

template <class Real>
Real dense_residual(const DenseMatrix<Real>& a, const Complex<Real>& theta) {
  const Eigen::Index n = a.rows();
  const Real tiny = std::numeric_limits<Real>::epsilon() *
                    std::max(a.norm(), std::numeric_limits<Real>::min());
  DenseMatrix<Real> shifted = a;
  for (Eigen::Index i = 0; i < n; ++i) shifted(i, i) -= theta;
  const DenseLU<Real> lu(shifted, tiny);
  DenseVector<Real> v = start_vector<Real>(n);
  for (int s = 0; s < 2; ++s) {
    v = lu.solve(v);
    const Real nrm = v.norm();
    if (!(nrm > 0) || !std::isfinite(static_cast<double>(nrm)))
      return std::numeric_limits<Real>::infinity();
    v /= nrm;
  }
  return (a * v - theta * v).norm();
}

template <class Real>
void sort_spectrum(Spectrum<Real>& s) {
  std::vector<std::size_t> idx(s.values.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return lexicographic_less(s.values[a], s.values[b]);
  });
  Spectrum<Real> out;
  out.tolerance = s.tolerance;
  for (auto i : idx) {
    out.values.push_back(s.values[i]);
    out.residuals.push_back(s.residuals[i]);
  }
  s = std::move(out);
}

template <class Real>
void check_tolerance(const Spectrum<Real>& s) {
  for (std::size_t k = 0; k < s.residuals.size(); ++k)
    if (!(s.residuals[k] <= s.tolerance))
      throw NoConvergence("eigenpair " + std::to_string(k) + " residual " +
                          std::to_string(static_cast<double>(s.residuals[k])) +
                          " exceeds tolerance");
}

inline std::size_t iteration_cap(std::size_t n) { return 50 * std::max<std::size_t>(n, 1); }

}  // namespace detail

/// All eigenvalues of a complex symmetric tridiagonal operator.
template <class Real>
Spectrum<Real> eigenvalues(const TridiagonalOperator<Real>& op, Real tol) {
  if (!(tol > 0)) throw InvalidArgument("eigenvalues: tol must be positive");
  if (!op.all_finite()) throw InvalidArgument("eigenvalues: non-finite entries");
  const auto raw = detail::hessenberg_qr_eigenvalues<Real>(op.dense(),
                                                           detail::iteration_cap(op.dim()));
  const Real norm = op.frobenius_norm();
  Spectrum<Real> s;
  s.tolerance = tol;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const auto& theta = raw[k];
    if (norm == Real(0)) {
      s.values.push_back(theta);
      s.residuals.push_back(0);
      continue;
    }
    Real gap = std::numeric_limits<Real>::infinity();
    for (std::size_t j = 0; j < raw.size(); ++j)
      if (j != k) gap = std::min(gap, std::abs(raw[j] - theta));
    const auto pair = detail::refine_symmetric_tridiagonal(op, theta, gap / 4);
    s.values.push_back(pair.value);
    s.residuals.push_back(pair.residual / norm);
  }
  detail::sort_spectrum(s);
  detail::check_tolerance(s);
  return s;
}

/// All eigenvalues of a general dense complex matrix.
template <class Real>
Spectrum<Real> eigenvalues(const DenseMatrix<Real>& a, Real tol) {
  if (!(tol > 0)) throw InvalidArgument("eigenvalues: tol must be positive");
  if (a.rows() != a.cols()) throw InvalidArgument("eigenvalues: matrix must be square");
  if (!a.allFinite()) throw InvalidArgument("eigenvalues: non-finite entries");
  DenseMatrix<Real> h = a;
  detail::reduce_to_hessenberg(h);
  const auto raw = detail::hessenberg_qr_eigenvalues<Real>(
      std::move(h), detail::iteration_cap(static_cast<std::size_t>(a.rows())));
  const Real norm = a.norm();
  Spectrum<Real> s;
  s.tolerance = tol;
  for (const auto& theta : raw) {
    s.values.push_back(theta);
    s.residuals.push_back(norm == Real(0) ? Real(0) : detail::dense_residual(a, theta) / norm);
  }
  detail::sort_spectrum(s);
  detail::check_tolerance(s);
  return s;
}

template <class Real>
Spectrum<Real> eigenvalues(const RealTridiagonal<Real>& a, Real tol) {
  return eigenvalues<Real>(a.dense(), tol);
}

/// Conjugation by diag(i^{-n}) maps the Gribov structure (real diagonal,
/// imaginary off-diagonal) onto a real tridiagonal matrix with upper entry
/// Im(off) and lower entry -Im(off).
template <class Real>
RealTridiagonal<Real> similarity_to_real(const TridiagonalOperator<Real>& op) {
  const Real tol = Real(1e-13);
  RealTridiagonal<Real> r;
  for (const auto& d : op.diag) {
    if (std::abs(d.imag()) > tol * (1 + std::abs(d)))
      throw StructureMismatch("similarity_to_real: diagonal is not real");
    r.diag.push_back(d.real());
  }
  for (const auto& o : op.off) {
    if (std::abs(o.real()) > tol * (1 + std::abs(o)))
      throw StructureMismatch("similarity_to_real: off-diagonal is not imaginary");
    r.upper.push_back(o.imag());
    r.lower.push_back(-o.imag());
  }
  return r;
}

}  // namespace gribov
