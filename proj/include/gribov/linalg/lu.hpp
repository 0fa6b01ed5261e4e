#pragma once

// Pivoted LU factorizations used by the determinant routines and by
// inverse iteration. Exactly singular pivots are replaced by a tiny
// multiple of the matrix norm so that inverse iteration at an exact
// eigenvalue still produces a usable direction.

#include <cmath>
#include <limits>
#include <vector>

#include "gribov/bargmann.hpp"

namespace gribov {

/// LU with partial pivoting of a general tridiagonal matrix (LAPACK gttrf
/// layout: U carries two superdiagonals after row interchanges).
template <class Real>
class TridiagonalLU {
 public:
  using C = Complex<Real>;

  /// lower[i] = A(i+1, i), diag[i] = A(i, i), upper[i] = A(i, i+1).
  TridiagonalLU(std::vector<C> lower, std::vector<C> diag, std::vector<C> upper,
                Real tiny_pivot = 0)
      : dl_(std::move(lower)), d_(std::move(diag)), du_(std::move(upper)) {
    const std::size_t n = d_.size();
    du2_.assign(n > 2 ? n - 2 : 0, C(0));
    swapped_.assign(n > 1 ? n - 1 : 0, false);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(d_[i]) >= std::abs(dl_[i])) {
        if (d_[i] != C(0)) {
          const C fact = dl_[i] / d_[i];
          dl_[i] = fact;
          d_[i + 1] -= fact * du_[i];
        }
      } else {
        const C fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const C temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < n) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        swapped_[i] = true;
        ++swaps_;
      }
    }
    for (auto& p : d_)
      if (p == C(0)) {
        p = C(tiny_pivot > 0 ? tiny_pivot : std::numeric_limits<Real>::min());
        singular_ = true;
      }
  }

  template <class Real2>
  static TridiagonalLU shifted(const TridiagonalOperator<Real2>& op, const C& shift,
                               Real tiny_pivot) {
    std::vector<C> d(op.diag.begin(), op.diag.end());
    for (auto& x : d) x -= shift;
    return TridiagonalLU(op.off, std::move(d), op.off, tiny_pivot);
  }

  /// Solves A x = b in place.
  void solve(std::vector<C>& b) const {
    const std::size_t n = d_.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped_[i]) {
        b[i + 1] -= dl_[i] * b[i];
      } else {
        const C temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl_[i] * b[i];
      }
    }
    b[n - 1] /= d_[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
    for (std::size_t i = n >= 2 ? n - 2 : 0; i-- > 0;)
      b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
  }

  C determinant() const {
    if (singular_) return C(0);
    C det(1);
    for (const auto& p : d_) det *= p;
    return (swaps_ % 2) ? -det : det;
  }

  bool singular() const { return singular_; }

 private:
  std::vector<C> dl_, d_, du_, du2_;
  std::vector<bool> swapped_;
  std::size_t swaps_{0};
  bool singular_{false};
};

/// Dense LU with partial pivoting, P A = L U, stored in place.
template <class Real>
class DenseLU {
 public:
  using C = Complex<Real>;

  explicit DenseLU(DenseMatrix<Real> a, Real tiny_pivot = 0) : lu_(std::move(a)) {
    const Eigen::Index n = lu_.rows();
    perm_.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) perm_[i] = i;
    for (Eigen::Index k = 0; k < n; ++k) {
      Eigen::Index p = k;
      Real best = std::abs(lu_(k, k));
      for (Eigen::Index i = k + 1; i < n; ++i)
        if (std::abs(lu_(i, k)) > best) {
          best = std::abs(lu_(i, k));
          p = i;
        }
      if (p != k) {
        lu_.row(k).swap(lu_.row(p));
        std::swap(perm_[k], perm_[p]);
        ++swaps_;
      }
      if (lu_(k, k) == C(0)) {
        singular_ = true;
        if (tiny_pivot <= 0) continue;
        lu_(k, k) = C(tiny_pivot);
      }
      for (Eigen::Index i = k + 1; i < n; ++i) {
        const C f = lu_(i, k) / lu_(k, k);
        lu_(i, k) = f;
        for (Eigen::Index j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
      }
    }
  }

  C determinant() const {
    if (singular_) return C(0);
    C det(1);
    for (Eigen::Index i = 0; i < lu_.rows(); ++i) det *= lu_(i, i);
    return (swaps_ % 2) ? -det : det;
  }

  DenseVector<Real> solve(const DenseVector<Real>& b) const {
    const Eigen::Index n = lu_.rows();
    DenseVector<Real> x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = b(perm_[i]);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < i; ++j) x(i) -= lu_(i, j) * x(j);
    for (Eigen::Index i = n; i-- > 0;) {
      for (Eigen::Index j = i + 1; j < n; ++j) x(i) -= lu_(i, j) * x(j);
      x(i) /= lu_(i, i);
    }
    return x;
  }

  bool singular() const { return singular_; }

 private:
  DenseMatrix<Real> lu_;
  std::vector<Eigen::Index> perm_;
  std::size_t swaps_{0};
  bool singular_{false};
};

}  // namespace gribov
