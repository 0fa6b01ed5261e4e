#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "gribov/bargmann.hpp"
#include "gribov/errors.hpp"

namespace gribov {

/// Square band matrix with `lower` sub- and `upper` superdiagonals.
/// Entry (i, j) lives at row i, offset j - i + lower.
template <class Scalar>
class BandMatrix {
 public:
  BandMatrix() = default;
  BandMatrix(std::size_t n, std::size_t lower, std::size_t upper)
      : n_(n),
        lower_(std::min(lower, n ? n - 1 : 0)),
        upper_(std::min(upper, n ? n - 1 : 0)),
        data_(n * (lower_ + upper_ + 1), Scalar(0)) {}

  template <class Real>
  static BandMatrix from(const TridiagonalOperator<Real>& op) {
    BandMatrix b(op.dim(), 1, 1);
    for (std::size_t i = 0; i < op.dim(); ++i) {
      b.ref(i, i) = op.diag[i];
      if (i + 1 < op.dim()) {
        b.ref(i, i + 1) = op.off[i];
        b.ref(i + 1, i) = op.off[i];
      }
    }
    return b;
  }

  std::size_t dim() const { return n_; }
  std::size_t lower() const { return lower_; }
  std::size_t upper() const { return upper_; }

  bool in_band(std::size_t i, std::size_t j) const {
    return j + lower_ >= i && j <= i + upper_;
  }
  Scalar& ref(std::size_t i, std::size_t j) {
    return data_[i * width() + (j + lower_ - i)];
  }
  Scalar operator()(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_ || !in_band(i, j)) return Scalar(0);
    return data_[i * width() + (j + lower_ - i)];
  }

  std::size_t col_begin(std::size_t i) const { return i > lower_ ? i - lower_ : 0; }
  std::size_t col_end(std::size_t i) const { return std::min(n_, i + upper_ + 1); }

  /// A diag(d): column k scaled by d[k].
  BandMatrix scale_columns(std::span<const Scalar> d) const {
    BandMatrix out = *this;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = col_begin(i); k < col_end(i); ++k) out.ref(i, k) *= d[k];
    return out;
  }

  Scalar trace() const {
    Scalar t(0);
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  friend BandMatrix operator*(const BandMatrix& a, const BandMatrix& b) {
    if (a.n_ != b.n_) throw InvalidArgument("BandMatrix: dimension mismatch");
    BandMatrix c(a.n_, a.lower_ + b.lower_, a.upper_ + b.upper_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t k = a.col_begin(i); k < a.col_end(i); ++k) {
        const Scalar aik = a(i, k);
        for (std::size_t j = b.col_begin(k); j < b.col_end(k); ++j)
          c.ref(i, j) += aik * b(k, j);
      }
    return c;
  }

  template <class Real>
  DenseMatrix<Real> dense() const {
    const auto n = static_cast<Eigen::Index>(n_);
    DenseMatrix<Real> m = DenseMatrix<Real>::Zero(n, n);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = col_begin(i); j < col_end(i); ++j)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j);
    return m;
  }

 private:
  std::size_t width() const { return lower_ + upper_ + 1; }

  std::size_t n_{0};
  std::size_t lower_{0};
  std::size_t upper_{0};
  std::vector<Scalar> data_;
};

namespace detail {

// sum_{i,k} a(i,k) b(k,i) = Tr(a b) without forming the product.
template <class Scalar>
Scalar trace_of_product(const BandMatrix<Scalar>& a, const BandMatrix<Scalar>& b) {
  Scalar t(0);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t k = a.col_begin(i); k < a.col_end(i); ++k) t += a(i, k) * b(k, i);
  return t;
}

}  // namespace detail

inline constexpr int kMaxTracePower = 8;

/// Tr(A^j) for j = 1..j_max. Powers are formed up to ceil(j_max/2); higher
/// traces are contracted as Tr(A^a A^b) so bandwidth never exceeds
/// j_max + 1 on either side.
template <class Scalar>
std::vector<Scalar> traces_of_powers(const BandMatrix<Scalar>& a, int j_max) {
  if (j_max < 1 || j_max > kMaxTracePower)
    throw InvalidArgument("trace_of_power: power must lie in [1, 8]");
  const int half = (j_max + 1) / 2;
  std::vector<BandMatrix<Scalar>> powers;
  powers.reserve(static_cast<std::size_t>(half));
  powers.push_back(a);
  for (int p = 2; p <= half; ++p) powers.push_back(powers.back() * a);

  std::vector<Scalar> out(static_cast<std::size_t>(j_max));
  for (int j = 1; j <= j_max; ++j) {
    if (j <= half) {
      out[j - 1] = powers[j - 1].trace();
    } else {
      out[j - 1] = detail::trace_of_product(powers[half - 1], powers[j - half - 1]);
    }
  }
  return out;
}

template <class Scalar>
Scalar trace_of_power(const BandMatrix<Scalar>& a, int j) {
  return traces_of_powers(a, j).back();
}

}  // namespace gribov
