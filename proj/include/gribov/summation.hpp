#pragma once

#include <cmath>
#include <complex>

namespace gribov {

// Neumaier's variant of Kahan summation. Order of accumulation is the
// caller's order, so results are reproducible for a fixed input sequence.
template <class Real>
class CompensatedSum {
 public:
  void add(Real x) {
    const Real t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(Real x) {
    add(x);
    return *this;
  }
  Real value() const { return sum_ + comp_; }

 private:
  Real sum_{0};
  Real comp_{0};
};

template <class Real>
class CompensatedSum<std::complex<Real>> {
 public:
  void add(const std::complex<Real>& z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  CompensatedSum& operator+=(const std::complex<Real>& z) {
    add(z);
    return *this;
  }
  std::complex<Real> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<Real> re_;
  CompensatedSum<Real> im_;
};

}  // namespace gribov
