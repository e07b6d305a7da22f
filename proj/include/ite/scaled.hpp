#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace ite {

using Complex = std::complex<double>;

/// A complex number stored as mantissa * exp(log_scale).
///
/// Used wherever solutions of the Helmholtz pair grow like exp(|Im sqrt(lambda)|)
/// and would otherwise overflow. After normalize(), 0.5 <= |mantissa| <= 2
/// unless the value is exactly zero (then log_scale == 0).
template <typename Real>
struct BasicScaled {
  std::complex<Real> mantissa{0};
  Real log_scale{0};

  BasicScaled() = default;
  BasicScaled(std::complex<Real> m, Real ls = Real(0)) : mantissa(m), log_scale(ls) { normalize(); }

  /// Stores the pair as given, without normalizing.
  static BasicScaled raw(std::complex<Real> m, Real ls) {
    BasicScaled v;
    v.mantissa = m;
    v.log_scale = ls;
    return v;
  }

  BasicScaled& normalize() {
    using std::abs;
    using std::log;
    const Real a = abs(mantissa);
    if (a == Real(0)) {
      log_scale = Real(0);
      return *this;
    }
    if (a < Real(0.5) || a > Real(2)) {
      const Real t = log(a);
      mantissa /= a;
      log_scale += t;
    }
    return *this;
  }

  bool is_zero() const { return mantissa == std::complex<Real>(0); }

  /// Natural log of the modulus; -inf for zero.
  Real log_abs() const {
    using std::abs;
    using std::log;
    return is_zero() ? -std::numeric_limits<Real>::infinity() : log(abs(mantissa)) + log_scale;
  }

  /// The plain value. Overflows to inf if log_scale is large.
  std::complex<Real> value() const {
    using std::exp;
    return mantissa * exp(log_scale);
  }

  /// Value times exp(-shift), i.e. the value rescaled by a known growth factor.
  std::complex<Real> value_times_exp(Real shift) const {
    using std::exp;
    return mantissa * exp(log_scale + shift);
  }

  friend BasicScaled operator*(const BasicScaled& a, const BasicScaled& b) {
    return BasicScaled(a.mantissa * b.mantissa, a.log_scale + b.log_scale);
  }
  friend BasicScaled operator*(const BasicScaled& a, std::complex<Real> c) {
    return BasicScaled(a.mantissa * c, a.log_scale);
  }
  friend BasicScaled operator/(const BasicScaled& a, const BasicScaled& b) {
    return BasicScaled(a.mantissa / b.mantissa, a.log_scale - b.log_scale);
  }
  friend BasicScaled operator-(const BasicScaled& a) { return BasicScaled(-a.mantissa, a.log_scale); }

  friend BasicScaled operator+(const BasicScaled& a, const BasicScaled& b) {
    using std::exp;
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.log_scale >= b.log_scale) {
      return BasicScaled(a.mantissa + b.mantissa * exp(b.log_scale - a.log_scale), a.log_scale);
    }
    return BasicScaled(b.mantissa + a.mantissa * exp(a.log_scale - b.log_scale), b.log_scale);
  }
  friend BasicScaled operator-(const BasicScaled& a, const BasicScaled& b) { return a + (-b); }
};

using ScaledValue = BasicScaled<double>;

/// Ratio a/b as a plain complex number; well defined when the scales are comparable.
template <typename Real>
std::complex<Real> ratio(const BasicScaled<Real>& a, const BasicScaled<Real>& b) {
  using std::exp;
  return (a.mantissa / b.mantissa) * exp(a.log_scale - b.log_scale);
}

}  // namespace ite
