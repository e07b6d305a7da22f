#include "ite/waves.hpp"

#include <cmath>
#include <sstream>

#include "ite/errors.hpp"

namespace ite::waves {

namespace {

constexpr double kBig = 1e200;
constexpr Complex kI{0, 1};

WaveValue make_pair(const ScaledValue& v, const ScaledValue& d) {
  if (v.is_zero() && d.is_zero()) return {};
  const double top = std::max(v.log_abs(), d.log_abs());
  auto shift = [top](const ScaledValue& x) {
    return x.is_zero() ? Complex(0) : x.mantissa * std::exp(x.log_scale - top);
  };
  return {ScaledValue::raw(shift(v), top), ScaledValue::raw(shift(d), top)};
}

void check_args(const char* who, int order, int max_order, Complex z, double max_abs) {
  if (order < 0 || order > max_order || !std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
      std::abs(z) > max_abs) {
    std::ostringstream os;
    os << who << ": argument out of range (order " << order << ", z " << z << ")";
    throw OutOfRange(os.str());
  }
}

// sin z and cos z, both times exp(-|Im z|).
void scaled_trig(Complex z, Complex& s, Complex& c) {
  const double a = std::abs(z.imag());
  if (a < 20) {
    const double damp = std::exp(-a);
    s = std::sin(z) * damp;
    c = std::cos(z) * damp;
    return;
  }
  const Complex ep = std::exp(Complex(-z.imag() - a, z.real()));
  const Complex em = std::exp(Complex(z.imag() - a, -z.real()));
  s = (ep - em) / (2.0 * kI);
  c = 0.5 * (ep + em);
}

// t = B_1 - 1/(B_2 - 1/(B_3 - ...)) with B_j = (step * (first + j - 1) + offset) / z (modified Lentz).
Complex lentz(Complex z, int first, double step, double offset) {
  const double tiny = 1e-300;
  auto b = [&](long j) { return (step * double(first + j - 1) + offset) / z; };
  Complex f = b(1);
  if (f == Complex(0)) f = tiny;
  Complex c = f, d = 0;
  const long max_iter = 100000 + long(20 * std::abs(z));
  for (long j = 2; j < max_iter; ++j) {
    const Complex bj = b(j);
    d = bj - d;
    if (d == Complex(0)) d = tiny;
    c = bj - 1.0 / c;
    if (c == Complex(0)) c = tiny;
    d = 1.0 / d;
    const Complex delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-17) return f;
  }
  throw NonConvergent("continued fraction did not converge");
}

struct SeriesSums {
  Complex value;   // sum a_k
  Complex weighted;  // sum a_k (order + 2k)
};

// sum_k a_k with a_0 = 1, a_k = a_{k-1} * w / (k (denom_base + denom_step * k)).
SeriesSums power_series(int order, Complex w, double denom_base, double denom_step) {
  Complex a = 1, sum = 1, wsum = double(order);
  double max_term = 1;
  for (int k = 1; k < 2000; ++k) {
    a *= w / (double(k) * (denom_base + denom_step * k));
    sum += a;
    wsum += a * double(order + 2 * k);
    max_term = std::max(max_term, std::abs(a));
    if (std::abs(a) < 1e-18 * std::abs(sum) && std::abs(a) < 1e-18 * max_term) break;
  }
  return {sum, wsum};
}

WaveValue spherical_j_series(int l, Complex z) {
  // j_l = z^l / (2l+1)!! * sum_k (-z^2/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1))
  const SeriesSums s = power_series(l, -0.5 * z * z, 2.0 * l + 1, 2.0);
  double log_df = 0;
  for (int i = 1; i <= l; ++i) log_df += std::log(2.0 * i + 1);
  const double lz = std::log(std::abs(z));
  const double ph = std::arg(z);
  const ScaledValue v = ScaledValue::raw(std::polar(1.0, l * ph) * s.value, l * lz - log_df);
  const ScaledValue d = ScaledValue::raw(std::polar(1.0, (l - 1) * ph) * s.weighted, (l - 1) * lz - log_df);
  return make_pair(v, d);
}

WaveValue spherical_j_recurrence(int l, Complex z) {
  // Start from the exact ratio j_l / j_{l+1} and recur downward to j_0, j_1.
  const Complex t = lentz(z, l + 1, 2.0, 1.0);
  Complex up = 1, cur = t;  // j_{k+1}, j_k at k = l
  double ls = 0;
  const ScaledValue jl(t);
  ScaledValue jlm1;
  const ScaledValue jlp1(1.0);
  for (int k = l; k >= 1; --k) {
    const Complex down = double(2 * k + 1) / z * cur - up;
    if (k == l) jlm1 = ScaledValue(down, ls);
    up = cur;
    cur = down;
    const double m = std::max(std::abs(cur), std::abs(up));
    if (m > kBig) {
      cur /= m;
      up /= m;
      ls += std::log(m);
    }
  }
  // cur = j_0, up = j_1 (times exp(-ls)).
  Complex s, c;
  scaled_trig(z, s, c);
  const Complex t0 = s / z;
  const Complex t1 = (s / z - c) / z;
  const Complex norm = (t0 * std::conj(cur) + t1 * std::conj(up)) / (std::norm(cur) + std::norm(up));
  const ScaledValue factor(norm, std::abs(z.imag()) - ls);
  const ScaledValue v = factor * jl;
  ScaledValue d;
  if (l == 0) {
    d = -(factor * jlp1);
  } else {
    d = factor * (jlm1 - jl * (double(l + 1) / z));
  }
  return make_pair(v, d);
}

// Closed forms of j_0 and j_1.
WaveValue spherical_j_closed(int l, Complex z) {
  Complex s, c;
  scaled_trig(z, s, c);
  Complex prev = s / z;            // j_0
  Complex cur = (s / z - c) / z;  // j_1
  if (l == 0) return make_pair(ScaledValue(prev, std::abs(z.imag())), ScaledValue(-cur, std::abs(z.imag())));
  const double ls = std::abs(z.imag());
  return make_pair(ScaledValue(cur, ls), ScaledValue(prev - double(l + 1) / z * cur, ls));
}

WaveValue bessel_J_series(int nu, Complex z) {
  // J_nu = (z/2)^nu / nu! * sum_k (-z^2/4)^k / (k! (nu+1)_k)
  const SeriesSums s = power_series(nu, -0.25 * z * z, double(nu), 1.0);
  const double lz = std::log(0.5 * std::abs(z));
  const double ph = std::arg(z);
  const double lf = std::lgamma(nu + 1.0);
  const ScaledValue v = ScaledValue::raw(std::polar(1.0, nu * ph) * s.value, nu * lz - lf);
  const ScaledValue d =
      ScaledValue::raw(std::polar(1.0, (nu - 1) * ph) * s.weighted * 0.5, (nu - 1) * lz - lf);
  return make_pair(v, d);
}

WaveValue bessel_J_miller(int nu, Complex z) {
  const double az = std::abs(z);
  const int n_start = int(std::max(double(nu), az) + 30 + 12 * std::cbrt(az));
  const Complex t = lentz(z, n_start + 1, 2.0, 0.0);  // J_N / J_{N+1}
  // e^{isz} = J_0 + 2 sum_k (is)^k J_k with s chosen so that |e^{isz}| >= 1.
  const double s = z.imag() > 0 ? -1.0 : 1.0;
  const Complex is = kI * s;
  Complex pw = std::pow(is, n_start + 1);  // (is)^(N+1)
  Complex up = 1, cur = t;                 // J_{N+1}, J_N
  double ls = 0;
  Complex sum = 2.0 * pw * up;
  pw /= is;
  sum += 2.0 * pw * cur;
  ScaledValue jm1, j0v, jp1;
  auto record = [&](int k, Complex val) {
    if (k == nu - 1) jm1 = ScaledValue(val, ls);
    if (k == nu) j0v = ScaledValue(val, ls);
    if (k == nu + 1) jp1 = ScaledValue(val, ls);
  };
  record(n_start + 1, up);
  record(n_start, cur);
  for (int k = n_start; k >= 1; --k) {
    const Complex down = double(2 * k) / z * cur - up;
    up = cur;
    cur = down;
    pw /= is;
    sum += (k - 1 == 0 ? 1.0 : 2.0) * pw * cur;
    record(k - 1, cur);
    const double m = std::max(std::abs(cur), std::abs(up));
    if (m > kBig) {
      cur /= m;
      up /= m;
      sum /= m;
      ls += std::log(m);
    }
  }
  // True J_k = stored * exp(ls_k) * e^{isz} / (sum * exp(ls)).
  const ScaledValue gen = ScaledValue::raw(std::polar(1.0, s * z.real()), std::abs(z.imag()));
  const ScaledValue factor = gen / ScaledValue(sum, ls);
  const ScaledValue v = factor * j0v;
  const ScaledValue d = nu == 0 ? -(factor * jp1) : factor * (jm1 - j0v * (double(nu) / z));
  return make_pair(v, d);
}

}  // namespace

WaveValue spherical_j(int l, Complex z) {
  check_args("spherical_j", l, 500, z, 1e6);
  if (z == Complex(0)) {
    return make_pair(ScaledValue(l == 0 ? 1.0 : 0.0), ScaledValue(l == 1 ? 1.0 / 3.0 : 0.0));
  }
  if (std::norm(z) <= 2.0 * (l + 1.5)) return spherical_j_series(l, z);
  if (l <= 1) return spherical_j_closed(l, z);
  return spherical_j_recurrence(l, z);
}

WaveValue bessel_J(int nu, Complex z) {
  check_args("bessel_J", nu, 500, z, 1e4);
  if (z == Complex(0)) {
    return make_pair(ScaledValue(nu == 0 ? 1.0 : 0.0), ScaledValue(nu == 1 ? 0.5 : 0.0));
  }
  if (std::norm(z) <= 4.0 * (nu + 1)) return bessel_J_series(nu, z);
  return bessel_J_miller(nu, z);
}

WaveValue parity_wave(bool odd, Complex z) {
  Complex s, c;
  scaled_trig(z, s, c);
  const double ls = std::abs(z.imag());
  if (odd) return make_pair(ScaledValue(s, ls), ScaledValue(c, ls));
  return make_pair(ScaledValue(c, ls), ScaledValue(-s, ls));
}

namespace detail {

WaveValue spherical_y(int l, Complex z) {
  check_args("spherical_y", l, 500, z, 1e6);
  if (z == Complex(0)) throw OutOfRange("spherical_y: singular at z = 0");
  Complex s, c;
  scaled_trig(z, s, c);
  Complex prev = -c / z;              // y_0
  Complex cur = -c / (z * z) - s / z;  // y_1
  const double base = std::abs(z.imag());
  if (l == 0) {
    return make_pair(ScaledValue(prev, base), ScaledValue(-cur, base));
  }
  double ls = base;
  ScaledValue ylm1 = ScaledValue(prev, ls);
  for (int k = 1; k < l; ++k) {
    const Complex next = double(2 * k + 1) / z * cur - prev;
    prev = cur;
    cur = next;
    if (k == l - 1) ylm1 = ScaledValue(prev, ls);
    const double m = std::max(std::abs(cur), std::abs(prev));
    if (m > kBig) {
      cur /= m;
      prev /= m;
      ls += std::log(m);
      if (k == l - 1) ylm1 = ScaledValue(prev, ls);
    }
  }
  const ScaledValue yl(cur, ls);
  return make_pair(yl, ylm1 - yl * (double(l + 1) / z));
}

}  // namespace detail

}  // namespace ite::waves
