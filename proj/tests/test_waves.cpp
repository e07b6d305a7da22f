#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <cmath>
#include <numbers>

#include "ite/errors.hpp"
#include "ite/waves.hpp"

using namespace ite;
using namespace ite::waves;

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;
using BigC = boost::multiprecision::cpp_complex_50;

BigC big(Complex z) { return BigC(Big(z.real()), Big(z.imag())); }
Complex small(const BigC& z) { return {double(z.real()), double(z.imag())}; }

// Extended-precision power series of j_l and its derivative:
// j_l(z) = (sqrt(pi)/2) sum_k (-1)^k (z/2)^(2k+l) / (k! Gamma(k+l+3/2)).
std::pair<Complex, Complex> j_series(int l, Complex zd, int terms) {
  const BigC z = big(zd);
  const Big sqrt_pi = sqrt(boost::math::constants::pi<Big>());
  BigC v = 0, d = 0;
  Big fact = 1;
  for (int k = 0; k <= terms; ++k) {
    if (k > 0) fact *= k;
    const Big c = sqrt_pi / (2 * fact * boost::math::tgamma(Big(k + l) + Big(3) / 2));
    const BigC p = pow(z / 2, 2 * k + l);
    const BigC term = (k % 2 ? -c : c) * p;
    v += term;
    d += term * Big(2 * k + l) / z;
  }
  return {small(v), small(d)};
}

std::pair<Complex, Complex> J_series(int nu, Complex zd, int terms) {
  const BigC z = big(zd);
  BigC v = 0, d = 0;
  for (int k = 0; k <= terms; ++k) {
    const Big c = 1 / (boost::math::tgamma(Big(k + 1)) * boost::math::tgamma(Big(k + nu + 1)));
    const BigC p = pow(z / 2, 2 * k + nu);
    const BigC term = (k % 2 ? -c : c) * p;
    v += term;
    d += term * Big(2 * k + nu) / z;
  }
  return {small(v), small(d)};
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

// Large values are compared after dividing out a known exponent.
double rel_scaled(const ScaledValue& a, Complex b_mant, double b_log) {
  return std::abs(a.value_times_exp(-b_log) - b_mant) / std::abs(b_mant);
}

}  // namespace

TEST_CASE("elementary values") {
  CHECK(std::abs(spherical_j(0, std::numbers::pi).value.value()) < 1e-16);
  CHECK(rel(spherical_j(0, 1.0).value.value(), std::sin(1.0)) < 1e-15);
  CHECK(spherical_j(0, 0.0).value.value() == Complex(1));
  CHECK(spherical_j(3, 0.0).value.value() == Complex(0));
  CHECK(bessel_J(0, 0.0).value.value() == Complex(1));
  CHECK(bessel_J(1, 0.0).value.value() == Complex(0));
  CHECK(std::abs(bessel_J(1, 0.0).derivative.value() - 0.5) < 1e-16);
}

TEST_CASE("value and derivative share one scale") {
  for (Complex z : {Complex(0.2, 0.1), Complex(40, 300), Complex(3, -2)}) {
    const auto w = spherical_j(4, z);
    CHECK(w.value.log_scale == w.derivative.log_scale);
    const double big_m = std::max(std::abs(w.value.mantissa), std::abs(w.derivative.mantissa));
    CHECK(big_m >= 0.5);
    CHECK(big_m <= 2);
  }
}

TEST_CASE("spherical j against the extended-precision series") {
  {
    const auto [v, d] = j_series(5, {2, 3}, 60);
    const auto w = spherical_j(5, {2, 3});
    CHECK(rel(w.value.value(), v) < 1e-10);
    CHECK(rel(w.derivative.value(), d) < 1e-10);
  }
  const int ls[] = {0, 1, 2, 5, 10, 20, 50};
  const Complex zs[] = {{0.3, 0.1}, {1.1, -0.4}, {2, 3}, {5, -1}, {12, 0.5}, {-7, 2}, {25, 8}, {0, 30}, {3.5, 0}};
  for (int l : ls) {
    for (Complex z : zs) {
      const auto [v, d] = j_series(l, z, 250);
      const auto w = spherical_j(l, z);
      INFO("l=" << l << " z=" << z);
      CHECK(rel(w.value.value(), v) < 1e-12);
      CHECK(rel(w.derivative.value(), d) < 1e-11);
    }
  }
}

TEST_CASE("spherical j at large argument") {
  struct Case {
    int l;
    Complex z, v, d;
  };
  // Reference values from 40-digit arithmetic.
  const Case cases[] = {
      {3, {1000, 5}, {0.041055037669501064228, -0.061809999601440226323}, {-0.061855946852861238184, -0.040988997204528150827}},
      {0, {123456.5, 0.25}, {-8.1203343652735701936e-6, -4.8100302670693645534e-7}, {-1.9639270026544741661e-6, 1.9888290655499117792e-6}},
      {2, {999999, 1}, {1.5081332730470876614e-6, -2.4870122934431868202e-7}, {-3.2655416616256080526e-7, -1.148585101303377427e-6}},
      {40, {200, -30}, {428700924.90493451314, 14527636298.060324591}, {-14234992243.203224252, 434830024.96947512892}},
      {400, {500, 20}, {-200.10066151070990398, 61.708333833807567267}, {29.408695300860581813, 122.89318130220938679}},
  };
  for (const auto& c : cases) {
    INFO("l=" << c.l << " z=" << c.z);
    const auto w = spherical_j(c.l, c.z);
    CHECK(rel(w.value.value(), c.v) < 1e-11);
    CHECK(rel(w.derivative.value(), c.d) < 1e-11);
  }
  // j_7(300i) = -i 2.9484482410057756195e127, j_7' = -2.939540303682033778e127
  const auto w = spherical_j(7, {0, 300});
  CHECK(rel_scaled(w.value, {0, -2.9484482410057756195}, 127 * std::log(10.0)) < 1e-12);
  CHECK(rel_scaled(w.derivative, {-2.939540303682033778, 0}, 127 * std::log(10.0)) < 1e-12);
}

TEST_CASE("scaled form survives exponential growth") {
  const auto w = spherical_j(2, {10, 900});
  CHECK(std::isfinite(w.value.log_scale));
  CHECK(w.value.log_scale > 800);
  // j_2 ~ -(i/2z) e^{-iz} deep in the upper half plane; log|j_2| = 900 - log(2|z|).
  CHECK(std::abs(w.value.log_abs() - (900 - std::log(2 * std::abs(Complex(10, 900))))) < 1e-2);
}

TEST_CASE("Bessel J against the extended-precision series") {
  {
    const auto [v, d] = J_series(3, {1, 1}, 80);
    const auto w = bessel_J(3, {1, 1});
    CHECK(rel(w.value.value(), v) < 1e-10);
    CHECK(rel(w.derivative.value(), d) < 1e-10);
  }
  for (int nu : {0, 1, 2, 7, 20, 60}) {
    for (Complex z : {Complex(0.5, 0.2), Complex(3, -4), Complex(10, 1), Complex(-15, 6), Complex(0, 25), Complex(22, 0)}) {
      const auto [v, d] = J_series(nu, z, 250);
      const auto w = bessel_J(nu, z);
      INFO("nu=" << nu << " z=" << z);
      CHECK(rel(w.value.value(), v) < 1e-10);
      CHECK(rel(w.derivative.value(), d) < 1e-10);
    }
  }
  struct Case {
    int nu;
    Complex z, v, d;
  };
  const Case cases[] = {
      {0, {5000, 3}, {-0.066912318915667592429, 0.091350439737076266394}, {0.091810922362791740238, 0.066572010640141440977}},
      {10, {50, 40}, {-7177462365212979.0907, -719951645541667.31186}, {-756695911138403.13769, 7118282170093762.8253}},
      {300, {100, 10}, {-1.7086256538006976696e-108, 1.4160678049293183936e-109}, {-4.7386928307620283061e-108, 9.3489012368098473117e-109}},
      {2, {-30, -60}, {3.4848397587140651736e+23, -5.4133496934067945317e+24}, {5.3796632781475466257e+24, 3.3004155166369484813e+23}},
  };
  for (const auto& c : cases) {
    INFO("nu=" << c.nu << " z=" << c.z);
    const auto w = bessel_J(c.nu, c.z);
    CHECK(rel(w.value.value(), c.v) < 1e-10);
    CHECK(rel(w.derivative.value(), c.d) < 1e-10);
  }
}

TEST_CASE("three-term recurrence residual") {
  for (int l = 1; l <= 50; l += 7) {
    for (double r : {0.5, 1.7, 6.0, 23.0, 100.0}) {
      for (double phi : {0.0, 0.4, 1.3, 2.8}) {
        const Complex z = std::polar(r, phi);
        const Complex a = spherical_j(l - 1, z).value.value();
        const Complex b = spherical_j(l + 1, z).value.value();
        const Complex c = double(2 * l + 1) / z * spherical_j(l, z).value.value();
        const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
        INFO("l=" << l << " z=" << z);
        CHECK(std::abs(a + b - c) <= 1e-9 * scale);
      }
    }
  }
}

// The products j y' and j' y are of size exp(2|Im z|)/|z|^2 while the
// Wronskian is 1/z^2, so the check is confined to a strip around the real axis.
TEST_CASE("Wronskian with the spherical Neumann function") {
  for (int l = 0; l <= 50; l += 5) {
    for (double x : {0.5, 2.0, 9.0, 40.0, 100.0, -30.0}) {
      for (double y : {0.0, 0.25, -1.0, 3.0}) {
        const Complex z{x, y};
        const auto j = spherical_j(l, z);
        const auto yv = detail::spherical_y(l, z);
        const ScaledValue w = j.value * yv.derivative - j.derivative * yv.value;
        INFO("l=" << l << " z=" << z);
        CHECK(rel(w.value(), 1.0 / (z * z)) < 1e-9);
      }
    }
  }
}

TEST_CASE("parity") {
  for (int l : {0, 1, 4, 9, 30}) {
    for (Complex z : {Complex(0.7, 0.2), Complex(6, -3), Complex(40, 11)}) {
      const Complex a = spherical_j(l, z).value.value();
      const Complex b = spherical_j(l, -z).value.value();
      CHECK(rel(b, (l % 2 ? -1.0 : 1.0) * a) < 1e-13);
    }
  }
}

TEST_CASE("range checks") {
  CHECK_THROWS_AS(spherical_j(501, 1.0), OutOfRange);
  CHECK_THROWS_AS(spherical_j(-1, 1.0), OutOfRange);
  CHECK_THROWS_AS(spherical_j(2, 2e6), OutOfRange);
  CHECK_THROWS_AS(bessel_J(2, Complex(2e4, 0)), OutOfRange);
  CHECK_THROWS_AS(spherical_j(2, Complex(NAN, 0)), OutOfRange);
}
