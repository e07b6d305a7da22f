#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "ite/errors.hpp"
#include "ite/kernel.hpp"

using namespace ite;
using namespace ite::kernel;

namespace {

// Even-parity determinant of the unit interval with contrast 1+m = 4.
Complex d_even(Complex lam) {
  const Complex k = std::sqrt(lam);
  const Complex kap = 2.0 * k;
  return kap * std::cos(k) * std::sin(kap) - k * std::sin(k) * std::cos(kap);
}

std::vector<double> sign_change_zeros(double a, double b, double step) {
  std::vector<double> out;
  double x0 = a, f0 = d_even(a).real();
  for (double x = a + step; x <= b; x += step) {
    const double f1 = d_even(x).real();
    if ((f0 < 0) != (f1 < 0)) out.push_back(0.5 * (x0 + x));
    x0 = x;
    f0 = f1;
  }
  return out;
}

// Same determinant divided by its growth exp(|Im k| + |Im 2k|); the phase is unchanged.
ScaledValue d_even_scaled(Complex lam) {
  const double g = 3 * std::abs(std::sqrt(lam).imag());
  return ScaledValue(d_even(lam), -g);
}

}  // namespace

TEST_CASE("winding count of simple polynomials") {
  const Rect sq{-1, 1, -1, 1};
  CHECK(winding_count(lift([](Complex z) { return z; }), sq).count == 1);
  CHECK(winding_count(lift([](Complex z) { return z * z; }), sq).count == 2);
  CHECK(winding_count(lift([](Complex z) { return z * z * z - 1.0; }), Rect{0, 2, -1, 1}).count == 1);
  CHECK(winding_count(lift([](Complex z) { return z - 3.0; }), sq).count == 0);
}

TEST_CASE("boundary modulus is reported relative and positive") {
  const auto rep = winding_count(lift([](Complex z) { return z - Complex(0.5, 0.2); }), Rect{-1, 1, -1, 1});
  CHECK(rep.boundary_min_modulus > 0);
  CHECK(rep.boundary_min_modulus <= 1);
}

TEST_CASE("zero on the contour is detected") {
  auto f = lift([](Complex z) { return z - 1.0; });
  CHECK_THROWS_AS(winding_count(f, Rect{-1, 1, -1, 1}), ZeroOnBoundary);
  try {
    winding_count(f, Rect{-1, 1, -1, 1});
  } catch (const ZeroOnBoundary& e) {
    CHECK(std::abs(e.where() - 1.0) < 1e-6);
  }
}

TEST_CASE("budget exhaustion raises NonConvergent") {
  CountOptions o;
  o.max_evaluations = 100;
  CHECK_THROWS_AS(winding_count(lift([](Complex z) { return z; }), Rect{-1, 1, -1, 1}, o), NonConvergent);
}

TEST_CASE("scaled values with huge exponents are counted") {
  AnalyticFn f = [](Complex z) { return ScaledValue(z - 0.25, 800.0) * ScaledValue(std::exp(5.0 * z), -900.0); };
  CHECK(winding_count(f, Rect{-1, 1, -1, 1}).count == 1);
}

TEST_CASE("refine two simple zeros, one on the query edge") {
  auto f = lift([](Complex z) { return (z - 0.5) * (z - Complex(0.5, 0.5)); });
  CHECK_THROWS_AS(winding_count(f, Rect{0, 1, 0, 1}), ZeroOnBoundary);
  const auto rep = refine_zeros(f, Rect{0, 1, 0, 1}, 2);
  // The zero at 0.5 sits on the bottom edge; the region is pushed outward.
  REQUIRE(rep.zeros.size() == 2);
  CHECK(rep.count == 2);
  CHECK(rep.zeros[0].order == 1);
  CHECK(rep.zeros[1].order == 1);
  const auto& low = rep.zeros[0].location.imag() < rep.zeros[1].location.imag() ? rep.zeros[0] : rep.zeros[1];
  const auto& high = &low == &rep.zeros[0] ? rep.zeros[1] : rep.zeros[0];
  CHECK(std::abs(low.location - 0.5) < 1e-12);
  CHECK(std::abs(high.location - Complex(0.5, 0.5)) < 1e-12);
  CHECK(rep.region.im_min < 0);
}

TEST_CASE("refine sin near pi") {
  auto f = lift([](Complex z) { return std::sin(z); });
  const auto rep = refine_zeros(f, Rect{2, 4, -1, 1}, 1);
  REQUIRE(rep.zeros.size() == 1);
  CHECK(rep.zeros[0].order == 1);
  CHECK(std::abs(rep.zeros[0].location - std::numbers::pi) < 1e-13);
}

TEST_CASE("refine reports multiplicity") {
  auto f = lift([](Complex z) { return (z - 0.3) * (z - 0.3) * (z - 0.3) * (z + 0.4); });
  const auto rep = refine_zeros(f, Rect{-1, 1, -1, 1}, 4);
  REQUIRE(rep.zeros.size() == 2);
  CHECK(rep.zeros[0].order == 1);
  CHECK(rep.zeros[1].order == 3);
  CHECK(std::abs(rep.zeros[1].location - 0.3) < 1e-4);
}

TEST_CASE("refine mismatch with expected count throws") {
  auto f = lift([](Complex z) { return z; });
  CHECK_THROWS_AS(refine_zeros(f, Rect{-1, 1, -1, 1}, 2), Error);
}

TEST_CASE("refined real zeros of the even determinant match a sign-change scan") {
  AnalyticFn f = lift(d_even);
  const Rect region{0.1, 50, -1, 1};
  const int n = winding_count(f, region).count;
  RefineOptions o;
  o.conjugate_symmetric = true;
  const auto rep = refine_zeros(f, region, n, o);
  const auto oracle = sign_change_zeros(0.1, 50, 1e-3);
  REQUIRE(rep.zeros.size() == oracle.size());
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    CHECK(rep.zeros[i].location.imag() == 0.0);
    CHECK(std::abs(rep.zeros[i].location.real() - oracle[i]) < 1e-3);
    CHECK(rep.zeros[i].order == 1);
  }
  CHECK(oracle.size() == 2);  // pi^2 and 4 pi^2
}

TEST_CASE("sector counting") {
  CHECK(count_in_sector(lift([](Complex z) { return z - 5.0; }), 0.1, 10, 1).count == 1);
  CHECK(count_in_sector(lift([](Complex z) { return z - Complex(0, 5); }), 0.1, 10, 1).count == 0);
  CHECK(count_in_sector(lift([](Complex z) { return z - 20.0; }), 0.1, 10, 1).count == 0);
  CHECK_THROWS(count_in_sector(lift([](Complex z) { return z; }), 2.0, 10, 1));
}

TEST_CASE("sector count of the even determinant matches full enumeration") {
  AnalyticFn f = d_even_scaled;
  const double theta = 0.2, r_min = 0.1, r_max = 1e4;
  SectorOptions so;
  so.refine.conjugate_symmetric = true;
  const auto sector = count_in_sector(f, theta, r_max, r_min, so);

  const Rect full{r_min * std::cos(theta) * 0.9, r_max * 1.01, -r_max * std::sin(theta) * 1.01,
                  r_max * std::sin(theta) * 1.01};
  const int n = winding_count(f, full).count;
  const auto all = refine_zeros(f, full, n, so.refine);
  int filtered = 0;
  for (const auto& z : all.zeros) {
    if (in_sector(z.location, theta, r_max, r_min)) filtered += z.order;
  }
  CHECK(sector.count == filtered);
  // Zeros are lambda = j^2 pi^2 and ((j + 1/2) pi +- i asinh(1/sqrt 2))^2; 31 real and
  // 30 conjugate pairs lie in this sector.
  CHECK(sector.count == 91);
  const double eta = std::asinh(1 / std::sqrt(2.0));
  for (const auto& z : sector.zeros) {
    const Complex k = std::sqrt(z.location);
    const double near = z.location.imag() == 0
                            ? std::abs(k.real() / std::numbers::pi - std::round(k.real() / std::numbers::pi))
                            : std::abs(k - Complex((std::floor(k.real() / std::numbers::pi) + 0.5) * std::numbers::pi,
                                                   std::copysign(eta, k.imag())));
    CHECK(near < 1e-9);
  }
}

TEST_CASE("additivity and multiplicativity") {
  auto f = lift([](Complex z) { return std::sin(z) * (z - Complex(0.3, 0.7)); });
  auto g = lift([](Complex z) { return std::exp(z) - 2.0; });
  auto fg = lift([](Complex z) { return std::sin(z) * (z - Complex(0.3, 0.7)) * (std::exp(z) - 2.0); });
  const Rect r{-2.1, 4.3, -1.3, 1.1};
  const int whole = winding_count(f, r).count;
  for (double cut : {-1.7, 0.123, 2.9}) {
    CHECK(winding_count(f, Rect{r.re_min, cut, r.im_min, r.im_max}).count +
              winding_count(f, Rect{cut, r.re_max, r.im_min, r.im_max}).count ==
          whole);
  }
  for (double cut : {-0.77, 0.31}) {
    CHECK(winding_count(f, Rect{r.re_min, r.re_max, r.im_min, cut}).count +
              winding_count(f, Rect{r.re_min, r.re_max, cut, r.im_max}).count ==
          whole);
  }
  CHECK(winding_count(fg, r).count == whole + winding_count(g, r).count);
}

TEST_CASE("conjugate symmetric functions count equally in mirrored rectangles") {
  AnalyticFn f = lift(d_even);
  for (const Rect& r : {Rect{0.3, 60, 0.5, 9}, Rect{-5, 200, 2.2, 40}, Rect{1, 30, -0.5, 3}}) {
    CHECK(winding_count(f, r).count == winding_count(f, r.mirrored()).count);
  }
}

TEST_CASE("reports are deterministic") {
  AnalyticFn f = lift(d_even);
  RefineOptions o;
  o.conjugate_symmetric = true;
  const Rect r{0.1, 200, -30, 30};
  const int n = winding_count(f, r).count;
  const auto a = refine_zeros(f, r, n, o);
  const auto b = refine_zeros(f, r, n, o);
  REQUIRE(a.zeros.size() == b.zeros.size());
  for (std::size_t i = 0; i < a.zeros.size(); ++i) {
    CHECK(a.zeros[i].location == b.zeros[i].location);
    CHECK(a.zeros[i].order == b.zeros[i].order);
  }
  CHECK(a.cells_used == b.cells_used);
}
