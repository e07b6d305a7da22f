#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "ite/errors.hpp"
#include "ite/symbols.hpp"

using namespace ite;
using namespace ite::symbols;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

// Random admissible points: s in [0.1, 50], m in {-0.5, 0.5, 1, 3}, z in a disk of radius 0.05.
std::vector<SymbolPoint> random_points(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> us(0.1, 50), uz(-0.05, 0.05), ue(0.02, 0.2);
  const double ms[] = {-0.5, 0.5, 1, 3};
  std::vector<SymbolPoint> out;
  while (int(out.size()) < n) {
    SymbolPoint p{us(rng), ms[rng() % 4], Complex(1, ue(rng)), Complex(uz(rng), uz(rng))};
    try {
      quartic_roots(p);
      out.push_back(p);
    } catch (const DegenerateRoot&) {
    }
  }
  return out;
}

}  // namespace

TEST_CASE("roots at s = 0, z = 0 are the square roots of omega0 and its conjugate") {
  const SymbolPoint p{0, 1, Complex(1, 0.1), 0};
  const Roots r = quartic_roots(p);
  // Frozen from a 50-digit polynomial root finder.
  const Complex l1(1.001246114127812489952298338, 0.04993777183700243735917313195);
  const Complex m1(1.415975833872912192496546442, 0.07062267420658203576097212944);
  CHECK(rel(r.lambda1, l1) < 1e-15);
  CHECK(rel(r.lambda2, Complex(-l1.real(), l1.imag())) < 1e-15);
  CHECK(rel(r.mu1, m1) < 1e-15);
  CHECK(rel(r.mu2, Complex(-m1.real(), m1.imag())) < 1e-15);
  CHECK(std::abs(r.lambda1 * r.lambda1 - Complex(1, 0.1)) < 1e-15);
  CHECK(std::abs(r.lambda2 * r.lambda2 - Complex(1, -0.1)) < 1e-15);
}

TEST_CASE("radical roots agree with companion-matrix roots") {
  for (const auto& p : random_points(300, 7)) {
    const Roots r = quartic_roots(p);
    const auto c = companion_upper_roots(p, r);
    CHECK(std::abs(c.lambda1 - r.lambda1) < 1e-10 * (1 + std::abs(r.lambda1)));
    CHECK(std::abs(c.lambda2 - r.lambda2) < 1e-10 * (1 + std::abs(r.lambda2)));
    CHECK(std::abs(c.mu1 - r.mu1) < 1e-10 * (1 + std::abs(r.mu1)));
    CHECK(std::abs(c.mu2 - r.mu2) < 1e-10 * (1 + std::abs(r.mu2)));
    CHECK(root_residual(p, r) < 1e-10);
    CHECK(r.lambda1.imag() > 0);
    CHECK(r.lambda2.imag() > 0);
    CHECK(r.mu1.imag() > 0);
    CHECK(r.mu2.imag() > 0);
  }
}

TEST_CASE("extended precision roots match double") {
  const BasicSymbolPoint<long double> pl{3.0L, 0.5L, {1.0L, 0.07L}, {-0.01L, 0.02L}};
  const SymbolPoint pd{3.0, 0.5, Complex(1, 0.07), Complex(-0.01, 0.02)};
  const auto rl = quartic_roots(pl);
  const auto rd = quartic_roots(pd);
  CHECK(std::abs(Complex(rl.lambda1) - rd.lambda1) < 1e-14);
  CHECK(std::abs(Complex(rl.mu2) - rd.mu2) < 1e-14);
  CHECK(double(root_residual(pl, rl)) < 1e-17);
}

TEST_CASE("sum of squares identities") {
  const SymbolPoint p{2, 1, Complex(1, 0.1), Complex(0.3, -0.2)};
  const Roots r = quartic_roots(p);
  CHECK(std::abs(r.lambda1 * r.lambda1 + r.lambda2 * r.lambda2 + 2.0) < 1e-14);
  for (const auto& q : random_points(100, 11)) {
    const Roots t = quartic_roots(q);
    const double k = 1 + q.m;
    const Complex lhs = k * k * (t.lambda1 * t.lambda1 + t.lambda2 * t.lambda2) + t.mu1 * t.mu1 + t.mu2 * t.mu2;
    const double rhs = 2 * ((k * k + k) * q.omega0.real() - (k * k + 1) * q.s);
    CHECK(std::abs(lhs - rhs) < 1e-10 * (1 + std::abs(rhs)));
    CHECK(std::abs(rhs - 2 * symbol_Y(q).real()) < 1e-12 * (1 + std::abs(rhs)));
  }
}

TEST_CASE("double root at z = (Im omega0)^2") {
  const SymbolPoint p{3, 1, Complex(1, 0.1), Complex(0.1 * 0.1, 0)};
  const Roots r = quartic_roots(p);
  CHECK(std::abs(r.lambda1 - r.lambda2) < 1e-14);
  CHECK(std::abs(r.lambda1 - std::sqrt(Complex(-2))) < 1e-14);
  CHECK_FALSE(simple_roots(r));
  CHECK_THROWS_AS(det_lambda1(p), DegenerateRoot);
  CHECK_THROWS_AS(det_M(p), DegenerateRoot);
}

TEST_CASE("real roots are reported as degenerate") {
  // z real and r > 0 with small s gives a positive real lambda^2.
  CHECK_THROWS_AS(quartic_roots(SymbolPoint{0.2, 1, Complex(1, 0.1), Complex(0.05, 0)}), DegenerateRoot);
}

TEST_CASE("symbol Y") {
  for (double s : {0.0, 1.5, 40.0}) {
    const SymbolPoint p{s, 0, Complex(1, 0.1), 0};
    CHECK(std::abs(symbol_Y(p) - 2.0 * (Complex(1, 0.1) - s)) < 1e-14 * (1 + s));
  }
  CHECK(std::abs(symbol_Y(SymbolPoint{0, 1, Complex(1, 0.1), 0}) - Complex(6, 0.6)) < 1e-14);
}

TEST_CASE("factorization of the 4x4 determinant") {
  for (const auto& p : random_points(300, 3)) {
    const Roots r = quartic_roots(p);
    if (!simple_roots(r)) continue;
    const Complex raw = det_lambda_raw(p, r);
    const Complex fac = -(r.lambda2 - r.lambda1) * (r.mu2 - r.mu1) * det_lambda1_stable(p, r);
    CHECK(rel(fac, raw) < 1e-9);
    CHECK(factorization_residual(p) < 1e-9);
  }
}

TEST_CASE("det Lambda_1: stable, literal and matrix forms agree") {
  for (const auto& p : random_points(300, 5)) {
    const Roots r = quartic_roots(p);
    const Complex st = det_lambda1_stable(p, r);
    const Complex mat = lambda1_matrix(p, r).determinant();
    const Complex lit = det_lambda1_literal(p, r);
    const double scale = 1 + p.s * p.s;
    CHECK(std::abs(st - mat) < 1e-12 * scale);
    CHECK(std::abs(st - lit) < 1e-12 * scale);
  }
}

TEST_CASE("det Lambda_1 and det M against frozen extended-precision values") {
  struct Case {
    double s, m;
    Complex z, d1, dm;
  };
  const Case cases[] = {
      {1e4, 1, {0.001, 0.002}, {-3.969999997461777962673002, 0.07999999994984995781446537},
       {-6.205917262909505082928444e-14, 1.250562668760530830294594e-15}},
      {1e6, 3, {-0.02, 0.01}, {-155.2399999999120234203198, 5.439999999996838847436442},
       {-2.425643192284702405471595e-18, 8.500063750314695130768701e-20}},
      {2.5, 0.5, {-0.01, 0.03}, {-0.702626275271553332630373, 0.43442249435050638077943},
       {-0.006016169977929055234750665, 0.003321339726116180881922792}},
  };
  for (const auto& c : cases) {
    const SymbolPoint p{c.s, c.m, Complex(1, 0.05), c.z};
    INFO("s=" << c.s);
    CHECK(rel(det_lambda1(p), c.d1) < 1e-10);
    CHECK(rel(det_M(p), c.dm) < 1e-10);
  }
}

// The remainder is in fact O(1/s^2): each doubling of s cuts it by 4.
TEST_CASE("large-s limit of det Lambda_1 and its convergence rate") {
  CHECK(std::abs(det_lambda1_limit(1.0, Complex(1, 0.05), Complex(0.0025, 0)) + 3.91) < 1e-12);
  for (double m : {0.5, 1.0, 3.0}) {
    for (Complex z : {Complex(0.0015, 0.001), Complex(-0.01, 0.005), Complex(0.002, -0.003)}) {
      const Complex om(1, 0.05);
      const Complex lim = det_lambda1_limit(m, om, z);
      double prev = 0;
      for (double s = 1e3; s <= 1.7e5; s *= 2) {
        const double err = std::abs(det_lambda1(SymbolPoint{s, m, om, z}) - lim);
        if (prev > 0) {
          INFO("m=" << m << " z=" << z << " s=" << s);
          CHECK(err / prev >= 0.2);
          CHECK(err / prev <= 0.3);
        }
        prev = err;
      }
      // Imaginary part tracks 2 (2 + 2m + m^2)(m+1)^2 Im z.
      const Complex d = det_lambda1(SymbolPoint{1e6, m, om, z});
      CHECK(std::abs(d.imag() - 2 * (2 + 2 * m + m * m) * (m + 1) * (m + 1) * z.imag()) < 1e-3);
    }
  }
}

TEST_CASE("raw determinant vanishes as z approaches (Im omega0)^2") {
  const Complex om(1, 0.1);
  double prev = 1e300;
  for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const SymbolPoint p{3, 1, om, Complex(0.01 - eps, 0)};
    const double v = std::abs(det_lambda_raw(p, quartic_roots(p)));
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("det Lambda_2 bracket and limits") {
  const SymbolPoint p{5, 1, Complex(1, 0.1), Complex(0.01, 0)};
  CHECK(std::abs(lambda2_bracket(p) - Complex(0, -0.6)) < 1e-13);
  for (double m : {-0.5, 0.5, 1.0, 3.0}) {
    for (double s : {5.0, 17.0, 1e3, 1e5}) {
      const Complex om(1, 0.07);
      const SymbolPoint q{s, m, om, Complex(0.07 * 0.07, 0)};
      CHECK(std::abs(lambda2_bracket(q) - Complex(0, -(2 + 3 * m + m * m) * 0.07)) < 1e-12 * (1 + s));
      const Complex st = det_lambda2(q);
      CHECK(std::abs(st - det_lambda2_literal(q)) < 1e-12 * (1 + s * s));
      if (s < 1e3) CHECK(rel(lambda2_matrix(q).partialPivLu().determinant(), st) < 1e-9);
    }
  }
  CHECK(std::abs(det_lambda2_limit(1.0, Complex(1, 0.1)) - 3.64) < 1e-14);
  // Approach to 3.64; as for Lambda_1 the remainder is O(1/s^2).
  double prev = 0;
  for (double s : {1e3, 2e3, 4e3, 8e3, 1.6e4, 1e5}) {
    const double err = std::abs(det_lambda2(SymbolPoint{s, 1, Complex(1, 0.1), Complex(0.01, 0)}) - 3.64);
    if (prev > 0 && s < 2e4) {
      CHECK(err / prev >= 0.2);
      CHECK(err / prev <= 0.3);
    }
    prev = err;
  }
  const Complex at1e5 = det_lambda2(SymbolPoint{1e5, 1, Complex(1, 0.1), Complex(0.01, 0)});
  CHECK(std::abs(at1e5 - 3.64) < 1e-4);
  CHECK_THROWS_AS(det_lambda2(SymbolPoint{5, 1, Complex(1, 0.1), Complex(0.02, 0)}), OutOfRange);
}

TEST_CASE("r products and det M forms") {
  for (const auto& p : random_points(300, 9)) {
    const Roots r = quartic_roots(p);
    if (!simple_roots(r)) continue;
    const auto rc = r_coefficients(p, r);
    const auto [p12, p34] = r_products(r);
    CHECK(rel(rc[0] * rc[1], p12) < 1e-10);
    CHECK(rel(rc[2] * rc[3], p34) < 1e-10);
    CHECK(rel(det_M_direct(p), det_M(p)) < 1e-8);
  }
}

TEST_CASE("det M decays like s^-3") {
  const Complex om(1, 0.05);
  for (double m : {0.5, 1.0, 3.0}) {
    double lo = 1e300, hi = 0;
    for (double s = 100; s <= 1e6; s *= 1.5) {
      const double v = std::abs(det_M(SymbolPoint{s, m, om, Complex(-0.003, 0.002)})) * s * s * s;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(lo > 0);
    CHECK(hi < 10 * lo);
  }
}

TEST_CASE("condition on m, omega0, eta") {
  CHECK(cond_check(1, Complex(1, 0.1), 0.5));
  CHECK_FALSE(cond_check(1, Complex(1, 0.2), 0.5));
  CHECK(cond_check(1, Complex(1, 1.0 / 6.0), 0.5));
  CHECK(cond_check(1, Complex(1, 0.05), 0.9));
}

TEST_CASE("separation of lambda and mu roots") {
  const double sep = root_separation(SymbolPoint{0, 1, Complex(1, 0.1), -1.0}, 0.01);
  CHECK(std::abs(sep - 0.493200296507071547403324) < 1e-13);
  CHECK(root_separation(SymbolPoint{2, 0, Complex(1, 0.1), Complex(-0.5, 0.2)}, 0.01) == 0);
  // A path from -1 around the excluded ray to -1 + 0.05i ... 0.02 + 0.05i.
  for (int i = 0; i < 100; ++i) {
    const double t = i / 99.0;
    const Complex z = t < 0.5 ? Complex(-1 + 2 * t * 1.02, 0.05 * 2 * t) : Complex(0.02, 0.05 - 0.1 * (t - 0.5));
    if (z.imag() == 0) continue;
    CHECK(root_separation(SymbolPoint{0.5, 1, Complex(1, 0.1), z}, 0.01) > 0);
  }
  CHECK_THROWS_AS(root_separation(SymbolPoint{0, 1, Complex(1, 0.1), 0.5}, 0.01), OutOfRange);
}

TEST_CASE("interior symbol lower bound") {
  for (double m : {-0.5, 0.5, 1.0, 3.0}) {
    for (double t = 0; t < 20; t += 0.001) {
      const Complex om(1, 0.1);
      const double q1 = std::abs((t - std::conj(om)) * (t - om));
      CHECK(q1 >= 0.01 - 1e-15);
      CHECK(std::abs(interior_symbol(m, om, t)) >= 1e-4 * (1 - 1e-12));
    }
  }
}

TEST_CASE("lower-root branch is caught by the factorization cross-check") {
  const SymbolPoint p{4, 1, Complex(1, 0.05), Complex(-0.01, 0.004)};
  CHECK(factorization_residual(p) < 1e-9);
  CHECK(factorization_residual(p, Branch::lower_lambda2) > 1e-3);
}

TEST_CASE("ellipticity scan for Lambda_1") {
  ScanParams params;
  params.omega0 = Complex(1, 0.05);
  params.eta = 0.9;
  params.delta = 0.01;
  const auto scan = ellipticity_scan(ScanTarget::lambda1, params);
  CHECK(scan.certified);
  CHECK(scan.Cmin > 0);
  CHECK(scan.C0 > 0);
  CHECK(scan.s_points == 257);
  CHECK(scan.interior_min >= std::pow(0.05, 4) * (1 - 1e-12));
  REQUIRE(scan.per_m.size() == 4);
  CHECK_FALSE(scan.per_m[0].asserted);  // m < 0 is reported only
  for (const auto& pm : scan.per_m) {
    if (pm.asserted) {
      CHECK(pm.certified);
      CHECK(pm.Cmin >= 0.5 * pm.limit_min);
    }
  }
  const std::string js = to_json(scan);
  CHECK(js.find("\"Cmin\"") != std::string::npos);
  CHECK(js.find("\"Lambda1\"") != std::string::npos);
}

TEST_CASE("ellipticity scan at the double root and for M") {
  ScanParams params;
  params.omega0 = Complex(1, 0.05);
  const auto l2 = ellipticity_scan(ScanTarget::lambda2, params);
  CHECK(l2.certified);
  CHECK(l2.z_points == 1);
  CHECK(l2.Cmin > 0);
  ScanGrid coarse;
  coarse.nz = 11;
  coarse.per_decade = 8;
  const auto m = ellipticity_scan(ScanTarget::M, params, coarse);
  CHECK(m.certified);
  CHECK(m.Cmin > 0);
}

TEST_CASE("scan rejects bad parameters") {
  ScanParams params;
  params.eta = 1.5;
  CHECK_THROWS_AS(ellipticity_scan(ScanTarget::lambda1, params), ConfigError);
  params.eta = 0.5;
  ScanGrid g;
  g.m_values = {0.0};
  CHECK_THROWS_AS(ellipticity_scan(ScanTarget::lambda1, params, g), InvalidContrast);
}
