#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "ite/errors.hpp"
#include "ite/scaled.hpp"

namespace ite::symbols {

/// Boundary data at one point of the cotangent bundle: tangential symbol s,
/// boundary contrast m, the shift omega0 and the spectral parameter z.
template <typename Real>
struct BasicSymbolPoint {
  Real s = 0;
  Real m = 1;
  std::complex<Real> omega0{1, Real(0.1)};
  std::complex<Real> z{0};

  Real r() const { return z.real() - omega0.imag() * omega0.imag(); }
  Real w() const { return z.imag(); }
};

/// Upper half-plane roots of the two boundary quartics; the lower roots are their negatives.
template <typename Real>
struct BasicRoots {
  std::complex<Real> lambda1, lambda2, mu1, mu2;
};

using SymbolPoint = BasicSymbolPoint<double>;
using Roots = BasicRoots<double>;

/// Root selection. lower_lambda2 keeps the lower root for lambda2 and exists
/// only as a negative control for the cross-checks.
enum class Branch { standard, lower_lambda2 };

/// sqrt(r + i w) with the argument of r + i w taken in [0, 2 pi).
template <typename Real>
std::complex<Real> zeta(const BasicSymbolPoint<Real>& p) {
  using std::atan2;
  using std::sqrt;
  using std::abs;
  const std::complex<Real> q(p.r(), p.w());
  Real a = atan2(q.imag(), q.real());
  if (a < 0) a += 2 * std::numbers::pi_v<Real>;
  return std::polar(sqrt(abs(q)), a / 2);
}

namespace detail {

template <typename Real>
std::complex<Real> upper(std::complex<Real> x) {
  return (x.imag() < 0 || (x.imag() == 0 && x.real() < 0)) ? -x : x;
}

template <typename Real>
void require_real_root_free(std::complex<Real> x, const char* name) {
  using std::abs;
  if (abs(x.imag()) < Real(1e-12) * (1 + abs(x))) {
    throw DegenerateRoot(std::string("quartic_roots: ") + name + " is numerically real");
  }
}

// a - b where a^2 = b^2 - sq, without cancellation when a is close to b.
template <typename Real>
std::complex<Real> offset(std::complex<Real> a, std::complex<Real> b, std::complex<Real> sq) {
  using std::abs;
  const std::complex<Real> plus = a + b, minus = a - b;
  return abs(plus) >= abs(minus) ? -sq / plus : minus;
}

// a - b from a^2 - b^2 = diff.
template <typename Real>
std::complex<Real> difference(std::complex<Real> a, std::complex<Real> b, std::complex<Real> diff) {
  using std::abs;
  const std::complex<Real> plus = a + b, minus = a - b;
  return abs(plus) >= abs(minus) ? diff / plus : minus;
}

}  // namespace detail

/// Radical formulas for the roots, each moved to the upper half-plane.
/// Throws DegenerateRoot if any root is numerically real.
template <typename Real>
BasicRoots<Real> quartic_roots(const BasicSymbolPoint<Real>& p, Branch branch = Branch::standard) {
  using std::sqrt;
  using C = std::complex<Real>;
  if (!(1 + p.m > 0)) throw InvalidContrast("quartic_roots: 1 + m must be positive");
  const C zt = zeta(p);
  const Real a = p.omega0.real();
  const Real k = 1 + p.m;
  BasicRoots<Real> out{detail::upper(sqrt(C(a - p.s) + zt)), detail::upper(sqrt(C(a - p.s) - zt)),
                       detail::upper(sqrt(C(k * a - p.s) + k * zt)), detail::upper(sqrt(C(k * a - p.s) - k * zt))};
  detail::require_real_root_free(out.lambda1, "lambda1");
  detail::require_real_root_free(out.lambda2, "lambda2");
  detail::require_real_root_free(out.mu1, "mu1");
  detail::require_real_root_free(out.mu2, "mu2");
  if (branch == Branch::lower_lambda2) out.lambda2 = -out.lambda2;
  return out;
}

/// Values of the monic quartics (p - conj w)(p - w) - z and
/// (p - (1+m) conj w)(p - (1+m) w) - (1+m)^2 z at xi, with p = xi^2 + s.
template <typename Real>
std::complex<Real> quartic_lambda(const BasicSymbolPoint<Real>& p, std::complex<Real> xi) {
  const std::complex<Real> q = xi * xi + p.s;
  return (q - std::conj(p.omega0)) * (q - p.omega0) - p.z;
}

template <typename Real>
std::complex<Real> quartic_mu(const BasicSymbolPoint<Real>& p, std::complex<Real> xi) {
  const Real k = 1 + p.m;
  const std::complex<Real> q = xi * xi + p.s;
  return (q - k * std::conj(p.omega0)) * (q - k * p.omega0) - k * k * p.z;
}

/// Largest |quartic(root)| / (1 + |root|^4) over the four upper roots.
template <typename Real>
Real root_residual(const BasicSymbolPoint<Real>& p, const BasicRoots<Real>& r) {
  using std::abs;
  auto rel = [](std::complex<Real> v, std::complex<Real> x) { return abs(v) / (1 + std::norm(x) * std::norm(x)); };
  return std::max({rel(quartic_lambda(p, r.lambda1), r.lambda1), rel(quartic_lambda(p, r.lambda2), r.lambda2),
                   rel(quartic_mu(p, r.mu1), r.mu1), rel(quartic_mu(p, r.mu2), r.mu2)});
}

/// All four roots of xi^4 + c2 xi^2 + c0 from the companion matrix.
template <typename Real>
std::array<std::complex<Real>, 4> companion_roots(std::complex<Real> c2, std::complex<Real> c0) {
  using C = std::complex<Real>;
  Eigen::Matrix<C, 4, 4> A = Eigen::Matrix<C, 4, 4>::Zero();
  A(1, 0) = A(2, 1) = A(3, 2) = C(1);
  A(0, 3) = -c0;
  A(2, 3) = -c2;
  Eigen::ComplexEigenSolver<Eigen::Matrix<C, 4, 4>> es(A, false);
  std::array<C, 4> out;
  for (int i = 0; i < 4; ++i) out[i] = es.eigenvalues()(i);
  return out;
}

/// Upper roots from the companion matrices, labelled to match `guide`
/// (nearest root first); lambda1/lambda2 and mu1/mu2 pairs.
template <typename Real>
BasicRoots<Real> companion_upper_roots(const BasicSymbolPoint<Real>& p, const BasicRoots<Real>& guide) {
  using C = std::complex<Real>;
  using std::abs;
  const Real a = p.omega0.real();
  const Real k = 1 + p.m;
  const Real e = p.omega0.imag();
  // (xi^2 + s - a)^2 + e^2 - z and its scaled twin.
  const C cl2 = 2 * (p.s - a), cl0 = C((p.s - a) * (p.s - a) + e * e) - p.z;
  const C cm2 = 2 * (p.s - k * a), cm0 = C((p.s - k * a) * (p.s - k * a) + k * k * e * e) - k * k * p.z;
  auto pick = [](std::array<C, 4> roots, C g1, C g2) {
    std::sort(roots.begin(), roots.end(), [](C x, C y) { return x.imag() > y.imag(); });
    C u = roots[0], v = roots[1];
    if (abs(u - g1) + abs(v - g2) > abs(v - g1) + abs(u - g2)) std::swap(u, v);
    return std::pair{u, v};
  };
  const auto [l1, l2] = pick(companion_roots<Real>(cl2, cl0), guide.lambda1, guide.lambda2);
  const auto [m1, m2] = pick(companion_roots<Real>(cm2, cm0), guide.mu1, guide.mu2);
  return {l1, l2, m1, m2};
}

/// Y = (2 + 2m + m^2)(omega0 - s) + m omega0.
template <typename Real>
std::complex<Real> symbol_Y(const BasicSymbolPoint<Real>& p) {
  return (2 + 2 * p.m + p.m * p.m) * (p.omega0 - p.s) + p.m * p.omega0;
}

/// The 4x4 boundary matrix of the simple-root ansatz.
template <typename Real>
Eigen::Matrix<std::complex<Real>, 4, 4> lambda_matrix(const BasicSymbolPoint<Real>& p, const BasicRoots<Real>& r) {
  using C = std::complex<Real>;
  const Real k = (1 + p.m) * (1 + p.m);
  const C Y = symbol_Y(p);
  const C l1 = r.lambda1, l2 = r.lambda2, m1 = r.mu1, m2 = r.mu2;
  Eigen::Matrix<C, 4, 4> L;
  L << C(1), C(1), C(-1), C(-1),
       l1, l2, -m1, -m2,
       -k * l1 * l1 + Y, -k * l2 * l2 + Y, -m1 * m1, -m2 * m2,
       -k * l1 * l1 * l1 + l1 * Y, -k * l2 * l2 * l2 + l2 * Y, -m1 * m1 * m1, -m2 * m2 * m2;
  return L;
}

template <typename Real>
std::complex<Real> det_lambda_raw(const BasicSymbolPoint<Real>& p, const BasicRoots<Real>& r) {
  return lambda_matrix(p, r).partialPivLu().determinant();
}

/// The reduced 3x3 matrix after column elimination.
template <typename Real>
Eigen::Matrix<std::complex<Real>, 3, 3> lambda1_matrix(const BasicSymbolPoint<Real>& p, const BasicRoots<Real>& r) {
  using C = std::complex<Real>;
  const Real k = (1 + p.m) * (1 + p.m);
  const C Y = symbol_Y(p);
  const C l1 = r.lambda1, l2 = r.lambda2, m1 = r.mu1, m2 = r.mu2;
  Eigen::Matrix<C, 3, 3> L;
  L << C(1), -m1, C(1),
       -k * (l1 + l2), k * l1 * l2 - m1 * m1 + Y, m1 + m2,
       -k * (l1 * l1 + l1 * l2 + l2 * l2) + Y, k * l1 * l2 * (l1 + l2) - m1 * m1 * m1, m1 * m1 + m1 * m2 + m2 * m2;
  return L;
}

/// Expanded polynomial form of det Lambda_1, term by term. Loses about
/// log10(s^2) digits at large s.
template <typename Real>
std::complex<Real> det_lambda1_literal(const BasicSymbolPoint<Real>& p, const BasicRoots<Real>& r) {
  using C = std::complex<Real>;
  const Real k = (1 + p.m) * (1 + p.m);
  const C Y = symbol_Y(p);
  const C l1 = r.lambda1, l2 = r.lambda2, m1 = r.mu1, m2 = r.mu2;
  const C sl = l1 + l2, sm = m1 + m2, pl = l1 * l2, pm = m1 * m2;
  const C Z = pm * sl * sl - (pl + pm) * sm * sl + pl * sm * sm;
  const C P = k * pl + pm;
  return k * Z - P * P + (k * (l1 * l1 + l2 * l2) + (m1 * m1 + m2 * m2)) * Y - Y * Y;
}

/// det Lambda_1 rearranged so that the O(s^2) terms cancel analytically:
/// (1+m)^2 A B + (Im Y)^2 - (P - Re Y)(P + Re Y), with A, B the two factors
/// of Z and P = (1+m)^2 lambda1 lambda2 + mu1 mu2.
template <typename Real>
std::complex<Real> det_lambda1_stable(const BasicSymbolPoint<Real>& p, const BasicRoots<Real>& r) {
  using C = std::complex<Real>;
  const Real k1 = 1 + p.m, k = k1 * k1;
  const Real a = p.omega0.real();
  const C Y = symbol_Y(p);
  const C zt = zeta(p);
  const C l1 = r.lambda1, l2 = r.lambda2, m1 = r.mu1, m2 = r.mu2;
  const C pl = l1 * l2, pm = m1 * m2;
  const Real cl = a - p.s, cm = k1 * a - p.s;
  const C dl = detail::offset(pl, C(cl), zt * zt);
  const C dm = detail::offset(pm, C(cm), k * zt * zt);
  const C A = detail::difference(l1, m1, -p.m * (a + zt)) + detail::difference(l2, m2, -p.m * (a - zt));
  const C B = (dm - dl + p.m * a) * (l1 + l2) + pl * A;
  const C PmRe = k * dl + dm;
  const C PpRe = PmRe + 2 * Y.real();
  return k * A * B + Y.imag() * Y.imag() - PmRe * PpRe;
}

template <typename Real>
bool simple_roots(const BasicRoots<Real>& r) {
  using std::abs;
  const Real tol = Real(1e-12);
  return abs(r.lambda1 - r.lambda2) > tol * (1 + abs(r.lambda1)) && abs(r.mu1 - r.mu2) > tol * (1 + abs(r.mu1));
}

/// det Lambda_1 at p (stable form). Throws DegenerateRoot at double roots.
template <typename Real>
std::complex<Real> det_lambda1(const BasicSymbolPoint<Real>& p, Branch branch = Branch::standard) {
  const auto r = quartic_roots(p, branch);
  if (!simple_roots(r)) throw DegenerateRoot("det_lambda1: double root (use det_lambda2)");
  return det_lambda1_stable(p, r);
}

/// Large-s limit of det Lambda_1.
template <typename Real>
std::complex<Real> det_lambda1_limit(Real m, std::complex<Real> omega0, std::complex<Real> z) {
  const Real e = omega0.imag(), a = omega0.real();
  const Real c3 = 2 + 3 * m + m * m, c2 = 2 + 2 * m + m * m, k = (1 + m) * (1 + m);
  const std::complex<Real> rw(z.real() - e * e, z.imag());
  return c3 * c3 * e * e + 2 * c2 * k * rw - m * m * k * a * a;
}

/// |det Lambda_raw + (lambda2 - lambda1)(mu2 - mu1) det Lambda_1| relative to
/// the larger side. The 4x4 determinant is built in long double from
/// companion-matrix roots, det Lambda_1 from the radical roots in Real.
template <typename Real>
Real factorization_residual(const BasicSymbolPoint<Real>& p, Branch branch = Branch::standard) {
  using X = long double;
  using CX = std::complex<X>;
  const BasicSymbolPoint<X> px{X(p.s), X(p.m), CX(p.omega0), CX(p.z)};
  const auto c = companion_upper_roots(px, quartic_roots(px));
  const CX lhs = det_lambda_raw(px, c);
  const auto r = quartic_roots(p, branch);
  const CX rhs(-(r.lambda2 - r.lambda1) * (r.mu2 - r.mu1) * det_lambda1_stable(p, r));
  return Real(std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
}

/// Double roots at z = (Im omega0)^2.
template <typename Real>
std::pair<std::complex<Real>, std::complex<Real>> double_roots(const BasicSymbolPoint<Real>& p) {
  using C = std::complex<Real>;
  using std::abs;
  const Real e = p.omega0.imag();
  if (abs(p.z - C(e * e)) > Real(1e-14) * (1 + e * e)) {
    throw OutOfRange("det_lambda2: needs z = (Im omega0)^2");
  }
  if (!(1 + p.m > 0)) throw InvalidContrast("det_lambda2: 1 + m must be positive");
  const C l = detail::upper(std::sqrt(C(p.omega0.real() - p.s)));
  const C mu = detail::upper(std::sqrt(C((1 + p.m) * p.omega0.real() - p.s)));
  detail::require_real_root_free(l, "lambda");
  detail::require_real_root_free(mu, "mu");
  return {l, mu};
}

template <typename Real>
Eigen::Matrix<std::complex<Real>, 4, 4> lambda2_matrix(const BasicSymbolPoint<Real>& p) {
  using C = std::complex<Real>;
  const auto [l, mu] = double_roots(p);
  const Real k = (1 + p.m) * (1 + p.m);
  const C Y = symbol_Y(p);
  Eigen::Matrix<C, 4, 4> L;
  L << C(1), C(0), C(-1), C(0),
       l, C(1), -mu, C(-1),
       -k * l * l + Y, -2 * k * l, -mu * mu, Real(-2) * mu,
       -k * l * l * l + Y * l, -3 * k * l * l + Y, -mu * mu * mu, Real(-3) * mu * mu;
  return L;
}

/// (1+m)^2 lambda^2 + mu^2 - Y, evaluated literally.
template <typename Real>
std::complex<Real> lambda2_bracket(const BasicSymbolPoint<Real>& p) {
  const auto [l, mu] = double_roots(p);
  return (1 + p.m) * (1 + p.m) * l * l + mu * mu - symbol_Y(p);
}

template <typename Real>
std::complex<Real> det_lambda2_literal(const BasicSymbolPoint<Real>& p) {
  using C = std::complex<Real>;
  const auto [l, mu] = double_roots(p);
  const Real k = (1 + p.m) * (1 + p.m);
  const C Y = symbol_Y(p);
  const C l2 = l * l, mu2 = mu * mu;
  return mu2 * mu2 + k * k * l2 * l2 + k * (Real(4) * l * mu2 * mu + Real(4) * l2 * l * mu - Real(6) * l2 * mu2) -
         Real(2) * (k * l2 + mu2) * Y + Y * Y;
}

/// det Lambda_2 = bracket^2 + 4 (1+m)^2 lambda mu (lambda - mu)^2 with the
/// bracket in exact form and lambda - mu = -m Re omega0 / (lambda + mu).
template <typename Real>
std::complex<Real> det_lambda2(const BasicSymbolPoint<Real>& p) {
  using C = std::complex<Real>;
  const auto [l, mu] = double_roots(p);
  const Real k = (1 + p.m) * (1 + p.m);
  const C bracket(0, -(2 + 3 * p.m + p.m * p.m) * p.omega0.imag());
  const C d = detail::difference(l, mu, C(-p.m * p.omega0.real()));
  return bracket * bracket + 4 * k * l * mu * d * d;
}

template <typename Real>
Real det_lambda2_limit(Real m, std::complex<Real> omega0) {
  const Real c3 = 2 + 3 * m + m * m;
  const Real e = omega0.imag(), a = omega0.real();
  return -c3 * c3 * e * e + m * m * (1 + m) * (1 + m) * a * a;
}

/// r_j = 1 / d/dxi of the monic quartic at each upper root.
template <typename Real>
std::array<std::complex<Real>, 4> r_coefficients(const BasicSymbolPoint<Real>& p, const BasicRoots<Real>& r) {
  const Real a = p.omega0.real();
  const Real k1 = 1 + p.m;
  auto dl = [&](std::complex<Real> x) { return Real(1) / (Real(4) * x * (x * x + p.s - a)); };
  auto dm = [&](std::complex<Real> x) { return Real(1) / (Real(4) * x * (x * x + p.s - k1 * a)); };
  return {dl(r.lambda1), dl(r.lambda2), dm(r.mu1), dm(r.mu2)};
}

/// Closed forms of r1 r2 and r3 r4.
template <typename Real>
std::pair<std::complex<Real>, std::complex<Real>> r_products(const BasicRoots<Real>& r) {
  auto f = [](std::complex<Real> x, std::complex<Real> y) {
    const std::complex<Real> d = x - y, s = x + y;
    return Real(-1) / (d * d * Real(4) * x * y * s * s);
  };
  return {f(r.lambda1, r.lambda2), f(r.mu1, r.mu2)};
}

/// Principal symbol of the boundary system, as the displayed matrix product.
template <typename Real>
Eigen::Matrix<std::complex<Real>, 4, 4> M_matrix(const BasicSymbolPoint<Real>& p, const BasicRoots<Real>& r) {
  using C = std::complex<Real>;
  using Mat = Eigen::Matrix<C, 4, 4>;
  const auto rc = r_coefficients(p, r);
  Mat D = Mat::Zero();
  for (int i = 0; i < 4; ++i) D(i, i) = rc[i];
  Mat B = Mat::Zero();
  B(0, 0) = B(1, 0) = B(2, 2) = B(3, 2) = C(1);
  B(0, 1) = r.lambda1 * r.lambda1;
  B(1, 1) = r.lambda2 * r.lambda2;
  B(2, 3) = r.mu1 * r.mu1;
  B(3, 3) = r.mu2 * r.mu2;
  return lambda_matrix(p, r) * D * B;
}

/// LU of the assembled product. Near-coalescing roots make the 4x4 factors
/// nearly singular, so double input is evaluated in long double.
template <typename Real>
std::complex<Real> det_M_direct(const BasicSymbolPoint<Real>& p, Branch branch = Branch::standard) {
  if constexpr (std::is_same_v<Real, double>) {
    using X = long double;
    const BasicSymbolPoint<X> q{p.s, p.m, std::complex<X>(p.omega0), std::complex<X>(p.z)};
    return std::complex<Real>(det_M_direct(q, branch));
  } else {
    const auto r = quartic_roots(p, branch);
    if (!simple_roots(r)) throw DegenerateRoot("det_M: double root");
    return M_matrix(p, r).partialPivLu().determinant();
  }
}

/// det M = -det Lambda_1 / (16 lambda1 lambda2 mu1 mu2 (lambda1 + lambda2)(mu1 + mu2)).
template <typename Real>
std::complex<Real> det_M(const BasicSymbolPoint<Real>& p, Branch branch = Branch::standard) {
  const auto r = quartic_roots(p, branch);
  if (!simple_roots(r)) throw DegenerateRoot("det_M: double root");
  const auto den =
      Real(16) * r.lambda1 * r.lambda2 * r.mu1 * r.mu2 * (r.lambda1 + r.lambda2) * (r.mu1 + r.mu2);
  return -det_lambda1_stable(p, r) / den;
}

/// min over j, k of |lambda_j - mu_k|. Requires z off [(Im omega0 + delta)^2, inf).
template <typename Real>
Real root_separation(const BasicSymbolPoint<Real>& p, Real delta) {
  using std::abs;
  const Real edge = (p.omega0.imag() + delta) * (p.omega0.imag() + delta);
  if (p.z.imag() == 0 && p.z.real() >= edge) throw OutOfRange("root_separation: z on the excluded ray");
  const auto r = quartic_roots(p);
  return std::min({abs(r.lambda1 - r.mu1), abs(r.lambda1 - r.mu2), abs(r.lambda2 - r.mu1), abs(r.lambda2 - r.mu2)});
}

/// (2 + 3m + m^2) Im omega0 <= eta |m (m+1)| Re omega0.
inline bool cond_check(double m, Complex omega0, double eta) {
  return (2 + 3 * m + m * m) * omega0.imag() <= eta * std::abs(m * (m + 1)) * omega0.real();
}

/// Interior symbol q at |xi|^2 = t.
template <typename Real>
std::complex<Real> interior_symbol(Real m, std::complex<Real> omega0, Real t) {
  const std::complex<Real> c = std::conj(omega0);
  const Real u = t / (1 + m);
  return (t - c) * (t - omega0) * (u - c) * (u - omega0);
}

// Scans.

enum class ScanTarget { lambda1, lambda2, M };
const char* to_string(ScanTarget t);

struct ScanParams {
  Complex omega0{1, 0.05};
  double eta = 0.9;
  double delta = 0.01;
};

struct ScanGrid {
  double s_min = 1e-2;
  double s_max = 1e6;
  int per_decade = 32;
  int nz = 41;
  std::vector<double> m_values{-0.5, 0.5, 1, 3};
  double a0 = 0;       ///< |z| cap; 0 means 4 (Im omega0 + delta)^2
  double ray_gap = 0;  ///< excluded distance from the ray; 0 means 0.05 (Im omega0 + delta)^2
  /// If positive, the s grid starts at C0^2 and C0 is taken as given rather than derived.
  double C0 = 0;
};

struct ScanPoint {
  double s = 0, m = 0;
  Complex z;
  double value = 0;
};

struct ScanPerM {
  double m = 0;
  bool cond_ok = false;
  bool asserted = false;  ///< m > 0 and the condition holds
  bool certified = false;
  double C0 = 0;
  double Cmin = 0;
  ScanPoint argmin;
  double limit_min = 0;   ///< smallest |large-s limit| over the z grid
  std::size_t degenerate = 0;
};

/// Minimum of |det Lambda_1| (or |det Lambda_2| at z = (Im omega0)^2, or
/// |det M| s^3) over the grid. Unless fixed by the grid, C0 is the smallest grid
/// sqrt(s) from which on every value exceeds half its large-s limit; Cmin is
/// the minimum over s >= C0^2.
struct EllipticityScan {
  ScanTarget which = ScanTarget::lambda1;
  ScanParams params;
  ScanGrid grid;
  double a0 = 0, ray_gap = 0;
  std::size_t s_points = 0, z_points = 0;
  std::vector<ScanPerM> per_m;
  double C0 = 0, Cmin = 0;  ///< over the asserted entries
  ScanPoint argmin;
  bool certified = false;
  double interior_min = 0;  ///< min of |q| over |xi|^2 on the s grid
};

/// Throws ScanFailed if an asserted minimum is not positive.
EllipticityScan ellipticity_scan(ScanTarget which, const ScanParams& params, const ScanGrid& grid = {});

std::string to_json(const EllipticityScan& scan, int indent = 2);

/// The z grid used by the scans.
std::vector<Complex> scan_window(const ScanParams& params, double a0, double ray_gap, int nz);

}  // namespace ite::symbols
