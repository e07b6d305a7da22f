#include "ite/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"

namespace ite::weyl {

namespace {

constexpr double kPi = std::numbers::pi;

// Adaptive Simpson with Richardson correction.
template <typename F>
double simpson(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
               int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15 * tol) return left + right + diff / 15;
  return simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double rel) {
  // Start from 64 panels so that piecewise profiles are resolved before the error test.
  const int panels = 64;
  double coarse = 0;
  for (int i = 0; i < panels; ++i) {
    const double x0 = a + (b - a) * i / panels, x1 = a + (b - a) * (i + 1) / panels;
    coarse += (x1 - x0) / 6 * (f(x0) + 4 * f(0.5 * (x0 + x1)) + f(x1));
  }
  const double tol = rel * std::max(std::abs(coarse), 1e-300) / panels;
  double sum = 0;
  for (int i = 0; i < panels; ++i) {
    const double x0 = a + (b - a) * i / panels, x1 = a + (b - a) * (i + 1) / panels;
    const double f0 = f(x0), fm = f(0.5 * (x0 + x1)), f1 = f(x1);
    sum += simpson(f, x0, x1, f0, fm, f1, (x1 - x0) / 6 * (f0 + 4 * fm + f1), tol, 40);
  }
  return sum;
}

// Shell volume {1 - d <= t <= 1 + d} in |xi|^2 = t.
double shell(int n, double d) {
  const double h = 0.5 * n;
  return unit_ball_volume(n) * (std::pow(1 + d, h) - std::pow(std::max(0.0, 1 - d), h));
}

bool inside(const kernel::Rect& q, Complex z) {
  const double slack = 1e-12 * (std::abs(q.re_max) + std::abs(q.im_max) + std::abs(q.im_min));
  return z.real() >= q.re_min - slack && z.real() <= q.re_max + slack && z.imag() >= q.im_min - slack &&
         z.imag() <= q.im_max + slack;
}

double radical_inverse(std::uint64_t i, int base) {
  double f = 1, out = 0;
  while (i > 0) {
    f /= base;
    out += f * double(i % base);
    i /= base;
  }
  return out;
}


}  // namespace

CoveringParams covering_params(double delta, Complex omega0, double h0) {
  const double e = omega0.imag();
  if (omega0.real() != 1) throw ConfigError("covering_params: Re omega0 must be 1");
  if (!(e > 0 && e < 1)) throw ConfigError("covering_params: need 0 < Im omega0 < 1");
  if (!(delta > 0)) throw BadDelta("covering_params: delta must be positive");
  if (delta >= e) throw BadDelta("covering_params: delta must be below Im omega0");
  CoveringParams p;
  p.delta = delta;
  p.omega0 = omega0;
  p.h0 = h0 > 0 ? h0 : kDefaultH0;
  const double g = 2 * e * delta + delta * delta;
  p.delta1 = std::sqrt(6 * delta * e + 9 * delta * delta);
  p.delta2 = std::sqrt(1 - delta * delta) * std::sqrt(g);
  // sqrt(e^2 + delta^2 g) - e without cancellation.
  p.X = delta * delta * g / (std::sqrt(e * e + delta * delta * g) + e);
  p.theta = std::atan(p.X / (1 + p.delta2));
  p.c0 = std::log1p(3 * delta / (e - delta)) / std::log1p(delta / (e + delta));
  if (!(p.delta2 < 1)) throw BadDelta("covering_params: delta2 >= 1");
  return p;
}

kernel::Rect base_rectangle(const CoveringParams& p) {
  return {1 - p.delta2, 1 + p.delta2, -p.X, p.omega0.imag()};
}

RectangleFamily rectangle_family(const CoveringParams& p, double r) {
  const double inner = 1 / (p.h0 * p.h0);
  if (!(r >= inner)) throw BadRadius("rectangle_family: r must be at least 1/h0^2");
  const double q = p.ratio();
  int K = int(std::floor(std::log(r * p.h0 * p.h0) / std::log(q)));
  while (K > 0 && std::pow(q, K) > r * p.h0 * p.h0) --K;
  while (std::pow(q, K + 1) <= r * p.h0 * p.h0) ++K;
  const kernel::Rect s0 = base_rectangle(p);
  RectangleFamily out;
  out.K = K;
  for (int k = 0; k <= K; ++k) {
    const double rho = r * std::pow(q, -k);
    out.scales.push_back(rho);
    out.rects.push_back({rho * s0.re_min, rho * s0.re_max, rho * s0.im_min, rho * s0.im_max});
  }
  return out;
}

std::string to_csv(const RectangleFamily& family) {
  std::ostringstream os;
  os.precision(17);
  os << "k,rho,re_min,re_max,im_min,im_max\r\n";
  for (std::size_t k = 0; k < family.rects.size(); ++k) {
    const auto& q = family.rects[k];
    os << k << ',' << family.scales[k] << ',' << q.re_min << ',' << q.re_max << ',' << q.im_min << ','
       << q.im_max << "\r\n";
  }
  return os.str();
}

CoverageReport covering_verify(const CoveringParams& p, double r, long samples, std::uint64_t seed) {
  if (samples < 1000) throw ConfigError("covering_verify: need at least 1000 samples");
  const RectangleFamily fam = rectangle_family(p, r);
  CoverageReport rep;
  rep.r = r;
  rep.theta = p.theta;
  rep.K = fam.K;
  rep.inner_radius = 1 / (p.h0 * p.h0);
  rep.residual_radius = rep.inner_radius * p.ratio();

  auto check = [&](Complex z) {
    ++rep.samples;
    for (const auto& q : fam.rects) {
      if (inside(q, z)) {
        ++rep.in_family;
        return;
      }
    }
    if (std::abs(z) <= rep.residual_radius) {
      ++rep.in_residual;
      return;
    }
    std::ostringstream os;
    os.precision(17);
    os << "covering_verify: point " << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i not covered";
    throw CoverageGap(os.str(), z);
  };

  const double a = rep.inner_radius, th = p.theta;
  for (double s : {-1.0, 0.0, 1.0}) {
    check(std::polar(r, s * th));
    check(std::polar(a, s * th));
  }
  // Geometric means of adjacent scales on the sector edges.
  for (std::size_t k = 0; k + 1 < fam.scales.size(); ++k) {
    const double g = std::sqrt(fam.scales[k] * fam.scales[k + 1]);
    check(std::polar(g, th));
    check(std::polar(g, -th));
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0, 1);
  const double shift_u = uni(rng), shift_v = uni(rng);
  for (long i = 1; rep.samples < samples; ++i) {
    const double u = std::fmod(radical_inverse(i, 2) + shift_u, 1.0);
    const double v = std::fmod(radical_inverse(i, 3) + shift_v, 1.0);
    const double rho = std::sqrt(a * a + u * (r * r - a * a));
    check(std::polar(rho, th * (2 * v - 1)));
  }
  return rep;
}

double unit_ball_volume(int n) { return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1); }

double index_integral(int n, const spectrum::Contrast& contrast) {
  if (n < 1 || n > 3) throw ConfigError("dimension must be 1, 2 or 3");
  const double h = 0.5 * n;
  if (contrast.kind == spectrum::Contrast::Kind::constant) {
    return unit_ball_volume(n) * std::pow(1 + contrast.value, h);
  }
  // Sphere area n * omega_n times the radial integral.
  const double area = n * unit_ball_volume(n);
  return area * integrate([&](double rho) { return std::pow(rho, n - 1) * std::pow(1 + contrast.at(rho), h); }, 0,
                          1, 1e-10);
}

WindowVolume window_volume(int n, const spectrum::Contrast& contrast, double c, Complex omega0) {
  const double e = omega0.imag();
  if (!(c > e * e)) throw EmptyWindow("window_volume: c must exceed (Im omega0)^2");
  const double d = std::sqrt(c - e * e);
  const double sh = shell(n, d);
  return {unit_ball_volume(n) * sh, index_integral(n, contrast) * sh};
}

DomainSpec make_domain(int n, const spectrum::Contrast& contrast) {
  spectrum::validate(contrast);
  DomainSpec d{n, contrast, unit_ball_volume(n) + index_integral(n, contrast)};
  if (!(d.volume_integral > 0)) throw ConfigError("make_domain: nonpositive volume integral");
  return d;
}

BoundCoefficients bound_coefficient(const DomainSpec& domain, const CoveringParams& p) {
  const double h = 0.5 * domain.n;
  BoundCoefficients b;
  b.C2 = unit_ball_volume(domain.n) / std::pow(2 * kPi, domain.n) * domain.volume_integral;
  const double num = std::pow(1 + p.delta1, h) - std::pow(std::max(0.0, 1 - p.delta1), h);
  const double den = std::pow(1 + p.delta2, h) - std::pow(1 - p.delta2, h);
  b.finite = p.c0 * b.C2 * std::pow(1 + p.delta2, h) * num / den;
  b.limit = 3 * std::sqrt(3.0) * b.C2;
  return b;
}

BoundReport bound_report(const DomainSpec& domain, const CoveringParams& p, double r, double C_theta) {
  const auto b = bound_coefficient(domain, p);
  BoundReport out;
  out.r = r;
  out.theta = p.theta;
  out.coefficient_finite = b.finite;
  out.coefficient_limit = b.limit;
  out.C_theta = C_theta;
  out.bound_value = b.finite * std::pow(r, 0.5 * domain.n) + C_theta;
  out.K = r >= 1 / (p.h0 * p.h0) ? rectangle_family(p, r).K : -1;
  out.residual_constant_policy = "C_theta = eigenvalues with |lambda| < 1/h0^2, counted empirically";
  return out;
}

std::string to_json(const BoundReport& b, int indent) {
  nlohmann::json j{{"r", b.r},
                   {"theta", b.theta},
                   {"coefficient_finite", b.coefficient_finite},
                   {"coefficient_limit", b.coefficient_limit},
                   {"C_theta", b.C_theta},
                   {"bound_value", b.bound_value},
                   {"K", b.K},
                   {"residual_constant_policy", b.residual_constant_policy}};
  return j.dump(indent);
}

std::string to_json(const CoverageReport& c, int indent) {
  nlohmann::json j{{"r", c.r},
                   {"theta", c.theta},
                   {"K", c.K},
                   {"samples", c.samples},
                   {"in_family", c.in_family},
                   {"in_residual", c.in_residual},
                   {"gaps", 0},
                   {"inner_radius", c.inner_radius},
                   {"residual_radius", c.residual_radius}};
  return j.dump(indent);
}

bool weyl_inequality_check(const Eigen::MatrixXcd& A, int N) {
  if (A.rows() != A.cols()) throw ConfigError("weyl_inequality_check: matrix must be square");
  if (N < 0 || N > A.rows()) throw ConfigError("weyl_inequality_check: N out of range");
  // At N = dim both sides are |det A|; double roundoff alone exceeds the slack
  // on badly scaled matrices.
  using X = long double;
  using MatX = Eigen::Matrix<std::complex<X>, Eigen::Dynamic, Eigen::Dynamic>;
  const MatX B = A.cast<std::complex<X>>();
  Eigen::Matrix<X, Eigen::Dynamic, 1> sv = Eigen::JacobiSVD<MatX>(B).singularValues();
  Eigen::Matrix<X, Eigen::Dynamic, 1> ev = Eigen::ComplexEigenSolver<MatX>(B, false).eigenvalues().cwiseAbs();
  std::sort(sv.begin(), sv.end());
  std::sort(ev.begin(), ev.end());
  X lhs = 1, rhs = 1;
  for (int i = 0; i < N; ++i) {
    lhs *= sv[i];
    rhs *= ev[i];
  }
  return lhs <= rhs * (1 + 1e-12);
}

long count_transfer(long M, const CoveringParams& p) {
  if (M < 0) throw ConfigError("count_transfer: negative count");
  const long double e = p.omega0.imag(), d = p.delta;
  const long double q = std::log1p(3 * d / (e - d)) / std::log1p(d / (e + d));
  return long(std::floor(static_cast<long double>(M) * q));
}

}  // namespace ite::weyl
