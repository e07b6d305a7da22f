#include "ite/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <sstream>

#include "ite/errors.hpp"
#include "ite/waves.hpp"

namespace ite::spectrum {

namespace {

// Cubic Hermite piece on [x0, x1]: value, first, second and third derivative at t in [x0, x1].
std::array<double, 4> hermite(double x0, double x1, double f0, double f1, double d0, double d1, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  // f = f0 + d0 h t + c2 t^2 + c3 t^3
  const double c2 = 3 * (f1 - f0) - h * (2 * d0 + d1);
  const double c3 = 2 * (f0 - f1) + h * (d0 + d1);
  return {f0 + t * (d0 * h + t * (c2 + t * c3)), (d0 * h + t * (2 * c2 + 3 * t * c3)) / h,
          (2 * c2 + 6 * t * c3) / (h * h), 6 * c3 / (h * h * h)};
}

std::array<double, 4> profile_eval(const Contrast& c, double r) {
  if (c.kind == Contrast::Kind::constant) return {c.value, 0, 0, 0};
  const auto& x = c.rho;
  r = std::clamp(r, x.front(), x.back());
  std::size_t i = std::upper_bound(x.begin(), x.end(), r) - x.begin();
  i = std::clamp<std::size_t>(i, 1, x.size() - 1);
  return hermite(x[i - 1], x[i], c.m[i - 1], c.m[i], c.dm[i - 1], c.dm[i], r);
}

using Columns = RadialShooter::Columns;

}  // namespace

ScaledValue determinant(const Columns& c) { return c.du * c.v - c.u * c.dv; }

// Hadamard-normalized determinant: d / (|(u, u'/s)| |(v, v'/s)| s).
ScaledValue normalized(const Columns& c, double s) {
  auto norm = [s](const ScaledValue& a, const ScaledValue& b) {
    const ScaledValue bs = b * Complex(1.0 / s);
    const double top = std::max(a.log_abs(), bs.log_abs());
    const double ra = a.is_zero() ? 0 : std::exp(a.log_abs() - top);
    const double rb = bs.is_zero() ? 0 : std::exp(bs.log_abs() - top);
    return ScaledValue(Complex(std::hypot(ra, rb)), top);
  };
  const ScaledValue d = determinant(c);
  return d / (norm(c.u, c.du) * norm(c.v, c.dv) * Complex(s));
}

namespace {

Complex index_root(const Contrast& c) { return std::sqrt(Complex(1.0 + c.at(0.0))); }

Columns closed_columns(const ModeProblem& mode, Complex k) {
  const Complex kap = std::sqrt(1.0 + mode.contrast.value) * k;
  waves::WaveValue a, b;
  switch (mode.n) {
    case 1:
      a = waves::parity_wave(mode.l % 2 == 1, k);
      b = waves::parity_wave(mode.l % 2 == 1, kap);
      break;
    case 2:
      a = waves::bessel_J(mode.l, k);
      b = waves::bessel_J(mode.l, kap);
      break;
    case 3:
      a = waves::spherical_j(mode.l, k);
      b = waves::spherical_j(mode.l, kap);
      break;
    default:
      throw Error("char_det: dimension must be 1, 2 or 3");
  }
  return {a.value, a.derivative * k, b.value, b.derivative * kap};
}

void check_mode(const ModeProblem& mode) {
  if (mode.n < 1 || mode.n > 3) throw Error("mode: dimension must be 1, 2 or 3");
  if (mode.l < 0 || (mode.n == 1 && mode.l > 1)) throw Error("mode: invalid angular index");
}

// Leading coefficient a of the regular solution w(rho) ~ a (k rho)^nu of the
// constant-index equation, matching the closed-form normalization.
double leading_coefficient(const ModeProblem& mode) {
  const int l = mode.l;
  if (mode.n == 1) return 1.0;
  double a = 1;
  if (mode.n == 2) {
    for (int i = 1; i <= l; ++i) a /= 2.0 * i;
  } else {
    for (int i = 1; i <= l; ++i) a /= 2.0 * i + 1;
  }
  return a;
}

}  // namespace

Contrast Contrast::constant(double m) {
  Contrast c;
  c.kind = Kind::constant;
  c.value = m;
  return c;
}

Contrast Contrast::radial(const std::function<double(double)>& m, const std::function<double(double)>& dm,
                          int samples) {
  if (samples < 2) throw InvalidContrast("radial contrast: need at least two samples");
  Contrast c;
  c.kind = Kind::radial;
  for (int i = 0; i < samples; ++i) {
    const double r = double(i) / (samples - 1);
    c.rho.push_back(r);
    c.m.push_back(m(r));
    c.dm.push_back(dm(r));
  }
  return c;
}

Contrast Contrast::polynomial(const std::vector<double>& coeffs, int samples) {
  auto p = [coeffs](double r) {
    double s = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) s = s * r + *it;
    return s;
  };
  auto dp = [coeffs](double r) {
    double s = 0;
    for (std::size_t i = coeffs.size(); i-- > 1;) s = s * r + double(i) * coeffs[i];
    return s;
  };
  return radial(p, dp, samples);
}

double Contrast::at(double r) const { return profile_eval(*this, r)[0]; }
double Contrast::derivative_at(double r) const { return profile_eval(*this, r)[1]; }

double Contrast::min_index() const {
  if (kind == Kind::constant) return 1 + value;
  double lo = 1 + at(0.0);
  for (int i = 0; i <= 4000; ++i) lo = std::min(lo, 1 + at(i / 4000.0));
  return lo;
}

double Contrast::max_index() const {
  if (kind == Kind::constant) return 1 + value;
  double hi = 1 + at(0.0);
  for (int i = 0; i <= 4000; ++i) hi = std::max(hi, 1 + at(i / 4000.0));
  return hi;
}

void validate(const Contrast& c) {
  if (c.kind == Contrast::Kind::radial) {
    if (c.rho.size() < 2 || c.rho.size() != c.m.size() || c.rho.size() != c.dm.size() || c.rho.front() != 0.0 ||
        c.rho.back() != 1.0) {
      throw InvalidContrast("contrast: radial table must cover [0,1] with values and derivatives");
    }
  }
  for (double v : {c.value, c.at(0.0), c.at(1.0)}) {
    if (!std::isfinite(v)) throw InvalidContrast("contrast: non-finite value");
  }
  if (!(c.min_index() > 0)) throw InvalidContrast("contrast: 1 + m must stay positive");
  if (c.boundary() == 0) throw InvalidContrast("contrast: m must not vanish on the boundary");
}

ScaledValue char_det_k(const ModeProblem& mode, Complex k, Check check) {
  check_mode(mode);
  if (check == Check::validate) validate(mode.contrast);
  if (mode.contrast.kind != Contrast::Kind::constant) {
    throw InvalidContrast("char_det: closed form needs constant contrast (use radial_shoot)");
  }
  if (k == Complex(0)) throw OutOfRange("char_det: lambda must be nonzero");
  return determinant(closed_columns(mode, k));
}

ScaledValue char_det(const ModeProblem& mode, Complex lambda, Check check) {
  return char_det_k(mode, std::sqrt(lambda), check);
}

RadialShooter::RadialShooter(const ModeProblem& mode, double lambda_max, const ShootOptions& opts)
    : mode_(mode), opts_(opts) {
  check_mode(mode);
  validate(mode.contrast);
  nu_ = mode.l;
  centrifugal_ = mode.n == 1 ? 0.0 : double(mode.l) * (mode.l + mode.n - 2);
  for (int eq = 0; eq < 2; ++eq) {
    if (eq == 0) {
      taylor_[eq] = {1.0, 0.0, 0.0, 0.0};
    } else {
      const auto p = profile_eval(mode.contrast, 0.0);
      taylor_[eq] = {1.0 + p[0], p[1], p[2] / 2, p[3] / 6};
    }
  }
  const double lm = std::max(lambda_max, 1.0);
  std::vector<double> pts;
  for (int eq = 0; eq < 2; ++eq) {
    for (Complex lam : {Complex(lm, 0), Complex(0, lm), Complex(-lm, 0)}) plan(lam, eq == 1, pts);
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> mesh;
  for (double p : pts) {
    if (mesh.empty() || p - mesh.back() > 1e-12) mesh.push_back(p);
  }
  mesh.back() = 1.0;
  const int sub = std::max(1, opts_.subdivide);
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    for (int j = 0; j < sub; ++j) mesh_.push_back(mesh[i] + (mesh[i + 1] - mesh[i]) * j / sub);
  }
  mesh_.push_back(1.0);
}

double RadialShooter::index(double rho, bool second) const {
  return second ? 1.0 + mode_.contrast.at(rho) : 1.0;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

using State = std::array<Complex, 2>;

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (const auto& [c, k] : terms) {
    out[0] += h * c * (*k)[0];
    out[1] += h * c * (*k)[1];
  }
  return out;
}

struct Stepper {
  std::function<State(double, const State&)> rhs;

  // One DOPRI5 step; returns the 5th-order solution and writes the error estimate.
  State step(double x, const State& y, double h, State* err) const {
    const State k1 = rhs(x, y);
    const State k2 = rhs(x + c2 * h, axpy(y, h, {{a21, &k1}}));
    const State k3 = rhs(x + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const State k4 = rhs(x + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = rhs(x + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 = rhs(x + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State y5 = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    if (err) {
      const State k7 = rhs(x + h, y5);
      *err = axpy(State{0, 0}, h, {{e1, &k1}, {e3, &k3}, {e4, &k4}, {e5, &k5}, {e6, &k6}, {e7, &k7}});
    }
    return y5;
  }
};

}  // namespace

// Regular solution at rho0 from the Frobenius series with the index expanded
// as c0 + c1 rho + c2 rho^2 + c3 rho^3; state is (w, w') / rho0^nu.
static State frobenius_start(int nu, int n, const std::vector<double>& c, Complex lambda, double rho0) {
  std::vector<Complex> a{1.0};
  Complex w = 1, dw = double(nu) / rho0;
  double pw = 1;
  for (int j = 1; j < 400; ++j) {
    Complex s = 0;
    for (int i = 0; i <= j - 2 && i < int(c.size()); ++i) s += c[i] * a[j - 2 - i];
    const double den = double(j) * (2.0 * nu + j + n - 2);
    const Complex aj = den == 0 ? Complex(0) : -lambda * s / den;
    a.push_back(aj);
    pw *= rho0;
    w += aj * pw;
    dw += aj * double(nu + j) * pw / rho0;
    if (j > 4 && std::abs(aj) * pw < 1e-18 * std::abs(w) && std::abs(a[j - 1]) * pw < 1e-18 * std::abs(w)) break;
  }
  return {w, dw};
}

void RadialShooter::plan(Complex lambda, bool second, std::vector<double>& out) const {
  const double cmax = second ? mode_.contrast.max_index() : 1.0;
  const double klocal = std::sqrt(std::abs(lambda) * cmax);
  Stepper st{[&](double x, const State& y) -> State {
    const Complex q = centrifugal_ / (x * x) - lambda * index(x, second);
    return {y[1], -double(mode_.n - 1) / x * y[1] + q * y[0]};
  }};
  double x = opts_.rho0;
  State y = frobenius_start(nu_, mode_.n, taylor_[second ? 1 : 0], lambda, x);
  double h = std::min({0.01, 0.1 / (klocal + 1), x});
  out.push_back(x);
  long steps = 0;
  while (x < 1.0) {
    if (++steps > opts_.max_steps) throw StiffFailure("radial_shoot: step budget exhausted");
    h = std::min(h, 1.0 - x);
    State err;
    const State yn = st.step(x, y, h, &err);
    const double s = klocal + (nu_ + 1) / x;
    const double scale = std::max({std::abs(y[0]) * s, std::abs(y[1]), std::abs(yn[0]) * s, std::abs(yn[1])});
    const double e = std::max(std::abs(err[0]) * s, std::abs(err[1])) / (opts_.rtol * scale + 1e-300);
    if (e <= 1.0) {
      x += h;
      y = yn;
      const double m = std::max(std::abs(y[0]), std::abs(y[1]));
      if (m > 1e100) {
        y[0] /= m;
        y[1] /= m;
      }
      out.push_back(x);
    }
    const double fac = e == 0 ? 5.0 : std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
    h *= fac;
    if (h < 1e-14) throw StiffFailure("radial_shoot: step size underflow");
  }
}

RadialShooter::Solution RadialShooter::integrate(Complex lambda, bool second) const {
  Stepper st{[&](double x, const State& y) -> State {
    const Complex q = centrifugal_ / (x * x) - lambda * index(x, second);
    return {y[1], -double(mode_.n - 1) / x * y[1] + q * y[0]};
  }};
  State y = frobenius_start(nu_, mode_.n, taylor_[second ? 1 : 0], lambda, mesh_.front());
  double ls = nu_ * std::log(mesh_.front());
  for (std::size_t i = 0; i + 1 < mesh_.size(); ++i) {
    y = st.step(mesh_[i], y, mesh_[i + 1] - mesh_[i], nullptr);
    const double m = std::max(std::abs(y[0]), std::abs(y[1]));
    if (m > 1e100 || (m < 1e-100 && m > 0)) {
      y[0] /= m;
      y[1] /= m;
      ls += std::log(m);
    }
  }
  if (!std::isfinite(y[0].real()) || !std::isfinite(y[1].real())) {
    throw StiffFailure("radial_shoot: non-finite solution");
  }
  return {ScaledValue(y[0], ls), ScaledValue(y[1], ls)};
}

RadialShooter::Columns RadialShooter::columns(Complex lambda) const {
  if (lambda == Complex(0)) throw OutOfRange("radial_shoot: lambda must be nonzero");
  const Solution u = integrate(lambda, false);
  const Solution v = integrate(lambda, true);
  // (a k^nu)(a kappa0^nu) = a^2 (1 + m(0))^(nu/2) lambda^nu, carried by u.
  const double a = leading_coefficient(mode_);
  const Complex root = index_root(mode_.contrast);
  ScaledValue norm(Complex(a * a) * std::pow(root, nu_));
  if (nu_ > 0) norm = norm * ScaledValue(std::polar(1.0, nu_ * std::arg(lambda)), nu_ * std::log(std::abs(lambda)));
  return {norm * u.w, norm * u.dw, v.w, v.dw};
}

ScaledValue RadialShooter::operator()(Complex lambda) const {
  const Columns c = columns(lambda);
  return c.du * c.v - c.u * c.dv;
}

ScaledValue RadialShooter::normalized(Complex lambda) const {
  const Columns c = columns(lambda);
  return spectrum::normalized({c.u, c.du, c.v, c.dv}, 1 + std::sqrt(std::abs(lambda) * mode_.contrast.max_index()));
}

ScaledValue radial_shoot(const ModeProblem& mode, Complex lambda, const ShootOptions& opts) {
  if (mode.contrast.kind != Contrast::Kind::radial) {
    throw InvalidContrast("radial_shoot: needs a radial contrast profile");
  }
  return RadialShooter(mode, std::abs(lambda), opts)(lambda);
}

kernel::AnalyticFn mode_function(const ModeProblem& mode, double lambda_max, const ShootOptions& opts) {
  check_mode(mode);
  validate(mode.contrast);
  if (mode.contrast.kind == Contrast::Kind::constant) {
    return [mode](Complex lambda) {
      const Complex k = std::sqrt(lambda);
      return normalized(closed_columns(mode, k), 1 + std::abs(k));
    };
  }
  auto shooter = std::make_shared<RadialShooter>(mode, lambda_max, opts);
  return [shooter](Complex lambda) { return shooter->normalized(lambda); };
}

int mode_multiplicity(int n, int l) {
  switch (n) {
    case 1:
      return 1;
    case 2:
      return l == 0 ? 1 : 2;
    case 3:
      return 2 * l + 1;
    default:
      throw Error("mode_multiplicity: dimension must be 1, 2 or 3");
  }
}

int census_box_count(const ModeProblem& mode, double r, double r_min, const kernel::CountOptions& opts) {
  if (!(r > r_min && r_min > 0)) throw Error("census_box_count: need 0 < r_min < r");
  const auto f = mode_function(mode, 1.5 * r);
  kernel::RefineOptions ro;
  ro.count = opts;
  ro.conjugate_symmetric = true;
  const int outer = kernel::count_nudged(f, kernel::Rect{-r, r, -r, r}, ro).count;
  const int inner = kernel::count_nudged(f, kernel::Rect{-r_min, r_min, -r_min, r_min}, ro).count;
  return outer - inner;
}

ModeCutoff certify_cutoff(int n, const Contrast& contrast, double r, const CutoffOptions& opts) {
  if (!(r > 0)) throw Error("certify_cutoff: r must be positive");
  validate(contrast);
  ModeCutoff out;
  out.r = r;
  if (n == 1) {
    for (int l = 0; l <= 1; ++l) out.counts.push_back(census_box_count({1, l, contrast}, r, opts.r_min, opts.count));
    out.L = 1;
    out.certified = true;
    return out;
  }
  int last_nonzero = -1;
  for (int l = 0; l <= opts.max_l; ++l) {
    const int c = census_box_count({n, l, contrast}, r, opts.r_min, opts.count);
    out.counts.push_back(c);
    if (c != 0) last_nonzero = l;
    const int L = std::max(last_nonzero, 0);
    if (l >= L + opts.margin) {
      out.L = L;
      out.certified = true;
      out.counts.resize(L + 1);
      return out;
    }
  }
  out.L = std::max(last_nonzero, 0);
  out.certified = false;
  return out;
}

}  // namespace ite::spectrum
