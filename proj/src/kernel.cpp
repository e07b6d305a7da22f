#include "ite/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "ite/errors.hpp"

namespace ite::kernel {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxStep = kPi / 2;
// Irrational offset for split positions so that cuts avoid lines of symmetry.
constexpr double kSplitOffset = 0.0318309886183791;

bool finite(const ScaledValue& v) {
  return std::isfinite(v.mantissa.real()) && std::isfinite(v.mantissa.imag()) &&
         std::isfinite(v.log_scale);
}

// Principal log(b / a).
Complex log_ratio(const ScaledValue& b, const ScaledValue& a) {
  return {std::log(std::abs(b.mantissa) / std::abs(a.mantissa)) + (b.log_scale - a.log_scale),
          std::arg(b.mantissa * std::conj(a.mantissa))};
}

/// Walks a rectangle boundary and accumulates the unwrapped phase of f.
class ContourWalker {
public:
  ContourWalker(const AnalyticFn& f, const CountOptions& opts) : f_(f), opts_(opts) {}

  ScaledValue eval(Complex z) {
    if (++evals_ > opts_.max_evaluations) {
      throw NonConvergent("winding_count: evaluation budget exhausted");
    }
    ScaledValue v = f_(z);
    if (!finite(v)) {
      std::ostringstream os;
      os << "winding_count: non-finite function value at " << z;
      throw NonConvergent(os.str());
    }
    if (v.is_zero()) throw ZeroOnBoundary("winding_count: exact zero on contour", z);
    const double la = v.log_abs();
    if (la < min_log_) {
      min_log_ = la;
      argmin_ = z;
    }
    max_log_ = std::max(max_log_, la);
    return v;
  }

  /// Phase change of f along the segment a -> b.
  ///
  /// Adaptive stepping with at most 1/initial_per_edge of the edge per step.
  /// A step is accepted when both of its halves turn the phase by less than
  /// pi/2 and the two halves agree on the local rate of log f, which catches
  /// a phase that wraps by a full turn between samples.
  double segment(Complex a, Complex b) {
    const double max_dt = 1.0 / std::max(2, opts_.initial_per_edge);
    const double min_dt = 1e-13;
    auto point = [&](double t) { return a + (b - a) * t; };

    double total = 0;
    double t = 0, dt = max_dt;
    ScaledValue v0 = eval(a);
    bool have_end = false;
    ScaledValue vend;
    while (t < 1) {
      const double t1 = std::min(1.0, t + dt);
      if (!have_end) vend = eval(point(t1));
      const ScaledValue vmid = eval(point(0.5 * (t + t1)));
      const Complex l1 = log_ratio(vmid, v0);
      const Complex l2 = log_ratio(vend, vmid);
      const bool ok = std::abs(l1.imag()) < kMaxStep && std::abs(l2.imag()) < kMaxStep &&
                      std::abs(l1.real()) < 2 && std::abs(l2.real()) < 2 &&
                      std::abs(l1 - l2) < 0.5;
      if (ok) {
        total += l1.imag() + l2.imag();
        t = t1;
        v0 = vend;
        have_end = false;
        dt = std::min(2 * dt, max_dt);
        continue;
      }
      dt = 0.5 * (t1 - t);
      if (dt < min_dt) {
        throw ZeroOnBoundary("winding_count: phase not resolvable on contour", point(t));
      }
      vend = vmid;
      have_end = true;
    }
    return total;
  }

  std::size_t evaluations() const { return evals_; }
  double min_log() const { return min_log_; }
  double max_log() const { return max_log_; }
  Complex argmin() const { return argmin_; }

private:
  const AnalyticFn& f_;
  CountOptions opts_;
  std::size_t evals_ = 0;
  double min_log_ = std::numeric_limits<double>::infinity();
  double max_log_ = -std::numeric_limits<double>::infinity();
  Complex argmin_{};
};

}  // namespace

AnalyticFn lift(std::function<Complex(Complex)> f) {
  return [f = std::move(f)](Complex z) { return ScaledValue(f(z)); };
}

void normalize_order(std::vector<Zero>& zeros) {
  std::sort(zeros.begin(), zeros.end(), [](const Zero& a, const Zero& b) {
    if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
    return a.location.imag() < b.location.imag();
  });
}

ZeroReport winding_count(const AnalyticFn& f, const Rect& region, const CountOptions& opts) {
  if (!region.valid()) throw Error("winding_count: degenerate rectangle");
  if (!(opts.tol > 0)) throw Error("winding_count: tol must be positive");

  ContourWalker walker(f, opts);
  const Complex c00{region.re_min, region.im_min};
  const Complex c10{region.re_max, region.im_min};
  const Complex c11{region.re_max, region.im_max};
  const Complex c01{region.re_min, region.im_max};
  double total = walker.segment(c00, c10);
  total += walker.segment(c10, c11);
  total += walker.segment(c11, c01);
  total += walker.segment(c01, c00);

  const double rel_log = walker.min_log() - walker.max_log();
  if (rel_log < std::log(opts.tol)) {
    throw ZeroOnBoundary("winding_count: |f| below threshold on contour", walker.argmin());
  }
  const double turns = total / (2 * kPi);
  const long long count = std::llround(turns);
  if (std::abs(turns - double(count)) > 1e-3) {
    throw NonConvergent("winding_count: phase did not close");
  }

  ZeroReport rep;
  rep.count = int(count);
  rep.boundary_min_modulus = std::exp(rel_log);
  rep.cells_used = 1;
  rep.region = region;
  return rep;
}

namespace {

class Refiner {
public:
  Refiner(const AnalyticFn& f, const RefineOptions& opts) : f_(f), o_(opts) {}

  int count(const Rect& r) {
    const ZeroReport rep = winding_count(f_, r, o_.count);
    ++cells_;
    min_mod_ = std::min(min_mod_, rep.boundary_min_modulus);
    return rep.count;
  }

  void process(const Rect& cell, int n, std::vector<Zero>& sink) {
    if (n == 0) return;
    if (n < 0) throw NonConvergent("refine_zeros: negative winding count (f not analytic?)");
    const bool sym = o_.conjugate_symmetric && cell.symmetric();
    const double scale = std::max(1.0, std::abs(cell.center()));

    if (n == 1) {
      if (auto z = polish(cell, 1, sym)) {
        sink.push_back({*z, 1});
        return;
      }
    }
    if (cell.diameter() <= (n > 1 ? o_.cluster_rel : o_.min_cell_rel) * scale) {
      sink.push_back({cluster_location(cell, n, sym), n});
      return;
    }

    try {
      if (sym) {
        split_symmetric(cell, n, sink);
      } else {
        split_general(cell, n, sink);
      }
    } catch (const Error&) {
      // Contours inside a rounding-noise ball of a multiple zero cannot be
      // resolved further; the enclosing cell is then the answer.
      if (cell.diameter() > 10 * o_.cluster_rel * scale) throw;
      sink.push_back({cluster_location(cell, n, sym), n});
    }
  }

  int cells() const { return cells_; }
  double min_mod() const { return min_mod_; }

private:
  double nudge(int attempt) const {
    if (attempt == 0) return 0.0;
    const double mag = o_.nudge_rel * std::pow(4.0, attempt - 1);
    return (attempt % 2 ? 1.0 : -1.0) * mag;
  }

  void split_general(const Rect& cell, int n, std::vector<Zero>& sink) {
    const bool along_re = cell.width() >= cell.height();
    for (int attempt = 0; attempt <= o_.max_nudges; ++attempt) {
      const double frac = 0.5 + kSplitOffset + nudge(attempt);
      Rect a = cell, b = cell;
      if (along_re) {
        const double x = cell.re_min + frac * cell.width();
        a.re_max = x;
        b.re_min = x;
      } else {
        const double y = cell.im_min + frac * cell.height();
        a.im_max = y;
        b.im_min = y;
      }
      int ca = 0, cb = 0;
      try {
        ca = count(a);
        cb = count(b);
      } catch (const ZeroOnBoundary&) {
        if (attempt == o_.max_nudges) throw;
        continue;
      }
      if (ca + cb != n) {
        if (attempt == o_.max_nudges) throw NonConvergent("refine_zeros: inconsistent sub-counts");
        continue;
      }
      process(a, ca, sink);
      process(b, cb, sink);
      return;
    }
  }

  // Cell symmetric about the real axis and f(conj z) = conj f(z): the lower
  // part mirrors the upper part and the middle band stays symmetric.
  void split_symmetric(const Rect& cell, int n, std::vector<Zero>& sink) {
    if (cell.width() > 4 * cell.height()) {
      for (int attempt = 0; attempt <= o_.max_nudges; ++attempt) {
        const double x = cell.re_min + (0.5 + kSplitOffset + nudge(attempt)) * cell.width();
        Rect a = cell, b = cell;
        a.re_max = x;
        b.re_min = x;
        int ca = 0, cb = 0;
        try {
          ca = count(a);
          cb = count(b);
        } catch (const ZeroOnBoundary&) {
          if (attempt == o_.max_nudges) throw;
          continue;
        }
        if (ca + cb != n) {
          if (attempt == o_.max_nudges) throw NonConvergent("refine_zeros: inconsistent sub-counts");
          continue;
        }
        process(a, ca, sink);
        process(b, cb, sink);
        return;
      }
      return;
    }
    for (int attempt = 0; attempt <= o_.max_nudges; ++attempt) {
      const double eta = cell.im_max * (0.5 + nudge(attempt));
      const Rect top{cell.re_min, cell.re_max, eta, cell.im_max};
      const Rect mid{cell.re_min, cell.re_max, -eta, eta};
      int ct = 0, cm = 0;
      try {
        ct = count(top);
        cm = count(mid);
      } catch (const ZeroOnBoundary&) {
        if (attempt == o_.max_nudges) throw;
        continue;
      }
      if (2 * ct + cm != n) {
        if (attempt == o_.max_nudges) throw NonConvergent("refine_zeros: inconsistent sub-counts");
        continue;
      }
      std::vector<Zero> upper;
      process(top, ct, upper);
      for (const Zero& z : upper) {
        sink.push_back(z);
        sink.push_back({std::conj(z.location), z.order});
      }
      process(mid, cm, sink);
      return;
    }
  }

  ScaledValue eval(Complex z) { return f_(z); }

  /// (log f)' from phase differences only: g' = d(arg f)/dy + i d(arg f)/dx.
  /// A positive real rescaling of f, analytic or not, drops out.
  std::optional<Complex> log_derivative(Complex z, const ScaledValue& fz, double h) {
    const ScaledValue fxp = eval(z + h), fxm = eval(z - h);
    const ScaledValue fyp = eval(z + Complex(0, h)), fym = eval(z - Complex(0, h));
    for (const ScaledValue* v : {&fxp, &fxm, &fyp, &fym}) {
      if (v->is_zero()) return std::nullopt;
    }
    const double ax = log_ratio(fxp, fz).imag() - log_ratio(fxm, fz).imag();
    const double ay = log_ratio(fyp, fz).imag() - log_ratio(fym, fz).imag();
    return Complex(ay, ax) / (2 * h);
  }

  /// Safeguarded Newton (step scaled by the order) confined to the cell.
  std::optional<Complex> polish(const Rect& cell, int order, bool real_axis) {
    Complex z = cell.center();
    if (real_axis) z = {z.real(), 0.0};
    const double scale = std::max(1.0, std::abs(z));
    const double floor_h = 1e-15 * scale;
    const double accept = (order > 1 ? o_.cluster_rel : 1e-10) * scale;
    double h = std::max(1e-3 * cell.diameter(), floor_h);
    ScaledValue fz = eval(z);
    if (fz.is_zero()) return z;
    bool converged = false;
    for (int it = 0; it < o_.max_newton; ++it) {
      const auto gp = log_derivative(z, fz, h);
      if (!gp || *gp == Complex(0)) break;
      Complex step = double(order) / *gp;
      if (real_axis) step = {step.real(), 0.0};
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      const double full = std::abs(step);

      bool decreased = false;
      Complex zn;
      ScaledValue fn;
      for (int half = 0; half < 40; ++half) {
        zn = z - step;
        fn = eval(zn);
        if (fn.is_zero() || fn.log_abs() < fz.log_abs()) {
          decreased = true;
          break;
        }
        step *= 0.5;
      }
      if (!decreased) {
        // Residual at the rounding floor.
        converged = full <= accept;
        break;
      }
      if (!cell.contains(zn)) return std::nullopt;
      z = zn;
      fz = fn;
      if (fz.is_zero() || std::abs(step) <= 4e-16 * scale) {
        converged = true;
        break;
      }
      h = std::max(0.1 * std::abs(step), floor_h);
    }
    if (!converged || !cell.strictly_contains(z)) return std::nullopt;
    if (real_axis) z = {z.real(), 0.0};
    return z;
  }

  Complex cluster_location(const Rect& cell, int n, bool sym) {
    Complex c = cell.center();
    if (sym) c = {c.real(), 0.0};
    if (auto z = polish(cell, n, sym)) return *z;
    return c;
  }

  const AnalyticFn& f_;
  RefineOptions o_;
  int cells_ = 0;
  double min_mod_ = 1.0;
};

// Zeros closer than the cluster radius are one multiple zero spread by rounding.
std::vector<Zero> merge_clusters(std::vector<Zero> zs, double cluster_rel) {
  normalize_order(zs);
  std::vector<bool> used(zs.size(), false);
  std::vector<Zero> out;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    std::vector<std::size_t> group{i};
    for (std::size_t g = 0; g < group.size(); ++g) {
      const Complex c = zs[group[g]].location;
      const double radius = cluster_rel * std::max(1.0, std::abs(c));
      for (std::size_t j = i + 1; j < zs.size(); ++j) {
        if (!used[j] && std::abs(zs[j].location - c) <= radius) {
          used[j] = true;
          group.push_back(j);
        }
      }
    }
    if (group.size() == 1) {
      out.push_back(zs[i]);
      continue;
    }
    Complex sum = 0;
    int order = 0;
    for (std::size_t j : group) {
      sum += double(zs[j].order) * zs[j].location;
      order += zs[j].order;
    }
    out.push_back({sum / double(order), order});
  }
  normalize_order(out);
  return out;
}

}  // namespace

ZeroReport count_nudged(const AnalyticFn& f, const Rect& region, const RefineOptions& opts) {
  if (!region.valid()) throw Error("count_nudged: degenerate rectangle");
  Rect used = region;
  for (int attempt = 0;; ++attempt) {
    try {
      ZeroReport rep = winding_count(f, used, opts.count);
      rep.region = used;
      return rep;
    } catch (const ZeroOnBoundary& e) {
      if (attempt >= opts.max_nudges) throw;
      const double grow = opts.nudge_rel * std::pow(4.0, attempt);
      const Complex w = e.where();
      const double dx = grow * region.width(), dy = grow * region.height();
      const double d_left = std::abs(w.real() - used.re_min), d_right = std::abs(w.real() - used.re_max);
      const double d_bot = std::abs(w.imag() - used.im_min), d_top = std::abs(w.imag() - used.im_max);
      const double dmin = std::min({d_left, d_right, d_bot, d_top});
      if (dmin == d_left) used.re_min -= dx;
      else if (dmin == d_right) used.re_max += dx;
      else if (dmin == d_bot) used.im_min -= dy;
      else used.im_max += dy;
      if (opts.conjugate_symmetric && region.symmetric()) {
        const double h = std::max(used.im_max, -used.im_min);
        used.im_min = -h;
        used.im_max = h;
      }
    }
  }
}

ZeroReport refine_zeros(const AnalyticFn& f, const Rect& region, int expected,
                        const RefineOptions& opts) {
  if (!region.valid()) throw Error("refine_zeros: degenerate rectangle");
  Refiner refiner(f, opts);

  // The query rectangle itself may carry a zero on its boundary.
  const ZeroReport outer = count_nudged(f, region, opts);
  const Rect used = outer.region;
  const int n = outer.count;
  if (n != expected) {
    std::ostringstream os;
    os << "refine_zeros: winding count " << n << " differs from expected " << expected;
    throw Error(os.str());
  }

  ZeroReport rep;
  refiner.process(used, n, rep.zeros);
  rep.zeros = merge_clusters(std::move(rep.zeros), opts.cluster_rel);
  int total = 0;
  for (const Zero& z : rep.zeros) total += z.order;
  if (total != n) throw NonConvergent("refine_zeros: order sum differs from count");
  rep.count = n;
  rep.boundary_min_modulus = std::min(outer.boundary_min_modulus, refiner.min_mod());
  rep.cells_used = refiner.cells() + 1;
  rep.region = used;
  return rep;
}

bool in_sector(Complex z, double theta, double r_max, double r_min) {
  const double r = std::abs(z);
  return r >= r_min && r <= r_max && std::abs(std::arg(z)) <= theta;
}

ZeroReport count_in_sector(const AnalyticFn& f, double theta, double r_max, double r_min,
                           const SectorOptions& opts) {
  if (!(theta > 0 && theta < kPi / 2)) throw Error("count_in_sector: theta must lie in (0, pi/2)");
  if (!(r_min > 0)) throw Error("count_in_sector: r_min must be positive");
  ZeroReport rep;
  if (!(r_min < r_max)) return rep;  // empty sector

  // Boxes [x_k, x_{k+1}] x [-H_k, H_k]; sector points with Re z <= x_{k+1}
  // have |Im z| <= x_{k+1} tan(theta), so the union covers the sector.
  const double pad = 1e-3;
  std::vector<double> xs{r_min * std::cos(theta) * (1 - pad)};
  while (xs.back() < r_max * (1 + pad)) xs.push_back(std::min(xs.back() * opts.ratio, r_max * (1 + pad)));
  // Avoid a vanishing last box.
  if (xs.size() > 2 && xs.back() - xs[xs.size() - 2] < 0.1 * (xs[xs.size() - 2] - xs[xs.size() - 3])) {
    xs.erase(xs.end() - 2);
  }
  auto half_height = [&](double right) {
    const double sector = std::min(right * std::tan(theta), r_max * std::sin(theta));
    return (1 + pad) * std::max(sector, opts.min_half_height_rel * right);
  };

  const RefineOptions& ro = opts.refine;
  Refiner counter(f, ro);
  std::vector<double> heights(xs.size() - 1);
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) heights[k] = half_height(xs[k + 1]);
  std::vector<int> counts(xs.size() - 1, 0);

  std::vector<int> attempts(xs.size(), 0);
  std::size_t k = 0;
  while (k + 1 < xs.size()) {
    const Rect box{xs[k], xs[k + 1], -heights[k], heights[k]};
    try {
      counts[k] = counter.count(box);
      ++k;
    } catch (const ZeroOnBoundary& e) {
      const Complex w = e.where();
      const double wdt = box.width();
      const double d_left = std::abs(w.real() - box.re_min);
      const double d_right = std::abs(w.real() - box.re_max);
      const double d_hor = heights[k] - std::abs(w.imag());
      if (d_hor <= std::min(d_left, d_right)) {
        if (++attempts[k] > ro.max_nudges) throw;
        heights[k] *= 1 + ro.nudge_rel * std::pow(4.0, attempts[k]);
      } else if (d_right <= d_left) {
        if (++attempts[k + 1] > ro.max_nudges) throw;
        const double shift = ro.nudge_rel * std::pow(4.0, attempts[k + 1]) * wdt;
        const bool last = k + 2 == xs.size();
        xs[k + 1] += (last || attempts[k + 1] % 2 ? 1.0 : -1.0) * shift;
        heights[k] = std::max(heights[k], half_height(xs[k + 1]));
      } else if (k == 0) {
        // Only outward, so the union still covers the sector.
        if (++attempts[0] > ro.max_nudges) throw;
        xs[0] -= ro.nudge_rel * std::pow(4.0, attempts[0]) * wdt;
      } else {
        // Zero on the shared left edge: move it and recount the previous box.
        if (++attempts[k] > ro.max_nudges) throw;
        const double shift = ro.nudge_rel * std::pow(4.0, attempts[k]) * wdt;
        xs[k] += (attempts[k] % 2 ? 1.0 : -1.0) * shift;
        heights[k - 1] = std::max(heights[k - 1], half_height(xs[k]));
        --k;
      }
    }
  }

  std::vector<Zero> all;
  for (std::size_t b = 0; b + 1 < xs.size(); ++b) {
    if (counts[b] == 0) continue;
    const Rect box{xs[b], xs[b + 1], -heights[b], heights[b]};
    std::vector<Zero> found;
    counter.process(box, counts[b], found);
    found = merge_clusters(std::move(found), ro.cluster_rel);
    all.insert(all.end(), found.begin(), found.end());
  }
  for (const Zero& z : all) {
    if (in_sector(z.location, theta, r_max, r_min)) {
      rep.zeros.push_back(z);
      rep.count += z.order;
    }
  }
  normalize_order(rep.zeros);
  rep.boundary_min_modulus = counter.min_mod();
  rep.cells_used = counter.cells();
  rep.region = Rect{xs.front(), xs.back(), -*std::max_element(heights.begin(), heights.end()),
                    *std::max_element(heights.begin(), heights.end())};
  return rep;
}

}  // namespace ite::kernel
