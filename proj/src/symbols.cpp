#include "ite/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace ite::symbols {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> s_grid(const ScanGrid& g) {
  const double lo = g.C0 > 0 ? std::max(g.s_min, g.C0 * g.C0) : g.s_min;
  if (!(lo > 0 && g.s_max > lo && g.per_decade > 0)) throw ConfigError("scan: bad s range");
  const double decades = std::log10(g.s_max / lo);
  const int n = int(std::ceil(decades * g.per_decade - 1e-9));
  std::vector<double> out;
  for (int i = 0; i <= n; ++i) out.push_back(lo * std::pow(10.0, std::min(decades, double(i) / g.per_decade)));
  return out;
}

// Value and large-s limit modulus at one grid point; value is NaN where the roots degenerate.
struct Sample {
  double value, limit;
};

Sample sample(ScanTarget which, double s, double m, Complex omega0, Complex z) {
  SymbolPoint p{s, m, omega0, z};
  const double e = omega0.imag();
  try {
    switch (which) {
      case ScanTarget::lambda2:
        return {std::abs(det_lambda2(p)), std::abs(det_lambda2_limit(m, omega0))};
      case ScanTarget::lambda1: {
        const double lim = std::abs(det_lambda1_limit(m, omega0, z));
        const Roots r = quartic_roots(p);
        if (simple_roots(r)) return {std::abs(det_lambda1_stable(p, r)), lim};
        if (std::abs(z - Complex(e * e)) < 1e-12 * (1 + e * e)) {
          p.z = e * e;
          return {std::abs(det_lambda2(p)), std::abs(det_lambda2_limit(m, omega0))};
        }
        return {kNaN, lim};
      }
      case ScanTarget::M:
        return {std::abs(det_M(p)) * s * s * s, std::abs(det_lambda1_limit(m, omega0, z)) / 64};
    }
  } catch (const DegenerateRoot&) {
  }
  return {kNaN, 0};
}

}  // namespace

const char* to_string(ScanTarget t) {
  switch (t) {
    case ScanTarget::lambda1:
      return "Lambda1";
    case ScanTarget::lambda2:
      return "Lambda2";
    case ScanTarget::M:
      return "M";
  }
  return "?";
}

std::vector<Complex> scan_window(const ScanParams& params, double a0, double ray_gap, int nz) {
  if (nz < 2) throw ConfigError("scan: need at least two z samples per axis");
  const double edge = std::pow(params.omega0.imag() + params.delta, 2);
  std::vector<Complex> out;
  for (int i = 0; i < nz; ++i) {
    const double x = -a0 + (edge + a0) * i / (nz - 1);
    for (int j = 0; j < nz; ++j) {
      const double y = a0 * (2 * j - (nz - 1)) / (nz - 1);
      const Complex z(x, y);
      if (std::abs(z) > a0) continue;
      const double dist = x >= edge ? std::abs(y) : std::abs(z - edge);
      if (dist < ray_gap) continue;
      out.push_back(z);
    }
  }
  return out;
}

EllipticityScan ellipticity_scan(ScanTarget which, const ScanParams& params, const ScanGrid& grid) {
  if (!(params.omega0.imag() > 0 && params.omega0.real() > 0)) throw ConfigError("scan: need Re, Im omega0 > 0");
  if (!(params.eta > 0 && params.eta < 1)) throw ConfigError("scan: eta must lie in (0, 1)");
  if (!(params.delta > 0)) throw BadDelta("scan: delta must be positive");
  EllipticityScan out;
  out.which = which;
  out.params = params;
  out.grid = grid;
  const double e = params.omega0.imag();
  const double edge = std::pow(e + params.delta, 2);
  out.a0 = grid.a0 > 0 ? grid.a0 : 4 * edge;
  out.ray_gap = grid.ray_gap > 0 ? grid.ray_gap : 0.05 * edge;
  const auto S = s_grid(grid);
  const auto Z = which == ScanTarget::lambda2 ? std::vector<Complex>{Complex(e * e)}
                                             : scan_window(params, out.a0, out.ray_gap, grid.nz);
  out.s_points = S.size();
  out.z_points = Z.size();
  out.interior_min = std::numeric_limits<double>::infinity();
  out.Cmin = std::numeric_limits<double>::infinity();
  out.C0 = 0;
  bool any_asserted = false, all_certified = true;

  for (double m : grid.m_values) {
    if (!(1 + m > 0) || m == 0) throw InvalidContrast("scan: need 1 + m > 0 and m != 0");
    ScanPerM pm;
    pm.m = m;
    pm.cond_ok = cond_check(m, params.omega0, params.eta);
    pm.asserted = m > 0 && pm.cond_ok;
    pm.limit_min = std::numeric_limits<double>::infinity();

    // ok[i]: every z at s = S[i] is regular and at least half its limit.
    std::vector<char> ok(S.size(), 1);
    std::vector<double> row_min(S.size(), std::numeric_limits<double>::infinity());
    std::vector<ScanPoint> row_arg(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) {
      for (const Complex& z : Z) {
        const Sample smp = sample(which, S[i], m, params.omega0, z);
        if (std::isnan(smp.value)) {
          ++pm.degenerate;
          ok[i] = 0;
          continue;
        }
        pm.limit_min = std::min(pm.limit_min, smp.limit);
        if (smp.value < 0.5 * smp.limit) ok[i] = 0;
        if (smp.value < row_min[i]) {
          row_min[i] = smp.value;
          row_arg[i] = {S[i], m, z, smp.value};
        }
      }
      const double q = std::abs(interior_symbol(m, params.omega0, S[i]));
      out.interior_min = std::min(out.interior_min, q);
    }
    for (double t : {params.omega0.real(), (1 + m) * params.omega0.real(), 0.0}) {
      out.interior_min = std::min(out.interior_min, std::abs(interior_symbol(m, params.omega0, t)));
    }

    std::size_t first = S.size();
    if (grid.C0 > 0) {
      const bool regular = std::all_of(row_min.begin(), row_min.end(), [](double v) { return std::isfinite(v); });
      first = regular ? 0 : S.size();
    } else {
      while (first > 0 && ok[first - 1]) --first;
    }
    pm.certified = first < S.size();
    if (pm.certified) {
      pm.C0 = std::sqrt(S[first]);
      pm.Cmin = std::numeric_limits<double>::infinity();
      for (std::size_t i = first; i < S.size(); ++i) {
        if (row_min[i] < pm.Cmin) {
          pm.Cmin = row_min[i];
          pm.argmin = row_arg[i];
        }
      }
    } else {
      pm.C0 = kNaN;
      pm.Cmin = kNaN;
    }
    if (pm.asserted) {
      any_asserted = true;
      if (pm.certified && !(pm.Cmin > 0)) {
        throw ScanFailed("ellipticity_scan: nonpositive minimum for m = " + std::to_string(m));
      }
      all_certified = all_certified && pm.certified;
      if (pm.certified) {
        out.C0 = std::max(out.C0, pm.C0);
        if (pm.Cmin < out.Cmin) {
          out.Cmin = pm.Cmin;
          out.argmin = pm.argmin;
        }
      }
    }
    out.per_m.push_back(pm);
  }
  out.certified = any_asserted && all_certified;
  if (!out.certified) {
    out.C0 = kNaN;
    out.Cmin = kNaN;
  }
  return out;
}

namespace {

nlohmann::json number(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

nlohmann::json point_json(const ScanPoint& p) {
  return {{"s", number(p.s)}, {"m", number(p.m)}, {"z", {number(p.z.real()), number(p.z.imag())}},
          {"value", number(p.value)}};
}

}  // namespace

std::string to_json(const EllipticityScan& scan, int indent) {
  nlohmann::json j;
  j["which"] = to_string(scan.which);
  j["params"] = {{"omega0", {scan.params.omega0.real(), scan.params.omega0.imag()}},
                 {"eta", scan.params.eta},
                 {"delta", scan.params.delta}};
  j["grid"] = {{"C0_fixed", scan.grid.C0},
               {"s_min", scan.grid.s_min},         {"s_max", scan.grid.s_max},
               {"per_decade", scan.grid.per_decade}, {"nz", scan.grid.nz},
               {"m_values", scan.grid.m_values},   {"a0", scan.a0},
               {"ray_gap", scan.ray_gap},          {"s_points", scan.s_points},
               {"z_points", scan.z_points}};
  j["certified"] = scan.certified;
  j["C0"] = number(scan.C0);
  j["Cmin"] = number(scan.Cmin);
  j["argmin"] = point_json(scan.argmin);
  j["interior_min"] = number(scan.interior_min);
  j["per_m"] = nlohmann::json::array();
  for (const auto& pm : scan.per_m) {
    j["per_m"].push_back({{"m", pm.m},
                          {"cond_ok", pm.cond_ok},
                          {"asserted", pm.asserted},
                          {"certified", pm.certified},
                          {"C0", number(pm.C0)},
                          {"Cmin", number(pm.Cmin)},
                          {"argmin", point_json(pm.argmin)},
                          {"limit_min", number(pm.limit_min)},
                          {"degenerate_points", pm.degenerate}});
  }
  return j.dump(indent);
}

}  // namespace ite::symbols
