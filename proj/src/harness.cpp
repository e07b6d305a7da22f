#include "ite/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <exception>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace ite::harness {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// RFC 4180: quote a field holding a comma, quote or line break; double inner quotes.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  return out + "\r\n";
}

}  // namespace

spectrum::Contrast RunConfig::make_contrast() const {
  if (contrast.empty()) throw ConfigError("config: contrast has no coefficients");
  return contrast.size() == 1 ? spectrum::Contrast::constant(contrast[0]) : spectrum::Contrast::polynomial(contrast);
}

void validate(const RunConfig& c) {
  if (c.n < 1 || c.n > 3) throw ConfigError("config: n must be 1, 2 or 3");
  const auto contrast = c.make_contrast();
  spectrum::validate(contrast);
  if (!(c.omega0_im > 0 && c.omega0_im < 1)) throw ConfigError("config: omega0_im must lie in (0, 1)");
  if (!(c.eta > 0 && c.eta < 1)) throw ConfigError("config: eta must lie in (0, 1)");
  if (!(c.effective_delta() < c.omega0_im)) throw ConfigError("config: delta must be below omega0_im");
  if (!(c.h0 > 0)) throw ConfigError("config: h0 must be positive");
  if (!(c.r_min > 0)) throw ConfigError("config: r_min must be positive");
  if (c.r_grid.empty()) throw ConfigError("config: r_grid is empty");
  for (std::size_t i = 0; i < c.r_grid.size(); ++i) {
    if (!(c.r_grid[i] > 0)) throw ConfigError("config: r_grid entries must be positive");
    if (i && !(c.r_grid[i] > c.r_grid[i - 1])) throw ConfigError("config: r_grid must be strictly increasing");
  }
  if (c.theta && !(*c.theta > 0 && *c.theta < std::acos(0.0))) throw ConfigError("config: theta must lie in (0, pi/2)");
  if (c.threads < 1) throw ConfigError("config: threads must be at least 1");
  const double mb = contrast.boundary();
  if (!symbols::cond_check(mb, c.omega0(), c.eta)) {
    throw ConfigError("config: boundary contrast " + fmt(mb) + " fails the ellipticity condition for omega0_im = " +
                      fmt(c.omega0_im) + ", eta = " + fmt(c.eta));
  }
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  static const std::vector<std::string> known{"n",  "contrast", "omega0_im", "delta",  "eta",    "h0",
                                              "r_grid", "theta", "r_min",     "seed",   "threads", "output"};
  for (const auto& [k, v] : j.items()) {
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError("config: unknown key '" + k + "'");
  }
  RunConfig c;
  try {
    c.n = j.value("n", c.n);
    if (j.contains("contrast")) {
      const json& m = j["contrast"];
      c.contrast = m.is_number() ? std::vector<double>{m.get<double>()} : m.get<std::vector<double>>();
    }
    c.omega0_im = j.value("omega0_im", c.omega0_im);
    c.delta = j.value("delta", c.delta);
    c.eta = j.value("eta", c.eta);
    c.h0 = j.value("h0", c.h0);
    if (j.contains("r_grid")) c.r_grid = j["r_grid"].get<std::vector<double>>();
    if (j.contains("theta")) {
      const json& t = j["theta"];
      if (t.is_string()) {
        if (t.get<std::string>() != "derived") throw ConfigError("config: theta must be a number or \"derived\"");
      } else {
        c.theta = t.get<double>();
      }
    }
    c.r_min = j.value("r_min", c.r_min);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
    if (j.contains("output")) {
      c.json_path = j["output"].value("json", "");
      c.csv_path = j["output"].value("csv", "");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

std::string to_json(const RunConfig& c, int indent) {
  json j{{"n", c.n},
         {"contrast", c.contrast},
         {"omega0_im", c.omega0_im},
         {"delta", c.effective_delta()},
         {"eta", c.eta},
         {"h0", c.h0},
         {"r_grid", c.r_grid},
         {"r_min", c.r_min},
         {"seed", c.seed},
         {"threads", c.threads}};
  j["theta"] = c.theta ? json(*c.theta) : json("derived");
  return j.dump(indent);
}

CountReport census(const RunConfig& cfg) {
  validate(cfg);
  const auto params = weyl::covering_params(cfg.effective_delta(), cfg.omega0(), cfg.h0);
  const auto contrast = cfg.make_contrast();
  const auto domain = weyl::make_domain(cfg.n, contrast);
  const auto coef = weyl::bound_coefficient(domain, params);
  CountReport rep;
  rep.n = cfg.n;
  rep.C2 = coef.C2;
  rep.coefficient_finite = coef.finite;
  rep.coefficient_limit = coef.limit;
  rep.theta = cfg.theta.value_or(params.theta);
  const double r_max = cfg.r_grid.back();
  const double inner = 1 / (cfg.h0 * cfg.h0);

  // Zeros of every contributing mode in the sector of the largest radius; rows filter by |lambda|.
  spectrum::CutoffOptions co;
  co.r_min = cfg.r_min;
  std::vector<std::vector<kernel::Zero>> zeros;
  if (r_max > cfg.r_min) {
    const auto cut = spectrum::certify_cutoff(cfg.n, contrast, r_max, co);
    const int L = cut.L;
    zeros.resize(L + 1);
    std::vector<std::exception_ptr> errors(L + 1);
    std::atomic<int> next{0};
    kernel::SectorOptions so;
    so.refine.conjugate_symmetric = true;
    auto work = [&] {
      for (int l = next++; l <= L; l = next++) {
        if (cut.counts.size() > std::size_t(l) && cut.counts[l] == 0) continue;
        try {
          const spectrum::ModeProblem mode{cfg.n, l, contrast};
          zeros[l] = kernel::count_in_sector(spectrum::mode_function(mode, r_max), rep.theta, r_max, cfg.r_min, so)
                         .zeros;
        } catch (const Error& e) {
          errors[l] = std::make_exception_ptr(
              Error("census: mode l = " + std::to_string(l) + ", sector theta = " + fmt(rep.theta) +
                    ", |lambda| in [" + fmt(cfg.r_min) + ", " + fmt(r_max) + "]: " + e.what()));
        }
      }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < cfg.threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  for (double r : cfg.r_grid) {
    CountRow row;
    row.r = r;
    row.theta = rep.theta;
    if (r > cfg.r_min) {
      const auto cut = spectrum::certify_cutoff(cfg.n, contrast, r, co);
      row.L = cut.L;
      row.certified = cut.certified;
      for (std::size_t l = 0; l < zeros.size(); ++l) {
        const long mult = spectrum::mode_multiplicity(cfg.n, int(l));
        bool used = false;
        for (const auto& z : zeros[l]) {
          if (std::abs(z.location) > r) continue;
          used = true;
          row.N_empirical += mult * z.order;
          if (z.location.imag() == 0) row.N_real += mult * z.order;
          if (std::abs(z.location) < inner) row.C_empirical += mult * z.order;
        }
        if (used) row.modes_used = int(l) + 1;
      }
    } else {
      row.certified = true;
    }
    const double scale = std::pow(r, 0.5 * cfg.n);
    row.N_bound_finite = coef.finite * scale + double(row.C_empirical);
    row.N_bound_limit = coef.limit * scale + double(row.C_empirical);
    row.leading_ratio = double(row.N_empirical) / scale;
    row.normalized_ratio = row.leading_ratio / coef.C2;
    row.bound_holds = double(row.N_empirical) <= row.N_bound_finite;
    rep.rows.push_back(row);
  }
  rep.r_dominance = kNaN;
  for (std::size_t i = rep.rows.size(); i-- > 0;) {
    if (!rep.rows[i].bound_holds) break;
    rep.r_dominance = rep.rows[i].r;
  }
  return rep;
}

std::string to_json(const CountReport& r, int indent) {
  json j{{"n", r.n},
         {"C2", r.C2},
         {"coefficient_finite", r.coefficient_finite},
         {"coefficient_limit", r.coefficient_limit},
         {"theta", r.theta},
         {"r_dominance", number(r.r_dominance)},
         {"residual_constant_policy", "C_empirical = eigenvalues with |lambda| < 1/h0^2, counted"}};
  j["rows"] = json::array();
  for (const auto& w : r.rows) {
    j["rows"].push_back({{"r", w.r},
                         {"theta", w.theta},
                         {"N_empirical", w.N_empirical},
                         {"N_real", w.N_real},
                         {"C_empirical", w.C_empirical},
                         {"N_bound_finite", w.N_bound_finite},
                         {"N_bound_limit", w.N_bound_limit},
                         {"leading_ratio", w.leading_ratio},
                         {"normalized_ratio", w.normalized_ratio},
                         {"L", w.L},
                         {"modes_used", w.modes_used},
                         {"certified", w.certified},
                         {"bound_holds", w.bound_holds}});
  }
  return j.dump(indent);
}

std::string plot_csv(const CountReport& report) {
  if (report.rows.empty()) throw ConfigError("plot data: report has no rows");
  std::string out = csv_row({"r", "N_empirical", "N_bound_finite", "N_bound_limit", "leading_ratio"});
  for (const auto& w : report.rows) {
    out += csv_row({fmt(w.r), std::to_string(w.N_empirical), fmt(w.N_bound_finite), fmt(w.N_bound_limit),
                    fmt(w.leading_ratio)});
  }
  return out;
}

void emit_plotdata(const CountReport& report, const std::string& path) {
  const std::string text = plot_csv(report);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("plot data: cannot open " + path + ": " + std::strerror(errno));
  f << text;
  f.close();
  if (!f) throw Error("plot data: write to " + path + " failed: " + std::strerror(errno));
}

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.asserted || c.passed; });
}

namespace {

struct Suite {
  SuiteReport rep;
  void add(std::string name, std::string topic, double value, double threshold, bool below, std::string detail = {}) {
    CheckResult c;
    c.name = std::move(name);
    c.topic = std::move(topic);
    c.value = value;
    c.threshold = threshold;
    c.passed = below ? value <= threshold : value >= threshold;
    c.detail = std::move(detail);
    rep.checks.push_back(std::move(c));
  }
};

std::vector<symbols::SymbolPoint> symbol_sample(const VerifyConfig& v) {
  std::mt19937_64 rng(v.seed);
  std::uniform_real_distribution<double> us(0.1, 50), ur(0, 1), ua(-3.14159, 3.14159);
  const double e = v.omega0.imag();
  const double edge = (e + v.delta) * (e + v.delta);
  std::vector<symbols::SymbolPoint> out;
  for (int tries = 0; int(out.size()) < v.samples && tries < 50 * v.samples; ++tries) {
    const Complex z = std::polar(4 * edge * std::sqrt(ur(rng)), ua(rng));
    if (std::abs(z.imag()) < 1e-3 * edge && z.real() >= edge) continue;
    const symbols::SymbolPoint p{us(rng), v.m, v.omega0, z};
    try {
      if (symbols::simple_roots(symbols::quartic_roots(p))) out.push_back(p);
    } catch (const DegenerateRoot&) {
    }
  }
  return out;
}

}  // namespace

SuiteReport verify_suite(const VerifyConfig& v) {
  if (v.m == 0) throw InvalidContrast("verify: contrast m = 0 vanishes on the boundary; the problem requires m != 0 there");
  if (!(1 + v.m > 0)) throw InvalidContrast("verify: the index 1 + m must be positive");
  if (!(v.samples >= 1)) throw ConfigError("verify: samples must be positive");
  using namespace symbols;
  Suite s;
  const double e = v.omega0.imag();

  s.add("ellipticity condition", "symbols/condition", cond_check(v.m, v.omega0, v.eta) ? 1 : 0, 1, false,
        "(2+3m+m^2) Im omega0 <= eta |m(m+1)| Re omega0");

  const auto pts = symbol_sample(v);
  double res = 0, fact = 0, r12 = 0, r34 = 0, dM = 0, sep = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) {
    const Roots r = quartic_roots(p, v.branch);
    res = std::max(res, root_residual(p, r));
    fact = std::max(fact, factorization_residual(p, v.branch));
    const auto rc = r_coefficients(p, r);
    const auto [p12, p34] = r_products(r);
    r12 = std::max(r12, std::abs(rc[0] * rc[1] - p12) / std::abs(p12));
    r34 = std::max(r34, std::abs(rc[2] * rc[3] - p34) / std::abs(p34));
    const Complex a = det_M_direct(p, v.branch), b = det_M(p, v.branch);
    dM = std::max(dM, std::abs(a - b) / std::abs(b));
    sep = std::min(sep, root_separation(p, v.delta));
  }
  const std::string n = std::to_string(pts.size()) + " random points";
  s.add("quartic root residual", "symbols/roots", res, 1e-10, true, n);
  s.add("det Lambda factorization", "symbols/factorization", fact, 1e-9, true, n);
  s.add("r1 r2 closed form", "symbols/r-products", r12, 1e-10, true, n);
  s.add("r3 r4 closed form", "symbols/r-products", r34, 1e-10, true, n);
  s.add("det M quotient vs product", "symbols/det-M", dM, 1e-8, true, n);
  s.add("lambda and mu roots separated", "symbols/separation", sep, 0, false, n);
  s.rep.checks.back().passed = sep > 0;

  double br = 0;
  for (double sv = 0.5; sv < 1e6; sv *= 3) {
    const SymbolPoint p{sv, v.m, v.omega0, Complex(e * e)};
    try {
      const Complex want(0, -(2 + 3 * v.m + v.m * v.m) * e);
      br = std::max(br, std::abs(lambda2_bracket(p) - want) / (1 + sv));
    } catch (const DegenerateRoot&) {
    }
  }
  s.add("Lambda_2 bracket identity", "symbols/bracket", br, 1e-12, true, "absolute, per unit of 1 + s");

  const ScanParams sp{v.omega0, v.eta, v.delta};
  ScanGrid grid;
  grid.m_values = {v.m};
  for (ScanTarget t : {ScanTarget::lambda1, ScanTarget::lambda2, ScanTarget::M}) {
    const auto scan = ellipticity_scan(t, sp, grid);
    CheckResult c;
    c.name = std::string("ellipticity scan ") + to_string(t);
    c.topic = "symbols/ellipticity";
    c.asserted = scan.per_m.front().asserted;
    c.passed = scan.certified && scan.Cmin > 0;
    c.value = scan.per_m.front().Cmin;
    c.threshold = 0;
    c.detail = "C0 = " + fmt(scan.per_m.front().C0) + (c.asserted ? "" : " (reported, not asserted)");
    s.rep.checks.push_back(c);
    if (t == ScanTarget::lambda1) {
      s.add("interior symbol bound", "symbols/interior", scan.interior_min, std::pow(e, 4) * (1 - 1e-12), false,
            "|q| >= (Im omega0)^4");
    }
  }

  const auto lim = weyl::covering_params(1e-4, {1, 0.1});
  s.add("c0 limit", "weyl/limits", std::abs(lim.c0 - 3), 1e-2, true, "delta = 1e-4, Im omega0 = 0.1");
  s.add("delta1/delta2 limit", "weyl/limits", std::abs(lim.delta1 / lim.delta2 - std::sqrt(3.0)), 1e-3, true,
        "delta = 1e-4, Im omega0 = 0.1");
  long gaps = 0, sampled = 0;
  for (double d : {1e-3, 1e-2}) {
    for (double r : {1e3, 1e5}) {
      try {
        sampled += weyl::covering_verify(weyl::covering_params(d, {1, 0.1}), r, 10000, v.seed).samples;
      } catch (const CoverageGap&) {
        ++gaps;
      }
    }
  }
  s.add("sector covering", "weyl/covering", double(gaps), 0, true, std::to_string(sampled) + " points");

  std::mt19937_64 rng(v.seed);
  std::normal_distribution<double> g;
  long bad = 0;
  for (int t = 0; t < 200; ++t) {
    const int dim = 2 + t % 11;
    Eigen::MatrixXcd A(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int k = 0; k < dim; ++k) A(i, k) = Complex(g(rng), g(rng));
    for (int N = 0; N <= dim; ++N) bad += !weyl::weyl_inequality_check(A, N);
  }
  s.add("Weyl product inequality", "weyl/inequality", double(bad), 0, true, "200 random matrices up to 12x12");

  // Argument principle on a polynomial with known zeros, one of them double.
  const auto poly = kernel::lift([](Complex z) { return (z - 0.3) * (z - 0.3) * (z + Complex(0.2, 0.5)) * (z - 2.0); });
  const int cnt = kernel::winding_count(poly, {-1, 1, -1, 1}).count;
  s.add("winding count", "kernel/count", std::abs(cnt - 3), 0, true, "three zeros with multiplicity");
  return s.rep;
}

std::string to_json(const SuiteReport& r, int indent) {
  json j{{"passed", r.passed()}};
  j["checks"] = json::array();
  for (const auto& c : r.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"topic", c.topic},
                           {"asserted", c.asserted},
                           {"passed", c.passed},
                           {"value", number(c.value)},
                           {"threshold", number(c.threshold)},
                           {"detail", c.detail}});
  }
  return j.dump(indent);
}

}  // namespace ite::harness
