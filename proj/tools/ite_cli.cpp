#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ite/harness.hpp"
#include "json.hpp"

using namespace ite;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2 };

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw Error("cannot write " + path);
}

// Shared between `count` and `plot-data`.
struct CensusFlags {
  std::string config;
  int n = 0;
  std::vector<double> contrast, r_grid;
  double theta = 0, omega0_im = 0, delta = 0, eta = 0, h0 = 0;
  int threads = 0;
  std::string out_json, out_csv;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config, "JSON run configuration")->check(CLI::ExistingFile);
    app->add_option("--n", n, "dimension (1, 2 or 3)");
    app->add_option("--contrast", contrast, "contrast polynomial coefficients c0 c1 ...");
    app->add_option("--r", r_grid, "radii, strictly increasing");
    app->add_option("--theta", theta, "sector half-angle; omitted means derived from delta");
    app->add_option("--omega0-im", omega0_im, "Im omega0");
    app->add_option("--delta", delta, "covering delta (default 0.01 Im omega0)");
    app->add_option("--eta", eta, "ellipticity margin");
    app->add_option("--h0", h0, "semiclassical cutoff h0");
    app->add_option("--threads", threads, "worker threads");
    app->add_option("--out-json", out_json, "write the report here");
    app->add_option("--csv", out_csv, "write plot data here");
  }

  harness::RunConfig build() const {
    harness::RunConfig c = config.empty() ? harness::RunConfig{} : harness::parse_config(slurp(config));
    if (n) c.n = n;
    if (!contrast.empty()) c.contrast = contrast;
    if (!r_grid.empty()) c.r_grid = r_grid;
    if (theta > 0) c.theta = theta;
    if (omega0_im > 0) c.omega0_im = omega0_im;
    if (delta > 0) c.delta = delta;
    if (eta > 0) c.eta = eta;
    if (h0 > 0) c.h0 = h0;
    if (threads > 0) c.threads = threads;
    if (!out_json.empty()) c.json_path = out_json;
    if (!out_csv.empty()) c.csv_path = out_csv;
    harness::validate(c);
    return c;
  }
};

void print_rows(const harness::CountReport& r) {
  std::cout << "n = " << r.n << "  C2 = " << r.C2 << "  coefficient (finite / limit) = " << r.coefficient_finite
            << " / " << r.coefficient_limit << "  theta = " << r.theta << "\n";
  std::cout << "r\tN\tN_real\tC_emp\tbound\tN/r^(n/2)\tmodes\tcertified\n";
  for (const auto& w : r.rows) {
    std::cout << w.r << '\t' << w.N_empirical << '\t' << w.N_real << '\t' << w.C_empirical << '\t'
              << w.N_bound_finite << '\t' << w.leading_ratio << '\t' << w.modes_used << '\t'
              << (w.certified ? "yes" : "no") << (w.bound_holds ? "" : "\tBOUND VIOLATED") << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counting interior transmission eigenvalues"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable output")->configurable(false);

  CensusFlags count_flags;
  auto* count = app.add_subcommand("count", "census of eigenvalues in sectors against the upper bound");
  count_flags.attach(count);

  CensusFlags plot_flags;
  std::string plot_out;
  auto* plot = app.add_subcommand("plot-data", "census rows as CSV for plotting");
  plot_flags.attach(plot);
  plot->add_option("-o,--out", plot_out, "CSV path")->required();

  int b_n = 1;
  std::vector<double> b_contrast{3}, b_r{100, 1000, 10000};
  double b_delta = 0, b_im = 0.1, b_h0 = 0, b_ctheta = 0;
  auto* bound = app.add_subcommand("bound", "bound coefficients and values");
  bound->add_option("--n", b_n, "dimension");
  bound->add_option("--contrast", b_contrast, "contrast polynomial coefficients");
  bound->add_option("--r", b_r, "radii");
  bound->add_option("--delta", b_delta, "covering delta (default 0.01 Im omega0)");
  bound->add_option("--omega0-im", b_im, "Im omega0");
  bound->add_option("--h0", b_h0, "semiclassical cutoff h0");
  bound->add_option("--c-theta", b_ctheta, "additive small-eigenvalue count");

  std::string s_target = "lambda1";
  std::vector<double> s_m{-0.5, 0.5, 1, 3};
  double s_im = 0.05, s_eta = 0.9, s_delta = 0.01, s_c0 = 0;
  int s_nz = 41, s_pd = 32;
  auto* scan = app.add_subcommand("symbols-scan", "ellipticity scan of the boundary symbols");
  scan->add_option("--target", s_target, "lambda1, lambda2 or M")
      ->check(CLI::IsMember({"lambda1", "lambda2", "M"}));
  scan->add_option("--m", s_m, "contrast values");
  scan->add_option("--omega0-im", s_im, "Im omega0");
  scan->add_option("--eta", s_eta, "ellipticity margin");
  scan->add_option("--delta", s_delta, "ray margin delta");
  scan->add_option("--nz", s_nz, "z samples per axis");
  scan->add_option("--per-decade", s_pd, "s samples per decade");
  scan->add_option("--c0", s_c0, "fix C0 instead of deriving it");

  double c_delta = 1e-2, c_im = 0.1, c_r = 1e3, c_h0 = 0;
  long c_samples = 10000;
  std::uint64_t c_seed = 1;
  std::string c_csv;
  auto* cover = app.add_subcommand("cover-verify", "check that the scaled rectangles cover the sector");
  cover->add_option("--delta", c_delta, "covering delta");
  cover->add_option("--omega0-im", c_im, "Im omega0");
  cover->add_option("--r", c_r, "radius");
  cover->add_option("--h0", c_h0, "semiclassical cutoff h0");
  cover->add_option("--samples", c_samples, "sample count");
  cover->add_option("--seed", c_seed, "random shift seed");
  cover->add_option("--csv", c_csv, "write the rectangle family as CSV");

  harness::VerifyConfig vc;
  double v_im = vc.omega0.imag();
  bool v_corrupt = false;
  auto* verify = app.add_subcommand("verify", "run every invariant check and scan");
  verify->add_option("--m", vc.m, "contrast");
  verify->add_option("--omega0-im", v_im, "Im omega0");
  verify->add_option("--eta", vc.eta, "ellipticity margin");
  verify->add_option("--delta", vc.delta, "ray margin delta");
  verify->add_option("--samples", vc.samples, "random symbol points");
  verify->add_option("--seed", vc.seed, "random seed");
  verify->add_flag("--corrupt-branch", v_corrupt, "take the wrong half-plane root for lambda2 (negative control)");

  for (auto* sub : {count, plot, bound, scan, cover, verify}) {
    sub->add_flag("--json", as_json, "machine-readable output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kUsage;
  }

  try {
    if (count->parsed()) {
      const auto cfg = count_flags.build();
      const auto rep = harness::census(cfg);
      if (!cfg.json_path.empty()) write_file(cfg.json_path, harness::to_json(rep) + "\n");
      if (!cfg.csv_path.empty()) harness::emit_plotdata(rep, cfg.csv_path);
      if (as_json) {
        std::cout << harness::to_json(rep) << "\n";
      } else {
        print_rows(rep);
      }
      for (const auto& w : rep.rows) {
        if (!w.certified || !w.bound_holds) return kFail;
      }
      return kPass;
    }
    if (plot->parsed()) {
      const auto rep = harness::census(plot_flags.build());
      harness::emit_plotdata(rep, plot_out);
      if (!as_json) std::cout << "wrote " << rep.rows.size() << " rows to " << plot_out << "\n";
      return kPass;
    }
    if (bound->parsed()) {
      harness::RunConfig c;
      c.n = b_n;
      c.contrast = b_contrast;
      const auto dom = weyl::make_domain(b_n, c.make_contrast());
      const auto p = weyl::covering_params(b_delta > 0 ? b_delta : 0.01 * b_im, {1, b_im}, b_h0);
      nlohmann::json out = nlohmann::json::array();
      for (double r : b_r) {
        const auto rep = weyl::bound_report(dom, p, r, b_ctheta);
        if (as_json) {
          out.push_back(nlohmann::json::parse(weyl::to_json(rep)));
        } else {
          std::cout << "r = " << r << "  bound = " << rep.bound_value << "  (finite " << rep.coefficient_finite
                    << ", limit " << rep.coefficient_limit << ", K = " << rep.K << ")\n";
        }
      }
      if (as_json) std::cout << out.dump(2) << "\n";
      return kPass;
    }
    if (scan->parsed()) {
      const auto which = s_target == "lambda1"   ? symbols::ScanTarget::lambda1
                         : s_target == "lambda2" ? symbols::ScanTarget::lambda2
                                                 : symbols::ScanTarget::M;
      symbols::ScanGrid g;
      g.m_values = s_m;
      g.nz = s_nz;
      g.per_decade = s_pd;
      g.C0 = s_c0;
      const auto res = symbols::ellipticity_scan(which, {{1, s_im}, s_eta, s_delta}, g);
      if (as_json) {
        std::cout << symbols::to_json(res) << "\n";
      } else {
        std::cout << to_string(res.which) << ": certified = " << (res.certified ? "yes" : "no") << "  C0 = " << res.C0
                  << "  Cmin = " << res.Cmin << "  at s = " << res.argmin.s << ", z = " << res.argmin.z << "\n";
        for (const auto& pm : res.per_m) {
          std::cout << "  m = " << pm.m << "  cond " << (pm.cond_ok ? "ok" : "fails") << "  C0 = " << pm.C0
                    << "  Cmin = " << pm.Cmin << (pm.asserted ? "" : "  (not asserted)") << "\n";
        }
      }
      return res.certified ? kPass : kFail;
    }
    if (cover->parsed()) {
      const auto p = weyl::covering_params(c_delta, {1, c_im}, c_h0);
      if (!c_csv.empty()) write_file(c_csv, weyl::to_csv(weyl::rectangle_family(p, c_r)));
      try {
        const auto rep = weyl::covering_verify(p, c_r, c_samples, c_seed);
        if (as_json) {
          std::cout << weyl::to_json(rep) << "\n";
        } else {
          std::cout << "covered: " << rep.samples << " points, K = " << rep.K << ", " << rep.in_residual
                    << " in the residual disk of radius " << rep.residual_radius << "\n";
        }
        return kPass;
      } catch (const CoverageGap& g) {
        std::cerr << g.what() << "\n";
        return kFail;
      }
    }
    if (verify->parsed()) {
      vc.omega0 = {1, v_im};
      if (v_corrupt) vc.branch = symbols::Branch::lower_lambda2;
      const auto rep = harness::verify_suite(vc);
      if (as_json) {
        std::cout << harness::to_json(rep) << "\n";
      } else {
        for (const auto& c : rep.checks) {
          std::cout << (c.passed ? "PASS " : (c.asserted ? "FAIL " : "INFO ")) << c.name << "  [" << c.topic
                    << "]  value = " << c.value << "  " << c.detail << "\n";
        }
      }
      return rep.passed() ? kPass : kFail;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidContrast& e) {
    std::cerr << "invalid contrast: " << e.what() << "\n";
    return kUsage;
  } catch (const BadDelta& e) {
    std::cerr << "bad delta: " << e.what() << "\n";
    return kUsage;
  } catch (const BadRadius& e) {
    std::cerr << "bad radius: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
