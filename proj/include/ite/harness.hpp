#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ite/spectrum.hpp"
#include "ite/symbols.hpp"
#include "ite/weyl.hpp"

namespace ite::harness {

struct RunConfig {
  int n = 1;
  /// m(rho) = sum_i contrast[i] rho^i; a single entry is a constant contrast.
  std::vector<double> contrast{3};
  double omega0_im = 0.1;
  double delta = 0;  ///< 0 means 0.01 omega0_im
  double eta = 0.9;
  double h0 = weyl::kDefaultH0;
  std::vector<double> r_grid{100, 1000};
  std::optional<double> theta;  ///< empty: derived from delta
  double r_min = 1e-3;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string json_path, csv_path;

  Complex omega0() const { return {1, omega0_im}; }
  spectrum::Contrast make_contrast() const;
  double effective_delta() const { return delta > 0 ? delta : 0.01 * omega0_im; }
};

/// Throws ConfigError (or InvalidContrast) on an inconsistent configuration.
void validate(const RunConfig& c);

/// JSON config. "contrast" is a number or a coefficient list [c0, c1, ...];
/// "theta" is a number or "derived".
RunConfig parse_config(const std::string& json_text);
std::string to_json(const RunConfig& c, int indent = 2);

struct CountRow {
  double r = 0, theta = 0;
  long N_empirical = 0;
  long N_real = 0;         ///< zeros on the positive real axis, with multiplicity
  long C_empirical = 0;    ///< zeros with |lambda| < 1/h0^2
  double N_bound_finite = 0, N_bound_limit = 0;
  double leading_ratio = 0;     ///< N / r^(n/2)
  double normalized_ratio = 0;  ///< N / (C2 r^(n/2))
  int L = 0;
  int modes_used = 0;
  bool certified = false;
  bool bound_holds = false;
};

struct CountReport {
  int n = 1;
  double C2 = 0, coefficient_finite = 0, coefficient_limit = 0;
  double theta = 0;
  std::vector<CountRow> rows;
  /// Smallest grid r from which on every row satisfies the bound; NaN if none.
  double r_dominance = 0;
};

CountReport census(const RunConfig& config);
std::string to_json(const CountReport& report, int indent = 2);

/// CSV with columns r, N_empirical, N_bound_finite, N_bound_limit, leading_ratio.
std::string plot_csv(const CountReport& report);
/// Writes plot_csv to path; IO errors surface as ite::Error with the system message.
void emit_plotdata(const CountReport& report, const std::string& path);

struct VerifyConfig {
  double m = 1;
  Complex omega0{1, 0.05};
  double eta = 0.9;
  double delta = 0.01;
  int samples = 1000;
  std::uint64_t seed = 1;
  symbols::Branch branch = symbols::Branch::standard;  ///< lower_lambda2 corrupts the roots on purpose
};

struct CheckResult {
  std::string name;
  std::string topic;
  bool asserted = true;
  bool passed = false;
  double value = 0;
  double threshold = 0;
  std::string detail;
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

/// Runs the module invariants and scans. Throws InvalidContrast for m = 0 or 1 + m <= 0.
SuiteReport verify_suite(const VerifyConfig& config);
std::string to_json(const SuiteReport& report, int indent = 2);

}  // namespace ite::harness
