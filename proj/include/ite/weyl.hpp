#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ite/errors.hpp"
#include "ite/kernel.hpp"
#include "ite/spectrum.hpp"

namespace ite::weyl {

/// Default semiclassical cutoff h0 (fixed, not scaled with delta).
inline constexpr double kDefaultH0 = 0.3;

struct CoveringParams {
  double delta = 0;
  Complex omega0{1, 0.1};
  double delta1 = 0, delta2 = 0;
  double X = 0;
  double theta = 0;  ///< atan(X / (1 + delta2))
  double c0 = 0;
  double h0 = kDefaultH0;

  /// (1 + delta2) / (1 - delta2), the scale step of the covering.
  double ratio() const { return (1 + delta2) / (1 - delta2); }
};

/// Requires Re omega0 = 1 and 0 < delta < Im omega0 < 1. h0 <= 0 selects the default.
CoveringParams covering_params(double delta, Complex omega0 = {1, 0.1}, double h0 = 0);

/// S0 = [1 - delta2, 1 + delta2] x [-X, Im omega0].
kernel::Rect base_rectangle(const CoveringParams& p);

struct RectangleFamily {
  std::vector<kernel::Rect> rects;  ///< rho_k S0 for k = 0..K
  std::vector<double> scales;       ///< rho_k = ratio^-k r
  int K = 0;
};

/// Throws BadRadius if r < 1/h0^2.
RectangleFamily rectangle_family(const CoveringParams& p, double r);

/// CSV (k, rho, re_min, re_max, im_min, im_max) for plotting.
std::string to_csv(const RectangleFamily& family);

struct CoverageReport {
  double r = 0, theta = 0;
  int K = 0;
  long samples = 0;
  long in_family = 0;
  long in_residual = 0;   ///< points with |z| below the residual radius not covered by the family
  double inner_radius = 0;     ///< 1/h0^2
  double residual_radius = 0;  ///< 1/h0^2 (1 + delta2)/(1 - delta2), bound on the compact remainder
};

/// Samples the truncated sector {|arg z| <= theta, 1/h0^2 <= |z| <= r} with a
/// randomly shifted Halton sequence plus its corner points, and checks that
/// each point lies in the rectangle family or in the residual disk. Throws
/// CoverageGap with the first uncovered point.
CoverageReport covering_verify(const CoveringParams& p, double r, long samples, std::uint64_t seed = 1);

/// Phase-space volumes of {q1 <= c} and {q2 <= c} over the unit ball times R^n,
/// with q1 = (|xi|^2 - 1)^2 + (Im omega0)^2 and q2 the same in |xi|^2/(1+m).
struct WindowVolume {
  double vol1 = 0, vol2 = 0;
};
WindowVolume window_volume(int n, const spectrum::Contrast& contrast, double c, Complex omega0);

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

/// integral over the unit ball of (1 + m)^(n/2), by adaptive quadrature for radial profiles.
double index_integral(int n, const spectrum::Contrast& contrast);

struct DomainSpec {
  int n = 1;
  spectrum::Contrast contrast;
  double volume_integral = 0;  ///< integral of 1 + (1 + m)^(n/2) over the unit ball
};
DomainSpec make_domain(int n, const spectrum::Contrast& contrast);

struct BoundCoefficients {
  double C2 = 0;
  double finite = 0;  ///< c0 C2 (1+d2)^(n/2) ((1+d1)^(n/2) - (1-d1)^(n/2)) / ((1+d2)^(n/2) - (1-d2)^(n/2))
  double limit = 0;   ///< 3 sqrt(3) C2
};
BoundCoefficients bound_coefficient(const DomainSpec& domain, const CoveringParams& p);

struct BoundReport {
  double r = 0, theta = 0;
  double coefficient_finite = 0, coefficient_limit = 0;
  double C_theta = 0;
  double bound_value = 0;  ///< coefficient_finite r^(n/2) + C_theta
  int K = -1;              ///< -1 when r < 1/h0^2
  std::string residual_constant_policy;
};

/// C_theta is the caller's empirical count of eigenvalues with |lambda| < 1/h0^2.
BoundReport bound_report(const DomainSpec& domain, const CoveringParams& p, double r, double C_theta);

std::string to_json(const BoundReport& b, int indent = 2);
std::string to_json(const CoverageReport& c, int indent = 2);

/// Product of the N smallest singular values <= product of the N smallest
/// eigenvalue moduli, up to 1e-12 relative slack.
bool weyl_inequality_check(const Eigen::MatrixXcd& A, int N);

/// floor(M log((e + 2 delta)/(e - delta)) / log((e + 2 delta)/(e + delta))), e = Im omega0.
long count_transfer(long M, const CoveringParams& p);

}  // namespace ite::weyl
