#pragma once

#include <functional>
#include <vector>

#include "ite/kernel.hpp"
#include "ite/scaled.hpp"

namespace ite::spectrum {

/// Refractive contrast m on the unit ball: constant, or a tabulated radial
/// profile (values and derivatives on a grid of [0,1], cubic Hermite in between).
struct Contrast {
  enum class Kind { constant, radial };
  Kind kind = Kind::constant;
  double value = 0;
  std::vector<double> rho, m, dm;

  static Contrast constant(double m);
  static Contrast radial(const std::function<double(double)>& m, const std::function<double(double)>& dm,
                         int samples = 401);
  /// m(rho) = sum_i coeffs[i] rho^i.
  static Contrast polynomial(const std::vector<double>& coeffs, int samples = 401);

  double at(double r) const;
  double derivative_at(double r) const;
  double boundary() const { return at(1.0); }
  double min_index() const;  ///< min over [0,1] of 1 + m
  double max_index() const;  ///< max over [0,1] of 1 + m
};

/// Throws InvalidContrast unless 1 + m > 0 on [0,1] and m(1) != 0.
void validate(const Contrast& c);

/// One separated mode on the unit ball of R^n. For n = 1, l = 0 is the even
/// and l = 1 the odd parity mode of (-1,1).
struct ModeProblem {
  int n = 3;
  int l = 0;
  Contrast contrast;
};

enum class Check { validate, skip };

/// u'(1) v(1) - u(1) v'(1) for the regular solutions u of -w'' - ... = lambda w
/// and v with index 1 + m, normalized so that constant contrast gives the
/// closed form det[[u, -v], [u', -v']].
ScaledValue char_det(const ModeProblem& mode, Complex lambda, Check check = Check::validate);

/// The same determinant as a function of k = sqrt(lambda) (either branch).
ScaledValue char_det_k(const ModeProblem& mode, Complex k, Check check = Check::validate);

struct ShootOptions {
  double rho0 = 1e-3;
  double rtol = 1e-10;
  long max_steps = 1000000;
  /// Split every planned step into this many equal pieces.
  int subdivide = 1;
};

/// Radial shooting on a fixed mesh. The mesh is planned once by adaptive
/// DOPRI5 runs at |lambda| = lambda_max on the axes; every later evaluation
/// reuses it, so the result is an analytic function of lambda.
class RadialShooter {
public:
  RadialShooter(const ModeProblem& mode, double lambda_max, const ShootOptions& opts = {});

  /// Boundary values u(1), u'(1), v(1), v'(1) in closed-form normalization.
  struct Columns {
    ScaledValue u, du, v, dv;
  };
  Columns columns(Complex lambda) const;

  ScaledValue operator()(Complex lambda) const;
  /// Determinant over the column norms (see mode_function).
  ScaledValue normalized(Complex lambda) const;

  std::size_t steps() const { return mesh_.size() - 1; }

private:
  struct Solution {
    ScaledValue w, dw;
  };
  Solution integrate(Complex lambda, bool second) const;
  void plan(Complex lambda, bool second, std::vector<double>& out) const;
  double index(double rho, bool second) const;

  ModeProblem mode_;
  ShootOptions opts_;
  int nu_ = 0;                       // Frobenius exponent
  double centrifugal_ = 0;           // l (l + n - 2)
  std::vector<double> mesh_;
  std::vector<double> taylor_[2];    // index Taylor coefficients at rho = 0
};

/// One-off radial shooting determinant at lambda.
ScaledValue radial_shoot(const ModeProblem& mode, Complex lambda, const ShootOptions& opts = {});

ScaledValue determinant(const RadialShooter::Columns& c);
/// d / (|(u, u'/s)| |(v, v'/s)| s): a positive rescaling of d bounded by 1.
ScaledValue normalized(const RadialShooter::Columns& c, double s);

/// Zero-counting function of a mode: the determinant divided by the norms of
/// its two columns. The factor is positive, so phases and zeros are unchanged
/// while the modulus stays O(1) away from zeros. For radial contrast the
/// shooting mesh is planned for |lambda| <= lambda_max.
kernel::AnalyticFn mode_function(const ModeProblem& mode, double lambda_max = 0,
                                 const ShootOptions& opts = {});

/// Spherical-harmonic degeneracy of mode l.
int mode_multiplicity(int n, int l);

struct ModeCutoff {
  int L = 0;
  double r = 0;
  bool certified = false;
  std::vector<int> counts;  ///< zeros per mode l = 0, 1, ... in the census region
};

struct CutoffOptions {
  double r_min = 1e-3;
  int margin = 5;
  int max_l = 500;
  kernel::CountOptions count;
};

/// Zeros of one mode in the box |Re|, |Im| <= r with the box |Re|, |Im| <= r_min removed.
int census_box_count(const ModeProblem& mode, double r, double r_min, const kernel::CountOptions& opts = {});

/// Smallest L such that modes L+1 ... L+margin have no zeros in the census box.
ModeCutoff certify_cutoff(int n, const Contrast& contrast, double r, const CutoffOptions& opts = {});

}  // namespace ite::spectrum
