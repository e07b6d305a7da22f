#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ite/scaled.hpp"

namespace ite::kernel {

/// Closed axis-aligned rectangle in the complex plane.
struct Rect {
  double re_min = 0, re_max = 0, im_min = 0, im_max = 0;

  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  double diameter() const { return std::hypot(width(), height()); }
  Complex center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
  bool valid() const { return re_min < re_max && im_min < im_max; }
  bool contains(Complex z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
  bool strictly_contains(Complex z) const {
    return z.real() > re_min && z.real() < re_max && z.imag() > im_min && z.imag() < im_max;
  }
  /// Symmetric about the real axis (to the last bit).
  bool symmetric() const { return im_min == -im_max; }
  Rect mirrored() const { return {re_min, re_max, -im_max, -im_min}; }
};

struct Zero {
  Complex location;
  int order = 1;
};

struct ZeroReport {
  int count = 0;             ///< zeros with multiplicity
  std::vector<Zero> zeros;   ///< filled by refine_zeros / count_in_sector
  /// Smallest |f| seen on the counting contour(s), relative to the largest |f| on the same contour.
  double boundary_min_modulus = 1.0;
  int cells_used = 0;
  Rect region;               ///< rectangle actually used (after any outward nudging)
};

/// Analytic function handle. Values are returned in scaled form so that
/// exponentially large or small determinants can be tracked without overflow;
/// only the phase and relative modulus matter for counting.
using AnalyticFn = std::function<ScaledValue(Complex)>;

/// Wraps a plain complex function.
AnalyticFn lift(std::function<Complex(Complex)> f);

struct CountOptions {
  double tol = 1e-12;                      ///< ZeroOnBoundary when min|f| < tol * max|f| on the contour
  int initial_per_edge = 64;
  std::size_t max_evaluations = std::size_t(1) << 20;
};

/// Number of zeros of f inside `region`, with multiplicity, by phase tracking along
/// the counter-clockwise boundary. Consecutive phase steps are kept below pi/2.
ZeroReport winding_count(const AnalyticFn& f, const Rect& region, const CountOptions& opts = {});

struct RefineOptions {
  CountOptions count;
  /// f(conj z) == conj(f(z)); enables mirrored refinement and exact real zeros.
  bool conjugate_symmetric = false;
  double nudge_rel = 1e-7;
  int max_nudges = 8;
  /// Cells smaller than this (relative to max(1, |center|)) are reported as one zero of the cell's order.
  double min_cell_rel = 1e-10;
  /// Multiple-zero resolution: a cell holding several zeros is reported as one
  /// cluster once its diameter is below this (relative to max(1, |center|)), and
  /// zeros closer than this are merged. Rounding spreads an order-k zero over a
  /// ball of relative radius about eps^(1/k).
  double cluster_rel = 1e-4;
  int max_newton = 60;
};

/// Locates the `expected` zeros in `region` by recursive subdivision and
/// safeguarded Newton polishing. Orders come from the winding count of the
/// final enclosing cell. Zeros are sorted by (re, im).
ZeroReport refine_zeros(const AnalyticFn& f, const Rect& region, int expected,
                        const RefineOptions& opts = {});

/// winding_count that pushes the offending edge outward (relative shift
/// nudge_rel of the rectangle size, growing 4x per retry) when a zero sits on
/// the contour. The report's region is the rectangle actually counted.
ZeroReport count_nudged(const AnalyticFn& f, const Rect& region, const RefineOptions& opts = {});

struct SectorOptions {
  RefineOptions refine;
  double ratio = 1.5;                  ///< geometric growth of the covering boxes along Re
  double min_half_height_rel = 0.02;   ///< box half-height is at least this fraction of its right edge
};

/// Zeros in {r_min <= |z| <= r_max, |arg z| <= theta}.
ZeroReport count_in_sector(const AnalyticFn& f, double theta, double r_max, double r_min,
                           const SectorOptions& opts = {});

/// Exact membership in the truncated sector.
bool in_sector(Complex z, double theta, double r_max, double r_min);

/// Sorts zeros by (re, im).
void normalize_order(std::vector<Zero>& zeros);

}  // namespace ite::kernel
