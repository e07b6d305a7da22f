#pragma once

#include "ite/scaled.hpp"

namespace ite::waves {

/// A radial function and its derivative. Both carry the same log_scale; the
/// larger of the two mantissas is normalized.
struct WaveValue {
  ScaledValue value;
  ScaledValue derivative;
};

/// Spherical Bessel j_l(z) and j_l'(z). Requires l <= 500, |z| <= 1e6.
WaveValue spherical_j(int l, Complex z);

/// Bessel J_nu(z) and J_nu'(z) for integer order. Requires nu <= 500, |z| <= 1e4.
WaveValue bessel_J(int nu, Complex z);

/// cos z (odd = false) or sin z (odd = true) with its derivative.
WaveValue parity_wave(bool odd, Complex z);

namespace detail {

/// Spherical Neumann y_l(z), upward recurrence. Used for Wronskian checks only.
WaveValue spherical_y(int l, Complex z);

}  // namespace detail

}  // namespace ite::waves
