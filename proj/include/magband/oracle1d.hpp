#pragma once

#include <vector>

#include "magband/model.hpp"

// Separable one-dimensional reference problems: exact transverse interval
// modes and half-line oscillator cuts, composed into two-sided
// Dirichlet/Neumann bracketing bounds for the window-layer dispersion.
// Everything here is independent of the 2D discretization path.

namespace magband {
namespace oracle1d {

enum class IntervalBc { DD, DN };
enum class WallBc { Dirichlet, Neumann };

struct TransverseMode {
  double width = 0.0;
  IntervalBc bc = IntervalBc::DD;
  int m = 1;       // DD: half waves; DN: stored as the odd index 2j-1
  double energy = 0.0;
};

/// Exact interval modes: DD energies (pi m / d)^2; DN energies
/// (pi (2j-1) / (2d))^2, j = 1..m_max (the half-wave convention).
std::vector<TransverseMode> interval_modes(double d, IntervalBc bc, int m_max);

/// Lowest `count` eigenvalues of -d^2/du^2 + B^2 u^2 on (-inf, wall) with the
/// chosen condition at the wall.  Control-volume discretization plus a dense
/// solve, with a refinement consistency guard.
std::vector<double> oscillator_cut(double field, double wall, WallBc bc, int count);

struct BracketBound {
  int k = 0;
  double p = 0.0;
  double lower = 0.0;  // Neumann-cut bound
  double upper = 0.0;  // Dirichlet-cut bound
};

/// Two-sided bounds on the k-th fiber eigenvalue of the Neumann-window layer
/// obtained by cutting along x = -a and composing half-line oscillator
/// spectra with interval modes.
BracketBound bracket_bounds(const GeometryConfig& geom, double field, int k, double p);

}  // namespace oracle1d
}  // namespace magband
