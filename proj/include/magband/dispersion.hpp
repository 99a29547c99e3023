#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "magband/discretize.hpp"
#include "magband/eigensolve.hpp"
#include "magband/model.hpp"

// Momentum sweeps of the fiber problem: dispersion tables, band edges, gap
// and flat-band detection, probability currents and group velocities.

namespace magband {

struct MomentumGrid {
  std::vector<double> values;  // strictly increasing

  static MomentumGrid uniform(double p_min, double p_max, int points);
  void validate() const;
  /// Index of the grid point equal to p (within 1e-12), or -1.
  int find(double p) const;
};

struct SweepOptions {
  int levels = 6;            // K: bands per momentum point
  int resolution = 64;       // cells per geometry scale unit
  double margin = 10.0;      // truncation safety margin on e_max
  double tol = 1e-10;        // solver tolerance
  double e_max = 0.0;        // spectral window; 0 = derive from the catalog
  bool store_vectors = false;
  bool symmetric_x = false;  // mirror-exact grids for paired +-p sweeps
  int threads = 1;
};

/// One solved fiber: kept when eigenvector access is requested.
struct FiberSolve {
  double p = 0.0;
  FiberMatrix matrix;
  EigenResult eig;
};

struct DispersionTable {
  GeometryConfig geometry;
  PhysicalConfig physics;
  SweepOptions options;
  double e_max = 0.0;  // actual spectral window used
  std::vector<double> p;
  Eigen::MatrixXd lambda;    // levels x momenta, each column ascending
  Eigen::MatrixXd residual;  // same shape
  std::vector<std::shared_ptr<const FiberSolve>> fibers;  // empty unless stored

  int levels() const { return static_cast<int>(lambda.rows()); }
  int points() const { return static_cast<int>(lambda.cols()); }
  const FiberSolve& fiber_at(double p_value) const;
};

DispersionTable sweep(const GeometryConfig& geometry, const PhysicalConfig& physics,
                      const MomentumGrid& pgrid, const SweepOptions& options);

struct Band {
  int k = 0;
  double min = 0.0, max = 0.0;
  double argmin_p = 0.0;
  double variation = 0.0;  // (max - min) / max(|max|, 1e-300)
  bool flat = false;
  std::optional<ModeIndex> upper_label;  // nearest catalog level at the band top
  std::optional<ModeIndex> lower_label;  // one-sided geometry: p -> -inf family
};

struct GapInterval {
  double lo = 0.0, hi = 0.0;
};

struct BandSummary {
  GeometryConfig geometry;
  PhysicalConfig physics;
  std::vector<Band> bands;
  std::vector<GapInterval> gaps;        // complement of the band hulls
  double match_tol = 0.0;
  double flat_tol = 0.0;
};

struct SummaryOptions {
  double flat_rel_tol = 1e-7;
  double match_tol = 1e-2;  // edge-label matching distance
};

/// Per-band extrema, flatness, catalog labels, and the gap report.
BandSummary band_edges(const DispersionTable& table, const SummaryOptions& options);

/// Indices (1-based band ranks) of bands with relative variation <= rel_tol.
std::vector<int> detect_flat(const DispersionTable& table, double rel_tol);

/// Energies that appear in every momentum column within rel_tol (relative to
/// max(|value|, 1)). Unlike detect_flat this survives band crossings, where a
/// flat level migrates through the sorted ranks.
std::vector<double> flat_values(const DispersionTable& table, double rel_tol);

/// Open energy intervals between consecutive band hulls below the window.
std::vector<GapInterval> detect_gaps(const BandSummary& summary, double e_max);

struct CurrentProfile {
  int k = 0;
  double p = 0.0;
  std::vector<double> x, z;
  std::vector<double> paper_current;       // p |phi|^2
  std::vector<double> mechanical_current;  // 2 (p + Bx) |phi|^2
  double total_mechanical = 0.0;           // integrated mechanical current
  double group_velocity_fd = 0.0;          // central difference of lambda_k
  double group_velocity_fh = 0.0;          // 2 <phi, (p+Bx) phi>
  bool velocity_reliable = true;           // false near a level crossing
};

/// Requires a table swept with store_vectors and p on the grid.
CurrentProfile current_profile(const DispersionTable& table, int k, double p);

/// Richardson error estimate for the k lowest eigenvalues at momentum p:
/// |lambda_h - lambda_{h/2}| / 3 from one refinement step.
Eigen::VectorXd discretization_error_estimate(const GeometryConfig& geometry,
                                              const PhysicalConfig& physics, double p,
                                              int levels, const SweepOptions& options);

}  // namespace magband
