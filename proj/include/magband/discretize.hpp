#pragma once

#include <Eigen/SparseCore>
#include <stdexcept>
#include <string>
#include <vector>

#include "magband/model.hpp"

// Control-volume discretization of the fiber operator
//   H(p) = -d^2/dx^2 + (p + Bx)^2 - d^2/dz^2
// on a truncated, boundary-conforming tensor grid.  The result is a symmetric
// generalized pencil (A, M) with diagonal positive M (cell volumes).

namespace magband {

struct FiberProblem {
  GeometryConfig geometry;
  PhysicalConfig physics;
  double p = 0.0;
  double e_max = 10.0;  // requested spectral window; drives the truncation
};

struct GridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Transverse row classification.  Rows are the horizontal grid lines that
/// can carry unknowns; outer Dirichlet boundaries are not rows.
enum class RowKind {
  Interior,        // plain interior line
  NeumannWindow,   // kind 1 top boundary: unknown inside the window only
  Interface        // kinds 2/3 dividing line: unknown on the open part only
};

struct GridSpec {
  GeometryKind kind = GeometryKind::NeumannWindowLayer;
  double field = 1.0;
  double p = 0.0;

  double x_lo = 0.0, x_hi = 0.0;
  double hx = 0.0;
  int nx = 0;  // number of x cells; nodes at x_lo + i*hx, i = 0..nx

  double hz1 = 0.0, hz2 = 0.0;  // per-side z spacings (hz2 unused for kind 1)
  int n1 = 0, n2 = 0;           // cells across the upper / lower layer

  double a_snapped = 0.0;  // window half width after snapping to the x lattice
  double snap_shift = 0.0; // |a - a_snapped|; a warning is logged when > hx/2
  bool symmetric_x = false;

  int i_zero = 0;  // x lattice index of x = 0
  int i_win = 0;   // lattice half width of the snapped window (a_snapped / hx)

  struct Row {
    double z = 0.0;
    double h_below = 0.0;  // gap to the row (or Dirichlet boundary) below
    double h_above = 0.0;  // gap above; 0 for a Neumann boundary row
    double height = 0.0;   // control-volume height
    RowKind rowkind = RowKind::Interior;
  };
  std::vector<Row> rows;

  double x_at(int ix) const { return x_lo + hx * ix; }
  /// True when the node (x column ix, row ir) carries an unknown.
  bool is_unknown(int ix, int ir) const;
  int num_unknowns() const;
};

/// Sparse symmetric stiffness-plus-potential matrix A with the diagonal cell
/// volume weights M of the generalized problem A v = lambda M v.
struct FiberMatrix {
  Eigen::SparseMatrix<double> stiffness;  // A
  Eigen::VectorXd volumes;                // diagonal of M
  GridSpec grid;
  std::vector<int> node_ix;  // unknown index -> x column
  std::vector<int> node_ir;  // unknown index -> row index

  int dimension() const { return static_cast<int>(stiffness.rows()); }
  double node_x(int i) const { return grid.x_at(node_ix[static_cast<size_t>(i)]); }
  double node_z(int i) const { return grid.rows[static_cast<size_t>(node_ir[static_cast<size_t>(i)])].z; }
};

struct GridOptions {
  int resolution = 64;     // cells per scale unit of the geometry widths
  double margin = 10.0;    // safety margin added to e_max in the truncation rule
  bool symmetric_x = false;  // force an x-range symmetric about 0
};

/// Build the truncated grid: x range covers the oscillator well for the
/// requested window plus Gaussian-decay padding 6/sqrt(B), and the window /
/// barrier-edge region; boundary lines and x = +-a land exactly on the
/// lattice.
GridSpec build_grid(const FiberProblem& problem, const GridOptions& opts);

/// Assemble the symmetric pencil (A, M) on the grid.
FiberMatrix assemble(const FiberProblem& problem, const GridSpec& grid);

/// Node-map reflection x -> -x; equals assembling at momentum -p on the
/// mirrored grid.  Refuses asymmetric grids and the one-sided geometry.
FiberMatrix mirror_x(const FiberMatrix& matrix);

/// Debug dump: coordinate-format matrix text plus a node-map CSV.
void dump_matrix(const FiberMatrix& matrix, const std::string& matrix_path, const std::string& nodes_path);

}  // namespace magband
