#include "magband/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <vector>

namespace magband {

namespace {

struct XRange {
  double lo, hi;
};

XRange required_x_interval(const FiberProblem& prob, const GridSpec& g, double margin) {
  double b = prob.physics.field;
  double w = std::sqrt(prob.e_max + margin) / b;  // classical turning point
  double pad = 6.0 / std::sqrt(b);                // Gaussian-decay padding
  double center = -prob.p / b;
  XRange r{center - w - pad, center + w + pad};
  double w0 = w + pad;
  if (prob.geometry.kind == GeometryKind::OneSidedBarrier) {
    r.lo = std::min(r.lo, -w0);
    r.hi = std::max(r.hi, w0);
  } else if (g.a_snapped > 0.0) {
    r.lo = std::min(r.lo, -g.a_snapped - w0);
    r.hi = std::max(r.hi, g.a_snapped + w0);
  }
  return r;
}

}  // namespace

bool GridSpec::is_unknown(int ix, int ir) const {
  if (ix <= 0 || ix >= nx) return false;
  const Row& row = rows[static_cast<size_t>(ir)];
  switch (row.rowkind) {
    case RowKind::Interior:
      return true;
    case RowKind::NeumannWindow:
      return ix > i_zero - i_win && ix < i_zero + i_win;
    case RowKind::Interface:
      if (kind == GeometryKind::OneSidedBarrier) return ix > i_zero;  // barrier covers x <= 0
      return ix > i_zero - i_win && ix < i_zero + i_win;
  }
  return false;
}

int GridSpec::num_unknowns() const {
  int count = 0;
  for (int ir = 0; ir < static_cast<int>(rows.size()); ++ir)
    for (int ix = 1; ix < nx; ++ix) count += is_unknown(ix, ir) ? 1 : 0;
  return count;
}

GridSpec build_grid(const FiberProblem& problem, const GridOptions& opts) {
  problem.geometry.validate();
  problem.physics.validate();
  const GeometryConfig& geom = problem.geometry;
  const double b = problem.physics.field;

  GridSpec g;
  g.kind = geom.kind;
  g.field = b;
  g.p = problem.p;

  const double scale = geom.d1.scale;
  g.hx = scale / opts.resolution;

  auto cells_across = [&](const Width& d) {
    long long n = std::llround(opts.resolution * d.value() / scale);
    if (n < 8)
      throw GridError("resolution too coarse: fewer than 8 cells across width " + std::to_string(d.value()));
    return static_cast<int>(n);
  };

  g.n1 = cells_across(geom.d1);
  g.hz1 = geom.d1.value() / g.n1;
  if (geom.kind != GeometryKind::NeumannWindowLayer) {
    g.n2 = cells_across(geom.d2);
    g.hz2 = geom.d2.value() / g.n2;
  }

  // Snap the window endpoints to the x lattice.
  g.i_win = static_cast<int>(std::llround(geom.a / g.hx));
  g.a_snapped = g.i_win * g.hx;
  g.snap_shift = std::abs(geom.a - g.a_snapped);
  if (g.snap_shift > 0.5 * g.hx + 1e-12)
    std::cerr << "build_grid: window endpoint snapped by " << g.snap_shift << " (> hx/2)\n";
  if (geom.has_window() && geom.a > 0.0 && 2 * g.i_win < 4)
    throw GridError("resolution too coarse to resolve the window: fewer than 4 cells across 2a = " +
                    std::to_string(2.0 * geom.a) + " at hx = " + std::to_string(g.hx));

  XRange r = required_x_interval(problem, g, opts.margin);
  g.symmetric_x = opts.symmetric_x || problem.p == 0.0;
  long long ilo = static_cast<long long>(std::floor(r.lo / g.hx));
  long long ihi = static_cast<long long>(std::ceil(r.hi / g.hx));
  if (g.symmetric_x) {
    long long m = std::max(-ilo, ihi);
    ilo = -m;
    ihi = m;
  }
  g.x_lo = ilo * g.hx;
  g.x_hi = ihi * g.hx;
  g.nx = static_cast<int>(ihi - ilo);
  g.i_zero = static_cast<int>(-ilo);

  // Transverse rows, bottom to top.
  if (geom.kind == GeometryKind::NeumannWindowLayer) {
    for (int j = 1; j <= g.n1; ++j) {
      GridSpec::Row row;
      row.z = j * g.hz1;
      row.h_below = g.hz1;
      if (j < g.n1) {
        row.h_above = g.hz1;
        row.height = g.hz1;
        row.rowkind = RowKind::Interior;
      } else {  // top boundary line: Neumann inside the window, Dirichlet outside
        row.h_above = 0.0;
        row.height = 0.5 * g.hz1;
        row.rowkind = RowKind::NeumannWindow;
      }
      g.rows.push_back(row);
    }
  } else {
    double d2 = geom.d2.value();
    for (int j = 1; j < g.n2; ++j) {
      GridSpec::Row row;
      row.z = -d2 + j * g.hz2;
      row.h_below = g.hz2;
      row.h_above = g.hz2;
      row.height = g.hz2;
      g.rows.push_back(row);
    }
    GridSpec::Row iface;
    iface.z = 0.0;
    iface.h_below = g.hz2;
    iface.h_above = g.hz1;
    iface.height = 0.5 * (g.hz1 + g.hz2);
    iface.rowkind = RowKind::Interface;
    g.rows.push_back(iface);
    for (int j = 1; j < g.n1; ++j) {
      GridSpec::Row row;
      row.z = j * g.hz1;
      row.h_below = g.hz1;
      row.h_above = g.hz1;
      row.height = g.hz1;
      g.rows.push_back(row);
    }
  }
  return g;
}

FiberMatrix assemble(const FiberProblem& problem, const GridSpec& grid) {
  const double b = problem.physics.field;
  const double p = problem.p;
  const int nrows = static_cast<int>(grid.rows.size());

  // Unknown numbering: x-major, row-minor.
  std::vector<int> index(static_cast<size_t>((grid.nx + 1) * nrows), -1);
  auto slot = [&](int ix, int ir) -> int& { return index[static_cast<size_t>(ix * nrows + ir)]; };
  int dim = 0;
  for (int ix = 1; ix < grid.nx; ++ix)
    for (int ir = 0; ir < nrows; ++ir)
      if (grid.is_unknown(ix, ir)) slot(ix, ir) = dim++;
  if (dim == 0) throw GridError("assembly produced no unknowns");

  FiberMatrix fm;
  fm.grid = grid;
  fm.volumes.resize(dim);
  fm.node_ix.resize(static_cast<size_t>(dim));
  fm.node_ir.resize(static_cast<size_t>(dim));

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(5 * dim));

  for (int ix = 1; ix < grid.nx; ++ix) {
    for (int ir = 0; ir < nrows; ++ir) {
      int me = slot(ix, ir);
      if (me < 0) continue;
      const GridSpec::Row& row = grid.rows[static_cast<size_t>(ir)];
      double x = grid.x_at(ix);
      double vol = grid.hx * row.height;
      double vx = p + b * x;
      double diag = vx * vx * vol;

      fm.volumes[me] = vol;
      fm.node_ix[static_cast<size_t>(me)] = ix;
      fm.node_ir[static_cast<size_t>(me)] = ir;

      auto couple = [&](int nb, double coef) {
        diag += coef;
        if (nb >= 0) trip.emplace_back(me, nb, -coef);
      };

      // z fluxes
      couple(ir > 0 ? slot(ix, ir - 1) : -1, grid.hx / row.h_below);
      if (row.h_above > 0.0)  // zero gap above means a Neumann boundary: no flux
        couple(ir + 1 < nrows ? slot(ix, ir + 1) : -1, grid.hx / row.h_above);
      // x fluxes (truncation ends and in-row Dirichlet nodes couple to zero)
      couple(ix > 1 ? slot(ix - 1, ir) : -1, row.height / grid.hx);
      couple(ix + 1 < grid.nx ? slot(ix + 1, ir) : -1, row.height / grid.hx);

      trip.emplace_back(me, me, diag);
    }
  }

  fm.stiffness.resize(dim, dim);
  fm.stiffness.setFromTriplets(trip.begin(), trip.end());
  return fm;
}

FiberMatrix mirror_x(const FiberMatrix& matrix) {
  const GridSpec& g = matrix.grid;
  if (g.kind == GeometryKind::OneSidedBarrier)
    throw GridError("mirror_x: the one-sided geometry is not mirror symmetric");
  if (g.i_zero * 2 != g.nx)
    throw GridError("mirror_x: grid is not symmetric about x = 0");

  const int dim = matrix.dimension();
  const int nrows = static_cast<int>(g.rows.size());
  // Canonical numbering of the mirrored nodes (same scheme as assemble).
  std::vector<int> index(static_cast<size_t>((g.nx + 1) * nrows), -1);
  int count = 0;
  for (int ix = 1; ix < g.nx; ++ix)
    for (int ir = 0; ir < nrows; ++ir)
      if (g.is_unknown(ix, ir)) index[static_cast<size_t>(ix * nrows + ir)] = count++;

  std::vector<int> perm(static_cast<size_t>(dim));  // old index -> mirrored index
  for (int i = 0; i < dim; ++i) {
    int mx = g.nx - matrix.node_ix[static_cast<size_t>(i)];
    int ir = matrix.node_ir[static_cast<size_t>(i)];
    perm[static_cast<size_t>(i)] = index[static_cast<size_t>(mx * nrows + ir)];
  }

  FiberMatrix out;
  out.grid = g;
  out.grid.p = -g.p;
  out.volumes.resize(dim);
  out.node_ix.resize(static_cast<size_t>(dim));
  out.node_ir.resize(static_cast<size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    int j = perm[static_cast<size_t>(i)];
    out.volumes[j] = matrix.volumes[i];
    out.node_ix[static_cast<size_t>(j)] = g.nx - matrix.node_ix[static_cast<size_t>(i)];
    out.node_ir[static_cast<size_t>(j)] = matrix.node_ir[static_cast<size_t>(i)];
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(matrix.stiffness.nonZeros()));
  for (int col = 0; col < matrix.stiffness.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix.stiffness, col); it; ++it)
      trip.emplace_back(perm[static_cast<size_t>(it.row())], perm[static_cast<size_t>(it.col())], it.value());
  out.stiffness.resize(dim, dim);
  out.stiffness.setFromTriplets(trip.begin(), trip.end());
  return out;
}

void dump_matrix(const FiberMatrix& matrix, const std::string& matrix_path, const std::string& nodes_path) {
  std::FILE* f = std::fopen(matrix_path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + matrix_path);
  for (int col = 0; col < matrix.stiffness.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix.stiffness, col); it; ++it)
      std::fprintf(f, "%ld %ld %.17g\n", static_cast<long>(it.row()), static_cast<long>(it.col()), it.value());
  std::fclose(f);

  f = std::fopen(nodes_path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + nodes_path);
  std::fprintf(f, "index,x,z,volume\n");
  for (int i = 0; i < matrix.dimension(); ++i)
    std::fprintf(f, "%d,%.17g,%.17g,%.17g\n", i, matrix.node_x(i), matrix.node_z(i), matrix.volumes[i]);
  std::fclose(f);
}

}  // namespace magband
