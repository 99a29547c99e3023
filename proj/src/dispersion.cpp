#include "magband/dispersion.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <stdexcept>

namespace magband {

namespace {

double auto_e_max(const GeometryConfig& geom, const PhysicalConfig& phys, int levels) {
  // The asymptote family bounds every band from above; two spare levels give
  // the truncation rule room.
  double probe = phys.field * 3.0 + 10.0;
  for (;;) {
    LevelCatalog cat = asymptote_catalog(geom, phys.field, probe);
    if (cat.size() >= levels + 2) return cat.level(levels + 2) + 1.0;
    probe *= 2.0;
  }
}

FiberSolve solve_fiber(const GeometryConfig& geom, const PhysicalConfig& phys, double p,
                       double e_max, const SweepOptions& opts) {
  FiberProblem prob{geom, phys, p, e_max};
  GridOptions gopts{opts.resolution, opts.margin, opts.symmetric_x};
  GridSpec grid = build_grid(prob, gopts);
  FiberSolve fs;
  fs.p = p;
  fs.matrix = assemble(prob, grid);
  EigenRequest req;
  req.count = opts.levels;
  req.tol = opts.tol;
  req.shift = spectral_floor(geom, phys.field) - 1.0;
  try {
    fs.eig = smallest_eigenpairs(fs.matrix, req);
  } catch (const SolveError& err) {
    throw SolveError(std::string(err.what()) + " at p = " + std::to_string(p), err.partial);
  }
  if (!opts.store_vectors) {
    fs.eig.vectors.resize(0, 0);
    fs.matrix.stiffness.resize(0, 0);
  }
  return fs;
}

}  // namespace

MomentumGrid MomentumGrid::uniform(double p_min, double p_max, int points) {
  if (points < 1 || (points > 1 && p_max <= p_min))
    throw std::invalid_argument("momentum grid needs p_max > p_min and points >= 1");
  MomentumGrid g;
  g.values.reserve(static_cast<size_t>(points));
  for (int i = 0; i < points; ++i)
    g.values.push_back(points == 1 ? p_min : p_min + (p_max - p_min) * i / (points - 1));
  return g;
}

void MomentumGrid::validate() const {
  if (values.empty()) throw std::invalid_argument("momentum grid is empty");
  for (size_t i = 1; i < values.size(); ++i)
    if (values[i] <= values[i - 1]) throw std::invalid_argument("momentum grid must be strictly increasing");
}

int MomentumGrid::find(double p) const {
  for (size_t i = 0; i < values.size(); ++i)
    if (std::abs(values[i] - p) <= 1e-12) return static_cast<int>(i);
  return -1;
}

const FiberSolve& DispersionTable::fiber_at(double p_value) const {
  for (const auto& f : fibers)
    if (f && std::abs(f->p - p_value) <= 1e-12) return *f;
  throw std::invalid_argument("no stored fiber at the requested momentum");
}

DispersionTable sweep(const GeometryConfig& geometry, const PhysicalConfig& physics,
                      const MomentumGrid& pgrid, const SweepOptions& options) {
  geometry.validate();
  physics.validate();
  pgrid.validate();
  if (options.levels < 1) throw std::invalid_argument("sweep needs at least one level");

  DispersionTable table;
  table.geometry = geometry;
  table.physics = physics;
  table.options = options;
  table.e_max = options.e_max > 0.0 ? options.e_max : auto_e_max(geometry, physics, options.levels);
  table.p = pgrid.values;
  const int np = static_cast<int>(pgrid.values.size());
  table.lambda.resize(options.levels, np);
  table.residual.resize(options.levels, np);
  table.fibers.resize(static_cast<size_t>(np));

  const int workers = std::max(1, options.threads);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      int j = next.fetch_add(1);
      if (j >= np) return;
      FiberSolve fs = solve_fiber(geometry, physics, pgrid.values[static_cast<size_t>(j)], table.e_max, options);
      table.lambda.col(j) = fs.eig.values.head(options.levels);
      table.residual.col(j) = fs.eig.residuals.head(options.levels);
      if (options.store_vectors)
        table.fibers[static_cast<size_t>(j)] = std::make_shared<FiberSolve>(std::move(fs));
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::future<void>> futs;
    for (int t = 0; t < workers; ++t) futs.push_back(std::async(std::launch::async, worker));
    for (auto& f : futs) f.get();  // rethrows solver errors with their (k, p) context
  }
  return table;
}

BandSummary band_edges(const DispersionTable& table, const SummaryOptions& options) {
  BandSummary s;
  s.geometry = table.geometry;
  s.physics = table.physics;
  s.match_tol = options.match_tol;
  s.flat_tol = options.flat_rel_tol;

  LevelCatalog upper = asymptote_catalog(table.geometry, table.physics.field, table.e_max + 1.0);
  std::optional<LevelCatalog> lower;
  if (table.geometry.kind == GeometryKind::OneSidedBarrier)
    lower = merged_free_levels(table.physics.field, table.geometry.d1.value(), table.geometry.d2.value(),
                               table.e_max + 1.0);

  for (int k = 0; k < table.levels(); ++k) {
    Band b;
    b.k = k + 1;
    b.min = table.lambda(k, 0);
    b.max = table.lambda(k, 0);
    b.argmin_p = table.p[0];
    for (int j = 0; j < table.points(); ++j) {
      double v = table.lambda(k, j);
      if (v < b.min) {
        b.min = v;
        b.argmin_p = table.p[static_cast<size_t>(j)];
      }
      b.max = std::max(b.max, v);
    }
    b.variation = (b.max - b.min) / std::max(std::abs(b.max), 1e-300);
    b.flat = b.variation <= options.flat_rel_tol;
    if (const LevelEntry* e = upper.match(b.max, options.match_tol)) b.upper_label = e->indices.front();
    if (lower)
      if (const LevelEntry* e = lower->match(b.min, options.match_tol)) b.lower_label = e->indices.front();
    s.bands.push_back(b);
  }
  s.gaps = detect_gaps(s, table.e_max);
  return s;
}

std::vector<int> detect_flat(const DispersionTable& table, double rel_tol) {
  std::vector<int> flat;
  for (int k = 0; k < table.levels(); ++k) {
    double lo = table.lambda.row(k).minCoeff();
    double hi = table.lambda.row(k).maxCoeff();
    if ((hi - lo) / std::max(std::abs(hi), 1e-300) <= rel_tol) flat.push_back(k + 1);
  }
  return flat;
}

std::vector<double> flat_values(const DispersionTable& table, double rel_tol) {
  std::vector<double> out;
  const int levels = table.levels();
  const Eigen::Index cols = table.lambda.cols();
  if (cols == 0) return out;
  const Eigen::Index mid = cols / 2;
  for (int k = 0; k < levels; ++k) {
    const double v = table.lambda(k, mid);
    const double tol = rel_tol * std::max(std::abs(v), 1.0);
    bool everywhere = true;
    for (Eigen::Index j = 0; j < cols && everywhere; ++j) {
      bool hit = false;
      for (int i = 0; i < levels && !hit; ++i) hit = std::abs(table.lambda(i, j) - v) <= tol;
      everywhere = hit;
    }
    if (!everywhere) continue;
    bool dup = false;
    for (double w : out) dup = dup || std::abs(w - v) <= tol;
    if (!dup) out.push_back(v);
  }
  return out;
}

std::vector<GapInterval> detect_gaps(const BandSummary& summary, double e_max) {
  // Merge band hulls, report uncovered open intervals between them.
  std::vector<std::pair<double, double>> hulls;
  for (const auto& b : summary.bands) hulls.push_back({b.min, b.max});
  std::sort(hulls.begin(), hulls.end());
  std::vector<GapInterval> gaps;
  double covered_to = -1e300;
  for (const auto& [lo, hi] : hulls) {
    if (covered_to > -1e299 && lo > covered_to && covered_to < e_max)
      gaps.push_back({covered_to, std::min(lo, e_max)});
    covered_to = std::max(covered_to, hi);
  }
  return gaps;
}

CurrentProfile current_profile(const DispersionTable& table, int k, double p) {
  if (k < 1 || k > table.levels()) throw std::invalid_argument("band index out of range");
  MomentumGrid g{table.p};
  int j = g.find(p);
  if (j < 0) throw std::invalid_argument("momentum not on the sweep grid");
  const FiberSolve& fs = table.fiber_at(p);
  if (fs.eig.vectors.cols() < k) throw std::invalid_argument("eigenvector not stored for this band");

  CurrentProfile prof;
  prof.k = k;
  prof.p = p;
  const Eigen::VectorXd phi = fs.eig.vectors.col(k - 1);
  const double b = table.physics.field;
  const int dim = fs.matrix.dimension();
  prof.x.resize(static_cast<size_t>(dim));
  prof.z.resize(static_cast<size_t>(dim));
  prof.paper_current.resize(static_cast<size_t>(dim));
  prof.mechanical_current.resize(static_cast<size_t>(dim));
  double fh = 0.0;
  for (int i = 0; i < dim; ++i) {
    double x = fs.matrix.node_x(i);
    double density = phi[i] * phi[i];
    prof.x[static_cast<size_t>(i)] = x;
    prof.z[static_cast<size_t>(i)] = fs.matrix.node_z(i);
    prof.paper_current[static_cast<size_t>(i)] = p * density;
    prof.mechanical_current[static_cast<size_t>(i)] = 2.0 * (p + b * x) * density;
    double weighted = fs.matrix.volumes[i] * density;
    fh += 2.0 * (p + b * x) * weighted;
    prof.total_mechanical += 2.0 * (p + b * x) * weighted;
  }
  prof.group_velocity_fh = fh;  // Feynman-Hellmann: d lambda / dp = <phi, 2(p+Bx) phi>

  // Central difference over adjacent momenta where available.
  int jl = std::max(0, j - 1), jr = std::min(table.points() - 1, j + 1);
  if (jr > jl)
    prof.group_velocity_fd = (table.lambda(k - 1, jr) - table.lambda(k - 1, jl)) /
                             (table.p[static_cast<size_t>(jr)] - table.p[static_cast<size_t>(jl)]);
  else
    prof.group_velocity_fd = prof.group_velocity_fh;

  // Degeneracy makes the rank-labeled derivative unreliable.
  double lam = table.lambda(k - 1, j);
  if ((k > 1 && std::abs(table.lambda(k - 2, j) - lam) < 1e-8) ||
      (k < table.levels() && std::abs(table.lambda(k, j) - lam) < 1e-8))
    prof.velocity_reliable = false;
  return prof;
}

Eigen::VectorXd discretization_error_estimate(const GeometryConfig& geometry,
                                              const PhysicalConfig& physics, double p,
                                              int levels, const SweepOptions& options) {
  SweepOptions coarse = options;
  coarse.levels = levels;
  coarse.store_vectors = false;
  SweepOptions fine = coarse;
  fine.resolution = 2 * coarse.resolution;
  double e_max = coarse.e_max > 0.0 ? coarse.e_max : auto_e_max(geometry, physics, levels);
  FiberSolve a = solve_fiber(geometry, physics, p, e_max, coarse);
  FiberSolve b = solve_fiber(geometry, physics, p, e_max, fine);
  return (a.eig.values.head(levels) - b.eig.values.head(levels)).cwiseAbs() / 3.0;
}

}  // namespace magband
