// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// criterion fails.  Every reference number is a closed-form level or an
// independently computed bound; nothing is compared against stored output of
// this program.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "magband/dispersion.hpp"
#include "magband/oracle1d.hpp"
#include "magband/verify.hpp"

using namespace magband;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void expect(Outcome& o, bool cond, const std::string& what) {
  if (!cond) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + what;
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.8g", v);
  return buf;
}

SweepOptions opts(int levels, int resolution, int threads = 4) {
  SweepOptions o;
  o.levels = levels;
  o.resolution = resolution;
  o.threads = threads;
  return o;
}

DispersionTable run(const GeometryConfig& g, double field, const MomentumGrid& grid,
                    SweepOptions o) {
  PhysicalConfig phys;
  phys.field = field;
  return sweep(g, phys, grid, o);
}

Eigen::VectorXd error_estimate(const GeometryConfig& g, double field, double p, int levels,
                               SweepOptions o) {
  PhysicalConfig phys;
  phys.field = field;
  return discretization_error_estimate(g, phys, p, levels, o);
}

// 1. Decoupled double layer at high resolution: the eight lowest levels
//    reproduce the union of the two closed-layer ladders, not their sum.
Outcome criterion1() {
  Outcome o;
  auto start = std::chrono::steady_clock::now();
  auto geom = GeometryConfig::double_layer(Width::pi_multiple(1, 1), Width::pi_multiple(1, 2), 0.0);
  auto table = run(geom, 1.0, MomentumGrid::uniform(0.0, 0.0, 1), opts(8, 256));
  auto catalog = decoupled_double_levels(1.0, geom.d1, geom.d2, table.e_max);
  for (int k = 1; k <= 8; ++k) {
    double exact = catalog.level(k);
    double got = table.lambda(k - 1, 0);
    expect(o, std::abs(got - exact) <= 2e-3 * std::abs(exact),
           "level " + std::to_string(k) + ": " + fmt(got) + " vs " + fmt(exact));
  }
  expect(o, catalog.level(1) == 2.0 && catalog.level(2) == 4.0 && catalog.level(3) == 5.0 &&
                catalog.level(4) == 5.0 && catalog.level(5) == 6.0,
         "union catalog head is not {2,4,5,5,6}");
  expect(o, std::abs(table.lambda(0, 0) - 6.0) > 0.5,
         "ground level sits at the summed value 6.0");
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  expect(o, seconds <= 60.0, "runtime " + fmt(seconds) + " s exceeds 60 s");
  o.detail = "levels " + fmt(table.lambda(0, 0)) + ".." + fmt(table.lambda(7, 0)) + " in " +
             fmt(seconds) + " s" + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// 2. Observed Richardson order 2.0 +- 0.3 on the same configuration.
Outcome criterion2() {
  Outcome o;
  auto geom = GeometryConfig::double_layer(Width::pi_multiple(1, 1), Width::pi_multiple(1, 2), 0.0);
  auto grid = MomentumGrid::uniform(0.0, 0.0, 1);
  std::vector<Eigen::VectorXd> lam;
  for (int res : {64, 128, 256}) lam.push_back(run(geom, 1.0, grid, opts(3, res)).lambda.col(0));
  std::string orders;
  for (int k = 0; k < 3; ++k) {
    double num = lam[0](k) - lam[1](k), den = lam[1](k) - lam[2](k);
    double order = (num * den > 0.0) ? std::log2(num / den) : 0.0;
    orders += (k ? "," : "") + fmt(order);
    expect(o, order >= 1.7 && order <= 2.3, "level " + std::to_string(k + 1) + " order " + fmt(order));
  }
  if (o.pass) o.detail = "orders " + orders;
  return o;
}

// Shared table for criteria 3, 4: window layer, 41 momenta on [-12, 12].
const DispersionTable& window_table() {
  static DispersionTable table = run(GeometryConfig::neumann_window(Width::pi_multiple(1, 1), 1.0),
                                     1.0, MomentumGrid::uniform(-12.0, 12.0, 41), opts(5, 32));
  return table;
}

// 3. Closed-form two-sided bounds along the sweep, and the strict drop of the
//    ground level below the closed-layer bottom.
Outcome criterion3() {
  Outcome o;
  const auto& table = window_table();
  auto geom = table.geometry;
  Eigen::VectorXd err = error_estimate(geom, 1.0, 0.0, 5, opts(5, 32));
  auto lower_catalog = neumann_limit_levels(1.0, kPi, table.e_max + 5.0);
  auto upper_catalog = free_levels(1.0, kPi, table.e_max + 5.0);
  for (int j = 0; j < table.points(); ++j) {
    for (int k = 1; k <= 5; ++k) {
      double lam = table.lambda(k - 1, j);
      expect(o, lam >= lower_catalog.level(k) - 3.0 * err(k - 1),
             "k=" + std::to_string(k) + " p=" + fmt(table.p[static_cast<size_t>(j)]) +
                 " below the open-limit bound");
      expect(o, lam <= upper_catalog.level(k) + 5.0 * err(k - 1),
             "k=" + std::to_string(k) + " p=" + fmt(table.p[static_cast<size_t>(j)]) +
                 " above the closed-layer bound");
    }
  }
  int j0 = MomentumGrid{table.p}.find(0.0);
  double drop = upper_catalog.level(1) - table.lambda(0, j0);
  expect(o, drop > 10.0 * err(0),
         "ground drop " + fmt(drop) + " not > 10x error " + fmt(err(0)));
  if (o.pass)
    o.detail = "lambda_1(0)=" + fmt(table.lambda(0, j0)) + ", drop " + fmt(drop) + " vs err " +
               fmt(err(0));
  return o;
}

// 4. Large-momentum asymptote: the curves return to the closed-layer ladder.
Outcome criterion4() {
  Outcome o;
  const auto& table = window_table();
  auto catalog = free_levels(1.0, kPi, table.e_max + 5.0);
  MomentumGrid grid{table.p};
  int jm12 = grid.find(-12.0), jm6 = grid.find(-6.0), jp6 = grid.find(6.0), jp12 = grid.find(12.0);
  for (int j : {jm12, jm6, jp6, jp12}) expect(o, j >= 0, "momentum point missing from the grid");
  if (!o.pass) return o;
  for (int j : {jm12, jp12})
    expect(o, std::abs(table.lambda(0, j) - 2.0) <= 1e-2,
           "lambda_1(" + fmt(table.p[static_cast<size_t>(j)]) + ") = " + fmt(table.lambda(0, j)));
  for (int k = 1; k <= 3; ++k) {
    double ref = catalog.level(k);
    double dev12 = std::max(std::abs(table.lambda(k - 1, jm12) - ref),
                            std::abs(table.lambda(k - 1, jp12) - ref));
    double dev6 = std::min(std::abs(table.lambda(k - 1, jm6) - ref),
                           std::abs(table.lambda(k - 1, jp6) - ref));
    expect(o, dev12 < dev6, "k=" + std::to_string(k) + ": dev(12)=" + fmt(dev12) +
                                " !< dev(6)=" + fmt(dev6));
    if (k == 1) o.detail = "dev(6)=" + fmt(dev6) + " dev(12)=" + fmt(dev12);
  }
  return o;
}

// 5. Flat-band dichotomy: commensurate widths produce a numerically flat band
//    at the shared level; the incommensurate variant leaves every band moving.
Outcome criterion5() {
  Outcome o;
  auto grid = MomentumGrid::uniform(-4.0, 4.0, 9);

  auto commensurate = GeometryConfig::double_layer(Width::rational(2, 1), Width::rational(1, 1), 1.0);
  // levels 10 so the flat value stays inside the table at every momentum even
  // though dispersing bands cross it (its sorted rank migrates with p)
  auto table = run(commensurate, 1.0, grid, opts(10, 32));
  double target = flat_band_value(0, 2, 1, 1.0, commensurate.d1, commensurate.d2);
  auto flats = flat_values(table, 1e-7);
  bool found = false;
  double nearest = 1e300;
  for (double v : flats) {
    nearest = std::min(nearest, std::abs(v - target));
    if (std::abs(v - target) <= 2e-3 * target) found = true;
  }
  expect(o, found, "no flat band within 2e-3 of " + fmt(target) +
                       (flats.empty() ? " (none flat)" : " (nearest offset " + fmt(nearest) + ")"));

  auto incommensurate =
      GeometryConfig::double_layer(Width::rational(2, 1), Width::rational(1279, 1000), 1.0);
  auto table2 = run(incommensurate, 1.0, grid, opts(8, 32));
  double min_var = 1e300;
  for (int k = 0; k < 8; ++k) {
    double lo = table2.lambda.row(k).minCoeff(), hi = table2.lambda.row(k).maxCoeff();
    min_var = std::min(min_var, (hi - lo) / std::max(std::abs(hi), 1e-300));
  }
  expect(o, min_var >= 1e-4, "incommensurate min variation " + fmt(min_var) + " < 1e-4");
  expect(o, flat_values(table2, 1e-7).empty(), "incommensurate widths produced a flat value");
  if (o.pass)
    o.detail = "flat at " + fmt(target) + " (" + std::to_string(flats.size()) +
               " flat bands); incommensurate min variation " + fmt(min_var);
  return o;
}

// 6. Equal layers decompose: the double-layer table equals the merge of the
//    window half-layer table and the closed half-layer table, entrywise.
Outcome criterion6() {
  Outcome o;
  auto grid = MomentumGrid::uniform(-2.0, 2.0, 5);
  SweepOptions shared = opts(8, 32);
  shared.e_max = 14.0;
  shared.symmetric_x = true;
  auto full = run(GeometryConfig::double_layer(Width::pi_multiple(1, 1), Width::pi_multiple(1, 1), 1.0),
                  1.0, grid, shared);
  SweepOptions half = shared;
  half.levels = 6;
  auto open_half = run(GeometryConfig::neumann_window(Width::pi_multiple(1, 1), 1.0), 1.0, grid, half);
  auto closed_half = run(GeometryConfig::neumann_window(Width::pi_multiple(1, 1), 0.0), 1.0, grid, half);
  double worst = 0.0;
  for (int j = 0; j < grid.find(2.0) + 1; ++j) {
    std::vector<double> merged;
    for (int k = 0; k < 6; ++k) {
      merged.push_back(open_half.lambda(k, j));
      merged.push_back(closed_half.lambda(k, j));
    }
    std::sort(merged.begin(), merged.end());
    for (int k = 0; k < 8; ++k)
      worst = std::max(worst, std::abs(full.lambda(k, j) - merged[static_cast<size_t>(k)]));
  }
  expect(o, worst <= 1e-8, "entrywise mismatch " + fmt(worst) + " > 1e-8");
  o.detail = "max entrywise difference " + fmt(worst);
  return o;
}

// 7. One-sided barrier: monotone curves, the two ground-band edges, and the
//    open gap between the lowest two bands.
Outcome criterion7() {
  Outcome o;
  auto geom = GeometryConfig::one_sided(Width::pi_multiple(3, 5), Width::pi_multiple(2, 5));
  auto table = run(geom, 4.0, MomentumGrid::uniform(-14.0, 14.0, 29), opts(2, 64));
  Eigen::VectorXd err = error_estimate(geom, 4.0, 0.0, 2, opts(2, 64));
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j + 1 < table.points(); ++j)
      expect(o, table.lambda(k, j + 1) >= table.lambda(k, j) - 3.0 * err(k),
             "k=" + std::to_string(k + 1) + " decreases at p=" +
                 fmt(table.p[static_cast<size_t>(j)]));
  double left = table.lambda(0, 0), right = table.lambda(0, table.points() - 1);
  double merged = merged_free_level(0, 1, 4.0, geom.upper_width(), geom.lower_width());
  double split = 4.0 + std::pow(1.0 / 0.6, 2);
  expect(o, std::abs(left - merged) <= 2e-2,
         "lambda_1(-14)=" + fmt(left) + " vs " + fmt(merged));
  expect(o, std::abs(right - split) <= 2e-2, "lambda_1(+14)=" + fmt(right) + " vs " + fmt(split));
  double band1_top = table.lambda.row(0).maxCoeff();
  double band2_bottom = table.lambda.row(1).minCoeff();
  expect(o, band1_top < 7.0 && band2_bottom > 7.8,
         "gap (" + fmt(band1_top) + "," + fmt(band2_bottom) + ") does not contain (7.0, 7.8)");
  if (o.pass)
    o.detail = "edges " + fmt(left) + " -> " + fmt(right) + ", gap (" + fmt(band1_top) + ", " +
               fmt(band2_bottom) + ")";
  return o;
}

// 8. Independent one-dimensional cut bounds bracket the computed values.
Outcome criterion8() {
  Outcome o;
  auto geom = GeometryConfig::neumann_window(Width::pi_multiple(1, 1), 1.0);
  const auto& table = window_table();
  MomentumGrid grid{table.p};
  Eigen::VectorXd err = error_estimate(geom, 1.0, 0.0, 3, opts(3, 32))
                            .cwiseMax(error_estimate(geom, 1.0, 6.0, 3, opts(3, 32)))
                            .cwiseMax(error_estimate(geom, 1.0, 12.0, 3, opts(3, 32)));
  double tightest = 1e300;
  for (double p : {0.0, 3.0, 6.0, 12.0}) {
    int j = grid.find(p);
    expect(o, j >= 0, "momentum point missing");
    if (j < 0) continue;
    for (int k = 1; k <= 3; ++k) {
      auto bb = oracle1d::bracket_bounds(geom, 1.0, k, p);
      double lam = table.lambda(k - 1, j);
      // discretization allowance: the discrete value sits below the true one
      // by about 4x the Richardson estimate when the bracket is tight
      expect(o, lam >= bb.lower - 10.0 * err(k - 1),
             "k=" + std::to_string(k) + " p=" + fmt(p) + ": " + fmt(lam) + " < " + fmt(bb.lower));
      expect(o, lam <= bb.upper + 10.0 * err(k - 1),
             "k=" + std::to_string(k) + " p=" + fmt(p) + ": " + fmt(lam) + " > " + fmt(bb.upper));
      tightest = std::min(tightest, bb.upper - bb.lower);
    }
  }
  if (o.pass) o.detail = "tightest bracket width " + fmt(tightest);
  return o;
}

// 9. Mirror symmetry of eigenvectors and the derivative identity for the
//    group velocity.
Outcome criterion9() {
  Outcome o;
  auto geom = GeometryConfig::neumann_window(Width::pi_multiple(1, 1), 1.0);
  double worst_mirror = 0.0, worst_fh = 0.0;
  for (double p : {1.0, 3.0, 6.0}) {
    SweepOptions so = opts(1, 32, 1);
    so.store_vectors = true;
    so.symmetric_x = true;
    double dp = 0.01;
    auto table = run(geom, 1.0, MomentumGrid{{-p, p - dp, p, p + dp}}, so);

    const FiberSolve& plus = table.fiber_at(p);
    const FiberSolve& minus = table.fiber_at(-p);
    Eigen::VectorXd phi_p = plus.eig.vectors.col(0);
    Eigen::VectorXd phi_m = Eigen::VectorXd::Zero(minus.eig.vectors.rows());
    if (phi_m.size() != phi_p.size()) {
      expect(o, false, "grid sizes differ at +-" + fmt(p));
      continue;
    }
    // reflect by matching node indices through the sign-symmetric grid
    const auto& gp = plus.matrix;
    const auto& gm = minus.matrix;
    std::vector<int> map(static_cast<size_t>(phi_p.size()), -1);
    {
      // nodes are ordered x-major with identical row lists; reflected column
      // index is nx - ix on a symmetric grid
      int nx = gp.grid.nx;
      std::vector<std::vector<int>> by_col(static_cast<size_t>(nx) + 1);
      for (int i = 0; i < phi_p.size(); ++i)
        by_col[static_cast<size_t>(gm.node_ix[static_cast<size_t>(i)])].push_back(i);
      for (int i = 0; i < phi_p.size(); ++i) {
        int rx = nx - gp.node_ix[static_cast<size_t>(i)];
        int found = -1;
        for (int cand : by_col[static_cast<size_t>(rx)])
          if (gm.node_ir[static_cast<size_t>(cand)] == gp.node_ir[static_cast<size_t>(i)])
            found = cand;
        map[static_cast<size_t>(i)] = found;
      }
    }
    bool mapped = true;
    for (int v : map) mapped = mapped && v >= 0;
    expect(o, mapped, "reflection map incomplete at p=" + fmt(p));
    if (!mapped) continue;
    for (int i = 0; i < phi_p.size(); ++i)
      phi_m(i) = minus.eig.vectors(map[static_cast<size_t>(i)], 0);
    double sign = (phi_p.dot(phi_m) >= 0.0) ? 1.0 : -1.0;
    double diff = (phi_p - sign * phi_m).cwiseAbs().maxCoeff();
    worst_mirror = std::max(worst_mirror, diff);
    expect(o, diff <= 1e-6, "mirror mismatch " + fmt(diff) + " at p=" + fmt(p));

    auto prof = current_profile(table, 1, p);
    double scale = std::max(1.0, std::abs(prof.group_velocity_fd));
    double fh_diff = std::abs(prof.group_velocity_fd - prof.group_velocity_fh);
    worst_fh = std::max(worst_fh, fh_diff / scale);
    expect(o, fh_diff <= 1e-3 * scale,
           "velocity mismatch " + fmt(fh_diff) + " at p=" + fmt(p) + " (fd=" +
               fmt(prof.group_velocity_fd) + ", fh=" + fmt(prof.group_velocity_fh) + ")");
  }
  if (o.pass)
    o.detail = "max mirror diff " + fmt(worst_mirror) + ", max velocity diff " + fmt(worst_fh);
  return o;
}

// 10. The ground level strictly decreases as the window widens.
Outcome criterion10() {
  Outcome o;
  std::vector<double> lam, errs;
  for (double a : {0.0, kPi / 4.0, kPi / 2.0, kPi}) {
    auto geom = GeometryConfig::neumann_window(Width::pi_multiple(1, 1), a);
    lam.push_back(run(geom, 1.0, MomentumGrid::uniform(0.0, 0.0, 1), opts(1, 32)).lambda(0, 0));
    errs.push_back(error_estimate(geom, 1.0, 0.0, 1, opts(1, 32))(0));
  }
  std::string seq;
  for (size_t i = 0; i < lam.size(); ++i) seq += (i ? " > " : "") + fmt(lam[i]);
  for (size_t i = 0; i + 1 < lam.size(); ++i) {
    double drop = lam[i] - lam[i + 1];
    double err = 3.0 * std::max(errs[i], errs[i + 1]);
    expect(o, drop > err, "drop " + fmt(drop) + " at step " + std::to_string(i) +
                              " not > 3x error " + fmt(err));
  }
  o.detail = seq;
  return o;
}

// 11. The full self-check suite passes through the command line interface,
//     and the static coverage list carries every registered claim.
Outcome criterion11() {
  Outcome o;
  std::string cmd = std::string(MAGBAND_CLI_PATH) +
                    " verify --suite all --threads 4 --out /tmp/magband_acceptance_verify.json"
                    " >/dev/null 2>/tmp/magband_acceptance_verify.log";
  int status = std::system(cmd.c_str());
  int code = (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : 128;
  expect(o, code == 0, "verify --suite all exited with code " + std::to_string(code));
  auto all = verify::coverage("all");
  for (const char* id :
       {"window.bounds", "window.strict", "window.asymptote", "window.prop.i", "window.prop.ii",
        "window.prop.iii", "window.prop.iv", "window.prop.v", "window.prop.vi", "symmetric.i",
        "symmetric.ii", "symmetric.iii", "symmetric.iv", "asymmetric.i", "asymmetric.ii",
        "asymmetric.iii", "asymmetric.iv", "asymmetric.v", "onesided.i", "onesided.ii",
        "onesided.iii"}) {
    expect(o, std::find(all.begin(), all.end(), id) != all.end(),
           std::string("coverage misses ") + id);
  }
  if (o.pass) o.detail = std::to_string(all.size()) + " claims covered, suite exit 0";
  return o;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    std::function<Outcome()> fn;
  };
  const std::vector<Entry> criteria = {
      {"decoupled union spectrum at high resolution", criterion1},
      {"second-order convergence under refinement", criterion2},
      {"two-sided level bounds and the strict window drop", criterion3},
      {"large-momentum return to the closed-layer ladder", criterion4},
      {"flat-band dichotomy for commensurate widths", criterion5},
      {"equal-layer spectral decomposition", criterion6},
      {"one-sided barrier edges, monotonicity and gap", criterion7},
      {"independent one-dimensional bracketing", criterion8},
      {"mirror eigenvectors and group-velocity identity", criterion9},
      {"monotone ground level in the window width", criterion10},
      {"self-check suite integrity", criterion11},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %2zu [%s] %s%s%s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].name,
                o.detail.empty() ? "" : " -- ", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  if (failures) std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
