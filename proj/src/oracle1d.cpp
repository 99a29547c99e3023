#include "magband/oracle1d.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace magband {
namespace oracle1d {

namespace {

constexpr double kPi = std::numbers::pi;

// Eigenvalues of the control-volume discretization of -u'' + B^2 u^2 on
// (u_lo, wall), Dirichlet at u_lo, chosen condition at the wall.
std::vector<double> cut_eigenvalues(double field, double u_lo, double wall, WallBc bc, int cells, int count) {
  const double h = (wall - u_lo) / cells;
  const int n = bc == WallBc::Dirichlet ? cells - 1 : cells;
  Eigen::VectorXd diag(n), sub(n - 1), vol(n);
  for (int i = 0; i < n; ++i) {
    double u = u_lo + (i + 1) * h;
    bool neumann_end = bc == WallBc::Neumann && i == n - 1;
    double height = neumann_end ? 0.5 * h : h;
    double stiff = neumann_end ? 1.0 / h : 2.0 / h;
    diag[i] = (stiff + field * field * u * u * height) / height;
    if (i + 1 < n) sub[i] = -1.0 / h / std::sqrt(height * (i + 2 == n && bc == WallBc::Neumann ? 0.5 * h : h));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  std::vector<double> out(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<size_t>(i)] = es.eigenvalues()[i];
  return out;
}

}  // namespace

std::vector<TransverseMode> interval_modes(double d, IntervalBc bc, int m_max) {
  if (d <= 0.0) throw std::invalid_argument("interval width must be positive");
  std::vector<TransverseMode> modes;
  modes.reserve(static_cast<size_t>(m_max));
  for (int j = 1; j <= m_max; ++j) {
    TransverseMode mode;
    mode.width = d;
    mode.bc = bc;
    if (bc == IntervalBc::DD) {
      mode.m = j;
      mode.energy = std::pow(kPi * j / d, 2);
    } else {
      mode.m = 2 * j - 1;  // half-wave convention: odd indices only
      mode.energy = std::pow(kPi * (2 * j - 1) / (2.0 * d), 2);
    }
    modes.push_back(mode);
  }
  return modes;
}

std::vector<double> oscillator_cut(double field, double wall, WallBc bc, int count) {
  if (field <= 0.0) throw std::invalid_argument("field strength B must be positive");
  if (count < 1 || count > 20) throw std::invalid_argument("oscillator_cut supports 1..20 states");

  // The cuts are pure functions of (field, wall, bc); composing bracket
  // bounds re-requests the same spectra many times, so memoize them.
  struct Key {
    double field, wall;
    WallBc bc;
    bool operator<(const Key& o) const {
      if (field != o.field) return field < o.field;
      if (wall != o.wall) return wall < o.wall;
      return bc < o.bc;
    }
  };
  static std::map<Key, std::vector<double>> cache;
  static std::mutex cache_mutex;
  const Key key{field, wall, bc};
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end() && static_cast<int>(it->second.size()) >= count)
      return {it->second.begin(), it->second.begin() + count};
  }

  // Truncation: the relevant states live between the wall and the classical
  // turning point of the highest requested level.
  double e_ref = field * (2.0 * count + 3.0);
  if (wall < 0.0) e_ref = std::max(e_ref, field * field * wall * wall + 4.0 * field * count);
  double u_lo = std::min(wall, 0.0) - std::sqrt(e_ref) / field - 6.0 / std::sqrt(field);

  const double h = 1.0 / (128.0 * std::sqrt(field));
  int cells = std::max(64, static_cast<int>(std::ceil((wall - u_lo) / h)));
  auto coarse = cut_eigenvalues(field, wall - cells * ((wall - u_lo) / cells), wall, bc, cells, count);
  auto fine = cut_eigenvalues(field, wall - cells * ((wall - u_lo) / cells), wall, bc, 2 * cells, count);
  std::vector<double> out(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    double c = coarse[static_cast<size_t>(i)], f = fine[static_cast<size_t>(i)];
    if (std::abs(f - c) > 1e-3 * (1.0 + std::abs(f)))
      throw std::runtime_error("oscillator_cut did not converge under refinement");
    out[static_cast<size_t>(i)] = (4.0 * f - c) / 3.0;  // second-order extrapolation
  }
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto& slot = cache[key];
    if (static_cast<int>(slot.size()) < count) slot = out;
  }
  return out;
}

BracketBound bracket_bounds(const GeometryConfig& geom, double field, int k, double p) {
  if (geom.kind != GeometryKind::NeumannWindowLayer)
    throw std::invalid_argument("bracket_bounds applies to the Neumann-window layer");
  if (k < 1) throw std::invalid_argument("level index k must be >= 1");

  BracketBound bb;
  bb.k = k;
  bb.p = p;

  const double d = geom.d1.value();
  if (geom.a == 0.0) {  // no window: both cuts collapse to the free spectrum
    double v = free_levels(field, d, free_level(k, k, field, d) + 1.0).level(k);
    bb.lower = bb.upper = v;
    return bb;
  }

  const double wall = p / field - geom.a;  // cut x = -a in oscillator coordinates
  const int cnt = std::min(20, k + 2);
  const int m_max = k + 3;

  auto osc = [&](double w, WallBc bc) { return oscillator_cut(field, w, bc, cnt); };
  auto modes = [&](IntervalBc bc) { return interval_modes(d, bc, m_max); };

  auto kth_union = [&](const std::vector<double>& osc_a, const std::vector<TransverseMode>& tm_a,
                       const std::vector<double>& osc_b, const std::vector<TransverseMode>& tm_b) {
    std::vector<double> all;
    for (double e : osc_a)
      for (const auto& t : tm_a) all.push_back(e + t.energy);
    for (double e : osc_b)
      for (const auto& t : tm_b) all.push_back(e + t.energy);
    std::sort(all.begin(), all.end());
    return all[static_cast<size_t>(k - 1)];
  };

  // Left part (no window): oscillator on u < wall, DD transverse modes.
  // Right part: u > wall, mirror-equivalent to u < -wall.  For the lower
  // bound the whole top boundary is relaxed to Neumann (DN modes); for the
  // upper bound the window is closed (DD modes).
  bb.lower = kth_union(osc(wall, WallBc::Neumann), modes(IntervalBc::DD),
                       osc(-wall, WallBc::Neumann), modes(IntervalBc::DN));
  bb.upper = kth_union(osc(wall, WallBc::Dirichlet), modes(IntervalBc::DD),
                       osc(-wall, WallBc::Dirichlet), modes(IntervalBc::DD));
  return bb;
}

}  // namespace oracle1d
}  // namespace magband
