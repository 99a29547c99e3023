#include "magband/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace magband {

namespace {

constexpr double kPi = std::numbers::pi;

// Absolute tolerance for merging numerically coincident analytic levels.
// Rational relations involving the (floating) field B are only detected as
// coincidences at this scale.
constexpr double kMergeTol = 1e-9;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool index_less(const ModeIndex& a, const ModeIndex& b) {
  if (a.n != b.n) return a.n < b.n;
  if (a.m != b.m) return a.m < b.m;
  return a.layer < b.layer;
}

LevelCatalog build_catalog(CatalogKind kind, double e_max, std::vector<std::pair<double, ModeIndex>> raw) {
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return index_less(a.second, b.second);
  });
  LevelCatalog cat;
  cat.kind = kind;
  cat.e_max = e_max;
  int k = 0;
  for (auto& [value, idx] : raw) {
    if (cat.entries.empty() || value - cat.entries.back().value > kMergeTol) {
      cat.entries.push_back(LevelEntry{value, {}});
    }
    idx.k = ++k;
    cat.entries.back().indices.push_back(idx);
  }
  if (cat.entries.empty()) throw std::invalid_argument("energy cutoff below the ground level: empty catalog");
  return cat;
}

}  // namespace

void PhysicalConfig::validate() const {
  require(field > 0.0, "field strength B must be positive");
}

void Width::validate(const char* name) const {
  if (num <= 0 || den <= 0 || scale <= 0.0)
    throw std::invalid_argument(std::string("width ") + name + " must be positive (num, den, scale > 0)");
}

Width Width::pi_multiple(long long num, long long den) {
  return Width{num, den, kPi, "pi"};
}

std::string to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::NeumannWindowLayer: return "neumann_window_layer";
    case GeometryKind::DoubleLayer: return "double_layer";
    case GeometryKind::OneSidedBarrier: return "one_sided_barrier";
  }
  return "unknown";
}

void GeometryConfig::validate() const {
  d1.validate("d1");
  if (kind != GeometryKind::NeumannWindowLayer) d2.validate("d2");
  if (kind == GeometryKind::OneSidedBarrier) {
    require(a == 0.0, "one-sided geometry has no window parameter a");
  } else {
    require(a >= 0.0, "window half width a must be nonnegative");
  }
}

double GeometryConfig::total_width() const {
  return kind == GeometryKind::NeumannWindowLayer ? d1.value() : d1.value() + d2.value();
}

GeometryConfig GeometryConfig::neumann_window(Width d, double a) {
  GeometryConfig g;
  g.kind = GeometryKind::NeumannWindowLayer;
  g.d1 = std::move(d);
  g.a = a;
  g.validate();
  return g;
}

GeometryConfig GeometryConfig::double_layer(Width d1, Width d2, double a) {
  GeometryConfig g;
  g.kind = GeometryKind::DoubleLayer;
  g.d1 = std::move(d1);
  g.d2 = std::move(d2);
  g.a = a;
  g.validate();
  return g;
}

GeometryConfig GeometryConfig::one_sided(Width d1, Width d2) {
  GeometryConfig g;
  g.kind = GeometryKind::OneSidedBarrier;
  g.d1 = std::move(d1);
  g.d2 = std::move(d2);
  g.validate();
  return g;
}

double LevelCatalog::level(int k) const {
  require(k >= 1, "level rank k must be >= 1");
  int seen = 0;
  for (const auto& e : entries) {
    seen += e.multiplicity();
    if (k <= seen) return e.value;
  }
  throw std::invalid_argument("level rank k beyond catalog cutoff");
}

const ModeIndex& LevelCatalog::label(int k) const {
  require(k >= 1, "level rank k must be >= 1");
  int seen = 0;
  for (const auto& e : entries) {
    if (k <= seen + e.multiplicity()) return e.indices[static_cast<size_t>(k - seen - 1)];
    seen += e.multiplicity();
  }
  throw std::invalid_argument("level rank k beyond catalog cutoff");
}

int LevelCatalog::size() const {
  int total = 0;
  for (const auto& e : entries) total += e.multiplicity();
  return total;
}

const LevelEntry* LevelCatalog::match(double value, double tol) const {
  const LevelEntry* best = nullptr;
  double best_dist = tol;
  for (const auto& e : entries) {
    double dist = std::abs(e.value - value);
    if (dist <= best_dist) {
      best = &e;
      best_dist = dist;
    }
  }
  return best;
}

double free_level(int n, int m, double field, double d) {
  require(n >= 0, "Landau index n must be >= 0");
  require(m >= 1, "transverse index m must be >= 1");
  require(field > 0.0, "field strength B must be positive");
  require(d > 0.0, "width d must be positive");
  double t = kPi * m / d;
  return field * (2 * n + 1) + t * t;
}

double neumann_limit_level(int n, int m, double field, double d) {
  return free_level(n, m, field, 2.0 * d);
}

double merged_free_level(int n, int m, double field, double d1, double d2) {
  require(d1 > 0.0 && d2 > 0.0, "widths must be positive");
  return free_level(n, m, field, d1 + d2);
}

double flat_band_value(int n, int m1, double field, double d1) {
  return free_level(n, m1, field, d1);
}

double flat_band_value(int n, int m1, int m2, double field, const Width& d1, const Width& d2) {
  auto pairs = commensurate_pairs(d1, d2, std::max(m1, m2));
  bool found = std::any_of(pairs.begin(), pairs.end(),
                           [&](const auto& p) { return p.first == m1 && p.second == m2; });
  require(found, "(m1, m2) is not a commensurate pair of the given widths");
  return flat_band_value(n, m1, field, d1.value());
}

namespace {

std::vector<std::pair<double, ModeIndex>> enumerate_family(double field, double d, double e_max, int layer) {
  std::vector<std::pair<double, ModeIndex>> raw;
  for (int n = 0; field * (2 * n + 1) <= e_max; ++n) {
    for (int m = 1;; ++m) {
      double v = free_level(n, m, field, d);
      if (v > e_max) break;
      raw.push_back({v, ModeIndex{n, m, layer, 0}});
    }
  }
  return raw;
}

}  // namespace

LevelCatalog free_levels(double field, double d, double e_max) {
  require(e_max > field, "energy cutoff must lie above the lowest Landau level");
  return build_catalog(CatalogKind::Free, e_max, enumerate_family(field, d, e_max, 0));
}

LevelCatalog neumann_limit_levels(double field, double d, double e_max) {
  require(e_max > field, "energy cutoff must lie above the lowest Landau level");
  auto cat = build_catalog(CatalogKind::Free, e_max, enumerate_family(field, 2.0 * d, e_max, 0));
  cat.kind = CatalogKind::NeumannLimit;
  return cat;
}

LevelCatalog decoupled_double_levels(double field, const Width& d1, const Width& d2, double e_max) {
  d1.validate("d1");
  d2.validate("d2");
  require(field > 0.0, "field strength B must be positive");
  require(e_max > field, "energy cutoff must lie above the lowest Landau level");
  auto raw = enumerate_family(field, d1.value(), e_max, 1);
  auto lower = enumerate_family(field, d2.value(), e_max, 2);
  raw.insert(raw.end(), lower.begin(), lower.end());
  return build_catalog(CatalogKind::Decoupled, e_max, std::move(raw));
}

LevelCatalog merged_free_levels(double field, double d1, double d2, double e_max) {
  require(d1 > 0.0 && d2 > 0.0, "widths must be positive");
  require(e_max > field, "energy cutoff must lie above the lowest Landau level");
  auto cat = build_catalog(CatalogKind::Free, e_max, enumerate_family(field, d1 + d2, e_max, 0));
  cat.kind = CatalogKind::MergedFree;
  return cat;
}

LevelCatalog asymptote_catalog(const GeometryConfig& geom, double field, double e_max) {
  if (geom.kind == GeometryKind::NeumannWindowLayer) return free_levels(field, geom.d1.value(), e_max);
  return decoupled_double_levels(field, geom.d1, geom.d2, e_max);
}

double spectral_floor(const GeometryConfig& geom, double field) {
  if (geom.kind == GeometryKind::NeumannWindowLayer)
    return neumann_limit_level(0, 1, field, geom.d1.value());
  return merged_free_level(0, 1, field, geom.d1.value(), geom.d2.value());
}

std::vector<std::pair<int, int>> commensurate_pairs(const Width& d1, const Width& d2, int m_max) {
  std::vector<std::pair<int, int>> pairs;
  if (d1.scale_tag != d2.scale_tag) return pairs;  // declared incommensurate
  // d1/d2 = (num1*den2)/(den1*num2); reduce exactly.
  long long p = d1.num * d2.den;
  long long q = d1.den * d2.num;
  long long g = std::gcd(p, q);
  p /= g;
  q /= g;
  for (long long k = 1; k * p <= m_max && k * q <= m_max; ++k) {
    pairs.push_back({static_cast<int>(k * p), static_cast<int>(k * q)});
  }
  return pairs;
}

double hermite_mode(int n, double field, double u) {
  require(n >= 0, "Landau index n must be >= 0");
  require(field > 0.0, "field strength B must be positive");
  double t = std::sqrt(field) * u;
  // Normalized recurrence: psi_0 = pi^{-1/4} exp(-t^2/2),
  // psi_{j+1} = sqrt(2/(j+1)) t psi_j - sqrt(j/(j+1)) psi_{j-1}.
  double prev = 0.0;
  double cur = std::pow(kPi, -0.25) * std::exp(-0.5 * t * t);
  for (int j = 0; j < n; ++j) {
    double next = std::sqrt(2.0 / (j + 1)) * t * cur - std::sqrt(static_cast<double>(j) / (j + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return std::pow(field, 0.25) * cur;
}

}  // namespace magband
