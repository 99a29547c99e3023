#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

// Physical configuration, closed-form reference spectra, oscillator
// eigenfunctions and index bookkeeping for the three hard-wall geometries.
//
// Units: hbar = 1, mass = 1/2, so the Landau levels are exactly B(2n+1).

namespace magband {

/// Homogeneous field B > 0 in the Landau gauge A = (0, Bx, 0).
struct PhysicalConfig {
  double field = 1.0;

  static constexpr const char* gauge = "Landau, A = (0, Bx, 0)";

  void validate() const;
};

/// An exact rational width: (num/den) * scale.  Two widths are commensurate
/// iff they carry the same scale tag; the rational parts then decide the
/// ratio exactly.  An empty tag means the scale is the plain unit 1.
struct Width {
  long long num = 1;
  long long den = 1;
  double scale = 1.0;
  std::string scale_tag;

  double value() const { return scale * static_cast<double>(num) / static_cast<double>(den); }

  void validate(const char* name) const;

  static Width rational(long long num, long long den) { return Width{num, den, 1.0, ""}; }
  static Width pi_multiple(long long num, long long den);
};

enum class GeometryKind { NeumannWindowLayer, DoubleLayer, OneSidedBarrier };

std::string to_string(GeometryKind kind);

/// Cross-section description.
///  - NeumannWindowLayer: strip R x (0, d) with a Neumann window of half
///    width a in the z = d boundary, Dirichlet elsewhere.
///  - DoubleLayer: strip R x (-d2, d1) with the dividing line z = 0 removed
///    for |x| < a (window), Dirichlet elsewhere.
///  - OneSidedBarrier: strip R x (-d2, d1) with the dividing barrier covering
///    one half line of z = 0; the other half is open.
struct GeometryConfig {
  GeometryKind kind = GeometryKind::NeumannWindowLayer;
  Width d1;          // width of the (upper) layer; the only width for kind 1
  Width d2;          // lower layer width, kinds 2 and 3
  double a = 0.0;    // window half width, kinds 1 and 2

  void validate() const;

  double upper_width() const { return d1.value(); }
  double lower_width() const { return d2.value(); }
  double total_width() const;
  bool has_window() const { return kind != GeometryKind::OneSidedBarrier; }

  static GeometryConfig neumann_window(Width d, double a);
  static GeometryConfig double_layer(Width d1, Width d2, double a);
  static GeometryConfig one_sided(Width d1, Width d2);
};

/// Mode label: Landau index n >= 0, transverse index m >= 1, optional layer
/// (1 or 2, 0 when not applicable) and ascending rank k (1-based, assigned
/// by the catalog).
struct ModeIndex {
  int n = 0;
  int m = 1;
  int layer = 0;
  int k = 0;
};

enum class CatalogKind { Free, NeumannLimit, Decoupled, MergedFree };

struct LevelEntry {
  double value = 0.0;
  std::vector<ModeIndex> indices;

  int multiplicity() const { return static_cast<int>(indices.size()); }
};

/// Sorted analytic levels below a cutoff, degeneracies merged.  Ranks k run
/// over the flattened list with multiplicity counted; ties are broken
/// lexicographically in (n, m, layer).
struct LevelCatalog {
  CatalogKind kind = CatalogKind::Free;
  double e_max = 0.0;
  std::vector<LevelEntry> entries;

  /// Value of the k-th level (1-based, multiplicity counted).
  double level(int k) const;
  /// Mode label of the k-th level.
  const ModeIndex& label(int k) const;
  /// Number of levels with multiplicity counted.
  int size() const;
  /// Entry whose value is nearest to `value`, if within `tol`.
  const LevelEntry* match(double value, double tol) const;
};

// Closed-form levels.

/// B(2n+1) + (pi m / d)^2: Landau level plus Dirichlet transverse mode.
double free_level(int n, int m, double field, double d);

/// B(2n+1) + (pi m / 2d)^2: fully open window limit (one boundary Neumann).
double neumann_limit_level(int n, int m, double field, double d);

/// B(2n+1) + (pi m / (d1+d2))^2: barrier removed, layers merged.
double merged_free_level(int n, int m, double field, double d1, double d2);

/// Flat-band energy B(2n+1) + (pi m1 / d1)^2 shared by both layers of a
/// commensurate pair.
double flat_band_value(int n, int m1, double field, double d1);

/// Checked variant: throws unless (m1, m2) is a commensurate pair of the
/// given widths.
double flat_band_value(int n, int m1, int m2, double field, const Width& d1, const Width& d2);

// Catalog builders (all levels <= e_max, sorted, degeneracies merged).

LevelCatalog free_levels(double field, double d, double e_max);
LevelCatalog neumann_limit_levels(double field, double d, double e_max);
LevelCatalog decoupled_double_levels(double field, const Width& d1, const Width& d2, double e_max);
LevelCatalog merged_free_levels(double field, double d1, double d2, double e_max);

/// Reference catalog for a geometry: the p -> +-infinity asymptote family
/// (free for kind 1, per-layer union for kinds 2 and 3).
LevelCatalog asymptote_catalog(const GeometryConfig& geom, double field, double e_max);

/// Certified lower bound on the fiber spectrum of a geometry.
double spectral_floor(const GeometryConfig& geom, double field);

/// All pairs (m1, m2), m_i <= m_max, with m1/m2 = d1/d2 exactly; empty when
/// the widths carry different scale tags (declared incommensurate).
std::vector<std::pair<int, int>> commensurate_pairs(const Width& d1, const Width& d2, int m_max);

/// Normalized oscillator eigenfunction h_n evaluated at u (stable normalized
/// recurrence; underflows to 0 far in the tail).
double hermite_mode(int n, double field, double u);

}  // namespace magband
