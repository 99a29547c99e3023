#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "magband/dispersion.hpp"
#include "magband/verify.hpp"

// Serialization: CSV tables (17 significant digits, '.' decimal point, LF
// line endings), JSON reports, an SVG band diagram, and the JSON run
// configuration with exact rational widths.

namespace magband {
namespace io {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Full run description parsed from a config file.
struct RunConfig {
  PhysicalConfig physics;
  GeometryConfig geometry;
  MomentumGrid momenta;
  SweepOptions sweep;
};

/// Parse a JSON run configuration.  Diagnostics carry the source name and,
/// for syntax errors, the line number.  Throws ConfigError.
RunConfig parse_config(const std::string& text, const std::string& source_name);
RunConfig load_config(const std::string& path);

/// Fixed 17-significant-digit decimal form (deterministic, round-trips).
std::string format_double(double v);

// CSV writers.  All files end with a trailing LF.
std::string dispersion_csv(const DispersionTable& table);
std::string fiber_csv(double p, const Eigen::VectorXd& values, const Eigen::VectorXd& residuals);
std::string vectors_csv(const FiberSolve& fiber);

// JSON reports.
nlohmann::json to_json(const Width& w);
nlohmann::json to_json(const GeometryConfig& g);
nlohmann::json to_json(const BandSummary& summary);
nlohmann::json to_json(const verify::SuiteReport& report);
/// Effective configuration of a finished sweep; parses back via parse_config.
nlohmann::json effective_config(const DispersionTable& table);

/// Band diagram: one polyline per dispersion curve, dashed reference levels
/// from the asymptote catalog, shaded gap strips.
std::string band_svg(const DispersionTable& table, const BandSummary& summary);

void save_text(const std::string& path, const std::string& content);

}  // namespace io
}  // namespace magband
