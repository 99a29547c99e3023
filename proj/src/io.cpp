#include "magband/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

namespace magband {
namespace io {

using nlohmann::json;

namespace {

int line_of_byte(const std::string& text, size_t byte) {
  int line = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

[[noreturn]] void fail(const std::string& source, const std::string& what) {
  throw ConfigError(source + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& source,
                    const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(source, "missing field \"" + where + key + "\"");
  return *it;
}

double number_at(const json& obj, const char* key, const std::string& source,
                 const std::string& where, std::optional<double> fallback = {}) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    fail(source, "missing field \"" + where + key + "\"");
  }
  if (!it->is_number()) fail(source, "field \"" + where + key + "\" must be a number");
  return it->get<double>();
}

Width parse_width(const json& j, const std::string& source, const std::string& where) {
  if (!j.is_object()) fail(source, "field \"" + where + "\" must be an object {num, den, scale}");
  Width w;
  w.num = static_cast<long long>(number_at(j, "num", source, where + "."));
  w.den = static_cast<long long>(number_at(j, "den", source, where + ".", 1.0));
  if (auto it = j.find("scale"); it != j.end()) {
    if (it->is_string()) {
      std::string s = it->get<std::string>();
      if (s != "pi") fail(source, "field \"" + where + ".scale\": unknown symbol \"" + s + "\"");
      w.scale = std::numbers::pi;
      w.scale_tag = "pi";
    } else if (it->is_number()) {
      w.scale = it->get<double>();
      char tag[32];
      std::snprintf(tag, sizeof(tag), "%.17g", w.scale);
      w.scale_tag = (w.scale == 1.0) ? "" : tag;
    } else {
      fail(source, "field \"" + where + ".scale\" must be a number or \"pi\"");
    }
  }
  return w;
}

GeometryConfig parse_geometry(const json& j, const std::string& source) {
  if (!j.is_object()) fail(source, "field \"geometry\" must be an object");
  std::string kind = require(j, "kind", source, "geometry.").get<std::string>();
  GeometryConfig g;
  if (kind == "neumann_window") {
    g = GeometryConfig::neumann_window(parse_width(require(j, "d1", source, "geometry."), source,
                                                   "geometry.d1"),
                                       number_at(j, "a", source, "geometry."));
  } else if (kind == "double_layer") {
    g = GeometryConfig::double_layer(
        parse_width(require(j, "d1", source, "geometry."), source, "geometry.d1"),
        parse_width(require(j, "d2", source, "geometry."), source, "geometry.d2"),
        number_at(j, "a", source, "geometry."));
  } else if (kind == "one_sided") {
    g = GeometryConfig::one_sided(
        parse_width(require(j, "d1", source, "geometry."), source, "geometry.d1"),
        parse_width(require(j, "d2", source, "geometry."), source, "geometry.d2"));
  } else {
    fail(source, "geometry.kind must be one of neumann_window, double_layer, one_sided");
  }
  return g;
}

MomentumGrid parse_momenta(const json& j, const std::string& source) {
  MomentumGrid grid;
  if (!j.is_object()) fail(source, "field \"momenta\" must be an object");
  if (auto it = j.find("values"); it != j.end()) {
    if (!it->is_array()) fail(source, "momenta.values must be an array of numbers");
    for (const auto& v : *it) {
      if (!v.is_number()) fail(source, "momenta.values must be an array of numbers");
      grid.values.push_back(v.get<double>());
    }
  } else {
    double lo = number_at(j, "min", source, "momenta.");
    double hi = number_at(j, "max", source, "momenta.");
    int points = static_cast<int>(number_at(j, "points", source, "momenta."));
    grid = MomentumGrid::uniform(lo, hi, points);
  }
  return grid;
}

SweepOptions parse_sweep(const json& j, const std::string& source) {
  SweepOptions o;
  if (j.is_null()) return o;
  if (!j.is_object()) fail(source, "field \"sweep\" must be an object");
  o.levels = static_cast<int>(number_at(j, "levels", source, "sweep.", o.levels));
  o.resolution = static_cast<int>(number_at(j, "resolution", source, "sweep.", o.resolution));
  o.margin = number_at(j, "margin", source, "sweep.", o.margin);
  o.tol = number_at(j, "tol", source, "sweep.", o.tol);
  o.e_max = number_at(j, "e_max", source, "sweep.", o.e_max);
  o.threads = static_cast<int>(number_at(j, "threads", source, "sweep.", o.threads));
  if (auto it = j.find("symmetric_x"); it != j.end()) o.symmetric_x = it->get<bool>();
  if (auto it = j.find("store_vectors"); it != j.end()) o.store_vectors = it->get<bool>();
  return o;
}

std::string svg_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source_name) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(source_name + ":" + std::to_string(line_of_byte(text, e.byte)),
         std::string("JSON syntax error: ") + e.what());
  }
  if (!j.is_object()) fail(source_name, "top level must be a JSON object");

  RunConfig cfg;
  try {
    cfg.physics.field = number_at(j, "field", source_name, "", 1.0);
    cfg.physics.validate();
    cfg.geometry = parse_geometry(require(j, "geometry", source_name, ""), source_name);
    cfg.geometry.validate();
    cfg.momenta = parse_momenta(require(j, "momenta", source_name, ""), source_name);
    cfg.momenta.validate();
    cfg.sweep = parse_sweep(j.value("sweep", json()), source_name);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(source_name, e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string dispersion_csv(const DispersionTable& table) {
  std::ostringstream out;
  out << "p";
  for (int k = 1; k <= table.levels(); ++k) out << ",lambda_" << k;
  out << "\n";
  for (int j = 0; j < table.points(); ++j) {
    out << format_double(table.p[static_cast<size_t>(j)]);
    for (int k = 0; k < table.levels(); ++k) out << "," << format_double(table.lambda(k, j));
    out << "\n";
  }
  return out.str();
}

std::string fiber_csv(double p, const Eigen::VectorXd& values, const Eigen::VectorXd& residuals) {
  std::ostringstream out;
  out << "k,p,lambda,residual\n";
  for (int k = 0; k < values.size(); ++k) {
    out << (k + 1) << "," << format_double(p) << "," << format_double(values(k)) << ","
        << format_double(residuals(k)) << "\n";
  }
  return out.str();
}

std::string vectors_csv(const FiberSolve& fiber) {
  std::ostringstream out;
  out << "x,z";
  for (int k = 1; k <= fiber.eig.vectors.cols(); ++k) out << ",phi_" << k;
  out << "\n";
  for (int i = 0; i < fiber.eig.vectors.rows(); ++i) {
    out << format_double(fiber.matrix.node_x(i)) << "," << format_double(fiber.matrix.node_z(i));
    for (int k = 0; k < fiber.eig.vectors.cols(); ++k)
      out << "," << format_double(fiber.eig.vectors(i, k));
    out << "\n";
  }
  return out.str();
}

json to_json(const Width& w) {
  json j{{"num", w.num}, {"den", w.den}};
  if (w.scale_tag == "pi") {
    j["scale"] = "pi";
  } else if (w.scale != 1.0) {
    j["scale"] = w.scale;
  }
  return j;
}

json to_json(const GeometryConfig& g) {
  json j;
  switch (g.kind) {
    case GeometryKind::NeumannWindowLayer:
      j["kind"] = "neumann_window";
      j["d1"] = to_json(g.d1);
      j["a"] = g.a;
      break;
    case GeometryKind::DoubleLayer:
      j["kind"] = "double_layer";
      j["d1"] = to_json(g.d1);
      j["d2"] = to_json(g.d2);
      j["a"] = g.a;
      break;
    case GeometryKind::OneSidedBarrier:
      j["kind"] = "one_sided";
      j["d1"] = to_json(g.d1);
      j["d2"] = to_json(g.d2);
      break;
  }
  return j;
}

json to_json(const BandSummary& summary) {
  json bands = json::array();
  for (const auto& b : summary.bands) {
    json jb{{"k", b.k},         {"min", b.min},
            {"max", b.max},     {"argmin_p", b.argmin_p},
            {"variation", b.variation}, {"flat", b.flat}};
    if (b.upper_label)
      jb["upper_label"] = {{"n", b.upper_label->n}, {"m", b.upper_label->m},
                           {"layer", b.upper_label->layer}};
    if (b.lower_label)
      jb["lower_label"] = {{"n", b.lower_label->n}, {"m", b.lower_label->m},
                           {"layer", b.lower_label->layer}};
    bands.push_back(std::move(jb));
  }
  json gaps = json::array();
  for (const auto& g : summary.gaps) gaps.push_back({{"lo", g.lo}, {"hi", g.hi}});
  return json{{"geometry", to_json(summary.geometry)},
              {"field", summary.physics.field},
              {"bands", std::move(bands)},
              {"gaps", std::move(gaps)},
              {"flat_tol", summary.flat_tol},
              {"match_tol", summary.match_tol}};
}

json to_json(const verify::SuiteReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"id", c.id},
                      {"claim", c.claim},
                      {"config", c.config},
                      {"margin", c.margin},
                      {"error_estimate", c.error_estimate},
                      {"verdict", verify::to_string(c.verdict)},
                      {"detail", c.detail}});
  }
  return json{{"suite", report.suite},
              {"all_passed", report.all_passed()},
              {"checks", std::move(checks)}};
}

json effective_config(const DispersionTable& table) {
  json momenta;
  momenta["values"] = table.p;
  json sweep{{"levels", table.options.levels},
             {"resolution", table.options.resolution},
             {"margin", table.options.margin},
             {"tol", table.options.tol},
             {"e_max", table.e_max},
             {"threads", table.options.threads},
             {"symmetric_x", table.options.symmetric_x},
             {"store_vectors", table.options.store_vectors}};
  return json{{"field", table.physics.field},
              {"geometry", to_json(table.geometry)},
              {"momenta", std::move(momenta)},
              {"sweep", std::move(sweep)}};
}

std::string band_svg(const DispersionTable& table, const BandSummary& summary) {
  const double W = 860.0, H = 560.0;
  const double L = 70.0, R = 20.0, T = 20.0, B = 50.0;
  double p_lo = table.p.front(), p_hi = table.p.back();
  if (p_hi <= p_lo) p_hi = p_lo + 1.0;
  double e_lo = table.lambda.minCoeff(), e_hi = table.lambda.maxCoeff();
  double pad = 0.05 * (e_hi - e_lo + 1e-12);
  e_lo -= pad;
  e_hi += pad;

  auto X = [&](double p) { return L + (p - p_lo) / (p_hi - p_lo) * (W - L - R); };
  auto Y = [&](double e) { return H - B - (e - e_lo) / (e_hi - e_lo) * (H - T - B); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";

  for (const auto& gap : summary.gaps) {
    if (gap.hi < e_lo || gap.lo > e_hi) continue;
    double y1 = Y(std::min(gap.hi, e_hi)), y2 = Y(std::max(gap.lo, e_lo));
    s << "<rect x=\"" << svg_num(L) << "\" y=\"" << svg_num(y1) << "\" width=\""
      << svg_num(W - L - R) << "\" height=\"" << svg_num(y2 - y1)
      << "\" fill=\"#fff3c4\" stroke=\"none\"/>\n";
  }

  auto catalog = asymptote_catalog(table.geometry, table.physics.field, e_hi);
  for (const auto& entry : catalog.entries) {
    if (entry.value < e_lo || entry.value > e_hi) continue;
    s << "<line x1=\"" << svg_num(L) << "\" y1=\"" << svg_num(Y(entry.value)) << "\" x2=\""
      << svg_num(W - R) << "\" y2=\"" << svg_num(Y(entry.value))
      << "\" stroke=\"#999\" stroke-dasharray=\"6,4\" stroke-width=\"1\"/>\n";
  }

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  for (int k = 0; k < table.levels(); ++k) {
    s << "<polyline fill=\"none\" stroke=\"" << colors[k % 8] << "\" stroke-width=\"1.8\" points=\"";
    for (int j = 0; j < table.points(); ++j) {
      if (j) s << " ";
      s << svg_num(X(table.p[static_cast<size_t>(j)])) << "," << svg_num(Y(table.lambda(k, j)));
    }
    s << "\"/>\n";
  }

  // axes
  s << "<line x1=\"" << svg_num(L) << "\" y1=\"" << svg_num(T) << "\" x2=\"" << svg_num(L)
    << "\" y2=\"" << svg_num(H - B) << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << svg_num(L) << "\" y1=\"" << svg_num(H - B) << "\" x2=\"" << svg_num(W - R)
    << "\" y2=\"" << svg_num(H - B) << "\" stroke=\"black\"/>\n";
  s << "<text x=\"" << svg_num((L + W - R) / 2) << "\" y=\"" << svg_num(H - 12)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">p</text>\n";
  s << "<text x=\"18\" y=\"" << svg_num((T + H - B) / 2)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" transform=\"rotate(-90 18 "
    << svg_num((T + H - B) / 2) << ")\">energy</text>\n";
  for (double p : {p_lo, 0.0, p_hi}) {
    if (p < p_lo || p > p_hi) continue;
    s << "<text x=\"" << svg_num(X(p)) << "\" y=\"" << svg_num(H - B + 18)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << svg_num(p)
      << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void save_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace io
}  // namespace magband
