#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "magband/dispersion.hpp"
#include "magband/io.hpp"
#include "magband/verify.hpp"

// Command line driver: band structure of laterally coupled hard-wall layers
// in a homogeneous magnetic field.
//
// Exit codes: 0 success, 1 computation error, 2 configuration error,
// 3 verification failure.

namespace {

using namespace magband;

int env_threads() {
  if (const char* s = std::getenv("MAGBAND_THREADS")) {
    int n = std::atoi(s);
    if (n > 0) return n;
  }
  return 1;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    io::save_text(out_path, content);
  }
}

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  int levels = 0;    // 0: take the config value
  int threads = 0;   // 0: config value, then MAGBAND_THREADS
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required = true) {
  cmd->add_option("--config", args.config_path, "JSON run configuration")
      ->required(config_required);
  cmd->add_option("--out", args.out_path, "output file (default: stdout)");
  cmd->add_option("--levels", args.levels, "number of levels (overrides the config)");
  cmd->add_option("--threads", args.threads,
                  "worker threads (overrides the config and MAGBAND_THREADS)");
}

io::RunConfig loaded(const CommonArgs& args) {
  io::RunConfig cfg = io::load_config(args.config_path);
  if (args.levels > 0) cfg.sweep.levels = args.levels;
  if (args.threads > 0)
    cfg.sweep.threads = args.threads;
  else if (cfg.sweep.threads <= 1)
    cfg.sweep.threads = env_threads();
  return cfg;
}

int run_fiber(const CommonArgs& args, double p, const std::string& dump_vectors) {
  io::RunConfig cfg = loaded(args);
  cfg.momenta.values = {p};
  cfg.sweep.store_vectors = !dump_vectors.empty();
  DispersionTable table = sweep(cfg.geometry, cfg.physics, cfg.momenta, cfg.sweep);
  emit(args.out_path, io::fiber_csv(p, table.lambda.col(0), table.residual.col(0)));
  if (!dump_vectors.empty())
    io::save_text(dump_vectors, io::vectors_csv(table.fiber_at(p)));
  return 0;
}

int run_dispersion(const CommonArgs& args) {
  io::RunConfig cfg = loaded(args);
  DispersionTable table = sweep(cfg.geometry, cfg.physics, cfg.momenta, cfg.sweep);
  emit(args.out_path, io::dispersion_csv(table));
  return 0;
}

int run_bands(const CommonArgs& args, const std::string& svg_path) {
  io::RunConfig cfg = loaded(args);
  DispersionTable table = sweep(cfg.geometry, cfg.physics, cfg.momenta, cfg.sweep);
  SummaryOptions so;
  BandSummary summary = band_edges(table, so);
  nlohmann::json report{{"config", io::effective_config(table)},
                        {"summary", io::to_json(summary)}};
  emit(args.out_path, report.dump(2) + "\n");
  if (!svg_path.empty()) io::save_text(svg_path, io::band_svg(table, summary));
  return 0;
}

int run_convergence(const CommonArgs& args, double p) {
  io::RunConfig cfg = loaded(args);
  std::vector<Eigen::VectorXd> lam;
  for (int factor : {1, 2, 4}) {
    SweepOptions o = cfg.sweep;
    o.resolution = cfg.sweep.resolution * factor;
    MomentumGrid grid;
    grid.values = {p};
    lam.push_back(sweep(cfg.geometry, cfg.physics, grid, o).lambda.col(0));
  }
  std::ostringstream out;
  out << "k,coarse,medium,fine,order,error_estimate\n";
  for (int k = 0; k < cfg.sweep.levels; ++k) {
    double num = lam[0](k) - lam[1](k), den = lam[1](k) - lam[2](k);
    double order = (num * den > 0.0) ? std::log2(num / den) : std::nan("");
    out << (k + 1) << "," << io::format_double(lam[0](k)) << "," << io::format_double(lam[1](k))
        << "," << io::format_double(lam[2](k)) << "," << io::format_double(order) << ","
        << io::format_double(std::abs(den) / 3.0) << "\n";
  }
  emit(args.out_path, out.str());
  return 0;
}

int run_verify(const std::string& suite, const std::string& out_path, int threads) {
  verify::SuiteReport report = verify::run_suite(suite, threads > 0 ? threads : env_threads());
  std::cerr << "suite " << report.suite << ": covered claims:";
  for (const auto& id : verify::coverage(suite)) std::cerr << " " << id;
  std::cerr << "\n";
  for (const auto& c : report.checks) {
    std::cerr << "[" << verify::to_string(c.verdict) << "] " << c.id << "  margin="
              << c.margin << "  err=" << c.error_estimate << "  " << c.claim << "\n";
    if (c.verdict != verify::Verdict::Pass && !c.detail.empty())
      std::cerr << "    " << c.detail << "\n";
  }
  emit(out_path, io::to_json(report).dump(2) + "\n");
  return report.all_passed() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Band structure of laterally coupled hard-wall layers in a magnetic field"};
  app.require_subcommand(1);

  CommonArgs fiber_args, disp_args, bands_args, conv_args;
  double fiber_p = 0.0, conv_p = 0.0;
  std::string dump_vectors, svg_path, suite = "all", verify_out;
  int verify_threads = 0;

  CLI::App* fiber = app.add_subcommand("fiber", "solve one momentum fiber");
  add_common(fiber, fiber_args);
  fiber->add_option("--p", fiber_p, "momentum")->required();
  fiber->add_option("--dump-vectors", dump_vectors, "write eigenvectors to this CSV");

  CLI::App* dispersion = app.add_subcommand("dispersion", "sweep the momentum grid");
  add_common(dispersion, disp_args);

  CLI::App* bands = app.add_subcommand("bands", "band edges, gaps and flat bands");
  add_common(bands, bands_args);
  bands->add_option("--svg", svg_path, "write a band diagram to this SVG file");

  CLI::App* verify_cmd = app.add_subcommand("verify", "run the self-check suites");
  verify_cmd->add_option("--suite", suite, "window | symmetric | asymmetric | onesided | all");
  verify_cmd->add_option("--out", verify_out, "JSON report file (default: stdout)");
  verify_cmd->add_option("--threads", verify_threads, "worker threads");

  CLI::App* convergence = app.add_subcommand("convergence", "resolution ladder at one momentum");
  add_common(convergence, conv_args);
  convergence->add_option("--p", conv_p, "momentum")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (fiber->parsed()) return run_fiber(fiber_args, fiber_p, dump_vectors);
    if (dispersion->parsed()) return run_dispersion(disp_args);
    if (bands->parsed()) return run_bands(bands_args, svg_path);
    if (convergence->parsed()) return run_convergence(conv_args, conv_p);
    if (verify_cmd->parsed()) return run_verify(suite, verify_out, verify_threads);
  } catch (const io::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
