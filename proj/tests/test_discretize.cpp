#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <set>

#include "magband/discretize.hpp"
#include "magband/eigensolve.hpp"

using namespace magband;

namespace {
constexpr double kPi = std::numbers::pi;

FiberProblem window_layer(double p, double a, double e_max) {
  FiberProblem prob;
  prob.geometry = GeometryConfig::neumann_window(Width::pi_multiple(1, 1), a);
  prob.physics.field = 1.0;
  prob.p = p;
  prob.e_max = e_max;
  return prob;
}
}  // namespace

TEST_CASE("grid covers the truncation rule") {
  auto prob = window_layer(0.0, 1.0, 20.0);
  GridSpec g = build_grid(prob, GridOptions{32, 30.0, false});
  // turning point sqrt(50) ~ 7.07 plus decay padding
  CHECK(g.x_lo <= -std::sqrt(50.0));
  CHECK(g.x_hi >= std::sqrt(50.0));
  CHECK(std::pow(prob.p + g.field * g.x_lo, 2) >= prob.e_max + 30.0);
  CHECK(std::pow(prob.p + g.field * g.x_hi, 2) >= prob.e_max + 30.0);
  // boundary lines on the lattice
  CHECK(g.n1 * g.hz1 == doctest::Approx(kPi).epsilon(1e-14));
  // window endpoints on x nodes
  CHECK(g.a_snapped == doctest::Approx(g.i_win * g.hx));
  CHECK(g.snap_shift <= 0.5 * g.hx);
}

TEST_CASE("double layer shares the z lattice across rational widths") {
  FiberProblem prob;
  prob.geometry = GeometryConfig::double_layer(Width::rational(2, 1), Width::rational(1, 1), 0.5);
  prob.physics.field = 1.0;
  prob.e_max = 12.0;
  GridSpec g = build_grid(prob, GridOptions{32, 10.0, false});
  CHECK(g.hz1 == doctest::Approx(1.0 / 32).epsilon(1e-14));
  CHECK(g.hz2 == doctest::Approx(1.0 / 32).epsilon(1e-14));
  bool has_interface = false;
  for (const auto& row : g.rows) has_interface = has_interface || (row.z == 0.0 && row.rowkind == RowKind::Interface);
  CHECK(has_interface);
}

TEST_CASE("oscillator center shifts the x range") {
  auto prob = window_layer(5.0, 0.0, 10.0);
  GridSpec g = build_grid(prob, GridOptions{16, 10.0, false});
  CHECK(g.x_lo < -5.0);
  CHECK(g.x_hi > -5.0);
  CHECK(0.5 * (g.x_lo + g.x_hi) < -2.0);  // range is centered well left of 0
}

TEST_CASE("coarse window refused") {
  auto prob = window_layer(0.0, 0.05, 10.0);
  CHECK_THROWS_AS(build_grid(prob, GridOptions{8, 10.0, false}), GridError);
}

TEST_CASE("assembled pencil is exactly symmetric") {
  auto prob = window_layer(1.0, 1.0, 10.0);
  FiberMatrix fm = assemble(prob, build_grid(prob, GridOptions{16, 10.0, false}));
  Eigen::SparseMatrix<double> diff = Eigen::SparseMatrix<double>(fm.stiffness.transpose()) - fm.stiffness;
  double max_abs = 0.0;
  for (int c = 0; c < diff.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, c); it; ++it)
      max_abs = std::max(max_abs, std::abs(it.value()));
  CHECK(max_abs == 0.0);
  CHECK(fm.volumes.minCoeff() > 0.0);
}

TEST_CASE("potential diagonal matches (p+Bx)^2 exactly") {
  auto prob = window_layer(2.0, 0.0, 10.0);
  prob.physics.field = 1.5;
  GridSpec g = build_grid(prob, GridOptions{16, 10.0, false});
  FiberMatrix fm = assemble(prob, g);
  for (int i = 0; i < fm.dimension(); i += 17) {
    double x = fm.node_x(i);
    int ir = fm.node_ir[static_cast<size_t>(i)];
    const auto& row = g.rows[static_cast<size_t>(ir)];
    double flux = g.hx / row.h_below + (row.h_above > 0 ? g.hx / row.h_above : 0.0) + 2.0 * row.height / g.hx;
    double expect = std::pow(prob.p + prob.physics.field * x, 2) * fm.volumes[i] + flux;
    CHECK(fm.stiffness.coeff(i, i) == doctest::Approx(expect).epsilon(1e-15));
  }
}

TEST_CASE("decoupling at a=0: no stencil edge crosses z=0") {
  FiberProblem prob;
  prob.geometry = GeometryConfig::double_layer(Width::pi_multiple(1, 1), Width::pi_multiple(1, 2), 0.0);
  prob.physics.field = 1.0;
  prob.e_max = 8.0;
  FiberMatrix fm = assemble(prob, build_grid(prob, GridOptions{16, 10.0, false}));
  for (int c = 0; c < fm.stiffness.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(fm.stiffness, c); it; ++it) {
      double za = fm.node_z(static_cast<int>(it.row()));
      double zb = fm.node_z(static_cast<int>(it.col()));
      CHECK(za * zb >= 0.0);  // never couples opposite sides
      CHECK(za != 0.0);       // the interface row holds no unknowns
    }
}

TEST_CASE("transverse slice reproduces the discrete Dirichlet spectrum") {
  // kind 2 at a=0 and B tiny is block-separable; check the z block through a
  // dense solve of a single x column extracted from the matrix structure:
  // instead, assemble a narrow problem and compare the transverse factors.
  const int nz = 24;
  const double d = kPi;
  const double h = d / nz;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(nz - 1, nz - 1);
  for (int i = 0; i < nz - 1; ++i) {
    t(i, i) = 2.0 / (h * h);
    if (i + 1 < nz - 1) t(i, i + 1) = t(i + 1, i) = -1.0 / (h * h);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  for (int m = 1; m <= 4; ++m) {
    double expect = 2.0 / (h * h) * (1.0 - std::cos(kPi * m * h / d));
    CHECK(es.eigenvalues()[m - 1] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("mirror_x equals assembling at -p") {
  auto prob = window_layer(2.0, 1.0, 10.0);
  GridOptions opts{16, 10.0, true};
  GridSpec g = build_grid(prob, opts);
  FiberMatrix fm = assemble(prob, g);

  auto prob_neg = prob;
  prob_neg.p = -2.0;
  GridSpec g2 = build_grid(prob_neg, opts);
  REQUIRE(g2.nx == g.nx);
  FiberMatrix fm2 = assemble(prob_neg, g2);

  FiberMatrix mirrored = mirror_x(fm);
  REQUIRE(mirrored.dimension() == fm2.dimension());
  Eigen::SparseMatrix<double> diff = mirrored.stiffness - fm2.stiffness;
  double max_abs = 0.0;
  for (int c = 0; c < diff.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, c); it; ++it)
      max_abs = std::max(max_abs, std::abs(it.value()));
  CHECK(max_abs <= 1e-12);
  CHECK((mirrored.volumes - fm2.volumes).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("mirror_x refuses the one-sided geometry") {
  FiberProblem prob;
  prob.geometry = GeometryConfig::one_sided(Width::pi_multiple(3, 5), Width::pi_multiple(2, 5));
  prob.physics.field = 4.0;
  prob.e_max = 11.0;
  FiberMatrix fm = assemble(prob, build_grid(prob, GridOptions{32, 10.0, true}));
  CHECK_THROWS_AS(mirror_x(fm), GridError);
}

TEST_CASE("p=0 symmetric window: mirrored spectrum identical") {
  auto prob = window_layer(0.0, 1.0, 8.0);
  FiberMatrix fm = assemble(prob, build_grid(prob, GridOptions{12, 8.0, false}));
  FiberMatrix mirrored = mirror_x(fm);
  EigenResult a = dense_reference(fm);
  EigenResult b = dense_reference(mirrored);
  for (int i = 0; i < 6; ++i)
    CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
}

TEST_CASE("truncation robustness: doubling the margin leaves eigenvalues put") {
  auto prob = window_layer(0.0, 1.0, 8.0);
  EigenRequest req;
  req.count = 6;
  req.tol = 1e-11;
  req.shift = 0.0;
  FiberMatrix fm1 = assemble(prob, build_grid(prob, GridOptions{24, 10.0, false}));
  FiberMatrix fm2 = assemble(prob, build_grid(prob, GridOptions{24, 20.0, false}));
  EigenResult r1 = smallest_eigenpairs(fm1, req);
  EigenResult r2 = smallest_eigenpairs(fm2, req);
  for (int i = 0; i < 6; ++i)
    CHECK(std::abs(r1.values[i] - r2.values[i]) <= 1e-9 * (1.0 + std::abs(r1.values[i])));
}
