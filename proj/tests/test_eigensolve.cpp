#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "magband/discretize.hpp"
#include "magband/eigensolve.hpp"

using namespace magband;

namespace {
constexpr double kPi = std::numbers::pi;

// Hand-built pencil: 1D Dirichlet chain on (0, d), n interior nodes.
FiberMatrix dirichlet_chain(int n, double d) {
  double h = d / (n + 1);
  FiberMatrix fm;
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < n; ++i) {
    trip.emplace_back(i, i, 2.0 / h);
    if (i > 0) trip.emplace_back(i, i - 1, -1.0 / h);
    if (i + 1 < n) trip.emplace_back(i, i + 1, -1.0 / h);
  }
  fm.stiffness.resize(n, n);
  fm.stiffness.setFromTriplets(trip.begin(), trip.end());
  fm.volumes = Eigen::VectorXd::Constant(n, h);
  fm.node_ix.assign(static_cast<size_t>(n), 0);
  fm.node_ir.assign(static_cast<size_t>(n), 0);
  fm.grid.nx = 2;
  fm.grid.rows.resize(1);
  return fm;
}

FiberMatrix identity_pencil(int n) {
  FiberMatrix fm;
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < n; ++i) trip.emplace_back(i, i, 0.5);
  fm.stiffness.resize(n, n);
  fm.stiffness.setFromTriplets(trip.begin(), trip.end());
  fm.volumes = Eigen::VectorXd::Constant(n, 0.5);
  fm.node_ix.assign(static_cast<size_t>(n), 0);
  fm.node_ir.assign(static_cast<size_t>(n), 0);
  fm.grid.nx = 2;
  fm.grid.rows.resize(1);
  return fm;
}
}  // namespace

TEST_CASE("1D Dirichlet chain closed form, iterative path") {
  FiberMatrix fm = dirichlet_chain(99, kPi);  // h = pi/100
  EigenRequest req;
  req.count = 3;
  req.tol = 1e-12;
  req.shift = 0.0;
  EigenResult res = smallest_eigenpairs(fm, req);
  double h = kPi / 100;
  for (int m = 1; m <= 3; ++m) {
    double expect = 2.0 / (h * h) * (1.0 - std::cos(m * h));
    CHECK(res.values[m - 1] == doctest::Approx(expect).epsilon(1e-11));
  }
  CHECK(res.values[0] == doctest::Approx(0.99991770).epsilon(1e-7));
  for (int i = 0; i < 3; ++i) CHECK(res.residuals[i] <= 1e-12 * (std::abs(res.values[i]) + 1.0));
}

TEST_CASE("dense reference closed forms") {
  FiberMatrix fm = dirichlet_chain(10, kPi);
  EigenResult res = dense_reference(fm);
  double h = kPi / 11;
  for (int m = 1; m <= 10; ++m) {
    double expect = 2.0 / (h * h) * (1.0 - std::cos(m * h));
    CHECK(res.values[m - 1] == doctest::Approx(expect).epsilon(1e-12));
  }

  // 2x2 pencil A = diag(2,3), M = I
  FiberMatrix small;
  std::vector<Eigen::Triplet<double>> trip{{0, 0, 2.0}, {1, 1, 3.0}};
  small.stiffness.resize(2, 2);
  small.stiffness.setFromTriplets(trip.begin(), trip.end());
  small.volumes = Eigen::VectorXd::Ones(2);
  small.node_ix.assign(2, 0);
  small.node_ir.assign(2, 0);
  EigenResult r2 = dense_reference(small);
  CHECK(r2.values[0] == doctest::Approx(2.0));
  CHECK(r2.values[1] == doctest::Approx(3.0));
}

TEST_CASE("identity-scaled pencil: all eigenvalues one") {
  FiberMatrix fm = identity_pencil(16);
  EigenRequest req;
  req.count = 4;
  req.shift = -1.0;
  EigenResult res = smallest_eigenpairs(fm, req);
  for (int i = 0; i < 4; ++i) CHECK(res.values[i] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dense vs iterative agreement on a real fiber") {
  FiberProblem prob;
  prob.geometry = GeometryConfig::neumann_window(Width::pi_multiple(1, 1), 1.0);
  prob.physics.field = 1.0;
  prob.p = 0.5;
  prob.e_max = 8.0;
  FiberMatrix fm = assemble(prob, build_grid(prob, GridOptions{12, 6.0, false}));
  REQUIRE(fm.dimension() <= 4000);
  EigenRequest req;
  req.count = 10;
  req.tol = 1e-12;
  req.shift = 0.25;
  EigenResult it = smallest_eigenpairs(fm, req);
  EigenResult de = dense_reference(fm);
  for (int i = 0; i < 10; ++i)
    CHECK(std::abs(it.values[i] - de.values[i]) <= 1e-9 * std::abs(de.values[i]));
}

TEST_CASE("determinism of repeated solves") {
  FiberProblem prob;
  prob.geometry = GeometryConfig::neumann_window(Width::pi_multiple(1, 1), 1.0);
  prob.physics.field = 1.0;
  prob.p = 1.0;
  prob.e_max = 8.0;
  FiberMatrix fm = assemble(prob, build_grid(prob, GridOptions{16, 8.0, false}));
  EigenRequest req;
  req.count = 5;
  req.shift = 0.25;
  EigenResult a = smallest_eigenpairs(fm, req);
  EigenResult b = smallest_eigenpairs(fm, req);
  for (int i = 0; i < 5; ++i) CHECK(a.values[i] == b.values[i]);
}

TEST_CASE("M-orthonormality of returned vectors") {
  FiberMatrix fm = dirichlet_chain(60, kPi);
  EigenRequest req;
  req.count = 5;
  req.shift = 0.0;
  EigenResult res = smallest_eigenpairs(fm, req);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      double dot = res.vectors.col(i).dot(fm.volumes.cwiseProduct(res.vectors.col(j)));
      CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) <= 1e-8);
    }
  }
}

TEST_CASE("residual report: exact eigenvector, perturbation growth") {
  FiberMatrix fm = dirichlet_chain(50, kPi);
  int n = fm.dimension();
  double h = kPi / (n + 1);
  EigenResult manual;
  manual.values.resize(1);
  manual.values[0] = 2.0 / (h * h) * (1.0 - std::cos(h));
  manual.vectors.resize(n, 1);
  for (int i = 0; i < n; ++i) manual.vectors(i, 0) = std::sin((i + 1) * h);
  Eigen::VectorXd base = residual_report(fm, manual);
  CHECK(base[0] <= 1e-11);

  double prev = base[0];
  for (double eps : {1e-6, 1e-5, 1e-4}) {
    EigenResult bumped = manual;
    bumped.vectors(n / 2, 0) += eps * manual.vectors.col(0).norm();
    double r = residual_report(fm, bumped)[0];
    CHECK(r > prev);
    CHECK(r == doctest::Approx(eps * manual.vectors.col(0).norm() *
                               (fm.stiffness * Eigen::VectorXd::Unit(n, n / 2) -
                                manual.values[0] * fm.volumes.cwiseProduct(Eigen::VectorXd::Unit(n, n / 2)))
                                   .norm() / manual.vectors.col(0).norm())
                   .epsilon(0.1));
    prev = r;
  }
}

TEST_CASE("refusals") {
  FiberMatrix fm = dirichlet_chain(4001, 1.0);
  CHECK_THROWS_AS(dense_reference(fm), std::invalid_argument);
  FiberMatrix small = dirichlet_chain(40, 1.0);
  EigenRequest req;
  req.count = 25;  // > dimension/4
  CHECK_THROWS_AS(smallest_eigenpairs(small, req), std::invalid_argument);
}
