#include "magband/eigensolve.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace magband {

namespace {

constexpr unsigned kLanczosSeed = 0x6d616762u;  // fixed: reproducible subspaces

}  // namespace

EigenResult smallest_eigenpairs(const FiberMatrix& matrix, const EigenRequest& request) {
  const int n = matrix.dimension();
  if (request.count < 1) throw std::invalid_argument("eigenpair count must be >= 1");
  if (request.count > n / 4 && n > 8)
    throw std::invalid_argument("eigenpair count exceeds dimension/4");
  const int count = std::min(request.count, n);
  const double tol = std::clamp(request.tol, 1e-14, 1e-6);

  Eigen::VectorXd dinv = matrix.volumes.cwiseSqrt().cwiseInverse();
  // C = M^{-1/2} A M^{-1/2}, then factor K = C - shift I once.
  Eigen::SparseMatrix<double> k = matrix.stiffness;
  for (int col = 0; col < k.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(k, col); it; ++it)
      it.valueRef() *= dinv[it.row()] * dinv[it.col()];
  {
    Eigen::SparseMatrix<double> ident(n, n);
    ident.setIdentity();
    k -= request.shift * ident;
  }
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(k);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("shift-invert factorization failed");

  std::mt19937 rng(kLanczosSeed);
  std::normal_distribution<double> gauss;
  auto random_unit = [&](const std::vector<Eigen::VectorXd>& basis) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    for (const auto& q : basis) v -= q.dot(v) * q;
    for (const auto& q : basis) v -= q.dot(v) * q;
    double nrm = v.norm();
    if (nrm < 1e-12) throw std::runtime_error("cannot extend Lanczos basis");
    return Eigen::VectorXd(v / nrm);
  };

  std::vector<Eigen::VectorXd> basis;
  std::vector<double> alpha, beta;  // beta[j]: coupling between v_j and v_{j+1}
  basis.push_back(random_unit(basis));

  auto make_result = [&](const Eigen::VectorXd& theta, const Eigen::MatrixXd& s, int nkeep, int iters) {
    EigenResult res;
    res.values.resize(nkeep);
    res.vectors.resize(n, nkeep);
    res.iterations = iters;
    const int m = static_cast<int>(s.rows());
    for (int i = 0; i < nkeep; ++i) {
      res.values[i] = request.shift + 1.0 / theta[i];
      Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
      for (int j = 0; j < m; ++j) y += s(j, i) * basis[static_cast<size_t>(j)];
      res.vectors.col(i) = dinv.cwiseProduct(y);  // M-orthonormal by construction
    }
    res.residuals = residual_report(matrix, res);
    return res;
  };

  Eigen::VectorXd theta_keep;
  Eigen::MatrixXd s_keep;
  int steps = 0;
  for (; steps < request.max_iter; ++steps) {
    const int j = steps;
    Eigen::VectorXd w = ldlt.solve(basis[static_cast<size_t>(j)]);
    double a = basis[static_cast<size_t>(j)].dot(w);
    alpha.push_back(a);
    w -= a * basis[static_cast<size_t>(j)];
    if (j > 0) w -= beta[static_cast<size_t>(j - 1)] * basis[static_cast<size_t>(j - 1)];
    // full reorthogonalization, two passes
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) w -= q.dot(w) * q;
    double bnorm = w.norm();
    bool breakdown = bnorm < 1e-10;
    beta.push_back(breakdown ? 0.0 : bnorm);
    basis.push_back(breakdown ? random_unit(basis) : Eigen::VectorXd(w / bnorm));

    const int m = j + 1;
    if (m < count || (m % 4 != 0 && m < request.max_iter && !breakdown && m != request.max_iter)) continue;

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha[static_cast<size_t>(i)];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    // Largest theta correspond to the eigenvalues nearest above the shift.
    Eigen::VectorXd theta(count);
    Eigen::MatrixXd s(m, count);
    int have = 0;
    for (int i = m - 1; i >= 0 && have < count; --i) {
      if (es.eigenvalues()[i] <= 0.0) break;  // beyond the spectrum side of the shift
      theta[have] = es.eigenvalues()[i];
      s.col(have) = es.eigenvectors().col(i);
      ++have;
    }
    if (have < count) continue;

    double blast = beta.back() == 0.0 ? bnorm : beta.back();
    bool all_ok = true;
    for (int i = 0; i < count; ++i) {
      double lam = request.shift + 1.0 / theta[i];
      double err = std::abs(blast * s(m - 1, i)) / (theta[i] * theta[i]);
      if (err > 0.1 * tol * (std::abs(lam) + 1.0)) {
        all_ok = false;
        break;
      }
    }
    theta_keep = theta;
    s_keep = s;
    if (all_ok) {
      EigenResult res = make_result(theta, s, count, m);
      bool verified = true;
      for (int i = 0; i < count; ++i)
        if (res.residuals[i] > tol * (std::abs(res.values[i]) + 1.0)) verified = false;
      if (verified) return res;
    }
  }

  EigenResult partial;
  if (theta_keep.size() > 0) partial = make_result(theta_keep, s_keep, static_cast<int>(theta_keep.size()), steps);
  throw SolveError("Lanczos did not converge within the iteration budget", std::move(partial));
}

EigenResult dense_reference(const FiberMatrix& matrix) {
  const int n = matrix.dimension();
  if (n > 4000) throw std::invalid_argument("dense_reference refuses dimension > 4000");
  Eigen::VectorXd dinv = matrix.volumes.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd c = Eigen::MatrixXd(matrix.stiffness);
  c = dinv.asDiagonal() * c * dinv.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolve failed");
  EigenResult res;
  res.values = es.eigenvalues();
  res.vectors = dinv.asDiagonal() * es.eigenvectors();
  res.iterations = 1;
  res.residuals = residual_report(matrix, res);
  return res;
}

Eigen::VectorXd residual_report(const FiberMatrix& matrix, const EigenResult& result) {
  const int k = static_cast<int>(result.values.size());
  Eigen::VectorXd out(k);
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd v = result.vectors.col(i);
    Eigen::VectorXd r = matrix.stiffness * v - result.values[i] * matrix.volumes.cwiseProduct(v);
    out[i] = r.norm() / v.norm();
  }
  return out;
}

}  // namespace magband
