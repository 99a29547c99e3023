#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

#include "magband/discretize.hpp"

// Lowest eigenpairs of the symmetric pencil A v = lambda M v with diagonal
// positive M.  The pencil is reduced to standard form C = M^{-1/2} A M^{-1/2}
// and solved by shift-invert Lanczos with full reorthogonalization; a dense
// solver on small instances serves as the independent oracle.

namespace magband {

struct EigenRequest {
  int count = 6;
  double tol = 1e-10;  // relative residual tolerance, clamped to [1e-14, 1e-6]
  int max_iter = 800;  // Lanczos steps
  double shift = -1.0; // spectral transformation target; keep below the spectrum
};

struct EigenResult {
  Eigen::VectorXd values;     // ascending
  Eigen::MatrixXd vectors;    // columns, orthonormal in the M inner product
  Eigen::VectorXd residuals;  // ||A v - lambda M v|| / ||v||
  int iterations = 0;
};

/// Non-convergence within the iteration budget; carries the partial result.
struct SolveError : std::runtime_error {
  EigenResult partial;
  SolveError(const std::string& msg, EigenResult partial_result)
      : std::runtime_error(msg), partial(std::move(partial_result)) {}
};

EigenResult smallest_eigenpairs(const FiberMatrix& matrix, const EigenRequest& request);

/// Full spectrum by a dense symmetric solve; refuses dimension > 4000.
EigenResult dense_reference(const FiberMatrix& matrix);

/// Recompute ||A v - lambda M v|| / ||v|| independently of the solver.
Eigen::VectorXd residual_report(const FiberMatrix& matrix, const EigenResult& result);

}  // namespace magband
