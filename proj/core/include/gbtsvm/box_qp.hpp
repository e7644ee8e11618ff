#pragma once

#include <Eigen/Dense>
#include <functional>

#include "gbtsvm/errors.hpp"

namespace gbtsvm {

/// Concave box-constrained maximization problem
///   max f(a) = linear' a - 1/2 a' hessian a,   0 <= a <= upper.
struct BoxQp {
  Eigen::MatrixXd hessian;  // symmetric positive semidefinite, m x m
  Eigen::VectorXd linear;   // m
  Eigen::VectorXd upper;    // componentwise upper bounds, > 0

  Eigen::Index size() const { return linear.size(); }
  double objective(const Eigen::VectorXd& a) const {
    return linear.dot(a) - 0.5 * a.dot(hessian * a);
  }
};

struct QpSolution {
  Eigen::VectorXd alpha;
  double objective_value = 0.0;
  double kkt_residual = 0.0;  // ||a - clamp(a + grad, 0, upper)||_inf
  int iterations = 0;
  bool converged = false;
};

/// Per-iteration trace hook: (iteration, objective, kkt_residual).
using SolveTrace = std::function<void(int, double, double)>;

/// Builds the dual of one hyperplane problem from augmented center blocks:
/// with E = [own_centers 1] and F = [other_centers 1],
///   hessian = F (E'E + reg_eps I)^{-1} F'   (via LLT, never an explicit inverse)
///   linear  = 1 + other_radii
/// Throws NumericalFailure if the regularized Gram matrix cannot be factored.
BoxQp assemble_dual(const Eigen::MatrixXd& own_centers, const Eigen::MatrixXd& other_centers,
                    const Eigen::VectorXd& other_radii, double reg_eps,
                    const Eigen::VectorXd& upper_bounds);

/// Projected-gradient solver with Barzilai-Borwein steps and a nonmonotone
/// line search. Iterates are feasible at every step; the returned iterate is
/// the best one seen. max_iter <= 0 selects 10*m + 1000.
QpSolution solve(const BoxQp& qp, double tol = 1e-6, int max_iter = 0,
                 const SolveTrace& trace = nullptr);

/// Appends a column of ones (the bias coordinate) to a center matrix.
Eigen::MatrixXd augment_ones(const Eigen::MatrixXd& m);

}  // namespace gbtsvm
