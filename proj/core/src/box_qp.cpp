#include "gbtsvm/box_qp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace gbtsvm {

Eigen::MatrixXd augment_ones(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out(m.rows(), m.cols() + 1);
  out.leftCols(m.cols()) = m;
  out.col(m.cols()).setOnes();
  return out;
}

BoxQp assemble_dual(const Eigen::MatrixXd& own_centers, const Eigen::MatrixXd& other_centers,
                    const Eigen::VectorXd& other_radii, double reg_eps,
                    const Eigen::VectorXd& upper_bounds) {
  if (own_centers.rows() == 0) throw EmptyInput("dual assembly needs at least one own-class row");
  if (other_centers.rows() != other_radii.size() || other_centers.rows() != upper_bounds.size()) {
    throw LengthMismatch("other-class centers, radii and bounds disagree");
  }
  const Eigen::MatrixXd own_aug = augment_ones(own_centers);
  const Eigen::MatrixXd other_aug = augment_ones(other_centers);
  Eigen::MatrixXd gram = own_aug.transpose() * own_aug;
  gram.diagonal().array() += reg_eps;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw NumericalFailure("regularized Gram factorization failed");
  }
  BoxQp qp;
  qp.hessian = other_aug * llt.solve(other_aug.transpose());
  qp.hessian = 0.5 * (qp.hessian + qp.hessian.transpose()).eval();  // exact symmetry
  qp.linear = Eigen::VectorXd::Ones(other_centers.rows()) + other_radii;
  qp.upper = upper_bounds;
  return qp;
}

namespace {

Eigen::VectorXd project(const Eigen::VectorXd& a, const Eigen::VectorXd& upper) {
  return a.cwiseMax(0.0).cwiseMin(upper);
}

}  // namespace

QpSolution solve(const BoxQp& qp, double tol, int max_iter, const SolveTrace& trace) {
  const Eigen::Index m = qp.size();
  if (max_iter <= 0) max_iter = static_cast<int>(10 * m) + 1000;

  QpSolution sol;
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd grad = qp.linear;  // q - Q*0
  double f = 0.0;

  sol.alpha = alpha;
  sol.objective_value = f;

  // nonmonotone reference window (maximization: compare against the worst
  // recent value)
  std::deque<double> recent{f};
  constexpr std::size_t kWindow = 10;
  constexpr double kArmijo = 1e-4;

  double step = 1.0;
  const double hessian_scale = qp.hessian.diagonal().cwiseAbs().maxCoeff();
  if (hessian_scale > 0) step = 1.0 / hessian_scale;

  int it = 0;
  for (; it < max_iter; ++it) {
    if (it % 50 == 49) grad = qp.linear - qp.hessian * alpha;  // drift correction
    double resid = (alpha - project(alpha + grad, qp.upper)).cwiseAbs().maxCoeff();
    if (trace) trace(it, f, resid);
    if (resid <= tol) {
      // confirm on an exactly recomputed gradient before declaring success
      grad = qp.linear - qp.hessian * alpha;
      resid = (alpha - project(alpha + grad, qp.upper)).cwiseAbs().maxCoeff();
      if (resid <= tol) {
        sol.alpha = alpha;
        sol.objective_value = qp.objective(alpha);
        sol.kkt_residual = resid;
        sol.iterations = it;
        sol.converged = true;
        return sol;
      }
    }

    Eigen::VectorXd dir = project(alpha + step * grad, qp.upper) - alpha;
    double slope = grad.dot(dir);
    if (slope <= 0.0) {
      // stale BB step; fall back to a unit projected gradient direction
      dir = project(alpha + grad, qp.upper) - alpha;
      slope = grad.dot(dir);
      if (slope <= 0.0) break;  // numerically stationary
    }

    const Eigen::VectorXd hess_dir = qp.hessian * dir;
    const double f_ref = *std::min_element(recent.begin(), recent.end());
    double lambda = 1.0;
    double f_trial = 0.0;
    for (int back = 0; back < 60; ++back) {
      f_trial = f + lambda * slope - 0.5 * lambda * lambda * dir.dot(hess_dir);
      if (f_trial >= f_ref + kArmijo * lambda * slope) break;
      lambda *= 0.5;
    }

    const Eigen::VectorXd stepv = lambda * dir;
    alpha += stepv;
    const Eigen::VectorXd grad_new = grad - lambda * hess_dir;
    f = f_trial;

    // BB1 step for the next iterate: s's / s'Qs (curvature along s)
    const double sty = stepv.dot(lambda * hess_dir);
    step = sty > 0 ? std::clamp(stepv.squaredNorm() / sty, 1e-12, 1e12) : 1.0;

    grad = grad_new;
    recent.push_back(f);
    if (recent.size() > kWindow) recent.pop_front();
    if (f > sol.objective_value) {
      sol.objective_value = f;
      sol.alpha = alpha;
    }
  }

  // best iterate, recomputed diagnostics
  sol.alpha = project(sol.alpha, qp.upper);
  const Eigen::VectorXd g = qp.linear - qp.hessian * sol.alpha;
  sol.objective_value = qp.objective(sol.alpha);
  sol.kkt_residual = (sol.alpha - project(sol.alpha + g, qp.upper)).cwiseAbs().maxCoeff();
  sol.iterations = it;
  sol.converged = sol.kkt_residual <= tol;
  return sol;
}

}  // namespace gbtsvm
