#pragma once

// Independent reference implementations used to check the library. These are
// deliberately brute-force and share no code with the solvers they verify.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

/// Global maximizer of q'a - 1/2 a'Q a over 0 <= a <= u by exhaustive
/// active-set enumeration: every coordinate is lower-active, free, or
/// upper-active (3^m patterns); each equality-restricted system is solved and
/// candidates are screened by feasibility and KKT sign conditions.
inline std::optional<Eigen::VectorXd> box_qp_argmax(const Eigen::MatrixXd& Q,
                                                    const Eigen::VectorXd& q,
                                                    const Eigen::VectorXd& u,
                                                    double tol = 1e-7) {
  const int m = static_cast<int>(q.size());
  long patterns = 1;
  for (int i = 0; i < m; ++i) patterns *= 3;

  std::optional<Eigen::VectorXd> best;
  double best_obj = -std::numeric_limits<double>::infinity();
  for (long code = 0; code < patterns; ++code) {
    long c = code;
    std::vector<int> state(m);  // 0 = lower, 1 = free, 2 = upper
    std::vector<int> free_idx;
    for (int i = 0; i < m; ++i) {
      state[i] = static_cast<int>(c % 3);
      c /= 3;
      if (state[i] == 1) free_idx.push_back(i);
    }
    Eigen::VectorXd a(m);
    for (int i = 0; i < m; ++i) a[i] = state[i] == 2 ? u[i] : 0.0;
    const int f = static_cast<int>(free_idx.size());
    if (f > 0) {
      Eigen::MatrixXd Qff(f, f);
      Eigen::VectorXd rhs(f);
      for (int r = 0; r < f; ++r) {
        rhs[r] = q[free_idx[r]];
        for (int i = 0; i < m; ++i) {
          if (state[i] == 2) rhs[r] -= Q(free_idx[r], i) * u[i];
        }
        for (int s = 0; s < f; ++s) Qff(r, s) = Q(free_idx[r], free_idx[s]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(Qff);
      if (!lu.isInvertible()) continue;
      const Eigen::VectorXd af = lu.solve(rhs);
      bool ok = true;
      for (int r = 0; r < f; ++r) {
        if (af[r] < -tol || af[r] > u[free_idx[r]] + tol) ok = false;
        a[free_idx[r]] = std::clamp(af[r], 0.0, u[free_idx[r]]);
      }
      if (!ok) continue;
    }
    const Eigen::VectorXd g = q - Q * a;
    bool kkt = true;
    for (int i = 0; i < m; ++i) {
      if (state[i] == 0 && g[i] > tol) kkt = false;
      if (state[i] == 2 && g[i] < -tol) kkt = false;
    }
    if (!kkt) continue;
    const double obj = q.dot(a) - 0.5 * a.dot(Q * a);
    if (obj > best_obj) {
      best_obj = obj;
      best = a;
    }
  }
  return best;
}

/// Within-cluster sum of squares of a 2-partition given by a 0/1 assignment.
inline double wcss(const Eigen::MatrixXd& rows, const std::vector<int>& assign) {
  double total = 0.0;
  for (int side : {0, 1}) {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(rows.cols());
    int count = 0;
    for (std::size_t i = 0; i < assign.size(); ++i) {
      if (assign[i] == side) {
        mean += rows.row(static_cast<Eigen::Index>(i)).transpose();
        ++count;
      }
    }
    if (count == 0) continue;
    mean /= count;
    for (std::size_t i = 0; i < assign.size(); ++i) {
      if (assign[i] == side) {
        total += (rows.row(static_cast<Eigen::Index>(i)).transpose() - mean).squaredNorm();
      }
    }
  }
  return total;
}

/// Minimum WCSS over all nonempty 2-partitions (exponential; small n only).
inline double best_wcss(const Eigen::MatrixXd& rows) {
  const int n = static_cast<int>(rows.rows());
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 1; mask < (1 << n) - 1; ++mask) {
    std::vector<int> assign(n);
    for (int i = 0; i < n; ++i) assign[i] = (mask >> i) & 1;
    best = std::min(best, wcss(rows, assign));
  }
  return best;
}

}  // namespace oracle

namespace testgen {

/// Two Gaussian blobs with configurable separation, normalized to [0,1]^d by
/// the library contract's preprocessing.
inline void blobs(std::mt19937_64& rng, int n, int d, double separation,
                  Eigen::MatrixXd& features, Eigen::VectorXi& labels) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  features.resize(n, d);
  labels.resize(n);
  for (int i = 0; i < n; ++i) {
    const int cls = i % 2 == 0 ? 1 : -1;
    labels[i] = cls;
    for (int j = 0; j < d; ++j) {
      features(i, j) = gauss(rng) + (j == 0 ? cls * separation / 2.0 : 0.0);
    }
  }
  for (int j = 0; j < d; ++j) {
    const double lo = features.col(j).minCoeff();
    const double hi = features.col(j).maxCoeff();
    if (hi > lo) features.col(j) = (features.col(j).array() - lo) / (hi - lo);
  }
}

}  // namespace testgen
