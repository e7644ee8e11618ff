#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "gbtsvm/classifiers.hpp"
#include "gbtsvm/dataset.hpp"
#include "gbtsvm/granular_ball.hpp"

namespace gbtsvm {

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;  // support-weighted one-vs-rest average over both classes
  double recall = 0.0;
};

/// Accuracy plus support-weighted precision/recall over the two classes.
Metrics compute_metrics(const Eigen::VectorXi& y_true, const Eigen::VectorXi& y_pred);

struct FoldRecord {
  int fold = 0;
  int test_size = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double train_seconds = 0.0;
  double predict_seconds = 0.0;
  bool skipped = false;
  std::string skip_reason;
};

struct MetricReport {
  double accuracy = 0.0;  // mean of fold accuracies
  double precision = 0.0;
  double recall = 0.0;
  double acc_sd = 0.0;  // sample standard deviation across folds
  double train_time_s = 0.0;
  double predict_time_s = 0.0;
  std::vector<FoldRecord> per_fold;
};

struct CvOptions {
  double noise_rate = 0.0;  // label noise injected into the training split of each fold
  std::uint64_t noise_seed = 0;
  bool noise_on_test = false;  // also corrupt held-out labels (off: test stays clean)
  int threads = 1;
};

/// k-fold protocol: per fold, train on the complement (ball generation, when
/// applicable, runs on the training split only, seeded per fold), predict the
/// held-out fold. Folds whose training split degenerates to one class are
/// skipped and recorded.
MetricReport cross_validate(const Dataset& ds, Method method, const TrainConfig& cfg,
                            const GenerationConfig& gen_cfg, const FoldPlan& folds,
                            const CvOptions& opts = {});

struct GridPoint {
  double c1 = 0.0;
  double c2 = 0.0;
  MetricReport report;
};

struct GridResult {
  double best_c1 = 0.0;
  double best_c2 = 0.0;
  double best_accuracy = 0.0;
  std::vector<GridPoint> surface;  // row-major over (exp1, exp2)
};

/// Exhaustive search over (c1, c2) in {2^i} x {2^j}, i, j in
/// [exp_lo, exp_hi]; c3/c4 are tied to c1/c2. Ties on accuracy break to the
/// smallest (c1, c2) lexicographically.
GridResult grid_search(const Dataset& ds, Method method, int exp_lo, int exp_hi,
                       const GenerationConfig& gen_cfg, const FoldPlan& folds,
                       const TrainConfig& base_cfg = {}, int threads = 1);

struct SignificanceReport {
  Eigen::MatrixXd rank_matrix;  // datasets x models, average-tied, 1 = best
  Eigen::VectorXd avg_ranks;
  double chi2_f = 0.0;
  double f_f = 0.0;
  std::pair<int, int> dof{0, 0};  // (M-1, (M-1)(N-1))
  double cd = 0.0;
  std::vector<std::vector<bool>> pairwise_significant;
};

/// Friedman test over an accuracy matrix (datasets x models), with Nemenyi
/// critical difference at the given q_alpha.
SignificanceReport friedman_test(const Eigen::MatrixXd& acc_matrix, double q_alpha = 2.949);

/// CD = q_alpha * sqrt(M(M+1) / (6N)).
double nemenyi_cd(int models, int datasets, double q_alpha);

struct NoiseSweepRow {
  Method method = Method::Twsvm;
  double rate = 0.0;
  std::uint64_t seed = 0;
  MetricReport report;
};

/// Cross-validates every (method, rate, seed) combination with label noise in
/// the training folds only.
std::vector<NoiseSweepRow> noise_sweep(const Dataset& ds, const std::vector<Method>& methods,
                                       const std::vector<double>& rates,
                                       const std::vector<std::uint64_t>& seeds,
                                       const GenerationConfig& gen_cfg, const FoldPlan& folds,
                                       const TrainConfig& cfg = {}, int threads = 1);

/// Reads a datasets-x-models accuracy matrix; optional header row and
/// optional leading name column are detected and returned via the out-params.
Eigen::MatrixXd load_accuracy_matrix(const std::filesystem::path& path,
                                     std::vector<std::string>* model_names = nullptr,
                                     std::vector<std::string>* dataset_names = nullptr);

void write_cd_diagram_data(const SignificanceReport& report,
                           const std::vector<std::string>& model_names,
                           const std::filesystem::path& path);

}  // namespace gbtsvm
