#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "gbtsvm/box_qp.hpp"
#include "gbtsvm/dataset.hpp"
#include "gbtsvm/granular_ball.hpp"
#include "gbtsvm/pythagorean.hpp"

namespace gbtsvm {

enum class Method { Twsvm, Gbtwsvm, Gbftsvm };

struct TrainConfig {
  double c1 = 1.0;  // penalty of dual 1 (plane near class +1)
  double c2 = 1.0;  // penalty of dual 2 (plane near class -1)
  double c3 = 1.0;  // score-weighted penalty of dual 1
  double c4 = 1.0;  // score-weighted penalty of dual 2
  double reg_eps = 1e-4;
  double qp_tol = 1e-6;
  int qp_max_iter = 0;  // 0 selects 10*m + 1000
};

/// A pair of non-parallel hyperplanes: plane 1 hugs class +1, plane 2 hugs
/// class -1. A point takes the label of the closer plane.
struct TwinModel {
  Eigen::VectorXd w1;
  double b1 = 0.0;
  Eigen::VectorXd w2;
  double b2 = 0.0;
  Method trained_by = Method::Twsvm;
  TrainConfig config;
  bool qp1_converged = true;  // advisory; training proceeds on the best iterate
  bool qp2_converged = true;

  Eigen::Index dim() const { return w1.size(); }
};

/// Classic twin SVM on point inputs. Uses the same regularized recovery as
/// the ball-based trainers, so zero-radius singleton balls reproduce it
/// exactly.
TwinModel train_twsvm(const Dataset& ds, const TrainConfig& cfg);

/// Twin SVM on granular-ball inputs: the dual linear terms gain the
/// other-class radii, pushing each plane past the ball surfaces.
TwinModel train_gbtwsvm(const BallFamily& fam, const TrainConfig& cfg);

/// Score-weighted variant: dual upper bounds become c3 * score (dual 1,
/// negative-class balls) and c4 * score (dual 2, positive-class balls).
TwinModel train_gbftsvm(const BallFamily& fam, const std::vector<PythagoreanScore>& scores,
                        const TrainConfig& cfg);

/// Label of the closer hyperplane (normalized distance); ties go to +1.
int predict(const TwinModel& model, const Eigen::VectorXd& x);
Eigen::VectorXi predict_batch(const TwinModel& model, const Eigen::MatrixXd& xs);

/// Textual model format, 17 significant digits; round-trips bit-exactly.
void save_model(const TwinModel& model, const std::filesystem::path& path);
TwinModel load_model(const std::filesystem::path& path);

const char* to_string(Method method);
Method method_from_string(const std::string& name);

}  // namespace gbtsvm
