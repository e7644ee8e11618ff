#include "gbtsvm/pythagorean.hpp"

#include <algorithm>
#include <cmath>

#include "gbtsvm/errors.hpp"

namespace gbtsvm {

ClassGeometry class_geometry(const BallFamily& fam, double epsilon) {
  ClassSplit split = split_by_class(fam);
  ClassGeometry geo;
  geo.epsilon = epsilon;
  geo.center_pos = split.centers_pos.colwise().mean().transpose();
  geo.center_neg = split.centers_neg.colwise().mean().transpose();
  geo.radius_pos = (split.centers_pos.rowwise() - geo.center_pos.transpose()).rowwise().norm().maxCoeff();
  geo.radius_neg = (split.centers_neg.rowwise() - geo.center_neg.transpose()).rowwise().norm().maxCoeff();
  return geo;
}

double membership(const GranularBall& gb, const ClassGeometry& geo) {
  const bool pos = gb.label > 0;
  const double dist = (gb.center - (pos ? geo.center_pos : geo.center_neg)).norm();
  const double reach = (pos ? geo.radius_pos : geo.radius_neg) + geo.epsilon;
  return std::clamp(1.0 - dist / reach, kMembershipFloor, 1.0);
}

double membership_from_samples(const std::vector<double>& sample_memberships) {
  if (sample_memberships.empty()) throw EmptyInput("no sample memberships given");
  double sum = 0.0;
  for (double m : sample_memberships) sum += m;
  return std::clamp(sum / static_cast<double>(sample_memberships.size()), kMembershipFloor, 1.0);
}

double non_membership(double mu, double purity) {
  return std::sqrt(std::max(0.0, (1.0 - mu * mu) * (1.0 - purity)));
}

double closeness(double mu, double nu) {
  return std::sqrt((1.0 - nu * nu) / (2.0 - mu * mu - nu * nu));
}

std::vector<PythagoreanScore> score_family(const BallFamily& fam, double epsilon) {
  const ClassGeometry geo = class_geometry(fam, epsilon);
  std::vector<PythagoreanScore> scores;
  scores.reserve(fam.balls.size());
  for (const auto& gb : fam.balls) {
    PythagoreanScore s;
    s.mu = membership(gb, geo);
    s.nu = non_membership(s.mu, gb.purity);
    s.theta = closeness(s.mu, s.nu);
    s.region = assign_region(gb);
    s.score = s.region == Region::Positive ? s.mu : s.theta;
    scores.push_back(s);
  }
  return scores;
}

Eigen::VectorXd scores_for_class(const BallFamily& fam,
                                 const std::vector<PythagoreanScore>& scores, int label) {
  if (scores.size() != fam.balls.size()) {
    throw ScoreMisalignment("score vector length does not match ball family");
  }
  std::vector<double> vals;
  for (std::size_t i = 0; i < fam.balls.size(); ++i) {
    if (fam.balls[i].label == label) vals.push_back(scores[i].score);
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) out[static_cast<Eigen::Index>(i)] = vals[i];
  return out;
}

}  // namespace gbtsvm
