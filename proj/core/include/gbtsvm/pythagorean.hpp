#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gbtsvm/granular_ball.hpp"

namespace gbtsvm {

/// Per-class geometry of ball centers: the class center is the mean of
/// same-class ball centers, the class radius the largest distance from a
/// same-class ball center to it.
struct ClassGeometry {
  Eigen::VectorXd center_pos;
  double radius_pos = 0.0;
  Eigen::VectorXd center_neg;
  double radius_neg = 0.0;
  double epsilon = 1e-6;
};

struct PythagoreanScore {
  double mu = 1.0;     // membership, (0, 1]
  double nu = 0.0;     // non-membership, [0, 1), mu^2 + nu^2 <= 1
  double theta = 1.0;  // closeness, (0, 1]
  double score = 1.0;  // mu in the positive region, theta in the boundary region
  Region region = Region::Positive;
};

/// Membership values are clamped below by this floor so they stay positive
/// even for the farthest ball of a class.
inline constexpr double kMembershipFloor = 1e-6;

ClassGeometry class_geometry(const BallFamily& fam, double epsilon = 1e-6);

/// mu = 1 - ||c - C^y|| / (R^y + eps) for the ball's own class y,
/// clamped to [kMembershipFloor, 1].
double membership(const GranularBall& gb, const ClassGeometry& geo);

/// Ball membership as the mean of known per-sample memberships.
double membership_from_samples(const std::vector<double>& sample_memberships);

/// nu = sqrt((1 - mu^2)(1 - purity)).
double non_membership(double mu, double purity);

/// theta = sqrt((1 - nu^2) / (2 - mu^2 - nu^2)).
double closeness(double mu, double nu);

/// Scores every ball of the family, aligned with fam.balls.
std::vector<PythagoreanScore> score_family(const BallFamily& fam, double epsilon = 1e-6);

/// Score vector of the positive-class (resp. negative-class) balls in family
/// order, as consumed by the score-weighted trainer.
Eigen::VectorXd scores_for_class(const BallFamily& fam,
                                 const std::vector<PythagoreanScore>& scores, int label);

}  // namespace gbtsvm
