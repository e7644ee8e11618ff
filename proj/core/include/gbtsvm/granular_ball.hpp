#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "gbtsvm/dataset.hpp"
#include "gbtsvm/errors.hpp"

namespace gbtsvm {

enum class RadiusMode { Max, Mean };

/// Heterogeneous separation enforced between balls of opposite label:
///   RadiusDiff: ||ci - cj|| > |ri - rj|   (forbids near-containment)
///   Disjoint:   ||ci - cj|| > ri + rj     (forbids any intersection)
enum class DeOverlapMode { RadiusDiff, Disjoint, Off };

/// A hypersphere summarizing a subset of samples: mean center, enclosing (or
/// mean) radius, majority label, and the fraction of members carrying it.
struct GranularBall {
  Eigen::VectorXd center;
  double radius = 0.0;
  double purity = 1.0;
  int label = 1;                    // +1 / -1, majority label, tie -> +1
  std::vector<int> member_indices;  // rows of the source dataset

  int size() const { return static_cast<int>(member_indices.size()); }
};

struct GenerationConfig {
  double purity_threshold = 1.0;  // T0, in (0.5, 1]
  RadiusMode radius_mode = RadiusMode::Max;
  int min_split_size = 2;  // balls at or below this size are leaves
  DeOverlapMode de_overlap = DeOverlapMode::Disjoint;
  std::uint64_t seed = 0;
};

/// A covering family: member index sets of distinct balls are disjoint and
/// their union is {0..source_n-1}.
struct BallFamily {
  std::vector<GranularBall> balls;
  GenerationConfig generation_params;
  int source_n = 0;
};

enum class Region { Positive, Boundary };

struct BallStats {
  Eigen::VectorXd center;
  double radius;
  double purity;
  int label;
};

/// Center / radius / purity / majority label of one member set.
BallStats ball_stats(const Eigen::MatrixXd& member_rows, const Eigen::VectorXi& member_labels,
                     RadiusMode mode);

/// Builds a covering ball family by adaptive binary splitting.
///
/// Starting from one ball holding every row, a ball is split in two by
/// 2-means over its members when its purity is below the threshold, or when
/// the size-weighted purity of the tentative children strictly improves on
/// the parent and both children clear min_split_size. 2-means seeding is
/// deterministic and label-aware: on an impure ball the initial centers are
/// the +1 member farthest from the -1 centroid and vice versa; on a pure
/// ball, the farthest pair from the ball center. Afterwards, heterogeneous
/// ball pairs violating the configured separation are resolved by re-splitting
/// the larger ball of the pair, iterated to a fixpoint (capped at 4x the
/// family size; pairs where neither ball can split are left as-is).
BallFamily generate_balls(const Dataset& ds, const GenerationConfig& cfg);

/// Positive region iff purity is exactly 1.
Region assign_region(const GranularBall& gb);

struct ClassSplit {
  Eigen::MatrixXd centers_pos;  // m+ x d, family order
  Eigen::VectorXd radii_pos;
  Eigen::MatrixXd centers_neg;  // m- x d, family order
  Eigen::VectorXd radii_neg;
  std::vector<int> index_pos;  // positions in family.balls
  std::vector<int> index_neg;
};

/// Stacks centers and radii per class, preserving family order.
/// Throws SingleClassFamily when either class is absent.
ClassSplit split_by_class(const BallFamily& fam);

/// One CSV row per ball (`center...,radius,purity,label,size`) plus a JSON
/// sidecar holding the generation config.
void save_ball_family(const BallFamily& fam, const std::filesystem::path& csv_path,
                      const std::filesystem::path& sidecar_path);

const char* to_string(RadiusMode mode);
const char* to_string(DeOverlapMode mode);

}  // namespace gbtsvm
