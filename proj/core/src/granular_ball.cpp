#include "gbtsvm/granular_ball.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <utility>

#include <nlohmann/json.hpp>

#include "gbtsvm/detail/text.hpp"

namespace gbtsvm {

namespace {

struct Counts {
  int pos = 0;
  int neg = 0;
};

Counts count_labels(const Eigen::VectorXi& labels, const std::vector<int>& members) {
  Counts c;
  for (int i : members) (labels[i] > 0 ? c.pos : c.neg)++;
  return c;
}

double member_purity(const Counts& c) {
  return static_cast<double>(std::max(c.pos, c.neg)) / (c.pos + c.neg);
}

Eigen::VectorXd member_mean(const Eigen::MatrixXd& x, const std::vector<int>& members) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(x.cols());
  for (int i : members) m += x.row(i).transpose();
  return m / static_cast<double>(members.size());
}

bool all_rows_identical(const Eigen::MatrixXd& x, const std::vector<int>& members) {
  for (std::size_t i = 1; i < members.size(); ++i) {
    if (x.row(members[i]) != x.row(members[0])) return false;
  }
  return true;
}

/// Deterministic 2-means over a subset of rows. Returns false when the subset
/// cannot be separated (all points identical).
bool split_two(const Eigen::MatrixXd& x, const Eigen::VectorXi& labels,
               const std::vector<int>& members, std::vector<int>& out_a,
               std::vector<int>& out_b) {
  const int n = static_cast<int>(members.size());
  if (n < 2 || all_rows_identical(x, members)) return false;

  auto farthest_from = [&](const Eigen::VectorXd& point, const std::vector<int>& pool) {
    int best = pool.front();
    double best_d = -1.0;
    for (int i : pool) {
      double d = (x.row(i).transpose() - point).squaredNorm();
      if (d > best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  };

  Counts counts = count_labels(labels, members);
  Eigen::VectorXd c1, c2;
  if (counts.pos > 0 && counts.neg > 0) {
    std::vector<int> pos, neg;
    for (int i : members) (labels[i] > 0 ? pos : neg).push_back(i);
    Eigen::VectorXd pos_centroid = member_mean(x, pos);
    Eigen::VectorXd neg_centroid = member_mean(x, neg);
    c1 = x.row(farthest_from(neg_centroid, pos)).transpose();
    c2 = x.row(farthest_from(pos_centroid, neg)).transpose();
  } else {
    Eigen::VectorXd center = member_mean(x, members);
    int s1 = farthest_from(center, members);
    c1 = x.row(s1).transpose();
    c2 = x.row(farthest_from(c1, members)).transpose();
  }
  if (c1 == c2) {
    // duplicate rows across labels; fall back to the farthest pair
    Eigen::VectorXd center = member_mean(x, members);
    int s1 = farthest_from(center, members);
    c1 = x.row(s1).transpose();
    c2 = x.row(farthest_from(c1, members)).transpose();
    if (c1 == c2) return false;
  }

  std::vector<char> assign(n, 0), prev(n, 2);
  for (int iter = 0; iter < 100 && assign != prev; ++iter) {
    prev = assign;
    bool any_a = false, any_b = false;
    for (int t = 0; t < n; ++t) {
      const double da = (x.row(members[t]).transpose() - c1).squaredNorm();
      const double db = (x.row(members[t]).transpose() - c2).squaredNorm();
      assign[t] = da <= db ? 0 : 1;  // tie -> first cluster
      (assign[t] == 0 ? any_a : any_b) = true;
    }
    if (!any_a || !any_b) {
      assign = prev;  // keep the last nonempty split
      break;
    }
    Eigen::VectorXd s1 = Eigen::VectorXd::Zero(x.cols()), s2 = s1;
    int n1 = 0, n2 = 0;
    for (int t = 0; t < n; ++t) {
      if (assign[t] == 0) {
        s1 += x.row(members[t]).transpose();
        ++n1;
      } else {
        s2 += x.row(members[t]).transpose();
        ++n2;
      }
    }
    c1 = s1 / n1;
    c2 = s2 / n2;
  }

  out_a.clear();
  out_b.clear();
  for (int t = 0; t < n; ++t) (assign[t] == 0 ? out_a : out_b).push_back(members[t]);
  return !out_a.empty() && !out_b.empty();
}

GranularBall make_ball(const Eigen::MatrixXd& x, const Eigen::VectorXi& labels,
                       std::vector<int> members, RadiusMode mode) {
  GranularBall gb;
  gb.center = member_mean(x, members);
  Counts c = count_labels(labels, members);
  gb.label = c.pos >= c.neg ? 1 : -1;
  gb.purity = member_purity(c);
  double acc = 0.0;
  for (int i : members) {
    double d = (x.row(i).transpose() - gb.center).norm();
    if (mode == RadiusMode::Max) {
      acc = std::max(acc, d);
    } else {
      acc += d;
    }
  }
  gb.radius = mode == RadiusMode::Max ? acc : acc / static_cast<double>(members.size());
  gb.member_indices = std::move(members);
  return gb;
}

bool pair_violates(const GranularBall& a, const GranularBall& b, DeOverlapMode mode) {
  const double dist = (a.center - b.center).norm();
  switch (mode) {
    case DeOverlapMode::RadiusDiff:
      return dist <= std::abs(a.radius - b.radius);
    case DeOverlapMode::Disjoint:
      return dist <= a.radius + b.radius;
    case DeOverlapMode::Off:
      return false;
  }
  return false;
}

}  // namespace

BallStats ball_stats(const Eigen::MatrixXd& member_rows, const Eigen::VectorXi& member_labels,
                     RadiusMode mode) {
  if (member_rows.rows() == 0) throw EmptyInput("ball_stats needs at least one member");
  if (member_rows.rows() != member_labels.size()) {
    throw LengthMismatch("rows and labels disagree");
  }
  BallStats s;
  s.center = member_rows.colwise().mean().transpose();
  Counts c;
  for (Eigen::Index i = 0; i < member_labels.size(); ++i) (member_labels[i] > 0 ? c.pos : c.neg)++;
  s.label = c.pos >= c.neg ? 1 : -1;
  s.purity = member_purity(c);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < member_rows.rows(); ++i) {
    double d = (member_rows.row(i).transpose() - s.center).norm();
    acc = mode == RadiusMode::Max ? std::max(acc, d) : acc + d;
  }
  s.radius = mode == RadiusMode::Max ? acc : acc / static_cast<double>(member_rows.rows());
  return s;
}

BallFamily generate_balls(const Dataset& ds, const GenerationConfig& cfg) {
  if (ds.n() == 0) throw EmptyDataset("cannot generate balls from an empty dataset");
  const Eigen::MatrixXd& x = ds.features;
  const Eigen::VectorXi& y = ds.labels;

  BallFamily fam;
  fam.generation_params = cfg;
  fam.source_n = static_cast<int>(ds.n());

  auto splittable = [&](const std::vector<int>& members) {
    return static_cast<int>(members.size()) > cfg.min_split_size && !all_rows_identical(x, members);
  };

  // Purity-driven refinement of a work list of member sets; leaves are
  // appended to fam.balls in creation order.
  auto refine = [&](std::vector<int> root) {
    std::deque<std::vector<int>> queue;
    queue.push_back(std::move(root));
    while (!queue.empty()) {
      std::vector<int> members = std::move(queue.front());
      queue.pop_front();
      Counts c = count_labels(y, members);
      const double purity = member_purity(c);
      std::vector<int> a, b;
      if (splittable(members)) {
        if (purity < cfg.purity_threshold) {
          if (split_two(x, y, members, a, b)) {
            queue.push_back(std::move(a));
            queue.push_back(std::move(b));
            continue;
          }
        } else {
          // adaptive improvement: accept the split only if the weighted child
          // purity strictly beats the parent and both children are viable
          if (split_two(x, y, members, a, b) &&
              static_cast<int>(a.size()) >= cfg.min_split_size &&
              static_cast<int>(b.size()) >= cfg.min_split_size) {
            const double wa = member_purity(count_labels(y, a)) * a.size();
            const double wb = member_purity(count_labels(y, b)) * b.size();
            if ((wa + wb) / members.size() > purity) {
              queue.push_back(std::move(a));
              queue.push_back(std::move(b));
              continue;
            }
          }
        }
      }
      fam.balls.push_back(make_ball(x, y, std::move(members), cfg.radius_mode));
    }
  };

  std::vector<int> all(ds.n());
  for (int i = 0; i < static_cast<int>(ds.n()); ++i) all[i] = i;
  refine(std::move(all));

  if (cfg.de_overlap != DeOverlapMode::Off) {
    // Separation enforcement may split past min_split_size; only the
    // purity-driven refinement above honors that floor.
    auto divisible = [&](const std::vector<int>& members) {
      return members.size() >= 2 && !all_rows_identical(x, members);
    };
    std::size_t resplits = 0;
    for (;;) {
      int target = -1;
      for (std::size_t i = 0; i < fam.balls.size() && target < 0; ++i) {
        for (std::size_t j = i + 1; j < fam.balls.size(); ++j) {
          const GranularBall& gi = fam.balls[i];
          const GranularBall& gj = fam.balls[j];
          if (gi.label == gj.label || !pair_violates(gi, gj, cfg.de_overlap)) continue;
          const bool si = divisible(gi.member_indices);
          const bool sj = divisible(gj.member_indices);
          if (!si && !sj) continue;  // no way to make progress on this pair
          if (si && sj) {
            if (gi.size() != gj.size()) {
              target = gi.size() > gj.size() ? static_cast<int>(i) : static_cast<int>(j);
            } else {
              target = gi.radius >= gj.radius ? static_cast<int>(i) : static_cast<int>(j);
            }
          } else {
            target = si ? static_cast<int>(i) : static_cast<int>(j);
          }
          break;
        }
      }
      if (target < 0 || resplits >= 4 * fam.balls.size()) break;
      ++resplits;
      std::vector<int> members = std::move(fam.balls[target].member_indices);
      fam.balls.erase(fam.balls.begin() + target);
      std::vector<int> a, b;
      if (!split_two(x, y, members, a, b)) {
        // cannot actually split; restore as a leaf
        fam.balls.push_back(make_ball(x, y, std::move(members), cfg.radius_mode));
        continue;
      }
      refine(std::move(a));
      refine(std::move(b));
    }
  }
  return fam;
}

Region assign_region(const GranularBall& gb) {
  return gb.purity == 1.0 ? Region::Positive : Region::Boundary;
}

ClassSplit split_by_class(const BallFamily& fam) {
  ClassSplit split;
  for (std::size_t i = 0; i < fam.balls.size(); ++i) {
    (fam.balls[i].label > 0 ? split.index_pos : split.index_neg).push_back(static_cast<int>(i));
  }
  if (split.index_pos.empty() || split.index_neg.empty()) {
    throw SingleClassFamily("ball family holds only one class");
  }
  const Eigen::Index d = fam.balls.front().center.size();
  split.centers_pos.resize(static_cast<Eigen::Index>(split.index_pos.size()), d);
  split.radii_pos.resize(static_cast<Eigen::Index>(split.index_pos.size()));
  split.centers_neg.resize(static_cast<Eigen::Index>(split.index_neg.size()), d);
  split.radii_neg.resize(static_cast<Eigen::Index>(split.index_neg.size()));
  for (std::size_t t = 0; t < split.index_pos.size(); ++t) {
    split.centers_pos.row(static_cast<Eigen::Index>(t)) = fam.balls[split.index_pos[t]].center;
    split.radii_pos[static_cast<Eigen::Index>(t)] = fam.balls[split.index_pos[t]].radius;
  }
  for (std::size_t t = 0; t < split.index_neg.size(); ++t) {
    split.centers_neg.row(static_cast<Eigen::Index>(t)) = fam.balls[split.index_neg[t]].center;
    split.radii_neg[static_cast<Eigen::Index>(t)] = fam.balls[split.index_neg[t]].radius;
  }
  return split;
}

const char* to_string(RadiusMode mode) { return mode == RadiusMode::Max ? "max" : "mean"; }

const char* to_string(DeOverlapMode mode) {
  switch (mode) {
    case DeOverlapMode::RadiusDiff:
      return "radius-diff";
    case DeOverlapMode::Disjoint:
      return "disjoint";
    case DeOverlapMode::Off:
      return "off";
  }
  return "off";
}

void save_ball_family(const BallFamily& fam, const std::filesystem::path& csv_path,
                      const std::filesystem::path& sidecar_path) {
  std::ofstream out(csv_path);
  if (!out) throw Error("cannot write " + csv_path.string());
  for (const auto& gb : fam.balls) {
    for (Eigen::Index j = 0; j < gb.center.size(); ++j) {
      out << detail::format_double(gb.center[j]) << ',';
    }
    out << detail::format_double(gb.radius) << ',' << detail::format_double(gb.purity) << ','
        << gb.label << ',' << gb.size() << "\n";
  }
  nlohmann::json meta{
      {"purity_threshold", fam.generation_params.purity_threshold},
      {"radius_mode", to_string(fam.generation_params.radius_mode)},
      {"min_split_size", fam.generation_params.min_split_size},
      {"de_overlap", to_string(fam.generation_params.de_overlap)},
      {"seed", fam.generation_params.seed},
      {"source_n", fam.source_n},
      {"ball_count", fam.balls.size()},
  };
  std::ofstream side(sidecar_path);
  if (!side) throw Error("cannot write " + sidecar_path.string());
  side << meta.dump(2) << "\n";
}

}  // namespace gbtsvm
