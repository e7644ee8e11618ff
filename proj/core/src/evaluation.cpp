#include "gbtsvm/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <thread>

#include "gbtsvm/detail/rng.hpp"
#include "gbtsvm/detail/text.hpp"
#include "gbtsvm/pythagorean.hpp"

namespace gbtsvm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Runs fn(0..count-1) on up to `threads` workers; results must be written to
/// index-addressed slots so the reduction stays deterministic.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

Dataset subset(const Dataset& ds, const std::vector<int>& rows) {
  Dataset out;
  out.source_id = ds.source_id;
  out.feature_names = ds.feature_names;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), ds.dim());
  out.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = ds.features.row(rows[i]);
    out.labels[static_cast<Eigen::Index>(i)] = ds.labels[rows[i]];
  }
  return out;
}

bool has_both_classes(const Eigen::VectorXi& labels) {
  bool pos = false, neg = false;
  for (Eigen::Index i = 0; i < labels.size(); ++i) (labels[i] > 0 ? pos : neg) = true;
  return pos && neg;
}

FoldRecord run_fold(const Dataset& ds, Method method, const TrainConfig& cfg,
                    const GenerationConfig& gen_cfg, const FoldPlan& folds, int fold,
                    const CvOptions& opts) {
  FoldRecord rec;
  rec.fold = fold;
  const std::vector<int> test_rows = folds.test_indices(fold);
  const std::vector<int> train_rows = folds.train_indices(fold);
  rec.test_size = static_cast<int>(test_rows.size());

  Dataset train = subset(ds, train_rows);
  Dataset test = subset(ds, test_rows);
  if (opts.noise_rate > 0.0) {
    train = inject_label_noise(train, {opts.noise_rate, detail::derive_seed(opts.noise_seed, fold)});
    if (opts.noise_on_test) {
      test = inject_label_noise(test, {opts.noise_rate, detail::derive_seed(opts.noise_seed, 1000 + fold)});
    }
  }
  if (!has_both_classes(train.labels)) {
    rec.skipped = true;
    rec.skip_reason = "single-class training split";
    return rec;
  }

  try {
    const auto t0 = Clock::now();
    TwinModel model;
    if (method == Method::Twsvm) {
      model = train_twsvm(train, cfg);
    } else {
      GenerationConfig fold_gen = gen_cfg;
      fold_gen.seed = detail::derive_seed(gen_cfg.seed, fold);
      const BallFamily fam = generate_balls(train, fold_gen);
      if (method == Method::Gbtwsvm) {
        model = train_gbtwsvm(fam, cfg);
      } else {
        model = train_gbftsvm(fam, score_family(fam), cfg);
      }
    }
    rec.train_seconds = seconds_since(t0);

    const auto t1 = Clock::now();
    const Eigen::VectorXi pred = predict_batch(model, test.features);
    rec.predict_seconds = seconds_since(t1);

    const Metrics m = compute_metrics(test.labels, pred);
    rec.accuracy = m.accuracy;
    rec.precision = m.precision;
    rec.recall = m.recall;
  } catch (const SingleClassFamily& e) {
    rec.skipped = true;
    rec.skip_reason = e.what();
  } catch (const SingleClassDataset& e) {
    rec.skipped = true;
    rec.skip_reason = e.what();
  }
  return rec;
}

MetricReport aggregate(std::vector<FoldRecord> per_fold) {
  MetricReport report;
  report.per_fold = std::move(per_fold);
  int done = 0;
  for (const auto& rec : report.per_fold) {
    if (rec.skipped) continue;
    ++done;
    report.accuracy += rec.accuracy;
    report.precision += rec.precision;
    report.recall += rec.recall;
    report.train_time_s += rec.train_seconds;
    report.predict_time_s += rec.predict_seconds;
  }
  if (done == 0) throw SingleClassDataset("every fold was skipped");
  report.accuracy /= done;
  report.precision /= done;
  report.recall /= done;
  if (done > 1) {
    double ss = 0.0;
    for (const auto& rec : report.per_fold) {
      if (!rec.skipped) ss += (rec.accuracy - report.accuracy) * (rec.accuracy - report.accuracy);
    }
    report.acc_sd = std::sqrt(ss / (done - 1));
  }
  return report;
}

}  // namespace

Metrics compute_metrics(const Eigen::VectorXi& y_true, const Eigen::VectorXi& y_pred) {
  if (y_true.size() != y_pred.size()) throw LengthMismatch("label vectors differ in length");
  if (y_true.size() == 0) throw EmptyInput("no labels to score");
  const Eigen::Index n = y_true.size();
  Metrics m;
  double correct = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) correct += y_true[i] == y_pred[i] ? 1.0 : 0.0;
  m.accuracy = correct / static_cast<double>(n);

  for (int cls : {+1, -1}) {
    double tp = 0, fp = 0, fn = 0, support = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool t = y_true[i] == cls;
      const bool p = y_pred[i] == cls;
      support += t;
      tp += t && p;
      fp += !t && p;
      fn += t && !p;
    }
    const double prec = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    const double rec = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    const double weight = support / static_cast<double>(n);
    m.precision += weight * prec;
    m.recall += weight * rec;
  }
  return m;
}

MetricReport cross_validate(const Dataset& ds, Method method, const TrainConfig& cfg,
                            const GenerationConfig& gen_cfg, const FoldPlan& folds,
                            const CvOptions& opts) {
  if (static_cast<Eigen::Index>(folds.fold_assignments.size()) != ds.n()) {
    throw ShapeError("fold plan was built for a different dataset size");
  }
  std::vector<FoldRecord> records(static_cast<std::size_t>(folds.k));
  parallel_for(folds.k, opts.threads, [&](int fold) {
    records[static_cast<std::size_t>(fold)] = run_fold(ds, method, cfg, gen_cfg, folds, fold, opts);
  });
  return aggregate(std::move(records));
}

GridResult grid_search(const Dataset& ds, Method method, int exp_lo, int exp_hi,
                       const GenerationConfig& gen_cfg, const FoldPlan& folds,
                       const TrainConfig& base_cfg, int threads) {
  if (exp_hi < exp_lo) throw ShapeError("empty exponent range");
  const int span = exp_hi - exp_lo + 1;
  GridResult result;
  result.surface.resize(static_cast<std::size_t>(span) * span);
  parallel_for(span * span, threads, [&](int t) {
    const int i = t / span, j = t % span;
    TrainConfig cfg = base_cfg;
    cfg.c1 = cfg.c3 = std::ldexp(1.0, exp_lo + i);
    cfg.c2 = cfg.c4 = std::ldexp(1.0, exp_lo + j);
    GridPoint& point = result.surface[static_cast<std::size_t>(t)];
    point.c1 = cfg.c1;
    point.c2 = cfg.c2;
    point.report = cross_validate(ds, method, cfg, gen_cfg, folds);
  });
  result.best_accuracy = -1.0;
  for (const auto& point : result.surface) {
    const bool better = point.report.accuracy > result.best_accuracy;
    const bool tie_smaller =
        point.report.accuracy == result.best_accuracy &&
        (point.c1 < result.best_c1 || (point.c1 == result.best_c1 && point.c2 < result.best_c2));
    if (better || tie_smaller) {
      result.best_accuracy = point.report.accuracy;
      result.best_c1 = point.c1;
      result.best_c2 = point.c2;
    }
  }
  return result;
}

SignificanceReport friedman_test(const Eigen::MatrixXd& acc_matrix, double q_alpha) {
  const int n = static_cast<int>(acc_matrix.rows());
  const int m = static_cast<int>(acc_matrix.cols());
  if (n < 2 || m < 2) throw ShapeError("need at least 2 datasets and 2 models");

  SignificanceReport report;
  report.rank_matrix.resize(n, m);
  for (int i = 0; i < n; ++i) {
    std::vector<int> order(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) order[static_cast<std::size_t>(j)] = j;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return acc_matrix(i, a) > acc_matrix(i, b); });
    int t = 0;
    while (t < m) {
      int u = t;
      while (u + 1 < m && acc_matrix(i, order[u + 1]) == acc_matrix(i, order[t])) ++u;
      const double rank = 0.5 * (t + u) + 1.0;  // average of tied positions
      for (int v = t; v <= u; ++v) report.rank_matrix(i, order[v]) = rank;
      t = u + 1;
    }
  }
  report.avg_ranks = report.rank_matrix.colwise().mean().transpose();

  const double rank_sq_sum = report.avg_ranks.squaredNorm();
  report.chi2_f = 12.0 * n / (m * (m + 1.0)) * (rank_sq_sum - m * (m + 1.0) * (m + 1.0) / 4.0);
  const double denom = n * (m - 1.0) - report.chi2_f;
  report.f_f = denom > 0 ? (n - 1.0) * report.chi2_f / denom
                         : std::numeric_limits<double>::infinity();
  report.dof = {m - 1, (m - 1) * (n - 1)};
  report.cd = nemenyi_cd(m, n, q_alpha);
  report.pairwise_significant.assign(static_cast<std::size_t>(m),
                                     std::vector<bool>(static_cast<std::size_t>(m), false));
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      report.pairwise_significant[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          a != b && std::abs(report.avg_ranks[a] - report.avg_ranks[b]) > report.cd;
    }
  }
  return report;
}

double nemenyi_cd(int models, int datasets, double q_alpha) {
  return q_alpha * std::sqrt(models * (models + 1.0) / (6.0 * datasets));
}

std::vector<NoiseSweepRow> noise_sweep(const Dataset& ds, const std::vector<Method>& methods,
                                       const std::vector<double>& rates,
                                       const std::vector<std::uint64_t>& seeds,
                                       const GenerationConfig& gen_cfg, const FoldPlan& folds,
                                       const TrainConfig& cfg, int threads) {
  std::vector<NoiseSweepRow> rows;
  for (Method method : methods) {
    for (double rate : rates) {
      for (std::uint64_t seed : seeds) {
        NoiseSweepRow row;
        row.method = method;
        row.rate = rate;
        row.seed = seed;
        CvOptions opts;
        opts.noise_rate = rate;
        opts.noise_seed = seed;
        opts.threads = threads;
        row.report = cross_validate(ds, method, cfg, gen_cfg, folds, opts);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

Eigen::MatrixXd load_accuracy_matrix(const std::filesystem::path& path,
                                     std::vector<std::string>* model_names,
                                     std::vector<std::string>* dataset_names) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path.string(), 0);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> names;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  bool has_name_column = false;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<std::string> fields;
    std::string cur;
    for (char c : std::string(t)) {
      if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    fields.push_back(cur);
    if (first) {
      first = false;
      // header row iff its last cell is non-numeric
      if (!detail::parse_double(fields.back())) {
        has_name_column = !fields.empty() && !detail::parse_double(fields.front()).has_value();
        if (model_names) {
          model_names->assign(fields.begin() + (has_name_column ? 1 : 0), fields.end());
        }
        continue;
      }
      has_name_column = !detail::parse_double(fields.front()).has_value();
    }
    std::vector<double> row;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (j == 0 && has_name_column) {
        names.push_back(fields[j]);
        continue;
      }
      auto v = detail::parse_double(fields[j]);
      if (!v) throw ParseError("non-numeric accuracy '" + fields[j] + "'", line_no);
      row.push_back(*v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw ShapeError("ragged accuracy matrix");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw EmptyInput("accuracy matrix is empty");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  if (dataset_names) *dataset_names = std::move(names);
  return out;
}

void write_cd_diagram_data(const SignificanceReport& report,
                           const std::vector<std::string>& model_names,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "model,avg_rank,cd\n";
  for (Eigen::Index j = 0; j < report.avg_ranks.size(); ++j) {
    const std::string name = j < static_cast<Eigen::Index>(model_names.size())
                                 ? model_names[static_cast<std::size_t>(j)]
                                 : "model" + std::to_string(j);
    out << name << ',' << detail::format_double(report.avg_ranks[j]) << ','
        << detail::format_double(report.cd) << "\n";
  }
}

}  // namespace gbtsvm
