#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "gbtsvm/dataset.hpp"

using namespace gbtsvm;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
  fs::path p = fs::temp_directory_path() / name;
  std::ofstream out(p);
  out << content;
  return p;
}

}  // namespace

TEST_CASE("csv load maps declared positive label") {
  auto p = write_temp("gbtsvm_t1.csv", "1.0,2.0,M\n3.0,4.0,B\n5.0,6.0,M\n");
  Dataset ds = load_dataset(p, FileFormat::Csv, -1, std::string("M"));
  CHECK(ds.n() == 3);
  CHECK(ds.dim() == 2);
  CHECK(ds.labels[0] == 1);
  CHECK(ds.labels[1] == -1);
  CHECK(ds.labels[2] == 1);
}

TEST_CASE("csv default positive label is the lexicographically larger one") {
  auto p = write_temp("gbtsvm_t2.csv", "1.0,a\n2.0,b\n");
  Dataset ds = load_dataset(p, FileFormat::Csv, -1);
  CHECK(ds.labels[0] == -1);  // "a" < "b"
  CHECK(ds.labels[1] == 1);
}

TEST_CASE("bundled fourclass-equivalent has the published shape") {
  Dataset ds = load_dataset(fs::path(GBTSVM_DATA_DIR) / "fourclass_like.csv", FileFormat::Csv, -1);
  CHECK(ds.n() == 682);
  CHECK(ds.dim() == 2);
}

TEST_CASE("three label values raise LabelError") {
  auto p = write_temp("gbtsvm_t3.csv", "1.0,x\n2.0,y\n3.0,z\n");
  CHECK_THROWS_AS(load_dataset(p, FileFormat::Csv, -1), LabelError);
}

TEST_CASE("header row is auto-detected and named label column resolves") {
  auto p = write_temp("gbtsvm_t4.csv", "f1,f2,target\n1.0,2.0,yes\n3.0,4.0,no\n");
  Dataset ds = load_dataset(p, FileFormat::Csv, std::string("target"));
  CHECK(ds.feature_names == std::vector<std::string>{"f1", "f2"});
  CHECK(ds.labels[0] == 1);  // "yes" > "no"
  Dataset by_index = load_dataset(p, FileFormat::Csv, 2);
  CHECK(by_index.labels == ds.labels);
}

TEST_CASE("missing and malformed values are rejected with line numbers") {
  auto p = write_temp("gbtsvm_t5.csv", "1.0,2.0,a\n3.0,,b\n");
  CHECK_THROWS_WITH_AS(load_dataset(p, FileFormat::Csv, -1), doctest::Contains("line 2"),
                       ParseError);
  auto q = write_temp("gbtsvm_t6.csv", "1.0,2.0,a\nnan,1.0,b\n");
  CHECK_THROWS_AS(load_dataset(q, FileFormat::Csv, -1), ParseError);
  auto r = write_temp("gbtsvm_t7.csv", "");
  CHECK_THROWS_AS(load_dataset(r, FileFormat::Csv, -1), EmptyDataset);
}

TEST_CASE("sparse index:value format parses with implicit zeros") {
  auto p = write_temp("gbtsvm_t8.txt", "+1 1:0.5 3:2.0\n-1 2:1.5\n");
  Dataset ds = load_dataset(p, FileFormat::SparseIndexValue, 0);
  CHECK(ds.n() == 2);
  CHECK(ds.dim() == 3);
  CHECK(ds.features(0, 0) == 0.5);
  CHECK(ds.features(0, 1) == 0.0);
  CHECK(ds.features(0, 2) == 2.0);
  CHECK(ds.features(1, 1) == 1.5);
  CHECK(ds.labels[0] == 1);
  CHECK(ds.labels[1] == -1);
}

TEST_CASE("min-max normalization") {
  Dataset ds;
  ds.features.resize(3, 2);
  ds.features << 2, 5, 4, 5, 6, 5;
  ds.labels.resize(3);
  ds.labels << 1, -1, 1;

  Dataset norm = normalize_min_max(ds);
  CHECK(norm.features(0, 0) == 0.0);
  CHECK(norm.features(1, 0) == 0.5);
  CHECK(norm.features(2, 0) == 1.0);
  // constant column collapses to zero
  CHECK(norm.features.col(1).cwiseAbs().maxCoeff() == 0.0);
  CHECK(norm.labels == ds.labels);
}

TEST_CASE("normalization matches independently computed per-column maps") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-50.0, 50.0);
  Dataset ds;
  ds.features.resize(20, 3);
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 3; ++j) ds.features(i, j) = unif(rng) * (j + 1);
  }
  ds.labels = Eigen::VectorXi::Ones(20);
  Dataset norm = normalize_min_max(ds);
  for (int j = 0; j < 3; ++j) {
    const double lo = ds.features.col(j).minCoeff();
    const double hi = ds.features.col(j).maxCoeff();
    for (int i = 0; i < 20; ++i) {
      CHECK(norm.features(i, j) == doctest::Approx((ds.features(i, j) - lo) / (hi - lo)).epsilon(1e-15));
    }
  }
}

TEST_CASE("normalization is idempotent") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-5.0, 9.0);
  Dataset ds;
  ds.features.resize(17, 4);
  for (int i = 0; i < 17; ++i) {
    for (int j = 0; j < 4; ++j) ds.features(i, j) = unif(rng);
  }
  ds.features.col(2).setConstant(3.25);
  ds.labels = Eigen::VectorXi::Ones(17);
  Dataset once = normalize_min_max(ds);
  Dataset twice = normalize_min_max(once);
  CHECK(once.features == twice.features);
}

TEST_CASE("fold sizes are balanced") {
  FoldPlan plan = make_folds(10, 10, 3);
  std::map<int, int> sizes;
  for (int f : plan.fold_assignments) sizes[f]++;
  CHECK(sizes.size() == 10);
  for (auto [fold, count] : sizes) CHECK(count == 1);

  FoldPlan plan23 = make_folds(23, 10, 3);
  std::map<int, int> sizes23;
  for (int f : plan23.fold_assignments) sizes23[f]++;
  int threes = 0, twos = 0;
  for (auto [fold, count] : sizes23) {
    if (count == 3) ++threes;
    if (count == 2) ++twos;
  }
  CHECK(threes == 3);
  CHECK(twos == 7);
}

TEST_CASE("fold size multiset matches ceil/floor counts for random shapes") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 9);
    const int n = k + static_cast<int>(rng() % 200);
    FoldPlan plan = make_folds(n, k, rng());
    std::map<int, int> sizes;
    for (int f : plan.fold_assignments) {
      REQUIRE(f >= 0);
      REQUIRE(f < k);
      sizes[f]++;
    }
    const int hi = (n + k - 1) / k, lo = n / k, rem = n % k;
    int hi_count = 0, lo_count = 0;
    for (auto [fold, count] : sizes) {
      if (count == hi) ++hi_count;
      if (count == lo) ++lo_count;
    }
    if (rem == 0) {
      CHECK(lo_count == k);
    } else {
      CHECK(hi_count == rem);
      CHECK(lo_count == k - rem);
    }
  }
}

TEST_CASE("folds are deterministic under seed") {
  FoldPlan a = make_folds(682, 10, 7);
  FoldPlan b = make_folds(682, 10, 7);
  CHECK(a.fold_assignments == b.fold_assignments);
  FoldPlan c = make_folds(682, 10, 8);
  CHECK(a.fold_assignments != c.fold_assignments);
}

TEST_CASE("stratified folds balance each class") {
  Eigen::VectorXi labels(20);
  labels << 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, -1, -1, -1, -1;
  FoldPlan plan = make_stratified_folds(labels, 4, 9);
  std::map<int, int> neg_per_fold;
  for (int i = 0; i < 20; ++i) {
    if (labels[i] < 0) neg_per_fold[plan.fold_assignments[i]]++;
  }
  CHECK(neg_per_fold.size() == 4);
  for (auto [fold, count] : neg_per_fold) CHECK(count == 1);
}

TEST_CASE("invalid fold counts are rejected") {
  CHECK_THROWS_AS(make_folds(5, 1, 0), InvalidFoldCount);
  CHECK_THROWS_AS(make_folds(3, 5, 0), InvalidFoldCount);
}

TEST_CASE("label noise flips exactly round(rate*n) labels") {
  std::mt19937_64 rng(13);
  Dataset ds;
  ds.features = Eigen::MatrixXd::Random(100, 2);
  ds.labels.resize(100);
  for (int i = 0; i < 100; ++i) ds.labels[i] = rng() % 2 == 0 ? 1 : -1;

  Dataset clean = inject_label_noise(ds, {0.0, 5});
  CHECK(clean.labels == ds.labels);

  Dataset noisy = inject_label_noise(ds, {0.05, 5});
  int flips = 0;
  for (int i = 0; i < 100; ++i) flips += noisy.labels[i] != ds.labels[i];
  CHECK(flips == 5);

  // negation is an involution: applying the same spec twice restores labels
  Dataset restored = inject_label_noise(noisy, {0.05, 5});
  CHECK(restored.labels == ds.labels);
}

TEST_CASE("noise hamming distance equals round-half-up for random rates") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unif(0.0, 0.49);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 10 + static_cast<int>(rng() % 400);
    Dataset ds;
    ds.features = Eigen::MatrixXd::Random(n, 2);
    ds.labels = Eigen::VectorXi::Ones(n);
    const double rate = unif(rng);
    Dataset noisy = inject_label_noise(ds, {rate, rng()});
    int flips = 0;
    for (int i = 0; i < n; ++i) flips += noisy.labels[i] != ds.labels[i];
    CHECK(flips == static_cast<int>(std::floor(rate * n + 0.5)));
  }
}

TEST_CASE("save/load round trip is bit-identical, including after normalize") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss(0.0, 3.0);
  Dataset ds;
  ds.features.resize(25, 3);
  for (int i = 0; i < 25; ++i) {
    for (int j = 0; j < 3; ++j) ds.features(i, j) = gauss(rng);
  }
  ds.labels.resize(25);
  for (int i = 0; i < 25; ++i) ds.labels[i] = i % 3 == 0 ? 1 : -1;

  Dataset norm = normalize_min_max(ds);
  auto p = fs::temp_directory_path() / "gbtsvm_roundtrip.csv";
  save_dataset(norm, p, "seed=42 rate=0.0");
  Dataset back = load_dataset(p, FileFormat::Csv, -1, std::string("1"));
  CHECK(back.features == norm.features);
  CHECK(back.labels == norm.labels);
}

TEST_CASE("fold plan serialization round trip") {
  FoldPlan plan = make_folds(37, 5, 99);
  auto p = fs::temp_directory_path() / "gbtsvm_folds.csv";
  save_fold_plan(plan, p);
  FoldPlan back = load_fold_plan(p);
  CHECK(back.fold_assignments == plan.fold_assignments);
  CHECK(back.k == plan.k);
  CHECK(back.seed == plan.seed);
}
