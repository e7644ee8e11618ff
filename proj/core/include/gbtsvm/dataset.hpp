#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gbtsvm/errors.hpp"

namespace gbtsvm {

/// A labeled tabular dataset with bipolar labels (+1 / -1).
struct Dataset {
  Eigen::MatrixXd features;                // n x d
  Eigen::VectorXi labels;                  // entries in {+1, -1}
  std::vector<std::string> feature_names;  // empty when the source had no header
  std::string source_id;

  Eigen::Index n() const { return features.rows(); }
  Eigen::Index dim() const { return features.cols(); }
};

enum class FileFormat { Csv, SparseIndexValue };

/// Label column selector: 0-based column index or header name.
using ColumnRef = std::variant<int, std::string>;

struct FoldPlan {
  std::vector<int> fold_assignments;  // values in [0, k)
  int k = 0;
  std::uint64_t seed = 0;

  std::vector<int> test_indices(int fold) const;
  std::vector<int> train_indices(int fold) const;
};

struct NoiseSpec {
  double rate = 0.0;  // in [0, 0.5)
  std::uint64_t seed = 0;
};

/// Loads a dataset and maps its two raw label values onto {+1, -1}.
///
/// CSV: RFC-4180 style quoting, UTF-8, optional header row (auto-detected: a
/// first row whose non-label cells are not all numeric). Sparse: one sample
/// per line, `<label> <index>:<value> ...`, 1-based indices, absent entries 0.
/// When positive_label is not given, the lexicographically larger raw label
/// maps to +1. Missing values and non-finite numbers are rejected.
Dataset load_dataset(const std::filesystem::path& path, FileFormat format,
                     const ColumnRef& label_column,
                     const std::optional<std::string>& positive_label = std::nullopt);

/// Loads a plain numeric matrix (no label column). Header auto-detected.
Eigen::MatrixXd load_matrix(const std::filesystem::path& path);

/// Rescales each column by (x - min) / (max - min); constant columns map to 0.
Dataset normalize_min_max(const Dataset& ds);

/// Balanced, seeded, unstratified fold assignment. Fold sizes differ by at
/// most one.
FoldPlan make_folds(int n, int k, std::uint64_t seed);

/// Per-class balanced variant: each class is spread across folds round-robin
/// after a seeded shuffle.
FoldPlan make_stratified_folds(const Eigen::VectorXi& labels, int k, std::uint64_t seed);

/// Returns a copy with exactly round(rate * n) labels negated at
/// seed-determined distinct indices.
Dataset inject_label_noise(const Dataset& ds, const NoiseSpec& spec);

/// Writes features + labels as CSV (label last), 17 significant digits.
/// `meta_comment`, when nonempty, is emitted as a leading `# ...` line.
void save_dataset(const Dataset& ds, const std::filesystem::path& path,
                  const std::string& meta_comment = "");

void save_fold_plan(const FoldPlan& plan, const std::filesystem::path& path);
FoldPlan load_fold_plan(const std::filesystem::path& path);

}  // namespace gbtsvm
