#include "gbtsvm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "gbtsvm/detail/rng.hpp"
#include "gbtsvm/detail/text.hpp"

namespace gbtsvm {

namespace {

// Splits one CSV record. Supports quoted fields with embedded commas and
// doubled quotes; multi-line quoted fields are not supported.
std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c == '\r' && i + 1 == line.size()) {
      // drop trailing CR from CRLF files
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", line_no);
  fields.push_back(cur);
  return fields;
}

bool is_comment_or_blank(const std::string& line) {
  auto t = detail::trim(line);
  return t.empty() || t.front() == '#';
}

struct RawTable {
  std::vector<std::string> header;  // empty if none
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
};

RawTable read_csv(const std::filesystem::path& path, std::optional<int> label_index_hint,
                  bool label_is_name) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path.string(), 0);
  RawTable table;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    auto fields = split_csv_line(line, line_no);
    if (first_content) {
      first_content = false;
      // Header detection: a name-addressed label column requires a header;
      // otherwise the first row is a header iff any non-label cell is
      // non-numeric.
      bool header = label_is_name;
      if (!header) {
        for (std::size_t j = 0; j < fields.size(); ++j) {
          if (label_index_hint && static_cast<int>(j) == *label_index_hint) continue;
          if (!detail::parse_double(fields[j])) {
            header = true;
            break;
          }
        }
      }
      if (header) {
        for (auto& f : fields) table.header.push_back(std::string(detail::trim(f)));
        continue;
      }
    }
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(line_no);
  }
  return table;
}

Eigen::VectorXi map_labels(const std::vector<std::string>& raw,
                           const std::optional<std::string>& positive_label) {
  std::map<std::string, int> distinct;
  for (const auto& r : raw) distinct[r] = 0;
  if (distinct.size() != 2) {
    throw LabelError("label column must contain exactly 2 distinct values, found " +
                     std::to_string(distinct.size()));
  }
  std::string pos;
  if (positive_label) {
    if (!distinct.count(*positive_label)) {
      throw LabelError("declared positive label '" + *positive_label + "' not present");
    }
    pos = *positive_label;
  } else {
    pos = std::max(distinct.begin()->first, std::next(distinct.begin())->first);
  }
  Eigen::VectorXi labels(static_cast<Eigen::Index>(raw.size()));
  for (std::size_t i = 0; i < raw.size(); ++i) labels[static_cast<Eigen::Index>(i)] = raw[i] == pos ? 1 : -1;
  return labels;
}

Dataset load_csv_dataset(const std::filesystem::path& path, const ColumnRef& label_column,
                         const std::optional<std::string>& positive_label) {
  const bool label_is_name = std::holds_alternative<std::string>(label_column);
  std::optional<int> idx_hint;
  if (!label_is_name) idx_hint = std::get<int>(label_column);
  RawTable table = read_csv(path, idx_hint, label_is_name);
  if (table.rows.empty()) throw EmptyDataset("no data rows in " + path.string());

  const std::size_t ncols = table.rows.front().size();
  int label_idx;
  if (label_is_name) {
    const auto& name = std::get<std::string>(label_column);
    auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end()) throw LabelError("label column '" + name + "' not in header");
    label_idx = static_cast<int>(it - table.header.begin());
  } else {
    label_idx = std::get<int>(label_column);
    if (label_idx < 0) label_idx = static_cast<int>(ncols) + label_idx;  // -1 = last
  }
  if (label_idx < 0 || static_cast<std::size_t>(label_idx) >= ncols) {
    throw LabelError("label column index out of range");
  }

  Dataset ds;
  ds.source_id = path.stem().string();
  const Eigen::Index n = static_cast<Eigen::Index>(table.rows.size());
  const Eigen::Index d = static_cast<Eigen::Index>(ncols) - 1;
  ds.features.resize(n, d);
  std::vector<std::string> raw_labels(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::size_t line_no = table.line_numbers[i];
    if (row.size() != ncols) {
      throw ParseError("expected " + std::to_string(ncols) + " fields, got " +
                           std::to_string(row.size()),
                       line_no);
    }
    Eigen::Index jj = 0;
    for (std::size_t j = 0; j < ncols; ++j) {
      if (static_cast<int>(j) == label_idx) {
        raw_labels[i] = std::string(detail::trim(row[j]));
        if (raw_labels[i].empty()) throw ParseError("empty label value", line_no);
        continue;
      }
      auto v = detail::parse_double(row[j]);
      if (!v) throw ParseError("missing or non-numeric value in column " + std::to_string(j), line_no);
      ds.features(static_cast<Eigen::Index>(i), jj++) = *v;
    }
  }
  ds.labels = map_labels(raw_labels, positive_label);
  if (!table.header.empty()) {
    for (std::size_t j = 0; j < ncols; ++j) {
      if (static_cast<int>(j) != label_idx) ds.feature_names.push_back(table.header[j]);
    }
  }
  return ds;
}

Dataset load_sparse_dataset(const std::filesystem::path& path,
                            const std::optional<std::string>& positive_label) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path.string(), 0);
  std::vector<std::string> raw_labels;
  std::vector<std::vector<std::pair<int, double>>> entries;
  int max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    std::istringstream ls(line);
    std::string label;
    ls >> label;
    if (label.empty()) throw ParseError("missing label token", line_no);
    raw_labels.push_back(label);
    std::vector<std::pair<int, double>> row;
    std::string tok;
    while (ls >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos) throw ParseError("expected <index>:<value>, got '" + tok + "'", line_no);
      auto iv = detail::parse_double(std::string_view(tok).substr(0, colon));
      auto vv = detail::parse_double(std::string_view(tok).substr(colon + 1));
      if (!iv || *iv < 1 || *iv != std::floor(*iv)) throw ParseError("bad 1-based index in '" + tok + "'", line_no);
      if (!vv) throw ParseError("bad value in '" + tok + "'", line_no);
      int idx = static_cast<int>(*iv);
      max_index = std::max(max_index, idx);
      row.emplace_back(idx - 1, *vv);
    }
    entries.push_back(std::move(row));
  }
  if (entries.empty()) throw EmptyDataset("no data rows in " + path.string());

  Dataset ds;
  ds.source_id = path.stem().string();
  ds.features = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(entries.size()), max_index);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (auto [j, v] : entries[i]) ds.features(static_cast<Eigen::Index>(i), j) = v;
  }
  ds.labels = map_labels(raw_labels, positive_label);
  return ds;
}

}  // namespace

std::vector<int> FoldPlan::test_indices(int fold) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < fold_assignments.size(); ++i) {
    if (fold_assignments[i] == fold) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> FoldPlan::train_indices(int fold) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < fold_assignments.size(); ++i) {
    if (fold_assignments[i] != fold) out.push_back(static_cast<int>(i));
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& path, FileFormat format,
                     const ColumnRef& label_column,
                     const std::optional<std::string>& positive_label) {
  switch (format) {
    case FileFormat::Csv:
      return load_csv_dataset(path, label_column, positive_label);
    case FileFormat::SparseIndexValue:
      return load_sparse_dataset(path, positive_label);
  }
  throw Error("unknown file format");
}

Eigen::MatrixXd load_matrix(const std::filesystem::path& path) {
  RawTable table = read_csv(path, std::nullopt, false);
  if (table.rows.empty()) throw EmptyDataset("no data rows in " + path.string());
  const std::size_t ncols = table.rows.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(ncols));
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (table.rows[i].size() != ncols) {
      throw ParseError("ragged row", table.line_numbers[i]);
    }
    for (std::size_t j = 0; j < ncols; ++j) {
      auto v = detail::parse_double(table.rows[i][j]);
      if (!v) throw ParseError("non-numeric value", table.line_numbers[i]);
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = *v;
    }
  }
  return m;
}

Dataset normalize_min_max(const Dataset& ds) {
  if (ds.n() == 0) throw EmptyDataset("cannot normalize an empty dataset");
  Dataset out = ds;
  for (Eigen::Index j = 0; j < ds.dim(); ++j) {
    const double lo = ds.features.col(j).minCoeff();
    const double hi = ds.features.col(j).maxCoeff();
    if (hi > lo) {
      out.features.col(j) = (ds.features.col(j).array() - lo) / (hi - lo);
    } else {
      out.features.col(j).setZero();
    }
  }
  return out;
}

FoldPlan make_folds(int n, int k, std::uint64_t seed) {
  if (k < 2 || n < k) throw InvalidFoldCount("need k >= 2 and n >= k (n=" + std::to_string(n) +
                                             ", k=" + std::to_string(k) + ")");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  detail::Rng rng(seed);
  rng.shuffle(order);
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.fold_assignments.assign(n, 0);
  for (int i = 0; i < n; ++i) plan.fold_assignments[order[i]] = i % k;
  return plan;
}

FoldPlan make_stratified_folds(const Eigen::VectorXi& labels, int k, std::uint64_t seed) {
  const int n = static_cast<int>(labels.size());
  if (k < 2 || n < k) throw InvalidFoldCount("need k >= 2 and n >= k");
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.fold_assignments.assign(n, 0);
  detail::Rng rng(seed);
  int cursor = 0;
  for (int cls : {+1, -1}) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    rng.shuffle(members);
    for (int idx : members) plan.fold_assignments[idx] = (cursor++) % k;
  }
  return plan;
}

Dataset inject_label_noise(const Dataset& ds, const NoiseSpec& spec) {
  Dataset out = ds;
  const int n = static_cast<int>(ds.n());
  const int count = static_cast<int>(std::floor(spec.rate * n + 0.5));
  if (count == 0) return out;
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  detail::Rng rng(spec.seed);
  // partial Fisher-Yates: the first `count` entries are a uniform sample
  for (int i = 0; i < count; ++i) {
    int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
  }
  for (int i = 0; i < count; ++i) out.labels[idx[i]] = -out.labels[idx[i]];
  return out;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path,
                  const std::string& meta_comment) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  if (!meta_comment.empty()) out << "# " << meta_comment << "\n";
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    for (Eigen::Index j = 0; j < ds.dim(); ++j) {
      out << detail::format_double(ds.features(i, j)) << ',';
    }
    out << (ds.labels[i] > 0 ? "1" : "-1") << "\n";
  }
}

void save_fold_plan(const FoldPlan& plan, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "# seed=" << detail::format_u64(plan.seed) << " k=" << plan.k << "\n";
  for (std::size_t i = 0; i < plan.fold_assignments.size(); ++i) {
    out << i << ',' << plan.fold_assignments[i] << "\n";
  }
}

FoldPlan load_fold_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path.string(), 0);
  FoldPlan plan;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = detail::trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      std::string s(t);
      auto pos = s.find("seed=");
      if (pos != std::string::npos) plan.seed = std::stoull(s.substr(pos + 5));
      pos = s.find("k=");
      if (pos != std::string::npos) plan.k = std::stoi(s.substr(pos + 2));
      continue;
    }
    auto comma = t.find(',');
    if (comma == std::string_view::npos) throw ParseError("expected <index>,<fold>", line_no);
    plan.fold_assignments.push_back(std::stoi(std::string(t.substr(comma + 1))));
  }
  if (plan.k == 0) {
    for (int f : plan.fold_assignments) plan.k = std::max(plan.k, f + 1);
  }
  return plan;
}

}  // namespace gbtsvm
