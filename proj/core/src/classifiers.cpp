#include "gbtsvm/classifiers.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "gbtsvm/detail/text.hpp"

namespace gbtsvm {

namespace {

struct Geometry {
  Eigen::MatrixXd centers_pos;
  Eigen::VectorXd radii_pos;
  Eigen::MatrixXd centers_neg;
  Eigen::VectorXd radii_neg;
};

// Solves both duals and recovers the plane pair.
//   dual 1: own = +1 centers, other = -1 centers, u = -(E'E+eI)^{-1} F' a
//   dual 2: own = -1 centers, other = +1 centers, v = +(S'S+eI)^{-1} R' g
TwinModel train_from_geometry(const Geometry& geo, const Eigen::VectorXd& bounds1,
                              const Eigen::VectorXd& bounds2, const TrainConfig& cfg,
                              Method method) {
  TwinModel model;
  model.trained_by = method;
  model.config = cfg;
  const Eigen::Index d = geo.centers_pos.cols();

  const BoxQp qp1 = assemble_dual(geo.centers_pos, geo.centers_neg, geo.radii_neg, cfg.reg_eps, bounds1);
  const QpSolution sol1 = solve(qp1, cfg.qp_tol, cfg.qp_max_iter);
  model.qp1_converged = sol1.converged;
  {
    Eigen::MatrixXd own = augment_ones(geo.centers_pos);
    Eigen::MatrixXd other = augment_ones(geo.centers_neg);
    Eigen::MatrixXd gram = own.transpose() * own;
    gram.diagonal().array() += cfg.reg_eps;
    Eigen::VectorXd u = -Eigen::LLT<Eigen::MatrixXd>(gram).solve(other.transpose() * sol1.alpha);
    model.w1 = u.head(d);
    model.b1 = u[d];
  }

  const BoxQp qp2 = assemble_dual(geo.centers_neg, geo.centers_pos, geo.radii_pos, cfg.reg_eps, bounds2);
  const QpSolution sol2 = solve(qp2, cfg.qp_tol, cfg.qp_max_iter);
  model.qp2_converged = sol2.converged;
  {
    Eigen::MatrixXd own = augment_ones(geo.centers_neg);
    Eigen::MatrixXd other = augment_ones(geo.centers_pos);
    Eigen::MatrixXd gram = own.transpose() * own;
    gram.diagonal().array() += cfg.reg_eps;
    Eigen::VectorXd v = Eigen::LLT<Eigen::MatrixXd>(gram).solve(other.transpose() * sol2.alpha);
    model.w2 = v.head(d);
    model.b2 = v[d];
  }
  return model;
}

Geometry geometry_from_points(const Dataset& ds) {
  int npos = 0, nneg = 0;
  for (Eigen::Index i = 0; i < ds.n(); ++i) (ds.labels[i] > 0 ? npos : nneg)++;
  if (npos == 0 || nneg == 0) throw SingleClassDataset("training data holds only one class");
  Geometry geo;
  geo.centers_pos.resize(npos, ds.dim());
  geo.centers_neg.resize(nneg, ds.dim());
  Eigen::Index p = 0, q = 0;
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    if (ds.labels[i] > 0) {
      geo.centers_pos.row(p++) = ds.features.row(i);
    } else {
      geo.centers_neg.row(q++) = ds.features.row(i);
    }
  }
  geo.radii_pos = Eigen::VectorXd::Zero(npos);
  geo.radii_neg = Eigen::VectorXd::Zero(nneg);
  return geo;
}

Geometry geometry_from_family(const BallFamily& fam) {
  ClassSplit split = split_by_class(fam);
  Geometry geo;
  geo.centers_pos = std::move(split.centers_pos);
  geo.radii_pos = std::move(split.radii_pos);
  geo.centers_neg = std::move(split.centers_neg);
  geo.radii_neg = std::move(split.radii_neg);
  return geo;
}

}  // namespace

TwinModel train_twsvm(const Dataset& ds, const TrainConfig& cfg) {
  Geometry geo = geometry_from_points(ds);
  const Eigen::VectorXd bounds1 = Eigen::VectorXd::Constant(geo.centers_neg.rows(), cfg.c1);
  const Eigen::VectorXd bounds2 = Eigen::VectorXd::Constant(geo.centers_pos.rows(), cfg.c2);
  return train_from_geometry(geo, bounds1, bounds2, cfg, Method::Twsvm);
}

TwinModel train_gbtwsvm(const BallFamily& fam, const TrainConfig& cfg) {
  Geometry geo = geometry_from_family(fam);
  const Eigen::VectorXd bounds1 = Eigen::VectorXd::Constant(geo.centers_neg.rows(), cfg.c1);
  const Eigen::VectorXd bounds2 = Eigen::VectorXd::Constant(geo.centers_pos.rows(), cfg.c2);
  return train_from_geometry(geo, bounds1, bounds2, cfg, Method::Gbtwsvm);
}

TwinModel train_gbftsvm(const BallFamily& fam, const std::vector<PythagoreanScore>& scores,
                        const TrainConfig& cfg) {
  if (scores.size() != fam.balls.size()) {
    throw ScoreMisalignment("need one score per ball, got " + std::to_string(scores.size()) +
                            " for " + std::to_string(fam.balls.size()));
  }
  Geometry geo = geometry_from_family(fam);
  const Eigen::VectorXd bounds1 = cfg.c3 * scores_for_class(fam, scores, -1);
  const Eigen::VectorXd bounds2 = cfg.c4 * scores_for_class(fam, scores, +1);
  return train_from_geometry(geo, bounds1, bounds2, cfg, Method::Gbftsvm);
}

int predict(const TwinModel& model, const Eigen::VectorXd& x) {
  const double n1 = model.w1.norm();
  const double n2 = model.w2.norm();
  if (n1 == 0.0 || n2 == 0.0) throw DegenerateModel("hyperplane normal vector is zero");
  const double d1 = std::abs(model.w1.dot(x) + model.b1) / n1;
  const double d2 = std::abs(model.w2.dot(x) + model.b2) / n2;
  return d1 <= d2 ? 1 : -1;
}

Eigen::VectorXi predict_batch(const TwinModel& model, const Eigen::MatrixXd& xs) {
  const double n1 = model.w1.norm();
  const double n2 = model.w2.norm();
  if (n1 == 0.0 || n2 == 0.0) throw DegenerateModel("hyperplane normal vector is zero");
  Eigen::VectorXi out(xs.rows());
  if (xs.rows() == 0) return out;
  const Eigen::ArrayXd d1 = ((xs * model.w1).array() + model.b1).abs() / n1;
  const Eigen::ArrayXd d2 = ((xs * model.w2).array() + model.b2).abs() / n2;
  for (Eigen::Index i = 0; i < xs.rows(); ++i) out[i] = d1[i] <= d2[i] ? 1 : -1;
  return out;
}

const char* to_string(Method method) {
  switch (method) {
    case Method::Twsvm:
      return "twsvm";
    case Method::Gbtwsvm:
      return "gbtwsvm";
    case Method::Gbftsvm:
      return "gbftsvm";
  }
  return "twsvm";
}

Method method_from_string(const std::string& name) {
  if (name == "twsvm") return Method::Twsvm;
  if (name == "gbtwsvm") return Method::Gbtwsvm;
  if (name == "gbftsvm") return Method::Gbftsvm;
  throw Error("unknown method '" + name + "'");
}

void save_model(const TwinModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "gbtsvm-model v1\n";
  out << "method " << to_string(model.trained_by) << "\n";
  out << "dim " << model.dim() << "\n";
  auto write_vec = [&](const char* name, const Eigen::VectorXd& v) {
    out << name;
    for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << detail::format_double(v[i]);
    out << "\n";
  };
  write_vec("w1", model.w1);
  out << "b1 " << detail::format_double(model.b1) << "\n";
  write_vec("w2", model.w2);
  out << "b2 " << detail::format_double(model.b2) << "\n";
}

TwinModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file: " + path.string(), 0);
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != "gbtsvm-model v1") {
    throw ParseError("not a gbtsvm model file", 1);
  }
  TwinModel model;
  Eigen::Index dim = -1;
  std::size_t line_no = 1;
  auto parse_vec = [&](std::istringstream& ls) {
    std::vector<double> vals;
    std::string tok;
    while (ls >> tok) {
      auto v = detail::parse_double(tok);
      if (!v) throw ParseError("bad number '" + tok + "'", line_no);
      vals.push_back(*v);
    }
    Eigen::VectorXd out(static_cast<Eigen::Index>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) out[static_cast<Eigen::Index>(i)] = vals[i];
    return out;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "method") {
      std::string name;
      ls >> name;
      model.trained_by = method_from_string(name);
    } else if (key == "dim") {
      ls >> dim;
    } else if (key == "w1") {
      model.w1 = parse_vec(ls);
    } else if (key == "w2") {
      model.w2 = parse_vec(ls);
    } else if (key == "b1" || key == "b2") {
      std::string tok;
      ls >> tok;
      auto v = detail::parse_double(tok);
      if (!v) throw ParseError("bad number '" + tok + "'", line_no);
      (key == "b1" ? model.b1 : model.b2) = *v;
    } else {
      throw ParseError("unknown model field '" + key + "'", line_no);
    }
  }
  if (dim < 0 || model.w1.size() != dim || model.w2.size() != dim) {
    throw ParseError("model file is incomplete or inconsistent", line_no);
  }
  return model;
}

}  // namespace gbtsvm
