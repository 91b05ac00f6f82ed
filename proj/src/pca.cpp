#include "gct/pca.hpp"

#include <Eigen/Eigenvalues>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace gct {

PcaModel fit_pca(const Eigen::MatrixXd& samples, int d) {
  const Eigen::Index n = samples.rows();
  const Eigen::Index dim = samples.cols();
  if (d < 1) throw std::invalid_argument("fit_pca: d must be >= 1");
  if (d > std::min(n, dim))
    throw std::invalid_argument("fit_pca: d = " + std::to_string(d) +
                                " exceeds min(sample count, dimension) = " +
                                std::to_string(std::min(n, dim)));

  PcaModel model;
  model.mean = samples.colwise().mean();
  const Eigen::MatrixXd centered = samples.rowwise() - model.mean.transpose();
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(std::max<Eigen::Index>(n - 1, 1));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw std::runtime_error("fit_pca: eigensolver failed");
  const Eigen::VectorXd evals = eig.eigenvalues();  // ascending
  const double total = std::max(evals.sum(), 0.0);
  const double rank_tol = 1e-12 * std::max(1.0, evals.cwiseAbs().maxCoeff());

  int usable = 0;
  for (Eigen::Index i = dim - 1; i >= 0 && evals[i] > rank_tol; --i) ++usable;
  int out_dim = d;
  if (usable < d) {
    std::cerr << "fit_pca: covariance rank " << usable << " < requested d " << d
              << "; reducing output dimension\n";
    out_dim = std::max(usable, 1);
  }

  model.components.resize(out_dim, dim);
  model.explained.resize(out_dim);
  for (int i = 0; i < out_dim; ++i) {
    Eigen::VectorXd axis = eig.eigenvectors().col(dim - 1 - i);
    Eigen::Index max_at = 0;
    axis.cwiseAbs().maxCoeff(&max_at);
    if (axis[max_at] < 0) axis = -axis;
    model.components.row(i) = axis.transpose();
    model.explained[i] = total > 0 ? std::max(evals[dim - 1 - i], 0.0) / total : 0.0;
  }
  return model;
}

Eigen::VectorXd apply_pca(const PcaModel& model, const Eigen::VectorXd& v) {
  if (v.size() != model.mean.size())
    throw std::invalid_argument("apply_pca: vector dimension mismatch");
  return model.components * (v - model.mean);
}

Eigen::MatrixXd apply_pca(const PcaModel& model, const Eigen::MatrixXd& rows) {
  if (rows.cols() != model.mean.size())
    throw std::invalid_argument("apply_pca: matrix dimension mismatch");
  return (rows.rowwise() - model.mean.transpose()) * model.components.transpose();
}

void save_pca(const std::filesystem::path& file, const PcaModel& model) {
  nlohmann::json j;
  j["dim"] = model.dim();
  j["out_dim"] = model.out_dim();
  j["mean"] = std::vector<double>(model.mean.data(), model.mean.data() + model.mean.size());
  j["explained"] =
      std::vector<double>(model.explained.data(), model.explained.data() + model.explained.size());
  nlohmann::json comps = nlohmann::json::array();
  for (int r = 0; r < model.out_dim(); ++r)
    for (int c = 0; c < model.dim(); ++c) comps.push_back(model.components(r, c));
  j["components"] = std::move(comps);
  std::ofstream out(file);
  if (!out) throw std::runtime_error("save_pca: cannot write " + file.string());
  out << j.dump() << "\n";
}

PcaModel load_pca(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("load_pca: cannot read " + file.string());
  nlohmann::json j;
  in >> j;
  PcaModel model;
  const int dim = j.at("dim").get<int>();
  const int out_dim = j.at("out_dim").get<int>();
  const auto mean = j.at("mean").get<std::vector<double>>();
  const auto expl = j.at("explained").get<std::vector<double>>();
  model.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), mean.size());
  model.explained = Eigen::Map<const Eigen::VectorXd>(expl.data(), expl.size());
  model.components.resize(out_dim, dim);
  const auto& comps = j.at("components");
  for (int r = 0; r < out_dim; ++r)
    for (int c = 0; c < dim; ++c) model.components(r, c) = comps.at(r * dim + c).get<double>();
  return model;
}

}  // namespace gct
