#include "gct/kissme.hpp"

#include <Eigen/Eigenvalues>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace gct {

namespace {

// inv via eigendecomposition; throws when the (regularized) covariance is
// not positive definite, which signals a too-small ridge.
Eigen::MatrixXd pd_inverse(const Eigen::MatrixXd& m, const char* side) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("fit_kissme: eigensolver failed");
  const double tol = 1e-12 * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (eig.eigenvalues().minCoeff() <= tol)
    throw std::invalid_argument(std::string("fit_kissme: singular ") + side +
                                " covariance; increase ridge");
  return eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

Eigen::MatrixXd diff_covariance(const Eigen::MatrixXd& diffs) {
  // differences are symmetric about zero, so no mean subtraction
  return diffs.transpose() * diffs / static_cast<double>(diffs.rows());
}

}  // namespace

MetricModel fit_kissme(const Eigen::MatrixXd& positive_diffs,
                       const Eigen::MatrixXd& negative_diffs, double ridge) {
  const Eigen::Index dim = positive_diffs.cols();
  if (dim == 0 || negative_diffs.cols() != dim)
    throw std::invalid_argument("fit_kissme: difference dimensions disagree");
  if (positive_diffs.rows() < dim + 1 || negative_diffs.rows() < dim + 1)
    throw std::invalid_argument("fit_kissme: insufficient samples (need dim+1 = " +
                                std::to_string(dim + 1) + " per side)");

  const Eigen::MatrixXd cov_pos = diff_covariance(positive_diffs);
  const Eigen::MatrixXd cov_neg = diff_covariance(negative_diffs);
  MetricModel model;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);

  auto side_ridge = [&](const Eigen::MatrixXd& cov) {
    return ridge >= 0 ? ridge : 1e-4 * cov.trace() / static_cast<double>(dim);
  };
  Eigen::MatrixXd m = pd_inverse(cov_pos + side_ridge(cov_pos) * id, "positive") -
                      pd_inverse(cov_neg + side_ridge(cov_neg) * id, "negative");
  m = ((m + m.transpose()) / 2.0).eval();

  // clip to PSD so the metric never goes negative
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
  model.m = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
  model.m = ((model.m + model.m.transpose()) / 2.0).eval();
  model.ridge = ridge;
  return model;
}

double metric_distance(const MetricModel& model, const Eigen::VectorXd& a,
                       const Eigen::VectorXd& b) {
  if (a.size() != model.dim() || b.size() != model.dim())
    throw std::invalid_argument("metric_distance: vector dimension != model dimension");
  const Eigen::VectorXd d = a - b;
  const double v = d.dot(model.m * d);
  return v > 0.0 ? v : 0.0;
}

void save_metric(const std::filesystem::path& file, const MetricModel& model) {
  nlohmann::json j;
  j["dim"] = model.dim();
  j["ridge"] = model.ridge;
  nlohmann::json m = nlohmann::json::array();  // row-major
  for (int r = 0; r < model.dim(); ++r)
    for (int c = 0; c < model.dim(); ++c) m.push_back(model.m(r, c));
  j["m"] = std::move(m);
  std::ofstream out(file);
  if (!out) throw std::runtime_error("save_metric: cannot write " + file.string());
  out << j.dump() << "\n";
}

MetricModel load_metric(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("load_metric: cannot read " + file.string());
  nlohmann::json j;
  in >> j;
  const int dim = j.at("dim").get<int>();
  MetricModel model;
  model.ridge = j.at("ridge").get<double>();
  model.m.resize(dim, dim);
  const auto& m = j.at("m");
  if (static_cast<int>(m.size()) != dim * dim)
    throw std::runtime_error("load_metric: matrix size mismatch in " + file.string());
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) model.m(r, c) = m.at(r * dim + c).get<double>();
  return model;
}

}  // namespace gct
