#pragma once

#include <Eigen/Core>
#include <filesystem>

namespace gct {

struct PcaModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;  // out_dim x dim, rows orthonormal
  Eigen::VectorXd explained;   // variance fraction per component

  int dim() const { return static_cast<int>(mean.size()); }
  int out_dim() const { return static_cast<int>(components.rows()); }
};

// Centered projection onto the top-d principal axes. Sign convention: the
// largest-magnitude entry of each component is positive. If the covariance
// rank is below d the output dimension is reduced (with a warning on stderr).
PcaModel fit_pca(const Eigen::MatrixXd& samples, int d);

Eigen::VectorXd apply_pca(const PcaModel& model, const Eigen::VectorXd& v);
Eigen::MatrixXd apply_pca(const PcaModel& model, const Eigen::MatrixXd& rows);

void save_pca(const std::filesystem::path& file, const PcaModel& model);
PcaModel load_pca(const std::filesystem::path& file);

}  // namespace gct
