#pragma once

#include <Eigen/Core>
#include <filesystem>

namespace gct {

// Mahalanobis-form pair metric delta(a, b) = (a-b)^T M (a-b) with M clipped
// to PSD so distances are nonnegative.
struct MetricModel {
  Eigen::MatrixXd m;
  double ridge = 0.0;

  int dim() const { return static_cast<int>(m.rows()); }
};

// M = inv(cov+ + r*I) - inv(cov- + r*I) from same-identity and
// different-identity difference vectors (one row each), eigen-clipped to
// PSD. ridge < 0 selects 1e-4 * trace(cov)/dim per side.
MetricModel fit_kissme(const Eigen::MatrixXd& positive_diffs,
                       const Eigen::MatrixXd& negative_diffs, double ridge = -1.0);

double metric_distance(const MetricModel& model, const Eigen::VectorXd& a,
                       const Eigen::VectorXd& b);

void save_metric(const std::filesystem::path& file, const MetricModel& model);
MetricModel load_metric(const std::filesystem::path& file);

}  // namespace gct
