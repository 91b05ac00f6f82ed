#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gct {

struct ForestConfig {
  int tree_count = 500;
  int min_leaf = 2;
  std::uint64_t seed = 0;
};

struct TreeNode {
  int feature = -1;        // -1 for leaves
  double threshold = 0.0;  // go left iff x[feature] <= threshold
  int left = -1;
  int right = -1;
  int leaf_id = -1;        // >= 0 for leaves, unique within the tree
  int label = -1;          // majority class at leaves
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  int leaf_count = 0;

  const TreeNode& descend(const Eigen::VectorXd& x) const;
};

// Random forest over body-orientation classes. Queried through leaf
// co-occurrence (and majority vote for plain classification).
class OrientationForest {
 public:
  static constexpr int kClassCount = 8;

  int dimension() const { return dim_; }
  int tree_count() const { return static_cast<int>(trees_.size()); }
  const std::vector<DecisionTree>& trees() const { return trees_; }

  // Terminal leaf id in every tree; the cacheable query representation.
  std::vector<int> leaf_path(const Eigen::VectorXd& x) const;
  int predict(const Eigen::VectorXd& x) const;

  void save(const std::filesystem::path& file) const;
  static OrientationForest load(const std::filesystem::path& file);

  // internal; exposed for training and deserialization
  OrientationForest(int dim, std::vector<DecisionTree> trees)
      : dim_(dim), trees_(std::move(trees)) {}

 private:
  int dim_ = 0;
  std::vector<DecisionTree> trees_;
};

// Bootstrap-bagged CART trees (gini, sqrt(d) features per split, grown to
// purity or min_leaf). Per-tree seeds derive from config.seed, so training
// is reproducible and independent of evaluation order.
OrientationForest train_forest(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                               const ForestConfig& config);

// Fraction of trees in which both samples reach the same terminal node.
double leaf_proximity(const OrientationForest& forest, const Eigen::VectorXd& a,
                      const Eigen::VectorXd& b);
double leaf_proximity(const std::vector<int>& leaves_a, const std::vector<int>& leaves_b);

// Pose-pair configuration similarity: O(p, p') * O(g, g').
double pose_pair_similarity(const OrientationForest& forest, const Eigen::VectorXd& probe,
                            const Eigen::VectorXd& gallery, const Eigen::VectorXd& probe2,
                            const Eigen::VectorXd& gallery2);

struct PosePair {
  std::string pair_id;
  std::vector<int> probe_leaves;
  std::vector<int> gallery_leaves;
};

// Top-r training pairs by pose-pair similarity, descending; ties by
// ascending pair_id. Returns all pairs when fewer than r exist.
std::vector<std::string> select_references(const std::vector<int>& probe_leaves,
                                           const std::vector<int>& gallery_leaves,
                                           const std::vector<PosePair>& training_pairs, int r);

}  // namespace gct
