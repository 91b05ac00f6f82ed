#include "gct/random_forest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "gct/rng.hpp"

namespace gct {

namespace {

struct TreeBuilder {
  const Eigen::MatrixXd& x;
  const std::vector<int>& y;
  int min_leaf;
  int mtry;
  std::mt19937_64 rng;
  DecisionTree tree;

  int build(std::vector<int>& samples) {
    const int node_index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    std::array<int, OrientationForest::kClassCount> counts{};
    for (int s : samples) counts[y[s]]++;
    const int majority =
        static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    const bool pure = counts[majority] == static_cast<int>(samples.size());

    if (pure || static_cast<int>(samples.size()) < 2 * min_leaf) {
      make_leaf(node_index, majority);
      return node_index;
    }

    // sample mtry distinct features
    std::vector<int> feats(x.cols());
    std::iota(feats.begin(), feats.end(), 0);
    for (int i = 0; i < mtry; ++i) {
      std::uniform_int_distribution<int> d(i, static_cast<int>(feats.size()) - 1);
      std::swap(feats[i], feats[d(rng)]);
    }

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_impurity = node_gini(counts, static_cast<int>(samples.size()));
    const double parent_impurity = best_impurity;

    std::vector<std::pair<double, int>> vals(samples.size());
    for (int fi = 0; fi < mtry; ++fi) {
      const int f = feats[fi];
      for (size_t s = 0; s < samples.size(); ++s)
        vals[s] = {x(samples[s], f), y[samples[s]]};
      std::sort(vals.begin(), vals.end());
      std::array<int, OrientationForest::kClassCount> left{};
      auto right = counts;
      for (size_t s = 0; s + 1 < vals.size(); ++s) {
        left[vals[s].second]++;
        right[vals[s].second]--;
        if (vals[s].first == vals[s + 1].first) continue;
        const int nl = static_cast<int>(s) + 1;
        const int nr = static_cast<int>(vals.size()) - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double imp = (nl * node_gini(left, nl) + nr * node_gini(right, nr)) /
                           static_cast<double>(vals.size());
        if (imp < best_impurity - 1e-12) {
          best_impurity = imp;
          best_feature = f;
          best_threshold = (vals[s].first + vals[s + 1].first) / 2.0;
        }
      }
    }

    if (best_feature < 0 || best_impurity >= parent_impurity - 1e-12) {
      make_leaf(node_index, majority);
      return node_index;
    }

    std::vector<int> ls, rs;
    for (int s : samples) {
      if (x(s, best_feature) <= best_threshold)
        ls.push_back(s);
      else
        rs.push_back(s);
    }
    const int left_index = build(ls);
    const int right_index = build(rs);
    tree.nodes[node_index].feature = best_feature;
    tree.nodes[node_index].threshold = best_threshold;
    tree.nodes[node_index].left = left_index;
    tree.nodes[node_index].right = right_index;
    return node_index;
  }

  void make_leaf(int node_index, int label) {
    tree.nodes[node_index].leaf_id = tree.leaf_count++;
    tree.nodes[node_index].label = label;
  }

  static double node_gini(const std::array<int, OrientationForest::kClassCount>& counts, int n) {
    double g = 1.0;
    for (int c : counts) {
      const double p = static_cast<double>(c) / n;
      g -= p * p;
    }
    return g;
  }
};

}  // namespace

const TreeNode& DecisionTree::descend(const Eigen::VectorXd& x) const {
  int at = 0;
  while (nodes[at].feature >= 0)
    at = x[nodes[at].feature] <= nodes[at].threshold ? nodes[at].left : nodes[at].right;
  return nodes[at];
}

std::vector<int> OrientationForest::leaf_path(const Eigen::VectorXd& x) const {
  if (x.size() != dim_)
    throw std::invalid_argument("leaf_path: feature dimension " + std::to_string(x.size()) +
                                " != training dimension " + std::to_string(dim_));
  std::vector<int> leaves(trees_.size());
  for (size_t t = 0; t < trees_.size(); ++t) leaves[t] = trees_[t].descend(x).leaf_id;
  return leaves;
}

int OrientationForest::predict(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw std::invalid_argument("predict: wrong feature dimension");
  std::array<int, kClassCount> votes{};
  for (const auto& tree : trees_) votes[tree.descend(x).label]++;
  return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

OrientationForest train_forest(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                               const ForestConfig& config) {
  const int n = static_cast<int>(features.rows());
  if (n != static_cast<int>(labels.size()))
    throw std::invalid_argument("train_forest: feature/label count mismatch");
  if (config.tree_count < 1) throw std::invalid_argument("train_forest: tree count must be >= 1");
  std::array<int, OrientationForest::kClassCount> present{};
  for (int l : labels) {
    if (l < 0 || l >= OrientationForest::kClassCount)
      throw std::invalid_argument("train_forest: label " + std::to_string(l) +
                                  " outside 0.." + std::to_string(OrientationForest::kClassCount - 1));
    present[l]++;
  }
  const int classes = static_cast<int>(std::count_if(present.begin(), present.end(),
                                                     [](int c) { return c > 0; }));
  if (n < 2 || classes < 2)
    throw std::invalid_argument("train_forest: need at least two samples of two classes");

  const int mtry = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(features.cols()))));
  std::vector<DecisionTree> trees(config.tree_count);
  for (int t = 0; t < config.tree_count; ++t) {
    TreeBuilder builder{features, labels, config.min_leaf, mtry,
                        std::mt19937_64(substream_seed(config.seed, "forest-tree", t)),
                        DecisionTree{}};
    std::vector<int> bootstrap(n);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int& s : bootstrap) s = pick(builder.rng);
    builder.build(bootstrap);
    trees[t] = std::move(builder.tree);
  }
  return OrientationForest(static_cast<int>(features.cols()), std::move(trees));
}

double leaf_proximity(const OrientationForest& forest, const Eigen::VectorXd& a,
                      const Eigen::VectorXd& b) {
  return leaf_proximity(forest.leaf_path(a), forest.leaf_path(b));
}

double leaf_proximity(const std::vector<int>& leaves_a, const std::vector<int>& leaves_b) {
  if (leaves_a.size() != leaves_b.size() || leaves_a.empty())
    throw std::invalid_argument("leaf_proximity: leaf path lengths differ");
  int same = 0;
  for (size_t t = 0; t < leaves_a.size(); ++t) same += leaves_a[t] == leaves_b[t];
  return static_cast<double>(same) / static_cast<double>(leaves_a.size());
}

double pose_pair_similarity(const OrientationForest& forest, const Eigen::VectorXd& probe,
                            const Eigen::VectorXd& gallery, const Eigen::VectorXd& probe2,
                            const Eigen::VectorXd& gallery2) {
  return leaf_proximity(forest, probe, probe2) * leaf_proximity(forest, gallery, gallery2);
}

std::vector<std::string> select_references(const std::vector<int>& probe_leaves,
                                           const std::vector<int>& gallery_leaves,
                                           const std::vector<PosePair>& training_pairs, int r) {
  if (r < 1) throw std::invalid_argument("select_references: r must be >= 1");
  if (training_pairs.empty())
    throw std::invalid_argument("select_references: empty training set");
  std::vector<std::pair<double, const PosePair*>> scored;
  scored.reserve(training_pairs.size());
  for (const PosePair& p : training_pairs) {
    const double s = leaf_proximity(probe_leaves, p.probe_leaves) *
                     leaf_proximity(gallery_leaves, p.gallery_leaves);
    scored.emplace_back(s, &p);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second->pair_id < b.second->pair_id;
  });
  const size_t take = std::min<size_t>(r, scored.size());
  std::vector<std::string> out;
  out.reserve(take);
  for (size_t i = 0; i < take; ++i) out.push_back(scored[i].second->pair_id);
  return out;
}

void OrientationForest::save(const std::filesystem::path& file) const {
  nlohmann::json j;
  j["dim"] = dim_;
  j["class_count"] = kClassCount;
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& tree : trees_) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : tree.nodes)
      nodes.push_back({n.feature, n.threshold, n.left, n.right, n.leaf_id, n.label});
    trees.push_back({{"nodes", std::move(nodes)}, {"leaf_count", tree.leaf_count}});
  }
  j["trees"] = std::move(trees);
  std::ofstream out(file);
  if (!out) throw std::runtime_error("OrientationForest::save: cannot write " + file.string());
  out << j.dump() << "\n";
}

OrientationForest OrientationForest::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("OrientationForest::load: cannot read " + file.string());
  nlohmann::json j;
  in >> j;
  std::vector<DecisionTree> trees;
  for (const auto& tj : j.at("trees")) {
    DecisionTree tree;
    tree.leaf_count = tj.at("leaf_count").get<int>();
    for (const auto& nj : tj.at("nodes")) {
      TreeNode n;
      n.feature = nj.at(0).get<int>();
      n.threshold = nj.at(1).get<double>();
      n.left = nj.at(2).get<int>();
      n.right = nj.at(3).get<int>();
      n.leaf_id = nj.at(4).get<int>();
      n.label = nj.at(5).get<int>();
      tree.nodes.push_back(n);
    }
    trees.push_back(std::move(tree));
  }
  return OrientationForest(j.at("dim").get<int>(), std::move(trees));
}

}  // namespace gct
