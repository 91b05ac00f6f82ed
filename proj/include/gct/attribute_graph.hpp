#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "gct/patch_grid.hpp"

namespace gct {

struct GraphVertex {
  int patch_index = -1;
  Eigen::Vector2d spatial;  // patch center normalized by image dims, in [0,1]^2
  Eigen::VectorXd visual;   // unit L2 norm (zero descriptors stay zero)
};

// Undirected attribute graph of one image: a vertex per patch, edges between
// every pair of patches sharing a stripe.
struct AttributeGraph {
  std::vector<GraphVertex> vertices;
  std::vector<std::pair<int, int>> edges;  // i < j, same stripe
  std::vector<int> stripe;                 // per-vertex stripe id

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  bool has_edge(int i, int j) const { return i != j && stripe[i] == stripe[j]; }
};

// descriptors: one row per patch, row index = patch index.
AttributeGraph build_graph(const PatchGrid& grid, const Eigen::MatrixXd& descriptors);

}  // namespace gct
