#include "gct/attribute_graph.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gct {

AttributeGraph build_graph(const PatchGrid& grid, const Eigen::MatrixXd& descriptors) {
  if (descriptors.rows() != grid.patch_count())
    throw std::invalid_argument("build_graph: descriptor count " +
                                std::to_string(descriptors.rows()) + " != patch count " +
                                std::to_string(grid.patch_count()));
  AttributeGraph g;
  g.vertices.reserve(grid.patch_count());
  g.stripe = grid.stripe;
  const double w = grid.config.image_width;
  const double h = grid.config.image_height;
  for (int p = 0; p < grid.patch_count(); ++p) {
    GraphVertex v;
    v.patch_index = p;
    v.spatial = Eigen::Vector2d(grid.centers[p][0] / w, grid.centers[p][1] / h);
    v.visual = descriptors.row(p);
    const double norm = v.visual.norm();
    if (norm > 0.0) v.visual /= norm;
    g.vertices.push_back(std::move(v));
  }
  for (int i = 0; i < grid.patch_count(); ++i)
    for (int j = i + 1; j < grid.patch_count(); ++j)
      if (grid.stripe_of(i) == grid.stripe_of(j)) g.edges.emplace_back(i, j);
  return g;
}

}  // namespace gct
