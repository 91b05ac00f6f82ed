#pragma once

#include <Eigen/Core>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gct/attribute_graph.hpp"

namespace gct {

// exp(-||spatial diff||) * exp(-||visual diff||), in (0, 1].
double node_affinity(const GraphVertex& vi, const GraphVertex& va);

// Compatibility of probe edge (vi, vj) with gallery edge (va, vb):
// exp(-||(pi-pj)-(pa-pb)||) * exp(-||(fi-fj)-(fa-fb)||).
double edge_affinity(const GraphVertex& vi, const GraphVertex& vj,
                     const GraphVertex& va, const GraphVertex& vb);

// Symmetric nonnegative affinity over a candidate correspondence set, indexed
// compactly by candidate (not by the full n1*n2 product).
struct AffinityMatrix {
  Eigen::MatrixXd k;
  std::vector<std::pair<int, int>> candidates;        // row -> (probe patch, gallery patch)
  std::unordered_map<std::int64_t, int> lookup;       // (i, a) -> row

  int dim() const { return static_cast<int>(candidates.size()); }
  int index_of(int i, int a) const {
    auto it = lookup.find((static_cast<std::int64_t>(i) << 32) | static_cast<std::uint32_t>(a));
    return it == lookup.end() ? -1 : it->second;
  }
  void rebuild_lookup();
};

// Diagonal = node affinities; entry (ia, jb) = edge affinity iff both edges
// exist and the candidates conflict on neither side; everything else 0.
AffinityMatrix build_affinity(const AttributeGraph& g1, const AttributeGraph& g2,
                              const std::vector<std::pair<int, int>>& candidates);

// Wrap an explicit symmetric matrix (used by solver tests and benchmarks).
AffinityMatrix affinity_from_dense(std::vector<std::pair<int, int>> candidates,
                                   Eigen::MatrixXd k);

}  // namespace gct
