#include "gct/affinity.hpp"

#include <cmath>
#include <stdexcept>

namespace gct {

namespace {

void check_visual_dims(const GraphVertex& a, const GraphVertex& b) {
  if (a.visual.size() != b.visual.size())
    throw std::invalid_argument("affinity: visual attribute dimensions differ");
}

}  // namespace

double node_affinity(const GraphVertex& vi, const GraphVertex& va) {
  check_visual_dims(vi, va);
  const double sp = std::exp(-(vi.spatial - va.spatial).norm());
  const double sf = std::exp(-(vi.visual - va.visual).norm());
  return sp * sf;
}

double edge_affinity(const GraphVertex& vi, const GraphVertex& vj,
                     const GraphVertex& va, const GraphVertex& vb) {
  check_visual_dims(vi, vj);
  check_visual_dims(va, vb);
  check_visual_dims(vi, va);
  const double sp = std::exp(-((vi.spatial - vj.spatial) - (va.spatial - vb.spatial)).norm());
  const double sf = std::exp(-((vi.visual - vj.visual) - (va.visual - vb.visual)).norm());
  return sp * sf;
}

void AffinityMatrix::rebuild_lookup() {
  lookup.clear();
  lookup.reserve(candidates.size());
  for (int p = 0; p < dim(); ++p) {
    const auto [i, a] = candidates[p];
    lookup.emplace((static_cast<std::int64_t>(i) << 32) | static_cast<std::uint32_t>(a), p);
  }
}

AffinityMatrix build_affinity(const AttributeGraph& g1, const AttributeGraph& g2,
                              const std::vector<std::pair<int, int>>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("build_affinity: empty candidate set");
  AffinityMatrix m;
  m.candidates = candidates;
  m.rebuild_lookup();
  const int n = m.dim();
  m.k = Eigen::MatrixXd::Zero(n, n);
  for (int p = 0; p < n; ++p) {
    const auto [i, a] = candidates[p];
    m.k(p, p) = node_affinity(g1.vertices[i], g2.vertices[a]);
    for (int q = p + 1; q < n; ++q) {
      const auto [j, b] = candidates[q];
      if (i == j || a == b) continue;  // conflicting assignments carry no context
      if (!g1.has_edge(i, j) || !g2.has_edge(a, b)) continue;
      const double v = edge_affinity(g1.vertices[i], g1.vertices[j],
                                     g2.vertices[a], g2.vertices[b]);
      m.k(p, q) = v;
      m.k(q, p) = v;
    }
  }
  return m;
}

AffinityMatrix affinity_from_dense(std::vector<std::pair<int, int>> candidates,
                                   Eigen::MatrixXd k) {
  if (k.rows() != k.cols() || k.rows() != static_cast<Eigen::Index>(candidates.size()))
    throw std::invalid_argument("affinity_from_dense: matrix shape does not match candidates");
  if (!k.isApprox(k.transpose(), 1e-12))
    throw std::invalid_argument("affinity_from_dense: matrix is not symmetric");
  AffinityMatrix m;
  m.candidates = std::move(candidates);
  m.k = std::move(k);
  m.rebuild_lookup();
  return m;
}

}  // namespace gct
