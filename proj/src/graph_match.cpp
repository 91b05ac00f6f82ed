#include "gct/graph_match.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

namespace gct {

namespace {

bool conflicts(const std::pair<int, int>& p, const std::pair<int, int>& q) {
  return p.first == q.first || p.second == q.second;
}

// Raw quadratic term summed in a fixed order so recomputation is bit-exact.
double raw_objective(const AffinityMatrix& k, const std::vector<int>& idx) {
  double s = 0.0;
  for (size_t u = 0; u < idx.size(); ++u) {
    s += k.k(idx[u], idx[u]);
    for (size_t v = u + 1; v < idx.size(); ++v) s += 2.0 * k.k(idx[u], idx[v]);
  }
  return s;
}

std::vector<int> to_indices(const AffinityMatrix& k,
                            const std::vector<std::pair<int, int>>& pairs) {
  std::vector<int> idx;
  idx.reserve(pairs.size());
  for (const auto& [i, a] : pairs) {
    const int p = k.index_of(i, a);
    if (p < 0)
      throw std::invalid_argument("objective: pair (" + std::to_string(i) + ", " +
                                  std::to_string(a) + ") is not a candidate");
    idx.push_back(p);
  }
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
    throw std::invalid_argument("objective: duplicate pair in assignment");
  return idx;
}

std::vector<std::pair<int, int>> sorted_pairs(const AffinityMatrix& k,
                                              const std::vector<int>& idx) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(idx.size());
  for (int p : idx) pairs.push_back(k.candidates[p]);
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

// One marginal-gain growth sequence, lambda-independent: repeatedly add the
// feasible candidate maximizing K[c,c] + 2*sum over actives (ties: smaller
// candidate index). Returns the ordered adds.
std::vector<int> grow_sequence(const AffinityMatrix& k, int seed) {
  const int n = k.dim();
  std::vector<int> active;
  std::vector<char> used(n, 0);
  std::vector<double> context(n, 0.0);  // 2 * sum over actives of K[c, q]
  auto add = [&](int c) {
    active.push_back(c);
    used[c] = 1;
    for (int q = 0; q < n; ++q) context[q] += 2.0 * k.k(q, c);
  };
  if (seed >= 0) add(seed);
  while (true) {
    int best = -1;
    double best_gain = 0.0;
    for (int c = 0; c < n; ++c) {
      if (used[c]) continue;
      bool ok = true;
      for (int q : active) {
        if (conflicts(k.candidates[c], k.candidates[q])) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      const double gain = k.k(c, c) + context[c];
      if (best < 0 || gain > best_gain) {
        best = c;
        best_gain = gain;
      }
    }
    if (best < 0) break;
    add(best);
  }
  return active;
}

}  // namespace

double objective(const AffinityMatrix& k, const std::vector<std::pair<int, int>>& pairs,
                 double lambda) {
  const auto idx = to_indices(k, pairs);
  return raw_objective(k, idx) - lambda * static_cast<double>(idx.size());
}

Assignment solve_greedy(const AffinityMatrix& k, double lambda) {
  const int n = k.dim();
  // Prefix pool over all growth sequences; best under rawobj - lambda*size.
  double best_value = 0.0;  // empty prefix
  size_t best_size = 0;
  std::vector<std::pair<int, int>> best_pairs;  // sorted

  auto consider_prefix = [&](const std::vector<int>& seq, size_t len, double raw) {
    const double value = raw - lambda * static_cast<double>(len);
    if (value < best_value) return;
    if (value == best_value) {
      if (len > best_size) return;
      if (len == best_size) {
        auto pairs = sorted_pairs(k, {seq.begin(), seq.begin() + len});
        if (!(pairs < best_pairs)) return;
        best_pairs = std::move(pairs);
        return;
      }
    }
    best_value = value;
    best_size = len;
    best_pairs = sorted_pairs(k, {seq.begin(), seq.begin() + len});
  };

  auto scan_sequence = [&](const std::vector<int>& seq) {
    double raw = 0.0;
    for (size_t t = 0; t < seq.size(); ++t) {
      const int c = seq[t];
      raw += k.k(c, c);
      for (size_t u = 0; u < t; ++u) raw += 2.0 * k.k(c, seq[u]);
      consider_prefix(seq, t + 1, raw);
    }
  };

  scan_sequence(grow_sequence(k, -1));
  for (int s = 0; s < n; ++s) scan_sequence(grow_sequence(k, s));

  Assignment out;
  out.pairs = std::move(best_pairs);
  out.score = objective(k, out.pairs, lambda);
  return out;
}

Assignment solve_bruteforce(const AffinityMatrix& k, double lambda) {
  const int n = k.dim();
  if (n > 20)
    throw std::invalid_argument("solve_bruteforce: instance too large (" + std::to_string(n) +
                                " candidates, limit 20)");
  std::vector<int> chosen;
  std::vector<int> best;
  double best_value = 0.0;
  bool best_set = false;
  std::vector<std::pair<int, int>> best_pairs;

  auto consider = [&](double value) {
    if (!best_set) {
      // empty assignment baseline
      best_set = true;
    }
    if (value > best_value) {
      best = chosen;
      best_value = value;
      best_pairs = sorted_pairs(k, best);
      return;
    }
    if (value == best_value) {
      if (chosen.size() > best.size()) return;
      auto pairs = sorted_pairs(k, chosen);
      if (chosen.size() == best.size() && !(pairs < best_pairs)) return;
      best = chosen;
      best_pairs = std::move(pairs);
    }
  };

  consider(0.0);
  auto rec = [&](auto&& self, int start, double raw) -> void {
    for (int c = start; c < n; ++c) {
      bool ok = true;
      for (int q : chosen) {
        if (conflicts(k.candidates[c], k.candidates[q])) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      double add = k.k(c, c);
      for (int q : chosen) add += 2.0 * k.k(c, q);
      chosen.push_back(c);
      consider(raw + add - lambda * static_cast<double>(chosen.size()));
      self(self, c + 1, raw + add);
      chosen.pop_back();
    }
  };
  rec(rec, 0, 0.0);

  Assignment out;
  out.pairs = sorted_pairs(k, best);
  out.score = objective(k, out.pairs, lambda);
  return out;
}

PairMatchResult match_graphs(const PatchGrid& grid, const AttributeGraph& probe,
                             const AttributeGraph& gallery, double lambda,
                             int search_margin) {
  if (probe.vertex_count() != grid.patch_count() || gallery.vertex_count() != grid.patch_count())
    throw std::invalid_argument("match_graphs: graphs do not match grid geometry");
  PairMatchResult result;
  result.stripe_scores.assign(grid.rows, 0.0);

  // gallery patch -> (contribution, correspondence); larger contribution wins
  std::map<int, std::pair<double, Correspondence>> claimed;

  for (int s = 0; s < grid.rows; ++s) {
    std::vector<std::pair<int, int>> cands;
    for (int i = 0; i < grid.patch_count(); ++i) {
      if (grid.stripe_of(i) != s) continue;
      for (int a = 0; a < grid.patch_count(); ++a)
        if (std::abs(grid.stripe_of(a) - s) <= search_margin) cands.emplace_back(i, a);
    }
    if (cands.empty()) continue;
    const AffinityMatrix k = build_affinity(probe, gallery, cands);
    const Assignment sol = solve_greedy(k, lambda);
    result.stripe_scores[s] = sol.score;
    result.total_score += sol.score;

    for (const auto& [i, a] : sol.pairs) {
      // contribution of this pair inside its stripe assignment
      const int p = k.index_of(i, a);
      double contrib = k.k(p, p);
      for (const auto& [j, b] : sol.pairs) {
        if (i == j && a == b) continue;
        contrib += 2.0 * k.k(p, k.index_of(j, b));
      }
      Correspondence c{i, a, s};
      auto it = claimed.find(a);
      if (it == claimed.end()) {
        claimed.emplace(a, std::make_pair(contrib, c));
      } else if (contrib > it->second.first ||
                 (contrib == it->second.first &&
                  std::make_pair(i, a) < std::make_pair(it->second.second.probe,
                                                        it->second.second.gallery))) {
        it->second = {contrib, c};
      }
    }
  }

  for (const auto& [a, entry] : claimed) result.correspondences.push_back(entry.second);
  std::sort(result.correspondences.begin(), result.correspondences.end(),
            [](const Correspondence& x, const Correspondence& y) { return x.probe < y.probe; });
  return result;
}

std::vector<CorrespondenceTemplate> learn_templates(const std::vector<TrainingPair>& pairs,
                                                    const PatchGrid& grid, double lambda,
                                                    int search_margin) {
  std::vector<CorrespondenceTemplate> templates;
  templates.reserve(pairs.size());
  for (const TrainingPair& tp : pairs) {
    const AttributeGraph g1 = build_graph(grid, tp.probe_descriptors);
    const AttributeGraph g2 = build_graph(grid, tp.gallery_descriptors);
    const PairMatchResult match = match_graphs(grid, g1, g2, lambda, search_margin);
    CorrespondenceTemplate t;
    t.pair_id = tp.pair_id;
    t.probe_path = tp.probe_path;
    t.gallery_path = tp.gallery_path;
    t.correspondences = match.correspondences;
    templates.push_back(std::move(t));
  }
  return templates;
}

void save_templates(const std::filesystem::path& file,
                    const std::vector<CorrespondenceTemplate>& templates) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : templates) {
    nlohmann::json rec;
    rec["pair_id"] = t.pair_id;
    rec["probe_path"] = t.probe_path;
    rec["gallery_path"] = t.gallery_path;
    nlohmann::json corr = nlohmann::json::array();
    for (const auto& c : t.correspondences) corr.push_back({c.probe, c.gallery, c.stripe});
    rec["correspondences"] = corr;
    arr.push_back(std::move(rec));
  }
  std::ofstream out(file);
  if (!out) throw std::runtime_error("save_templates: cannot write " + file.string());
  out << arr.dump(2) << "\n";
}

std::vector<CorrespondenceTemplate> load_templates(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("load_templates: cannot read " + file.string());
  nlohmann::json arr;
  in >> arr;
  std::vector<CorrespondenceTemplate> templates;
  for (const auto& rec : arr) {
    CorrespondenceTemplate t;
    t.pair_id = rec.at("pair_id").get<std::string>();
    t.probe_path = rec.value("probe_path", "");
    t.gallery_path = rec.value("gallery_path", "");
    for (const auto& c : rec.at("correspondences")) {
      Correspondence corr;
      corr.probe = c.at(0).get<int>();
      corr.gallery = c.at(1).get<int>();
      corr.stripe = c.size() > 2 ? c.at(2).get<int>() : -1;
      t.correspondences.push_back(corr);
    }
    templates.push_back(std::move(t));
  }
  return templates;
}

}  // namespace gct
