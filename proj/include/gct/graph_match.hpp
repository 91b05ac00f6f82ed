#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "gct/affinity.hpp"
#include "gct/patch_grid.hpp"

namespace gct {

// Injective partial correspondence between probe and gallery patches.
struct Assignment {
  std::vector<std::pair<int, int>> pairs;  // sorted lexicographically
  double score = 0.0;
};

// x^T K x - lambda * |x| over the active candidate set (|x|^2 = |x| for
// binary x). Throws on pairs absent from the candidate index.
double objective(const AffinityMatrix& k, const std::vector<std::pair<int, int>>& pairs,
                 double lambda);

// Deterministic greedy: grows marginal-gain sequences independent of lambda
// (one unseeded, one per seed candidate), then returns the prefix maximizing
// x^T K x - lambda*|x|. Ties: fewer pairs, then lexicographically smaller
// pair set. Assignment size is exactly non-increasing in lambda.
Assignment solve_greedy(const AffinityMatrix& k, double lambda);

// Exhaustive enumeration of every injective partial assignment. Guarded to
// candidate sets of at most 20. Ties: fewer pairs, then lexicographically
// smaller pair set.
Assignment solve_bruteforce(const AffinityMatrix& k, double lambda);

struct Correspondence {
  int probe = -1;
  int gallery = -1;
  int stripe = -1;  // probe stripe the correspondence was solved in
};

// Learned matching of one positive training pair, reusable for test pairs.
struct CorrespondenceTemplate {
  std::string pair_id;
  std::string probe_path;
  std::string gallery_path;
  std::vector<Correspondence> correspondences;  // injective on both sides
};

struct PairMatchResult {
  std::vector<Correspondence> correspondences;  // sorted by probe index
  std::vector<double> stripe_scores;            // objective per probe stripe
  double total_score = 0.0;
};

// Stripe-restricted matching of two attribute graphs on the same grid: one
// regularized solve per probe stripe, unioned. When search_margin > 0 two
// stripes can claim the same gallery patch; the correspondence with the
// larger contribution to its stripe objective wins (tie: lexicographic).
PairMatchResult match_graphs(const PatchGrid& grid, const AttributeGraph& probe,
                             const AttributeGraph& gallery, double lambda,
                             int search_margin);

struct TrainingPair {
  std::string pair_id;
  std::string probe_path;
  std::string gallery_path;
  Eigen::MatrixXd probe_descriptors;    // one row per patch
  Eigen::MatrixXd gallery_descriptors;
};

std::vector<CorrespondenceTemplate> learn_templates(const std::vector<TrainingPair>& pairs,
                                                    const PatchGrid& grid, double lambda,
                                                    int search_margin);

void save_templates(const std::filesystem::path& file,
                    const std::vector<CorrespondenceTemplate>& templates);
std::vector<CorrespondenceTemplate> load_templates(const std::filesystem::path& file);

}  // namespace gct
