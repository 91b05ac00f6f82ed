#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gct/graph_match.hpp"
#include "gct/kissme.hpp"

namespace gct {

// Correspondence-transfer distance: the plain double sum of the pair metric
// over every correspondence of every reference template. normalize_by_count
// divides by the total correspondence count instead (off by default).
double pair_distance(const Eigen::MatrixXd& probe_descriptors,
                     const Eigen::MatrixXd& gallery_descriptors,
                     const std::vector<const CorrespondenceTemplate*>& references,
                     const MetricModel& metric, bool normalize_by_count = false);

struct RankedList {
  std::string probe_id;
  std::vector<std::string> gallery_ids;  // ascending distance, ties by id
  std::vector<double> distances;
};

struct GalleryEntry {
  std::string gallery_id;
  const Eigen::MatrixXd* descriptors = nullptr;
};

using ReferenceSelector =
    std::function<std::vector<const CorrespondenceTemplate*>(const std::string& gallery_id)>;

RankedList rank_gallery(const std::string& probe_id, const Eigen::MatrixXd& probe_descriptors,
                        const std::vector<GalleryEntry>& gallery,
                        const ReferenceSelector& select_references, const MetricModel& metric,
                        bool normalize_by_count = false);

struct CmcCurve {
  std::vector<double> rates;  // rates[r-1] = P(correct match within top r)
};

// ground_truth: probe id -> the correct gallery id (single-shot protocol).
CmcCurve compute_cmc(const std::vector<RankedList>& ranked,
                     const std::map<std::string, std::string>& ground_truth);

void save_cmc_csv(const std::filesystem::path& file, const CmcCurve& curve);
void save_ranked_csv(const std::filesystem::path& file, const std::vector<RankedList>& ranked);

}  // namespace gct
