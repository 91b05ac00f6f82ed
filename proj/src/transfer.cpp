#include "gct/transfer.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace gct {

double pair_distance(const Eigen::MatrixXd& probe_descriptors,
                     const Eigen::MatrixXd& gallery_descriptors,
                     const std::vector<const CorrespondenceTemplate*>& references,
                     const MetricModel& metric, bool normalize_by_count) {
  if (references.empty()) throw std::invalid_argument("pair_distance: no reference templates");
  double total = 0.0;
  long count = 0;
  for (const CorrespondenceTemplate* t : references) {
    for (const Correspondence& c : t->correspondences) {
      if (c.probe < 0 || c.probe >= probe_descriptors.rows() || c.gallery < 0 ||
          c.gallery >= gallery_descriptors.rows())
        throw std::out_of_range("pair_distance: correspondence outside descriptor grid");
      total += metric_distance(metric, probe_descriptors.row(c.probe),
                               gallery_descriptors.row(c.gallery));
      ++count;
    }
  }
  if (normalize_by_count && count > 0) total /= static_cast<double>(count);
  return total;
}

RankedList rank_gallery(const std::string& probe_id, const Eigen::MatrixXd& probe_descriptors,
                        const std::vector<GalleryEntry>& gallery,
                        const ReferenceSelector& select_references, const MetricModel& metric,
                        bool normalize_by_count) {
  if (gallery.empty()) throw std::invalid_argument("rank_gallery: empty gallery");
  std::vector<std::pair<double, std::string>> scored;
  scored.reserve(gallery.size());
  for (const GalleryEntry& g : gallery) {
    const auto refs = select_references(g.gallery_id);
    scored.emplace_back(
        pair_distance(probe_descriptors, *g.descriptors, refs, metric, normalize_by_count),
        g.gallery_id);
  }
  std::sort(scored.begin(), scored.end());
  RankedList out;
  out.probe_id = probe_id;
  out.gallery_ids.reserve(scored.size());
  out.distances.reserve(scored.size());
  for (const auto& [d, id] : scored) {
    out.distances.push_back(d);
    out.gallery_ids.push_back(id);
  }
  return out;
}

CmcCurve compute_cmc(const std::vector<RankedList>& ranked,
                     const std::map<std::string, std::string>& ground_truth) {
  if (ranked.empty()) throw std::invalid_argument("compute_cmc: no ranked lists");
  const size_t gallery_size = ranked[0].gallery_ids.size();
  CmcCurve curve;
  curve.rates.assign(gallery_size, 0.0);
  for (const RankedList& list : ranked) {
    if (list.gallery_ids.size() != gallery_size)
      throw std::invalid_argument("compute_cmc: ranked lists have differing gallery sizes");
    const auto it = ground_truth.find(list.probe_id);
    if (it == ground_truth.end())
      throw std::invalid_argument("compute_cmc: no ground truth for probe " + list.probe_id);
    const auto hit = std::find(list.gallery_ids.begin(), list.gallery_ids.end(), it->second);
    if (hit == list.gallery_ids.end())
      throw std::invalid_argument("compute_cmc: ground-truth gallery " + it->second +
                                  " absent from ranking of probe " + list.probe_id);
    const size_t rank = static_cast<size_t>(hit - list.gallery_ids.begin());  // 0-based
    for (size_t r = rank; r < gallery_size; ++r) curve.rates[r] += 1.0;
  }
  for (double& r : curve.rates) r /= static_cast<double>(ranked.size());
  return curve;
}

void save_cmc_csv(const std::filesystem::path& file, const CmcCurve& curve) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("save_cmc_csv: cannot write " + file.string());
  out << "rank,rate\n";
  char buf[64];
  for (size_t r = 0; r < curve.rates.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%zu,%.6f\n", r + 1, curve.rates[r]);
    out << buf;
  }
}

void save_ranked_csv(const std::filesystem::path& file, const std::vector<RankedList>& ranked) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("save_ranked_csv: cannot write " + file.string());
  out << "probe_id,rank,gallery_id,distance\n";
  char buf[64];
  for (const RankedList& list : ranked) {
    for (size_t r = 0; r < list.gallery_ids.size(); ++r) {
      std::snprintf(buf, sizeof buf, ",%zu,", r + 1);
      out << list.probe_id << buf << list.gallery_ids[r];
      std::snprintf(buf, sizeof buf, ",%.9g\n", list.distances[r]);
      out << buf;
    }
  }
}

}  // namespace gct
