#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gct/dataset.hpp"
#include "gct/hog.hpp"
#include "gct/patch_descriptor.hpp"
#include "gct/patch_grid.hpp"
#include "gct/pca.hpp"
#include "gct/transfer.hpp"

namespace gct {

struct ExperimentConfig {
  GridConfig grid;              // includes the canonical image size
  HogConfig hog;
  DescriptorConfig descriptor;
  int forest_trees = 500;
  int forest_min_leaf = 2;
  double lambda = 2.0;
  int refs = 20;
  int pca_dim = 34;
  double kissme_ridge = -1.0;  // auto
  std::uint64_t seed = 0;
  int trials = 10;
  double train_fraction = 0.5;
  bool normalize_by_count = false;
  std::string multishot = "min";
  std::string probe_camera = "a";
  std::string gallery_camera = "b";
  bool use_descriptor_cache = false;

  void validate() const;
};

// Applies `key = value` settings (documented in the README) over defaults.
ExperimentConfig config_from_map(const std::map<std::string, std::string>& kv);
ExperimentConfig load_experiment_config(const std::filesystem::path& file);

struct TrainedModels {
  std::vector<std::string> train_identities;
  std::vector<std::string> test_identities;
  std::vector<CorrespondenceTemplate> templates;
  PcaModel pca;
  MetricModel metric;
  // forest is saved separately; leaf paths are recomputed on load
};

enum class DistanceMode { kGraphTransfer, kAlignedBaseline };

struct ExperimentReport {
  std::vector<CmcCurve> trial_curves;
  CmcCurve mean_curve;
  std::vector<double> trial_rank1;
};

// Full pipeline: per trial, split identities, train forest + templates +
// PCA + KISSME on the training half, rank the test half and accumulate CMC.
// Writes cmc_trial_<t>.csv, ranked_trial_<t>.csv, cmc_mean.csv and
// summary.txt under out_dir; outputs are byte-deterministic for a fixed
// config and seed.
ExperimentReport run_experiment(const Dataset& dataset, const ExperimentConfig& config,
                                const std::filesystem::path& out_dir,
                                DistanceMode mode = DistanceMode::kGraphTransfer);

// Single-split training used by the `train`/`match` subcommands: writes
// templates.json, forest.json, metric.json, pca.json and split.json.
void train_models(const Dataset& dataset, const ExperimentConfig& config,
                  const std::filesystem::path& model_dir);

}  // namespace gct
