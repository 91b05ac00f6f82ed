#include "gct/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gct/config_file.hpp"
#include "gct/image_io.hpp"
#include "gct/pca.hpp"
#include "gct/random_forest.hpp"
#include "gct/rng.hpp"

namespace gct {

void ExperimentConfig::validate() const {
  grid.validate();
  hog.validate();
  if (forest_trees < 1) throw std::invalid_argument("config: forest_trees must be >= 1");
  if (forest_min_leaf < 1) throw std::invalid_argument("config: forest_min_leaf must be >= 1");
  if (lambda < 0) throw std::invalid_argument("config: lambda must be >= 0");
  if (refs < 1) throw std::invalid_argument("config: refs must be >= 1");
  if (pca_dim < 1) throw std::invalid_argument("config: pca_d must be >= 1");
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (train_fraction <= 0 || train_fraction >= 1)
    throw std::invalid_argument("config: train_fraction must be in (0,1)");
  if (multishot != "min") throw std::invalid_argument("config: unsupported multishot mode");
}

ExperimentConfig config_from_map(const std::map<std::string, std::string>& kv) {
  ExperimentConfig cfg;
  bool stride_x_set = false, stride_y_set = false;
  auto geti = [](const std::string& v) { return std::stoi(v); };
  auto getd = [](const std::string& v) { return std::stod(v); };
  auto getb = [](const std::string& v) {
    if (v == "1" || v == "true" || v == "on") return true;
    if (v == "0" || v == "false" || v == "off") return false;
    throw std::invalid_argument("config: expected boolean, got '" + v + "'");
  };
  for (const auto& [key, value] : kv) {
    if (key == "canon_w") cfg.grid.image_width = geti(value);
    else if (key == "canon_h") cfg.grid.image_height = geti(value);
    else if (key == "patch_w") cfg.grid.patch_width = geti(value);
    else if (key == "patch_h") cfg.grid.patch_height = geti(value);
    else if (key == "stride_x") { cfg.grid.stride_x = geti(value); stride_x_set = true; }
    else if (key == "stride_y") { cfg.grid.stride_y = geti(value); stride_y_set = true; }
    else if (key == "search_margin") cfg.grid.search_margin = geti(value);
    else if (key == "hog_w") cfg.hog.image_width = geti(value);
    else if (key == "hog_h") cfg.hog.image_height = geti(value);
    else if (key == "hog_bins") cfg.hog.bins = geti(value);
    else if (key == "hog_cells") {
      cfg.hog.cell_sizes.clear();
      std::stringstream ss(value);
      std::string tok;
      while (std::getline(ss, tok, ',')) cfg.hog.cell_sizes.push_back(std::stoi(tok));
    }
    else if (key == "forest_trees") cfg.forest_trees = geti(value);
    else if (key == "forest_min_leaf") cfg.forest_min_leaf = geti(value);
    else if (key == "lambda") cfg.lambda = getd(value);
    else if (key == "refs") cfg.refs = geti(value);
    else if (key == "pca_d") cfg.pca_dim = geti(value);
    else if (key == "kissme_ridge") cfg.kissme_ridge = getd(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "trials") cfg.trials = geti(value);
    else if (key == "train_fraction") cfg.train_fraction = getd(value);
    else if (key == "normalize_by_count") cfg.normalize_by_count = getb(value);
    else if (key == "multishot") cfg.multishot = value;
    else if (key == "probe_cam") cfg.probe_camera = value;
    else if (key == "gallery_cam") cfg.gallery_camera = value;
    else if (key == "descriptor_cache") cfg.use_descriptor_cache = getb(value);
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  if (!stride_x_set) cfg.grid.stride_x = std::max(1, cfg.grid.patch_width / 2);
  if (!stride_y_set) cfg.grid.stride_y = std::max(1, cfg.grid.patch_height / 2);
  cfg.descriptor.patch_width = cfg.grid.patch_width;
  cfg.descriptor.patch_height = cfg.grid.patch_height;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& file) {
  return config_from_map(parse_config_file(file));
}

namespace {

struct PreparedData {
  PatchGrid grid;
  std::map<std::string, Eigen::MatrixXd> descriptors;  // path -> patches x dim
  std::map<std::string, Eigen::VectorXd> hog_features;
  std::map<std::string, int> orientation_labels;
};

PreparedData prepare_images(const Dataset& dataset, const ExperimentConfig& cfg,
                            DistanceMode mode) {
  PreparedData data;
  data.grid = decompose(cfg.grid);

  std::filesystem::path cache_dir;
  if (cfg.use_descriptor_cache) {
    cache_dir = dataset.root / "descriptor_cache";
    std::filesystem::create_directories(cache_dir);
  }

  for (const DatasetEntry& e : dataset.entries) {
    const Image raw = load_image(dataset.root / e.path);
    const Image canon = resize(raw, cfg.grid.image_width, cfg.grid.image_height);
    if (cfg.use_descriptor_cache) {
      const auto cache_file =
          cache_dir / (descriptor_cache_key(e.path, cfg.grid, cfg.descriptor) + ".bin");
      if (std::filesystem::exists(cache_file)) {
        data.descriptors[e.path] = load_descriptor_cache(cache_file);
      } else {
        data.descriptors[e.path] = image_descriptors(canon, data.grid, cfg.descriptor);
        save_descriptor_cache(cache_file, data.descriptors[e.path]);
      }
    } else {
      data.descriptors[e.path] = image_descriptors(canon, data.grid, cfg.descriptor);
    }
    if (mode == DistanceMode::kGraphTransfer) {
      const Image hog_img = resize(raw, cfg.hog.image_width, cfg.hog.image_height);
      data.hog_features[e.path] = extract_hog(hog_img, cfg.hog);
    }
  }

  if (mode == DistanceMode::kGraphTransfer) {
    const auto labels_file = dataset.root / "orientation.csv";
    if (!std::filesystem::exists(labels_file))
      throw std::runtime_error(
          "run_experiment: orientation.csv with per-image labels is required for "
          "reference selection");
    data.orientation_labels = load_orientation_labels(labels_file);
  }
  return data;
}

struct IdentityViews {
  const DatasetEntry* probe = nullptr;                 // first probe-camera image
  std::vector<const DatasetEntry*> gallery_images;     // all gallery-camera images
};

std::map<std::string, IdentityViews> collect_views(const Dataset& dataset,
                                                   const ExperimentConfig& cfg) {
  std::map<std::string, IdentityViews> views;
  for (const DatasetEntry& e : dataset.entries) {
    auto& v = views[e.identity];
    if (e.camera == cfg.probe_camera && v.probe == nullptr) v.probe = &e;
    if (e.camera == cfg.gallery_camera) v.gallery_images.push_back(&e);
  }
  return views;
}

struct TrialModels {
  SplitResult split;
  std::vector<CorrespondenceTemplate> templates;
  std::optional<OrientationForest> forest;
  std::vector<PosePair> pose_pairs;                 // training pairs' leaf vectors
  PcaModel pca;
  MetricModel metric;
  std::map<std::string, Eigen::MatrixXd> projected;  // path -> projected descriptors
  CorrespondenceTemplate aligned_template;           // baseline identity mapping
};

int clamped_pca_dim(const ExperimentConfig& cfg, Eigen::Index dim, Eigen::Index samples) {
  int d = cfg.pca_dim;
  const int limit = static_cast<int>(std::min(dim, samples));
  if (d > limit) {
    std::cerr << "run_experiment: pca_d " << d << " clamped to " << limit << "\n";
    d = limit;
  }
  return d;
}

TrialModels build_trial(const Dataset& dataset, const PreparedData& data,
                        const ExperimentConfig& cfg, DistanceMode mode, int trial) {
  TrialModels models;
  auto split_rng = substream(cfg.seed, "split", trial);
  models.split = split_identities(dataset.identities(), cfg.train_fraction, split_rng);

  const auto views = collect_views(dataset, cfg);
  const std::set<std::string> single_view(dataset.single_view_identities.begin(),
                                          dataset.single_view_identities.end());

  // positive training pairs: one probe-camera and one gallery-camera image
  std::vector<TrainingPair> pairs;
  for (const std::string& id : models.split.train_identities) {
    if (single_view.count(id)) continue;
    const auto it = views.find(id);
    if (it == views.end() || it->second.probe == nullptr || it->second.gallery_images.empty())
      continue;
    TrainingPair tp;
    tp.pair_id = id;
    tp.probe_path = it->second.probe->path;
    tp.gallery_path = it->second.gallery_images.front()->path;
    tp.probe_descriptors = data.descriptors.at(tp.probe_path);
    tp.gallery_descriptors = data.descriptors.at(tp.gallery_path);
    pairs.push_back(std::move(tp));
  }
  if (pairs.empty())
    throw std::runtime_error("run_experiment: no positive training pairs in trial " +
                             std::to_string(trial));

  if (mode == DistanceMode::kGraphTransfer) {
    models.templates = learn_templates(pairs, data.grid, cfg.lambda, cfg.grid.search_margin);

    // orientation forest on training images with labels
    std::vector<const DatasetEntry*> train_images;
    const std::set<std::string> train_ids(models.split.train_identities.begin(),
                                          models.split.train_identities.end());
    for (const DatasetEntry& e : dataset.entries)
      if (train_ids.count(e.identity)) train_images.push_back(&e);
    Eigen::MatrixXd feats(train_images.size(), data.hog_features.begin()->second.size());
    std::vector<int> labels(train_images.size());
    for (size_t i = 0; i < train_images.size(); ++i) {
      const auto lit = data.orientation_labels.find(train_images[i]->path);
      if (lit == data.orientation_labels.end())
        throw std::runtime_error("run_experiment: no orientation label for " +
                                 train_images[i]->path);
      feats.row(i) = data.hog_features.at(train_images[i]->path);
      labels[i] = lit->second;
    }
    ForestConfig fc;
    fc.tree_count = cfg.forest_trees;
    fc.min_leaf = cfg.forest_min_leaf;
    fc.seed = substream_seed(cfg.seed, "forest", trial);
    models.forest.emplace(train_forest(feats, labels, fc));

    for (const TrainingPair& tp : pairs) {
      PosePair pp;
      pp.pair_id = tp.pair_id;
      pp.probe_leaves = models.forest->leaf_path(data.hog_features.at(tp.probe_path));
      pp.gallery_leaves = models.forest->leaf_path(data.hog_features.at(tp.gallery_path));
      models.pose_pairs.push_back(std::move(pp));
    }
  } else {
    // aligned baseline: every patch maps to its own position
    for (int p = 0; p < data.grid.patch_count(); ++p)
      models.aligned_template.correspondences.push_back({p, p, data.grid.stripe_of(p)});
    models.aligned_template.pair_id = "aligned";
  }

  // PCA on training-image patch descriptors
  const std::set<std::string> train_ids(models.split.train_identities.begin(),
                                        models.split.train_identities.end());
  std::vector<const Eigen::MatrixXd*> train_blocks;
  Eigen::Index total_rows = 0;
  for (const DatasetEntry& e : dataset.entries) {
    if (!train_ids.count(e.identity)) continue;
    train_blocks.push_back(&data.descriptors.at(e.path));
    total_rows += train_blocks.back()->rows();
  }
  Eigen::MatrixXd samples(total_rows, cfg.descriptor.dimension());
  Eigen::Index at = 0;
  for (const auto* block : train_blocks) {
    samples.middleRows(at, block->rows()) = *block;
    at += block->rows();
  }
  models.pca = fit_pca(samples, clamped_pca_dim(cfg, samples.cols(), samples.rows()));
  for (const auto& [path, desc] : data.descriptors)
    models.projected[path] = apply_pca(models.pca, desc);

  // KISSME difference sets
  std::vector<Eigen::VectorXd> pos;
  if (mode == DistanceMode::kGraphTransfer) {
    std::map<std::string, const TrainingPair*> by_id;
    for (const TrainingPair& tp : pairs) by_id[tp.pair_id] = &tp;
    for (const CorrespondenceTemplate& t : models.templates) {
      const TrainingPair* tp = by_id.at(t.pair_id);
      const auto& p_desc = models.projected.at(tp->probe_path);
      const auto& g_desc = models.projected.at(tp->gallery_path);
      for (const Correspondence& c : t.correspondences)
        pos.push_back(p_desc.row(c.probe) - g_desc.row(c.gallery));
    }
  } else {
    for (const TrainingPair& tp : pairs) {
      const auto& p_desc = models.projected.at(tp.probe_path);
      const auto& g_desc = models.projected.at(tp.gallery_path);
      for (int p = 0; p < data.grid.patch_count(); ++p)
        pos.push_back(p_desc.row(p) - g_desc.row(p));
    }
  }
  const int dim = models.pca.out_dim();
  if (static_cast<int>(pos.size()) < dim + 1)
    throw std::runtime_error("run_experiment: too few positive differences (" +
                             std::to_string(pos.size()) + ") for KISSME dim " +
                             std::to_string(dim));

  auto neg_rng = substream(cfg.seed, "negatives", trial);
  const size_t neg_target = std::max<size_t>(2 * pos.size(), dim + 1);
  std::vector<Eigen::VectorXd> neg;
  std::uniform_int_distribution<int> pair_pick(0, static_cast<int>(pairs.size()) - 1);
  std::uniform_int_distribution<int> patch_pick(0, data.grid.patch_count() - 1);
  while (neg.size() < neg_target) {
    const int i = pair_pick(neg_rng);
    const int j = pair_pick(neg_rng);
    if (i == j) continue;
    const int p = patch_pick(neg_rng);
    neg.push_back(models.projected.at(pairs[i].probe_path).row(p) -
                  models.projected.at(pairs[j].gallery_path).row(p));
  }

  Eigen::MatrixXd pos_m(pos.size(), dim), neg_m(neg.size(), dim);
  for (size_t i = 0; i < pos.size(); ++i) pos_m.row(i) = pos[i];
  for (size_t i = 0; i < neg.size(); ++i) neg_m.row(i) = neg[i];
  models.metric = fit_kissme(pos_m, neg_m, cfg.kissme_ridge);
  return models;
}

std::vector<RankedList> evaluate_trial(const Dataset& dataset, const PreparedData& data,
                                       const ExperimentConfig& cfg, const TrialModels& models,
                                       DistanceMode mode) {
  const auto views = collect_views(dataset, cfg);
  std::map<std::string, const CorrespondenceTemplate*> templates_by_id;
  for (const CorrespondenceTemplate& t : models.templates) templates_by_id[t.pair_id] = &t;

  std::map<std::string, std::vector<int>> leaves;  // test image path -> leaf vector
  if (mode == DistanceMode::kGraphTransfer) {
    for (const std::string& id : models.split.test_identities) {
      const auto it = views.find(id);
      if (it == views.end()) continue;
      if (it->second.probe != nullptr) {
        const auto& p = it->second.probe->path;
        leaves[p] = models.forest->leaf_path(data.hog_features.at(p));
      }
      for (const auto* g : it->second.gallery_images)
        leaves[g->path] = models.forest->leaf_path(data.hog_features.at(g->path));
    }
  }

  std::vector<RankedList> ranked;
  for (const std::string& probe_id : models.split.test_identities) {
    const auto it = views.find(probe_id);
    if (it == views.end() || it->second.probe == nullptr) {
      std::cerr << "run_experiment: test identity " << probe_id << " has no probe image\n";
      continue;
    }
    const std::string& probe_path = it->second.probe->path;
    const Eigen::MatrixXd& probe_desc = models.projected.at(probe_path);

    // min distance per gallery identity (single-shot galleries reduce trivially)
    std::vector<std::pair<double, std::string>> scored;
    for (const std::string& gallery_id : models.split.test_identities) {
      const auto git = views.find(gallery_id);
      if (git == views.end() || git->second.gallery_images.empty()) continue;
      double best = std::numeric_limits<double>::infinity();
      for (const auto* g : git->second.gallery_images) {
        std::vector<const CorrespondenceTemplate*> refs;
        if (mode == DistanceMode::kGraphTransfer) {
          const auto ids = select_references(leaves.at(probe_path), leaves.at(g->path),
                                             models.pose_pairs, cfg.refs);
          for (const std::string& id : ids) refs.push_back(templates_by_id.at(id));
        } else {
          refs.push_back(&models.aligned_template);
        }
        best = std::min(best, pair_distance(probe_desc, models.projected.at(g->path), refs,
                                            models.metric, cfg.normalize_by_count));
      }
      if (std::isfinite(best)) scored.emplace_back(best, gallery_id);
    }
    if (scored.empty())
      throw std::runtime_error("run_experiment: empty gallery for probe " + probe_id);
    std::sort(scored.begin(), scored.end());
    RankedList list;
    list.probe_id = probe_id;
    for (const auto& [d, id] : scored) {
      list.distances.push_back(d);
      list.gallery_ids.push_back(id);
    }
    ranked.push_back(std::move(list));
  }
  return ranked;
}

}  // namespace

ExperimentReport run_experiment(const Dataset& dataset, const ExperimentConfig& config,
                                const std::filesystem::path& out_dir, DistanceMode mode) {
  config.validate();
  std::filesystem::create_directories(out_dir);
  const PreparedData data = prepare_images(dataset, config, mode);

  ExperimentReport report;
  for (int t = 0; t < config.trials; ++t) {
    const TrialModels models = build_trial(dataset, data, config, mode, t);
    const auto ranked = evaluate_trial(dataset, data, config, models, mode);
    std::map<std::string, std::string> gt;
    for (const RankedList& r : ranked) gt[r.probe_id] = r.probe_id;
    const CmcCurve curve = compute_cmc(ranked, gt);
    save_cmc_csv(out_dir / ("cmc_trial_" + std::to_string(t) + ".csv"), curve);
    save_ranked_csv(out_dir / ("ranked_trial_" + std::to_string(t) + ".csv"), ranked);
    report.trial_rank1.push_back(curve.rates.empty() ? 0.0 : curve.rates[0]);
    report.trial_curves.push_back(curve);
  }

  const size_t gallery_size = report.trial_curves.front().rates.size();
  report.mean_curve.rates.assign(gallery_size, 0.0);
  for (const CmcCurve& c : report.trial_curves) {
    if (c.rates.size() != gallery_size)
      throw std::runtime_error("run_experiment: trials produced differing gallery sizes");
    for (size_t r = 0; r < gallery_size; ++r) report.mean_curve.rates[r] += c.rates[r];
  }
  for (double& r : report.mean_curve.rates) r /= static_cast<double>(config.trials);
  save_cmc_csv(out_dir / "cmc_mean.csv", report.mean_curve);

  std::ofstream summary(out_dir / "summary.txt");
  if (!summary) throw std::runtime_error("run_experiment: cannot write summary");
  char buf[64];
  summary << "trials," << config.trials << "\n";
  summary << "gallery_size," << gallery_size << "\n";
  summary << "trial,rank1\n";
  for (int t = 0; t < config.trials; ++t) {
    std::snprintf(buf, sizeof buf, "%d,%.6f\n", t, report.trial_rank1[t]);
    summary << buf;
  }
  double mean_rank1 = 0.0;
  for (double r : report.trial_rank1) mean_rank1 += r;
  mean_rank1 /= static_cast<double>(config.trials);
  std::snprintf(buf, sizeof buf, "mean_rank1,%.6f\n", mean_rank1);
  summary << buf;
  return report;
}

void train_models(const Dataset& dataset, const ExperimentConfig& config,
                  const std::filesystem::path& model_dir) {
  config.validate();
  std::filesystem::create_directories(model_dir);
  const PreparedData data = prepare_images(dataset, config, DistanceMode::kGraphTransfer);
  const TrialModels models = build_trial(dataset, data, config, DistanceMode::kGraphTransfer, 0);

  save_templates(model_dir / "templates.json", models.templates);
  models.forest->save(model_dir / "forest.json");
  save_metric(model_dir / "metric.json", models.metric);
  save_pca(model_dir / "pca.json", models.pca);

  nlohmann::json split;
  split["train_identities"] = models.split.train_identities;
  split["test_identities"] = models.split.test_identities;
  std::ofstream out(model_dir / "split.json");
  if (!out) throw std::runtime_error("train_models: cannot write split.json");
  out << split.dump(2) << "\n";
}

}  // namespace gct
