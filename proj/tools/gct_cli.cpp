// Command line front end: synthetic data generation, training, evaluation,
// single-pair matching and the aligned baseline.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "gct/config_file.hpp"
#include "gct/experiment.hpp"
#include "gct/image_io.hpp"
#include "gct/pca.hpp"
#include "gct/random_forest.hpp"
#include "gct/synth.hpp"

namespace {

struct CommonOpts {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;
  std::optional<int> refs;
  std::optional<int> trials;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_file, "flat key = value config file");
  cmd->add_option("--seed", opts.seed, "master random seed");
  cmd->add_option("--lambda", opts.lambda, "outlier regularization weight");
  cmd->add_option("--refs", opts.refs, "number of reference templates R");
  cmd->add_option("--trials", opts.trials, "number of split trials");
}

gct::ExperimentConfig resolve_config(const CommonOpts& opts) {
  gct::ExperimentConfig cfg = opts.config_file.empty()
                                  ? gct::config_from_map({})
                                  : gct::load_experiment_config(opts.config_file);
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.lambda) cfg.lambda = *opts.lambda;
  if (opts.refs) cfg.refs = *opts.refs;
  if (opts.trials) cfg.trials = *opts.trials;
  cfg.validate();
  return cfg;
}

void print_cmc_head(const gct::CmcCurve& curve) {
  for (size_t r : {size_t{1}, size_t{5}, size_t{10}, size_t{20}}) {
    if (r <= curve.rates.size())
      std::printf("rank-%zu %.4f\n", r, curve.rates[r - 1]);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph correspondence transfer toolkit"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  CommonOpts synth_opts;
  std::string synth_out;
  int synth_ids = 50, synth_shift = 1;
  double synth_noise = 0.1, synth_orient_amp = 0.08;
  add_common(synth, synth_opts);
  synth->add_option("--out", synth_out, "output dataset directory")->required();
  synth->add_option("--ids", synth_ids, "identity count");
  synth->add_option("--shift", synth_shift, "gallery view shift in patch columns");
  synth->add_option("--noise", synth_noise, "gaussian pixel noise stddev");
  synth->add_option("--orient-amp", synth_orient_amp, "orientation overlay amplitude");

  // train
  auto* train = app.add_subcommand("train", "learn templates, forest and metric");
  CommonOpts train_opts;
  std::string train_data, train_out;
  add_common(train, train_opts);
  train->add_option("--data", train_data, "dataset directory")->required();
  train->add_option("--out", train_out, "model output directory")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "run the full experiment (rank + CMC)");
  CommonOpts eval_opts;
  std::string eval_data, eval_out;
  add_common(eval, eval_opts);
  eval->add_option("--data", eval_data, "dataset directory")->required();
  eval->add_option("--out", eval_out, "report output directory")->required();

  // baseline
  auto* baseline = app.add_subcommand("baseline", "aligned-patch baseline (no matching)");
  CommonOpts base_opts;
  std::string base_data, base_out;
  add_common(baseline, base_opts);
  baseline->add_option("--data", base_data, "dataset directory")->required();
  baseline->add_option("--out", base_out, "report output directory")->required();

  // match
  auto* match = app.add_subcommand("match", "score one probe/gallery image pair");
  CommonOpts match_opts;
  std::string match_probe, match_gallery, match_models, match_data;
  std::string dump_affinity, dump_corr;
  add_common(match, match_opts);
  match->add_option("--probe", match_probe, "probe image")->required();
  match->add_option("--gallery", match_gallery, "gallery image")->required();
  match->add_option("--models", match_models, "model directory from `train`")->required();
  match->add_option("--data", match_data,
                    "dataset directory the templates' image paths are relative to")
      ->required();
  match->add_option("--dump-affinity", dump_affinity, "write the pair affinity matrix as CSV");
  match->add_option("--dump-correspondences", dump_corr,
                    "write transferred + direct correspondences as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      const gct::ExperimentConfig cfg = resolve_config(synth_opts);
      gct::SynthConfig sc;
      sc.identity_count = synth_ids;
      sc.grid = cfg.grid;
      sc.shift_cols = synth_shift;
      sc.noise = synth_noise;
      sc.orient_amp = synth_orient_amp;
      sc.seed = cfg.seed;
      gct::synth_generate(synth_out, sc);
      std::printf("wrote %d identities to %s\n", sc.identity_count, synth_out.c_str());
    } else if (*train) {
      const gct::ExperimentConfig cfg = resolve_config(train_opts);
      const gct::Dataset ds = gct::load_dataset(train_data);
      gct::train_models(ds, cfg, train_out);
      std::printf("models written to %s\n", train_out.c_str());
    } else if (*eval || *baseline) {
      const bool is_baseline = static_cast<bool>(*baseline);
      const gct::ExperimentConfig cfg = resolve_config(is_baseline ? base_opts : eval_opts);
      const gct::Dataset ds = gct::load_dataset(is_baseline ? base_data : eval_data);
      const auto report = gct::run_experiment(
          ds, cfg, is_baseline ? base_out : eval_out,
          is_baseline ? gct::DistanceMode::kAlignedBaseline : gct::DistanceMode::kGraphTransfer);
      print_cmc_head(report.mean_curve);
    } else if (*match) {
      const gct::ExperimentConfig cfg = resolve_config(match_opts);
      const auto grid = gct::decompose(cfg.grid);
      const auto templates = gct::load_templates(std::filesystem::path(match_models) /
                                                 "templates.json");
      const auto forest =
          gct::OrientationForest::load(std::filesystem::path(match_models) / "forest.json");
      const auto metric = gct::load_metric(std::filesystem::path(match_models) / "metric.json");
      const auto pca = gct::load_pca(std::filesystem::path(match_models) / "pca.json");

      const gct::Image probe_img =
          gct::resize(gct::load_image(match_probe), cfg.grid.image_width, cfg.grid.image_height);
      const gct::Image gallery_img =
          gct::resize(gct::load_image(match_gallery), cfg.grid.image_width, cfg.grid.image_height);
      const Eigen::MatrixXd probe_desc = gct::image_descriptors(probe_img, grid, cfg.descriptor);
      const Eigen::MatrixXd gallery_desc =
          gct::image_descriptors(gallery_img, grid, cfg.descriptor);

      // reference selection needs the training pose pairs' images on disk
      gct::Image probe_hog_img =
          gct::resize(gct::load_image(match_probe), cfg.hog.image_width, cfg.hog.image_height);
      gct::Image gallery_hog_img =
          gct::resize(gct::load_image(match_gallery), cfg.hog.image_width, cfg.hog.image_height);
      const auto probe_leaves = forest.leaf_path(gct::extract_hog(probe_hog_img, cfg.hog));
      const auto gallery_leaves = forest.leaf_path(gct::extract_hog(gallery_hog_img, cfg.hog));

      std::vector<gct::PosePair> pose_pairs;
      const std::filesystem::path data_root(match_data);
      for (const auto& t : templates) {
        gct::PosePair pp;
        pp.pair_id = t.pair_id;
        const gct::Image tp = gct::resize(gct::load_image(data_root / t.probe_path),
                                          cfg.hog.image_width, cfg.hog.image_height);
        const gct::Image tg = gct::resize(gct::load_image(data_root / t.gallery_path),
                                          cfg.hog.image_width, cfg.hog.image_height);
        pp.probe_leaves = forest.leaf_path(gct::extract_hog(tp, cfg.hog));
        pp.gallery_leaves = forest.leaf_path(gct::extract_hog(tg, cfg.hog));
        pose_pairs.push_back(std::move(pp));
      }
      const auto ref_ids =
          gct::select_references(probe_leaves, gallery_leaves, pose_pairs, cfg.refs);
      std::vector<const gct::CorrespondenceTemplate*> refs;
      for (const auto& t : templates)
        for (const auto& id : ref_ids)
          if (t.pair_id == id) refs.push_back(&t);

      const Eigen::MatrixXd probe_proj = gct::apply_pca(pca, probe_desc);
      const Eigen::MatrixXd gallery_proj = gct::apply_pca(pca, gallery_desc);
      const double distance = gct::pair_distance(probe_proj, gallery_proj, refs, metric,
                                                 cfg.normalize_by_count);
      std::printf("distance %.9g over %zu reference templates\n", distance, refs.size());

      // direct graph matching of this pair, for inspection
      const auto g1 = gct::build_graph(grid, probe_desc);
      const auto g2 = gct::build_graph(grid, gallery_desc);
      const auto direct =
          gct::match_graphs(grid, g1, g2, cfg.lambda, cfg.grid.search_margin);
      std::printf("direct match: %zu correspondences, score %.6f\n",
                  direct.correspondences.size(), direct.total_score);

      if (!dump_affinity.empty()) {
        const auto cands = gct::candidate_pairs(grid, grid, cfg.grid.search_margin);
        const auto k = gct::build_affinity(g1, g2, cands);
        std::ofstream out(dump_affinity);
        if (!out) throw std::runtime_error("cannot write " + dump_affinity);
        out << "row,col,value\n";
        char buf[64];
        for (int r = 0; r < k.dim(); ++r) {
          for (int c = 0; c < k.dim(); ++c) {
            if (k.k(r, c) == 0.0) continue;
            std::snprintf(buf, sizeof buf, "%d,%d,%.12g\n", r, c, k.k(r, c));
            out << buf;
          }
        }
        std::printf("affinity matrix (%d x %d) written to %s\n", k.dim(), k.dim(),
                    dump_affinity.c_str());
      }
      if (!dump_corr.empty()) {
        nlohmann::json j;
        nlohmann::json direct_j = nlohmann::json::array();
        for (const auto& c : direct.correspondences) direct_j.push_back({c.probe, c.gallery});
        j["direct"] = std::move(direct_j);
        nlohmann::json refs_j = nlohmann::json::array();
        for (const auto* t : refs) {
          nlohmann::json corr = nlohmann::json::array();
          for (const auto& c : t->correspondences) corr.push_back({c.probe, c.gallery});
          refs_j.push_back({{"pair_id", t->pair_id}, {"correspondences", std::move(corr)}});
        }
        j["references"] = std::move(refs_j);
        std::ofstream out(dump_corr);
        if (!out) throw std::runtime_error("cannot write " + dump_corr);
        out << j.dump(2) << "\n";
        std::printf("correspondences written to %s\n", dump_corr.c_str());
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
