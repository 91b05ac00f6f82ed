// Python bindings for the main pipeline operations.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "gct/affinity.hpp"
#include "gct/attribute_graph.hpp"
#include "gct/dataset.hpp"
#include "gct/experiment.hpp"
#include "gct/graph_match.hpp"
#include "gct/hog.hpp"
#include "gct/image.hpp"
#include "gct/kissme.hpp"
#include "gct/patch_descriptor.hpp"
#include "gct/patch_grid.hpp"
#include "gct/pca.hpp"
#include "gct/random_forest.hpp"
#include "gct/synth.hpp"
#include "gct/transfer.hpp"

namespace py = pybind11;
using namespace py::literals;

namespace {

gct::Image image_from_array(const py::array_t<float, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 3 || a.shape(2) != 3)
    throw std::invalid_argument("expected an image array of shape (height, width, 3)");
  gct::Image img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  std::copy(a.data(), a.data() + a.size(), img.rgb.begin());
  return img;
}

py::array_t<float> image_to_array(const gct::Image& img) {
  py::array_t<float> a({img.height, img.width, 3});
  std::copy(img.rgb.begin(), img.rgb.end(), a.mutable_data());
  return a;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Graph correspondence transfer: patch-wise graph matching, "
            "pose-pair reference selection and correspondence-transfer ranking";

  py::class_<gct::GridConfig>(m, "GridConfig")
      .def(py::init<>())
      .def_readwrite("image_width", &gct::GridConfig::image_width)
      .def_readwrite("image_height", &gct::GridConfig::image_height)
      .def_readwrite("patch_width", &gct::GridConfig::patch_width)
      .def_readwrite("patch_height", &gct::GridConfig::patch_height)
      .def_readwrite("stride_x", &gct::GridConfig::stride_x)
      .def_readwrite("stride_y", &gct::GridConfig::stride_y)
      .def_readwrite("search_margin", &gct::GridConfig::search_margin)
      .def("validate", &gct::GridConfig::validate);

  py::class_<gct::PatchGrid>(m, "PatchGrid")
      .def_readonly("rows", &gct::PatchGrid::rows)
      .def_readonly("cols", &gct::PatchGrid::cols)
      .def_readonly("centers", &gct::PatchGrid::centers)
      .def_readonly("stripe", &gct::PatchGrid::stripe)
      .def_property_readonly("patch_count", &gct::PatchGrid::patch_count)
      .def("stripe_of", &gct::PatchGrid::stripe_of, "patch_index"_a);

  m.def("decompose", &gct::decompose, "config"_a);
  m.def("candidate_pairs", &gct::candidate_pairs, "probe"_a, "gallery"_a, "search_margin"_a);

  py::class_<gct::AttributeGraph>(m, "AttributeGraph")
      .def_property_readonly("vertex_count", &gct::AttributeGraph::vertex_count)
      .def_readonly("edges", &gct::AttributeGraph::edges)
      .def("spatial", [](const gct::AttributeGraph& g, int i) { return g.vertices.at(i).spatial; })
      .def("visual", [](const gct::AttributeGraph& g, int i) { return g.vertices.at(i).visual; });

  m.def("build_graph", &gct::build_graph, "grid"_a, "descriptors"_a);
  m.def("node_affinity",
        [](const gct::AttributeGraph& g1, int i, const gct::AttributeGraph& g2, int a) {
          return gct::node_affinity(g1.vertices.at(i), g2.vertices.at(a));
        },
        "graph1"_a, "i"_a, "graph2"_a, "a"_a);
  m.def("edge_affinity",
        [](const gct::AttributeGraph& g1, int i, int j, const gct::AttributeGraph& g2, int a,
           int b) {
          return gct::edge_affinity(g1.vertices.at(i), g1.vertices.at(j), g2.vertices.at(a),
                                    g2.vertices.at(b));
        },
        "graph1"_a, "i"_a, "j"_a, "graph2"_a, "a"_a, "b"_a);

  py::class_<gct::AffinityMatrix>(m, "AffinityMatrix")
      .def_property_readonly("dim", &gct::AffinityMatrix::dim)
      .def_readonly("candidates", &gct::AffinityMatrix::candidates)
      .def_property_readonly("matrix",
                             [](const gct::AffinityMatrix& k) { return k.k; })
      .def("index_of", &gct::AffinityMatrix::index_of, "i"_a, "a"_a);

  m.def("build_affinity", &gct::build_affinity, "graph1"_a, "graph2"_a, "candidates"_a);
  m.def("affinity_from_dense", &gct::affinity_from_dense, "candidates"_a, "matrix"_a);

  py::class_<gct::Assignment>(m, "Assignment")
      .def_readonly("pairs", &gct::Assignment::pairs)
      .def_readonly("score", &gct::Assignment::score);

  m.def("objective", &gct::objective, "affinity"_a, "pairs"_a, "lam"_a);
  m.def("solve_greedy", &gct::solve_greedy, "affinity"_a, "lam"_a);
  m.def("solve_bruteforce", &gct::solve_bruteforce, "affinity"_a, "lam"_a);

  py::class_<gct::Correspondence>(m, "Correspondence")
      .def_readonly("probe", &gct::Correspondence::probe)
      .def_readonly("gallery", &gct::Correspondence::gallery)
      .def_readonly("stripe", &gct::Correspondence::stripe);

  py::class_<gct::CorrespondenceTemplate>(m, "CorrespondenceTemplate")
      .def(py::init<>())
      .def_readwrite("pair_id", &gct::CorrespondenceTemplate::pair_id)
      .def_readwrite("probe_path", &gct::CorrespondenceTemplate::probe_path)
      .def_readwrite("gallery_path", &gct::CorrespondenceTemplate::gallery_path)
      .def_readwrite("correspondences", &gct::CorrespondenceTemplate::correspondences);

  py::class_<gct::PairMatchResult>(m, "PairMatchResult")
      .def_readonly("correspondences", &gct::PairMatchResult::correspondences)
      .def_readonly("stripe_scores", &gct::PairMatchResult::stripe_scores)
      .def_readonly("total_score", &gct::PairMatchResult::total_score);

  m.def("match_graphs", &gct::match_graphs, "grid"_a, "probe"_a, "gallery"_a, "lam"_a,
        "search_margin"_a);

  py::class_<gct::HogConfig>(m, "HogConfig")
      .def(py::init<>())
      .def_readwrite("image_width", &gct::HogConfig::image_width)
      .def_readwrite("image_height", &gct::HogConfig::image_height)
      .def_readwrite("cell_sizes", &gct::HogConfig::cell_sizes)
      .def_readwrite("bins", &gct::HogConfig::bins)
      .def("dimension", &gct::HogConfig::dimension);

  m.def("extract_hog",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& gray,
           const gct::HogConfig& cfg) {
          if (gray.ndim() != 2) throw std::invalid_argument("expected (height, width) array");
          std::vector<float> buf(gray.data(), gray.data() + gray.size());
          return gct::extract_hog(buf, static_cast<int>(gray.shape(1)),
                                  static_cast<int>(gray.shape(0)), cfg);
        },
        "gray"_a, "config"_a);

  py::class_<gct::ForestConfig>(m, "ForestConfig")
      .def(py::init<>())
      .def_readwrite("tree_count", &gct::ForestConfig::tree_count)
      .def_readwrite("min_leaf", &gct::ForestConfig::min_leaf)
      .def_readwrite("seed", &gct::ForestConfig::seed);

  py::class_<gct::OrientationForest>(m, "OrientationForest")
      .def_property_readonly("tree_count", &gct::OrientationForest::tree_count)
      .def_property_readonly("dimension", &gct::OrientationForest::dimension)
      .def("leaf_path", &gct::OrientationForest::leaf_path, "features"_a)
      .def("predict", &gct::OrientationForest::predict, "features"_a)
      .def("save", &gct::OrientationForest::save, "file"_a)
      .def_static("load", &gct::OrientationForest::load, "file"_a);

  m.def("train_forest", &gct::train_forest, "features"_a, "labels"_a, "config"_a);
  m.def("leaf_proximity",
        py::overload_cast<const gct::OrientationForest&, const Eigen::VectorXd&,
                          const Eigen::VectorXd&>(&gct::leaf_proximity),
        "forest"_a, "a"_a, "b"_a);
  m.def("pose_pair_similarity", &gct::pose_pair_similarity, "forest"_a, "probe"_a, "gallery"_a,
        "probe2"_a, "gallery2"_a);

  py::class_<gct::PosePair>(m, "PosePair")
      .def(py::init<>())
      .def_readwrite("pair_id", &gct::PosePair::pair_id)
      .def_readwrite("probe_leaves", &gct::PosePair::probe_leaves)
      .def_readwrite("gallery_leaves", &gct::PosePair::gallery_leaves);

  m.def("select_references", &gct::select_references, "probe_leaves"_a, "gallery_leaves"_a,
        "training_pairs"_a, "r"_a);

  py::class_<gct::DescriptorConfig>(m, "DescriptorConfig")
      .def(py::init<>())
      .def_readwrite("patch_width", &gct::DescriptorConfig::patch_width)
      .def_readwrite("patch_height", &gct::DescriptorConfig::patch_height)
      .def_readwrite("color_bins", &gct::DescriptorConfig::color_bins)
      .def_readwrite("gradient_bins", &gct::DescriptorConfig::gradient_bins)
      .def("dimension", &gct::DescriptorConfig::dimension);

  m.def("extract_patch_descriptor",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& patch,
           const gct::DescriptorConfig& cfg) {
          return gct::extract_patch_descriptor(image_from_array(patch), cfg);
        },
        "patch_rgb"_a, "config"_a);
  m.def("image_descriptors",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& image,
           const gct::PatchGrid& grid, const gct::DescriptorConfig& cfg) {
          return gct::image_descriptors(image_from_array(image), grid, cfg);
        },
        "image_rgb"_a, "grid"_a, "config"_a);

  py::class_<gct::PcaModel>(m, "PcaModel")
      .def_readonly("mean", &gct::PcaModel::mean)
      .def_readonly("components", &gct::PcaModel::components)
      .def_readonly("explained", &gct::PcaModel::explained);

  m.def("fit_pca", &gct::fit_pca, "samples"_a, "d"_a);
  m.def("apply_pca",
        py::overload_cast<const gct::PcaModel&, const Eigen::MatrixXd&>(&gct::apply_pca),
        "model"_a, "rows"_a);

  py::class_<gct::MetricModel>(m, "MetricModel")
      .def_property_readonly("m", [](const gct::MetricModel& m_) { return m_.m; })
      .def_readonly("ridge", &gct::MetricModel::ridge)
      .def_property_readonly("dim", &gct::MetricModel::dim);

  m.def("fit_kissme", &gct::fit_kissme, "positive_diffs"_a, "negative_diffs"_a,
        "ridge"_a = -1.0);
  m.def("metric_distance", &gct::metric_distance, "model"_a, "a"_a, "b"_a);

  py::class_<gct::RankedList>(m, "RankedList")
      .def(py::init<>())
      .def_readwrite("probe_id", &gct::RankedList::probe_id)
      .def_readwrite("gallery_ids", &gct::RankedList::gallery_ids)
      .def_readwrite("distances", &gct::RankedList::distances);

  py::class_<gct::CmcCurve>(m, "CmcCurve").def_readonly("rates", &gct::CmcCurve::rates);

  m.def("pair_distance",
        [](const Eigen::MatrixXd& probe, const Eigen::MatrixXd& gallery,
           const std::vector<gct::CorrespondenceTemplate>& templates,
           const gct::MetricModel& metric, bool normalize_by_count) {
          std::vector<const gct::CorrespondenceTemplate*> refs;
          refs.reserve(templates.size());
          for (const auto& t : templates) refs.push_back(&t);
          return gct::pair_distance(probe, gallery, refs, metric, normalize_by_count);
        },
        "probe_descriptors"_a, "gallery_descriptors"_a, "templates"_a, "metric"_a,
        "normalize_by_count"_a = false);
  m.def("compute_cmc", &gct::compute_cmc, "ranked"_a, "ground_truth"_a);

  py::class_<gct::SynthConfig>(m, "SynthConfig")
      .def(py::init<>())
      .def_readwrite("identity_count", &gct::SynthConfig::identity_count)
      .def_readwrite("grid", &gct::SynthConfig::grid)
      .def_readwrite("shift_cols", &gct::SynthConfig::shift_cols)
      .def_readwrite("noise", &gct::SynthConfig::noise)
      .def_readwrite("orient_amp", &gct::SynthConfig::orient_amp)
      .def_readwrite("seed", &gct::SynthConfig::seed);

  m.def("synth_generate",
        [](const std::filesystem::path& out_dir, const gct::SynthConfig& cfg) {
          const auto result = gct::synth_generate(out_dir, cfg);
          py::dict d;
          d["correspondences"] = result.correspondences;
          d["orientation_labels"] = result.orientation_labels;
          return d;
        },
        "out_dir"_a, "config"_a);

  py::class_<gct::ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("grid", &gct::ExperimentConfig::grid)
      .def_readwrite("hog", &gct::ExperimentConfig::hog)
      .def_readwrite("descriptor", &gct::ExperimentConfig::descriptor)
      .def_readwrite("forest_trees", &gct::ExperimentConfig::forest_trees)
      .def_readwrite("forest_min_leaf", &gct::ExperimentConfig::forest_min_leaf)
      .def_readwrite("lam", &gct::ExperimentConfig::lambda)
      .def_readwrite("refs", &gct::ExperimentConfig::refs)
      .def_readwrite("pca_dim", &gct::ExperimentConfig::pca_dim)
      .def_readwrite("kissme_ridge", &gct::ExperimentConfig::kissme_ridge)
      .def_readwrite("seed", &gct::ExperimentConfig::seed)
      .def_readwrite("trials", &gct::ExperimentConfig::trials)
      .def_readwrite("train_fraction", &gct::ExperimentConfig::train_fraction)
      .def_readwrite("normalize_by_count", &gct::ExperimentConfig::normalize_by_count);

  py::enum_<gct::DistanceMode>(m, "DistanceMode")
      .value("GRAPH_TRANSFER", gct::DistanceMode::kGraphTransfer)
      .value("ALIGNED_BASELINE", gct::DistanceMode::kAlignedBaseline);

  m.def("run_experiment",
        [](const std::filesystem::path& dataset_dir, const gct::ExperimentConfig& cfg,
           const std::filesystem::path& out_dir, gct::DistanceMode mode) {
          const gct::Dataset ds = gct::load_dataset(dataset_dir);
          const auto report = gct::run_experiment(ds, cfg, out_dir, mode);
          py::dict d;
          d["mean_rates"] = report.mean_curve.rates;
          d["trial_rank1"] = report.trial_rank1;
          return d;
        },
        "dataset_dir"_a, "config"_a, "out_dir"_a,
        "mode"_a = gct::DistanceMode::kGraphTransfer);
}
