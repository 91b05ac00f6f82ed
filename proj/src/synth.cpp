#include "gct/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "gct/image_io.hpp"
#include "gct/rng.hpp"

namespace gct {

namespace {

struct ColorField {
  int bx = 0, by = 0;
  std::vector<std::array<float, 3>> colors;
  const std::array<float, 3>& at(int x, int y) const { return colors[y * bx + x]; }
  std::array<float, 3>& at(int x, int y) { return colors[y * bx + x]; }
};

Image render(const ColorField& field, const GridConfig& grid, int orientation_class,
             double orient_amp, double noise, std::mt19937_64& rng) {
  Image img(grid.image_width, grid.image_height);
  const double theta = orientation_class * std::numbers::pi / 8.0;
  const double period = 8.0;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int y = 0; y < grid.image_height; ++y) {
    for (int x = 0; x < grid.image_width; ++x) {
      const int bx = std::min(x / grid.stride_x, field.bx - 1);
      const int by = std::min(y / grid.stride_y, field.by - 1);
      const auto& base = field.at(bx, by);
      const double wave =
          orient_amp *
          std::sin(2.0 * std::numbers::pi * (x * std::cos(theta) + y * std::sin(theta)) / period);
      for (int c = 0; c < 3; ++c) {
        double v = base[c] + wave;
        if (noise > 0.0) v += noise * gauss(rng);
        img.at(x, y, c) = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
    }
  }
  return img;
}

}  // namespace

SynthResult synth_generate(const std::filesystem::path& out_dir, const SynthConfig& config) {
  if (config.identity_count < 2)
    throw std::invalid_argument("synth_generate: need at least two identities");
  config.grid.validate();
  const PatchGrid grid = decompose(config.grid);
  const int blocks_x = (config.grid.image_width + config.grid.stride_x - 1) / config.grid.stride_x;
  const int blocks_y =
      (config.grid.image_height + config.grid.stride_y - 1) / config.grid.stride_y;
  if (config.shift_cols < 0 || config.shift_cols >= grid.cols)
    throw std::invalid_argument("synth_generate: shift outside grid columns");

  std::filesystem::create_directories(out_dir / "cam_a");
  std::filesystem::create_directories(out_dir / "cam_b");

  SynthResult result;
  result.dataset.root = out_dir;

  for (int id = 0; id < config.identity_count; ++id) {
    auto rng = substream(config.seed, "synth-identity", static_cast<std::uint64_t>(id));
    std::uniform_real_distribution<float> color(0.0f, 1.0f);

    ColorField fa{blocks_x, blocks_y, {}};
    fa.colors.resize(static_cast<size_t>(blocks_x) * blocks_y);
    for (auto& c : fa.colors) c = {color(rng), color(rng), color(rng)};

    // view B shows A's content displaced by shift_cols patch columns; the
    // uncovered border is fresh content that exists in one view only
    ColorField fb = fa;
    for (int y = 0; y < blocks_y; ++y) {
      for (int x = blocks_x - 1; x >= 0; --x) {
        if (x >= config.shift_cols)
          fb.at(x, y) = fa.at(x - config.shift_cols, y);
        else
          fb.at(x, y) = {color(rng), color(rng), color(rng)};
      }
    }

    std::uniform_int_distribution<int> orient(0, 7);
    const int orient_a = orient(rng);
    const int orient_b = orient(rng);

    char name[32];
    std::snprintf(name, sizeof name, "%04d", id);
    const std::string id_str(name);
    const std::string path_a = "cam_a/" + id_str + "_0.png";
    const std::string path_b = "cam_b/" + id_str + "_0.png";

    auto noise_rng = substream(config.seed, "synth-noise", static_cast<std::uint64_t>(id));
    save_image(out_dir / path_a,
               render(fa, config.grid, orient_a, config.orient_amp, 0.0, noise_rng));
    save_image(out_dir / path_b,
               render(fb, config.grid, orient_b, config.orient_amp, config.noise, noise_rng));

    result.dataset.entries.push_back({path_a, id_str, "a"});
    result.dataset.entries.push_back({path_b, id_str, "b"});
    result.orientation_labels[path_a] = orient_a;
    result.orientation_labels[path_b] = orient_b;

    std::vector<std::pair<int, int>> gt;
    for (int r = 0; r < grid.rows; ++r)
      for (int c = 0; c + config.shift_cols < grid.cols; ++c)
        gt.emplace_back(r * grid.cols + c, r * grid.cols + c + config.shift_cols);
    result.correspondences[id_str] = std::move(gt);
  }

  std::sort(result.dataset.entries.begin(), result.dataset.entries.end(),
            [](const DatasetEntry& a, const DatasetEntry& b) { return a.path < b.path; });
  save_manifest(out_dir / "manifest.csv", result.dataset.entries);
  save_orientation_labels(out_dir / "orientation.csv", result.orientation_labels);

  nlohmann::json gt;
  for (const auto& [id, corr] : result.correspondences) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [p, g] : corr) arr.push_back({p, g});
    gt[id] = std::move(arr);
  }
  std::ofstream out(out_dir / "gt_correspondences.json");
  if (!out) throw std::runtime_error("synth_generate: cannot write ground truth");
  out << gt.dump(2) << "\n";

  return result;
}

}  // namespace gct
