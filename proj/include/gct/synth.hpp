#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <utility>
#include <vector>

#include "gct/dataset.hpp"
#include "gct/patch_grid.hpp"

namespace gct {

// Desk-scale synthetic Re-ID data: each identity is a random block-color
// layout; the second camera view is the first shifted horizontally by a
// known number of patch columns, with fresh content exposed at the border,
// optional pixel noise, and a per-view orientation class rendered as an
// oriented intensity wave.
struct SynthConfig {
  int identity_count = 50;
  GridConfig grid;
  int shift_cols = 1;
  double noise = 0.1;        // gaussian pixel noise stddev on view B
  double orient_amp = 0.08;  // amplitude of the orientation overlay
  std::uint64_t seed = 0;
};

struct SynthResult {
  Dataset dataset;
  // identity -> ground-truth (probe patch, gallery patch) correspondences
  std::map<std::string, std::vector<std::pair<int, int>>> correspondences;
  std::map<std::string, int> orientation_labels;  // image path -> class
};

// Writes cam_a/, cam_b/, manifest.csv, orientation.csv and
// gt_correspondences.json under out_dir. Byte-identical for a fixed seed.
SynthResult synth_generate(const std::filesystem::path& out_dir, const SynthConfig& config);

}  // namespace gct
