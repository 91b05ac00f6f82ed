#pragma once

#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace gct {

struct DatasetEntry {
  std::string path;  // relative to the dataset root
  std::string identity;
  std::string camera;
};

struct Dataset {
  std::filesystem::path root;
  std::vector<DatasetEntry> entries;                 // sorted by path
  std::vector<std::string> single_view_identities;   // excluded from positive pairs

  std::vector<std::string> identities() const;       // unique, sorted
  std::vector<const DatasetEntry*> entries_of(const std::string& identity,
                                              const std::string& camera) const;
};

// Loads `manifest.csv` (header path,identity,camera) under root, or falls
// back to the cam_a/ cam_b/ directory layout with <identity>_<seq>.png
// names. Validates file existence and duplicate paths; identities visible
// from a single camera are kept but flagged and excluded from training
// pairs (warning on stderr).
Dataset load_dataset(const std::filesystem::path& root,
                     const std::string& manifest = "manifest.csv");

struct SplitResult {
  std::vector<std::string> train_identities;  // sorted
  std::vector<std::string> test_identities;   // sorted
};

// Disjoint identity-level split; train gets round(fraction * n).
SplitResult split_identities(const std::vector<std::string>& identities, double train_fraction,
                             std::mt19937_64& rng);

// CSV with header `path,label` mapping images to orientation classes 0..7.
std::map<std::string, int> load_orientation_labels(const std::filesystem::path& file);
void save_orientation_labels(const std::filesystem::path& file,
                             const std::map<std::string, int>& labels);

void save_manifest(const std::filesystem::path& file, const std::vector<DatasetEntry>& entries);

}  // namespace gct
