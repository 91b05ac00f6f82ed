#include "gct/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gct {

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

void finalize(Dataset& ds) {
  std::sort(ds.entries.begin(), ds.entries.end(),
            [](const DatasetEntry& a, const DatasetEntry& b) { return a.path < b.path; });
  // flag identities without at least two camera views
  std::map<std::string, std::set<std::string>> cams;
  for (const auto& e : ds.entries) cams[e.identity].insert(e.camera);
  for (const auto& [id, c] : cams) {
    if (c.size() < 2) {
      ds.single_view_identities.push_back(id);
      std::cerr << "load_dataset: identity " << id
                << " visible from one camera only; excluded from positive-pair training\n";
    }
  }
}

}  // namespace

std::vector<std::string> Dataset::identities() const {
  std::set<std::string> ids;
  for (const auto& e : entries) ids.insert(e.identity);
  return {ids.begin(), ids.end()};
}

std::vector<const DatasetEntry*> Dataset::entries_of(const std::string& identity,
                                                     const std::string& camera) const {
  std::vector<const DatasetEntry*> out;
  for (const auto& e : entries)
    if (e.identity == identity && e.camera == camera) out.push_back(&e);
  return out;
}

Dataset load_dataset(const std::filesystem::path& root, const std::string& manifest) {
  Dataset ds;
  ds.root = root;
  const auto manifest_path = root / manifest;
  std::set<std::string> seen;

  if (std::filesystem::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("load_dataset: cannot read " + manifest_path.string());
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line_no == 1 && line.rfind("path,", 0) == 0) continue;  // header
      const auto f = split_csv_row(line);
      if (f.size() != 3 || f[0].empty() || f[1].empty() || f[2].empty())
        throw std::runtime_error("load_dataset: malformed row at " + manifest_path.string() +
                                 ":" + std::to_string(line_no));
      if (!seen.insert(f[0]).second)
        throw std::runtime_error("load_dataset: duplicate entry " + f[0] + " at " +
                                 manifest_path.string() + ":" + std::to_string(line_no));
      if (!std::filesystem::exists(root / f[0]))
        throw std::runtime_error("load_dataset: missing file " + (root / f[0]).string() +
                                 " (manifest line " + std::to_string(line_no) + ")");
      ds.entries.push_back({f[0], f[1], f[2]});
    }
  } else {
    // directory layout: cam_a/, cam_b/, ... with <identity>_<seq>.<ext>
    bool any_cam = false;
    std::vector<std::filesystem::path> cam_dirs;
    for (const auto& e : std::filesystem::directory_iterator(root)) {
      if (e.is_directory() && e.path().filename().string().rfind("cam_", 0) == 0)
        cam_dirs.push_back(e.path());
    }
    std::sort(cam_dirs.begin(), cam_dirs.end());
    for (const auto& dir : cam_dirs) {
      any_cam = true;
      const std::string camera = dir.filename().string().substr(4);
      std::vector<std::filesystem::path> files;
      for (const auto& f : std::filesystem::directory_iterator(dir))
        if (f.is_regular_file()) files.push_back(f.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) {
        const std::string stem = f.stem().string();
        const auto us = stem.rfind('_');
        if (us == std::string::npos)
          throw std::runtime_error("load_dataset: cannot parse identity from " + f.string());
        const std::string rel = (dir.filename() / f.filename()).string();
        if (!seen.insert(rel).second)
          throw std::runtime_error("load_dataset: duplicate entry " + rel);
        ds.entries.push_back({rel, stem.substr(0, us), camera});
      }
    }
    if (!any_cam)
      throw std::runtime_error("load_dataset: no manifest and no cam_* directories under " +
                               root.string());
  }

  if (ds.entries.empty()) throw std::runtime_error("load_dataset: dataset is empty");
  finalize(ds);
  return ds;
}

SplitResult split_identities(const std::vector<std::string>& identities, double train_fraction,
                             std::mt19937_64& rng) {
  if (identities.empty()) throw std::invalid_argument("split_identities: no identities");
  if (train_fraction <= 0.0 || train_fraction >= 1.0)
    throw std::invalid_argument("split_identities: fraction must be in (0,1)");
  std::vector<std::string> ids = identities;
  std::sort(ids.begin(), ids.end());
  std::shuffle(ids.begin(), ids.end(), rng);
  const size_t train_count =
      static_cast<size_t>(std::llround(train_fraction * static_cast<double>(ids.size())));
  SplitResult out;
  out.train_identities.assign(ids.begin(), ids.begin() + train_count);
  out.test_identities.assign(ids.begin() + train_count, ids.end());
  std::sort(out.train_identities.begin(), out.train_identities.end());
  std::sort(out.test_identities.begin(), out.test_identities.end());
  if (out.train_identities.empty() || out.test_identities.empty())
    throw std::invalid_argument("split_identities: split leaves an empty side");
  return out;
}

std::map<std::string, int> load_orientation_labels(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("load_orientation_labels: cannot read " + file.string());
  std::map<std::string, int> labels;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("path,", 0) == 0) continue;
    const auto f = split_csv_row(line);
    if (f.size() != 2)
      throw std::runtime_error("load_orientation_labels: malformed row at line " +
                               std::to_string(line_no));
    const int label = std::stoi(f[1]);
    if (label < 0 || label > 7)
      throw std::runtime_error("load_orientation_labels: label outside 0..7 at line " +
                               std::to_string(line_no));
    labels[f[0]] = label;
  }
  return labels;
}

void save_orientation_labels(const std::filesystem::path& file,
                             const std::map<std::string, int>& labels) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("save_orientation_labels: cannot write " + file.string());
  out << "path,label\n";
  for (const auto& [path, label] : labels) out << path << "," << label << "\n";
}

void save_manifest(const std::filesystem::path& file, const std::vector<DatasetEntry>& entries) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("save_manifest: cannot write " + file.string());
  out << "path,identity,camera\n";
  for (const auto& e : entries) out << e.path << "," << e.identity << "," << e.camera << "\n";
}

}  // namespace gct
