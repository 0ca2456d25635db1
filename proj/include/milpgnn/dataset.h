// Copyright 2026 The milpgnn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// On-disk datasets: a directory of instance files, a manifest.json naming
// them, and optional per-instance label files (<stem>.label.json).

#ifndef MILPGNN_DATASET_H_
#define MILPGNN_DATASET_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "milpgnn/generators.h"
#include "milpgnn/milp_instance.h"
#include "milpgnn/oracle.h"

namespace milpgnn {

struct Manifest {
  std::string variant;
  uint64_t seed = 0;
  int count = 0;
  int m = 0;
  int n = 0;
  int nnz = 0;
  std::vector<std::string> files;  // relative to the manifest's directory
};

std::string ManifestToJson(const Manifest& manifest);
absl::StatusOr<Manifest> ManifestFromJson(const std::string& text);

// The label of one instance plus, when computed, its canonical solution.
struct LabelRecord {
  OracleLabel label;
  std::optional<std::vector<double>> canonical_solution;
  // Seed of the random features the canonical order was computed with;
  // absent when the order came from the plain graph.
  std::optional<uint64_t> omega_seed;
};

std::string LabelToJson(const LabelRecord& record);
absl::StatusOr<LabelRecord> LabelFromJson(const std::string& text);

// "dir/inst_00003.json" -> "dir/inst_00003.label.json".
std::string LabelPath(const std::string& instance_path);

// Writes inst_%05d.json files and manifest.json into dir (created if
// missing). Returns the manifest path.
absl::StatusOr<std::string> WriteDataset(const std::string& dir,
                                         const GenConfig& cfg,
                                         const std::vector<MilpInstance>& insts);

struct Dataset {
  Manifest manifest;
  std::string manifest_path;
  std::vector<std::string> paths;  // resolved instance paths
  std::vector<MilpInstance> instances;
  // Filled by LoadLabels.
  std::vector<LabelRecord> labels;
};

absl::StatusOr<Dataset> LoadDataset(const std::string& manifest_path);

// Reads the label file of every instance; NotFound if any is missing.
absl::Status LoadLabels(Dataset* dataset);

struct LabelOptions {
  // Also compute canonical solutions of the feasible instances.
  bool canonical = false;
  // Order the canonical solution with SampleRandomFeatures(m, n, seed)
  // attached. Required for foldable instances.
  std::optional<uint64_t> omega_seed;
  OracleOptions oracle;
};

absl::StatusOr<LabelRecord> LabelInstance(const MilpInstance& inst,
                                      const LabelOptions& options);

// Labels every instance and writes the label files. Fills dataset->labels.
absl::Status LabelDataset(Dataset* dataset, const LabelOptions& options);

}  // namespace milpgnn

#endif  // MILPGNN_DATASET_H_
