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

// Experiment orchestration: train a sweep of (train size, width, seed) cells
// on labeled datasets, evaluate them, and aggregate the results.
//
// Results CSV columns:
//   experiment,task,variant,d,n_params,seed,train_size,train_err,test_err,
//   epochs,wall_ms,manifest,checkpoint
// test_err is empty when the spec has no test set. wall_ms is the only
// column that varies between identical runs.

#ifndef MILPGNN_EXPERIMENT_H_
#define MILPGNN_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "milpgnn/dataset.h"
#include "milpgnn/mlp.h"
#include "milpgnn/train.h"

namespace milpgnn {

struct ExperimentSpec {
  std::string name;
  Task task = Task::kFeas;
  std::string train_manifest;
  // Empty for no test set.
  std::string test_manifest;
  std::vector<int> widths = {8};
  std::vector<uint64_t> seeds = {1};
  // Each size takes that many leading instances of the training manifest
  // (before infeasible ones are dropped for obj and solu). Empty means all.
  std::vector<int> train_sizes;
  // Leading instances of the test manifest; 0 means all.
  int test_size = 0;
  bool random_feature = false;
  // Seed of the shared random features; required with random_feature.
  std::optional<uint64_t> omega_seed;
  int depth = 2;
  InitScheme init = InitScheme::kGlorotUniform;
  // Standardize input features with training-set statistics.
  bool normalize_inputs = true;
  // Maximum epochs. When steps is set it overrides epochs per cell with
  // ceil(steps / minibatches per epoch), so every size gets the same number
  // of optimizer steps.
  int epochs = 100;
  std::optional<int64_t> steps;
  int batch_size = 10;
  double learning_rate = 1e-4;
  int eval_every = 0;
  std::optional<double> target_error;
  // Logs, checkpoints and the results CSV go here.
  std::string out_dir;
  // Cells trained concurrently.
  int jobs = 1;
};

// Fields missing from the JSON keep their defaults. Relative manifest paths
// and out_dir are resolved against base_dir when it is non-empty.
absl::StatusOr<ExperimentSpec> ExperimentSpecFromJson(const std::string& text,
                                                      const std::string& base_dir = "");
std::string ExperimentSpecToJson(const ExperimentSpec& spec);

// Checks field ranges and that the manifests exist and are large enough.
absl::Status ValidateSpec(const ExperimentSpec& spec);

struct ResultRow {
  std::string experiment;
  std::string task;
  std::string variant;
  int d = 0;
  int64_t n_params = 0;
  uint64_t seed = 0;
  int train_size = 0;
  double train_err = 0.0;
  std::optional<double> test_err;
  int epochs = 0;
  int64_t wall_ms = 0;
  std::string manifest;
  std::string checkpoint;
};

std::string ResultsCsv(const std::vector<ResultRow>& rows);
absl::StatusOr<std::vector<ResultRow>> ParseResultsCsv(const std::string& text);

// Builds training samples from a labeled dataset: the first `count`
// instances (all when count < 0), infeasible ones dropped for obj and solu.
// Fails with FailedPrecondition on missing labels, and when the canonical
// solutions were ordered with random features other than omega_seed.
absl::StatusOr<std::vector<Sample>> BuildSamples(const Dataset& dataset, Task task,
                                                 int count, bool random_feature,
                                                 std::optional<uint64_t> omega_seed);

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::string results_path;
};

// Trains every cell, writes per-cell logs and checkpoints under out_dir and
// the results CSV to out_dir/<name>.results.csv. Rows are sorted by
// (train_size, d, seed) whatever the job count.
absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentSpec& spec);

struct SummaryRow {
  std::string experiment;
  std::string task;
  std::string variant;
  int d = 0;
  int64_t n_params = 0;
  int train_size = 0;
  int num_seeds = 0;
  double train_err = 0.0;
  std::optional<double> test_err;
};

double Median(std::vector<double> values);

// Medians over seeds, grouped by (experiment, task, variant, d, train_size).
absl::StatusOr<std::vector<SummaryRow>> Summarize(const std::vector<ResultRow>& rows);

std::string SummaryText(const std::vector<SummaryRow>& summary);
// Plot-ready CSV for one task:
//   experiment,variant,d,n_params,train_size,train_err,test_err
std::string PlotCsv(const std::vector<SummaryRow>& summary, Task task);

// Reads results CSVs, writes summary.txt and plot_<task>.csv (for each task
// present) into out_dir. Returns the summary text.
absl::StatusOr<std::string> Report(const std::vector<std::string>& results_paths,
                                   const std::string& out_dir);

}  // namespace milpgnn

#endif  // MILPGNN_EXPERIMENT_H_
