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

// Adam training of a GnnModel on labeled MILP graphs with a mean squared
// error objective.
//
//   feas  graph readout regressed to {0, 1}; error is the fraction of graphs
//         with 1[y > 1/2] != label
//   obj   graph readout regressed to the standardized optimal value; error
//         is the mean squared error in original units
//   solu  node readout regressed to the standardized solution vector; error
//         is the per-variable mean squared error in original units
//
// Each step averages the per-graph losses of one minibatch. Minibatch order
// is reshuffled every epoch from the training seed, so a run is a pure
// function of (model seed, data, config).

#ifndef MILPGNN_TRAIN_H_
#define MILPGNN_TRAIN_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "milpgnn/gnn.h"
#include "milpgnn/milp_graph.h"

namespace milpgnn {

enum class Task { kFeas, kObj, kSolu };

std::string_view TaskToString(Task task);
absl::StatusOr<Task> TaskFromString(std::string_view text);
Readout ReadoutFor(Task task);

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class Adam {
 public:
  Adam(GnnModel& model, const AdamConfig& config);
  // Applies one update using the model's accumulated gradients times
  // grad_scale.
  void Step(double grad_scale);

 private:
  GnnModel& model_;
  AdamConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  int64_t t_ = 0;
};

struct TrainConfig {
  AdamConfig adam;
  Task task = Task::kFeas;
  int epochs = 100;
  int batch_size = 32;
  uint64_t seed = 0;
  // When both are set, training stops at the first epoch divisible by
  // eval_every whose full training-set error is <= target_error.
  int eval_every = 0;
  std::optional<double> target_error;
  // Fit the model's input normalization to the training graphs first.
  bool normalize_inputs = true;
};

struct Sample {
  MilpGraph graph;
  // feas: 0 or 1; obj: optimal value.
  double value = 0.0;
  // solu: one entry per variable.
  std::vector<double> solution;
};

struct TargetScaling {
  double mean = 0.0;
  double stddev = 1.0;
};

// Identity for feas; train-set mean and standard deviation otherwise.
TargetScaling FitScaling(const std::vector<Sample>& train, Task task);

struct EpochRecord {
  int epoch = 0;
  // Mean per-graph training loss over the epoch (standardized units).
  double loss = 0.0;
  // Task error of the predictions made during the epoch's minibatch passes.
  double task_error = 0.0;
  int64_t wall_ms = 0;
};

struct TrainResult {
  std::vector<EpochRecord> log;
  int epochs_run = 0;
  // Full pass over the training set after the last update.
  double train_error = 0.0;
  TargetScaling scaling;
};

// Samples of a dataset must share the model's feature layout (random
// features present iff the model uses them).
absl::StatusOr<TrainResult> Train(GnnModel& model, const std::vector<Sample>& train,
                                  const TrainConfig& config);

absl::StatusOr<double> Evaluate(const GnnModel& model, const std::vector<Sample>& data,
                                Task task, const TargetScaling& scaling);

// Header "epoch,loss,task_error,wall_ms".
std::string TrainLogCsv(const std::vector<EpochRecord>& log);

}  // namespace milpgnn

#endif  // MILPGNN_TRAIN_H_
