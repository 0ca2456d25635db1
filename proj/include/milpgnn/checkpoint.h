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

// Model checkpoints: a versioned JSON document holding the model config,
// its seed, the task and target scaling it was trained for, the random
// feature seed if any, and every parameter tensor with its shape.

#ifndef MILPGNN_CHECKPOINT_H_
#define MILPGNN_CHECKPOINT_H_

#include <cstdint>
#include <optional>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "milpgnn/gnn.h"
#include "milpgnn/train.h"

namespace milpgnn {

inline constexpr int kCheckpointVersion = 1;

struct CheckpointMeta {
  uint64_t seed = 0;
  Task task = Task::kFeas;
  TargetScaling scaling;
  std::optional<uint64_t> omega_seed;
};

struct LoadedModel {
  GnnModel model;
  CheckpointMeta meta;
};

std::string CheckpointToJson(GnnModel& model, const CheckpointMeta& meta);
absl::StatusOr<LoadedModel> CheckpointFromJson(const std::string& text);

absl::Status SaveCheckpoint(const std::string& path, GnnModel& model,
                            const CheckpointMeta& meta);
absl::StatusOr<LoadedModel> LoadCheckpoint(const std::string& path);

}  // namespace milpgnn

#endif  // MILPGNN_CHECKPOINT_H_
