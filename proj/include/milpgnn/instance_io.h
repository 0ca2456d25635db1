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

// JSON instance files:
//
//   {"m": 2, "n": 2,
//    "A": [[0, 0, 1], [0, 1, 3], [1, 0, 1], [1, 1, 1]],
//    "b": [1, 1], "senses": [">=", ">="], "c": [1, 1],
//    "l": ["-inf", "-inf"], "u": [3, 5], "I": [1]}
//
// Indices are 0-based. Reals are written in shortest round-trip form, so a
// write/read cycle reproduces every double bit-for-bit.

#ifndef MILPGNN_INSTANCE_IO_H_
#define MILPGNN_INSTANCE_IO_H_

#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "milpgnn/milp_instance.h"

namespace milpgnn {

// Shortest decimal string that parses back to exactly `value`.
std::string FormatDouble(double value);

std::string InstanceToJson(const MilpInstance& inst);
absl::StatusOr<MilpInstance> InstanceFromJson(std::string_view text);

absl::Status WriteInstanceFile(const std::string& path,
                               const MilpInstance& inst);
absl::StatusOr<MilpInstance> ReadInstanceFile(const std::string& path);

absl::StatusOr<std::string> ReadTextFile(const std::string& path);
absl::Status WriteTextFile(const std::string& path, std::string_view text);

}  // namespace milpgnn

#endif  // MILPGNN_INSTANCE_IO_H_
