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

// Random MILP datasets.
//
//   d1              unfoldable random instances (foldable draws are resampled)
//   d2, d2gen       foldable pairs: a 6-cycle of x_a + x_b = 1 rows
//                   (feasible) followed by two 3-cycles on the same binary
//                   variables (infeasible); costs 0 for d2, 0.01 for d2gen
//   counterexample  the bare 6-variable cycle pair with unit costs
//
// N(mu, s) always means standard deviation s.

#ifndef MILPGNN_GENERATORS_H_
#define MILPGNN_GENERATORS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "milpgnn/milp_instance.h"

namespace milpgnn {

enum class Variant { kD1, kD2, kD2Gen, kCounterexample };

std::string_view VariantToString(Variant v);
absl::StatusOr<Variant> VariantFromString(std::string_view text);

struct GenConfig {
  uint64_t seed = 0;
  int count = 1;
  Variant variant = Variant::kD1;
  int m = 6;
  int n = 20;
  int nnz = 60;  // d1 only
  // d1: consecutive foldable draws tolerated before giving up.
  int rejection_limit = 1000;
};

struct GenStats {
  int64_t accepted = 0;
  int64_t rejected = 0;
};

// Dispatches on cfg.variant. Fails with InvalidArgument on inconsistent
// sizes (odd count for d2 variants, nnz > m * n, n < 6 for d2) and with
// ResourceExhausted when d1 hits the rejection limit.
absl::StatusOr<std::vector<MilpInstance>> Generate(const GenConfig& cfg,
                                                   GenStats* stats = nullptr);

absl::StatusOr<std::vector<MilpInstance>> GenerateD1(const GenConfig& cfg,
                                                     GenStats* stats = nullptr);
absl::StatusOr<std::vector<MilpInstance>> GenerateD2(const GenConfig& cfg);

// Both instances: 6 binaries, min sum x, six rows x_a + x_b = 1 forming one
// 6-cycle (first, feasible) or two 3-cycles (second, infeasible).
std::pair<MilpInstance, MilpInstance> CycleCounterexamplePair();

// min x1 + x2  s.t.  x1 + 3 x2 >= 1, x1 + x2 >= 1, x1 <= 3, x2 <= 5,
// x2 integer, both unbounded below.
MilpInstance TwoVariableExample();

}  // namespace milpgnn

#endif  // MILPGNN_GENERATORS_H_
