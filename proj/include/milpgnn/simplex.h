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

// Dense bounded-variable primal simplex for the small LPs met in this
// project (tens of rows and columns).
//
// Every row gets a slack column whose bounds encode the sense (<=: s >= 0,
// >=: s <= 0, =: s fixed at 0), so equality rows need no duplication. Rows
// whose slack cannot absorb the initial residual get an artificial column and
// phase 1 drives the artificials to zero. Pricing is Dantzig's rule until
// `bland_after_pivots`, after which Bland's smallest-index rule takes over to
// rule out cycling.

#ifndef MILPGNN_SIMPLEX_H_
#define MILPGNN_SIMPLEX_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "milpgnn/milp_instance.h"

namespace milpgnn {

// min c^T x  s.t.  rows of A (senses) b,  lower <= x <= upper.
struct LpProblem {
  int m = 0;
  int n = 0;
  std::vector<double> a;  // row-major, m * n
  std::vector<double> b;
  std::vector<Sense> senses;
  std::vector<double> c;
  std::vector<Bound> lower;
  std::vector<Bound> upper;

  // Drops integrality.
  static LpProblem FromInstance(const MilpInstance& inst);

  double& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  double at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;     // set when kOptimal
  std::vector<double> point;  // set when kOptimal
  int64_t pivots = 0;
};

struct SimplexOptions {
  // Negative means 50 * (m + n).
  int64_t bland_after_pivots = -1;
  int64_t max_pivots = 1'000'000;
  double primal_tol = 1e-9;
  double dual_tol = 1e-9;
  double pivot_tol = 1e-9;
  // Phase 1 declares infeasibility when the artificial sum stays above this.
  double infeasibility_tol = 1e-8;
};

// Fails with ResourceExhausted when max_pivots is exceeded.
absl::StatusOr<LpResult> SolveLp(const LpProblem& lp,
                                 const SimplexOptions& options = {});
absl::StatusOr<LpResult> SolveLp(const MilpInstance& inst,
                                 const SimplexOptions& options = {});

}  // namespace milpgnn

#endif  // MILPGNN_SIMPLEX_H_
