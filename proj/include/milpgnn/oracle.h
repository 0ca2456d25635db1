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

// Exact MILP labels: feasibility, optimal value and a canonical optimal
// solution, computed by best-first branch and bound over the simplex in
// simplex.h.

#ifndef MILPGNN_ORACLE_H_
#define MILPGNN_ORACLE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "milpgnn/milp_graph.h"
#include "milpgnn/milp_instance.h"
#include "milpgnn/simplex.h"

namespace milpgnn {

struct OracleOptions {
  double tol_feas = 1e-7;
  double tol_int = 1e-6;
  // The optimality band is tol_obj_rel * max(1, |z|).
  double tol_obj_rel = 1e-9;
  double tol_fix = 1e-7;
  int64_t node_limit = 1'000'000;
  SimplexOptions simplex;

  double TolObj(double z) const;
};

struct OracleLabel {
  bool feasible = false;
  // Absent exactly when infeasible.
  std::optional<double> objective;
  std::optional<std::vector<double>> solution;
  int64_t node_count = 0;
};

// Requires finite bounds on every variable (FailedPrecondition otherwise).
// Fails with ResourceExhausted when node_limit nodes are exceeded.
absl::StatusOr<OracleLabel> SolveMilp(const MilpInstance& inst,
                                      const OracleOptions& options = {});

// The optimal solution that is lexicographically smallest when the variables
// are read in the order given by SortGraph(order_graph). `order_graph` must
// encode `inst` (possibly with random features attached); the one-argument
// form uses EncodeGraph(inst). Fails with FailedPrecondition when the
// instance is infeasible or the order graph is foldable.
absl::StatusOr<std::vector<double>> CanonicalSolution(
    const MilpInstance& inst, const MilpGraph& order_graph,
    const OracleOptions& options = {});
absl::StatusOr<std::vector<double>> CanonicalSolution(
    const MilpInstance& inst, const OracleOptions& options = {});

// Same, with the variable order given directly (order[k] is the k-th
// variable to minimize).
absl::StatusOr<std::vector<double>> LexMinOptimalSolution(
    const MilpInstance& inst, const std::vector<int>& order,
    const OracleOptions& options = {});

}  // namespace milpgnn

#endif  // MILPGNN_ORACLE_H_
