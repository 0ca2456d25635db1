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

// Weisfeiler-Lehman color refinement on MILP graphs.
//
// Round 0 colors every vertex by the equality class of its feature (plus its
// random feature, when present). Each later round recolors v_i by
//   (old color of v_i, multiset {(A_ij, old color of w_j) : A_ij != 0})
// and w_j symmetrically, using the previous round's colors on both sides.
// Signatures are interned exactly rather than hashed, so distinct signatures
// always receive distinct colors. Color ids within a round are dense and
// follow the sorted order of the interned signatures, which makes them
// independent of vertex numbering.

#ifndef MILPGNN_WL_H_
#define MILPGNN_WL_H_

#include <vector>

#include "absl/status/statusor.h"
#include "milpgnn/milp_graph.h"
#include "milpgnn/milp_instance.h"

namespace milpgnn {

struct WlOptions {
  // Refinement round limit; 0 means m + n.
  int max_rounds = 0;
  // When positive, real values are bucketed to floor(x / tol) before
  // comparison. Bucketing is not transitive-safe; use 0 for exact analysis.
  double fold_tolerance = 0.0;
};

struct RoundColors {
  std::vector<int> v;
  std::vector<int> w;
};

struct ColoringResult {
  // Refinement rounds executed. The last executed round either hit the limit
  // or left the partition unchanged.
  int rounds = 0;
  std::vector<int> v_colors;
  std::vector<int> w_colors;
  // Blocks of equal color, each sorted ascending, ordered by color id.
  std::vector<std::vector<int>> v_partition;
  std::vector<std::vector<int>> w_partition;
  bool is_discrete = false;
  // history[0] is the initial coloring, history[k] the coloring after round k.
  std::vector<RoundColors> history;
};

ColoringResult RefineColors(const MilpGraph& g, const WlOptions& options = {});

// Joint refinement with shared color interning across both graphs. True when
// the two graphs end with equal color multisets on V and on W.
absl::StatusOr<bool> GraphsEquivalent(const MilpGraph& g1, const MilpGraph& g2,
                                      const WlOptions& options = {});

// GraphsEquivalent and, in addition, the final W colors agree index by index.
absl::StatusOr<bool> GraphsWEquivalent(const MilpGraph& g1,
                                       const MilpGraph& g2,
                                       const WlOptions& options = {});

// True when the refinement fixed point has a repeated color on V or on W.
bool IsFoldable(const MilpGraph& g, const WlOptions& options = {});

// Checks the partition characterization of foldability directly: within each
// block pair (I_p, J_q) all constraints of I_p share one feature, all
// variables of J_q share one feature, and every row sum and every column sum
// of A restricted to I_p x J_q is identical.
absl::StatusOr<bool> CheckFoldPartition(
    const MilpInstance& inst, const std::vector<std::vector<int>>& v_partition,
    const std::vector<std::vector<int>>& w_partition);
absl::StatusOr<bool> CheckFoldPartition(const MilpInstance& inst,
                                        const ColoringResult& coloring);

}  // namespace milpgnn

#endif  // MILPGNN_WL_H_
