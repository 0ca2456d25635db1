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

// Canonical variable ordering by lexicographic order refinement.
//
// Vertices start ordered by their features (ties allowed). Every round re-keys
// v_i by (rank of v_i, sorted multiset {(A_ij, rank of w_j) : A_ij != 0}) and
// w_j symmetrically, compares keys lexicographically (a multiset that is a
// proper prefix of another sorts first) and compresses them back to dense
// ranks. On an unfoldable graph the ranks end up all distinct, and the
// variables listed by increasing rank give a numbering-independent order.

#ifndef MILPGNN_CANONICAL_ORDER_H_
#define MILPGNN_CANONICAL_ORDER_H_

#include <compare>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "milpgnn/milp_graph.h"

namespace milpgnn {

// (b_i, iota(sense)) with iota(<=) = -1, iota(=) = 0, iota(>=) = 1.
struct ConstraintOrderKey {
  double rhs;
  int iota;
  std::optional<double> random;

  friend std::partial_ordering operator<=>(const ConstraintOrderKey&,
                                           const ConstraintOrderKey&) = default;
  friend bool operator==(const ConstraintOrderKey&,
                         const ConstraintOrderKey&) = default;
};

// (c_j, l_j, u_j, tau_j) with NegInf < reals < PosInf on the bounds.
struct VariableOrderKey {
  double cost;
  Bound lower;
  Bound upper;
  int tau;
  std::optional<double> random;

  friend std::partial_ordering operator<=>(const VariableOrderKey&,
                                           const VariableOrderKey&) = default;
  friend bool operator==(const VariableOrderKey&,
                         const VariableOrderKey&) = default;
};

ConstraintOrderKey InitialOrderKeyV(const ConstraintFeature& f);
VariableOrderKey InitialOrderKeyW(const VariableFeature& f);

struct CanonicalOrder {
  // sigma_w[k] is the variable with the k-th smallest final key.
  std::vector<int> sigma_w;
  std::vector<int> v_rank;
  std::vector<int> w_rank;
  // Refinement rounds run until the ranks stopped changing.
  int rounds = 0;
};

// Fails with FailedPrecondition ("foldable input") when ties survive m + n
// refinement rounds. When the graph carries random features they extend each
// initial key as a last component.
absl::StatusOr<CanonicalOrder> SortGraph(const MilpGraph& g);

}  // namespace milpgnn

#endif  // MILPGNN_CANONICAL_ORDER_H_
