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

// Weighted bipartite encoding of a MILP: one vertex per constraint (V side),
// one vertex per variable (W side), and an edge (i, j) with weight A[i][j] for
// every nonzero coefficient.

#ifndef MILPGNN_MILP_GRAPH_H_
#define MILPGNN_MILP_GRAPH_H_

#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "milpgnn/milp_instance.h"

namespace milpgnn {

struct ConstraintFeature {
  double rhs = 0.0;
  Sense sense = Sense::kLe;

  friend bool operator==(const ConstraintFeature&,
                         const ConstraintFeature&) = default;
};

struct VariableFeature {
  double cost = 0.0;
  Bound lower = Bound::NegInf();
  Bound upper = Bound::PosInf();
  bool is_integer = false;

  friend bool operator==(const VariableFeature&,
                         const VariableFeature&) = default;
};

// One scalar in [0, 1] per vertex.
struct RandomFeatures {
  std::vector<double> v;
  std::vector<double> w;

  friend bool operator==(const RandomFeatures&, const RandomFeatures&) = default;
};

// A pair of index maps: constraint i moves to position sigma_v[i] and
// variable j moves to position sigma_w[j].
class Permutation {
 public:
  static absl::StatusOr<Permutation> Create(std::vector<int> sigma_v,
                                            std::vector<int> sigma_w);
  static Permutation Identity(int m, int n);

  const std::vector<int>& sigma_v() const { return sigma_v_; }
  const std::vector<int>& sigma_w() const { return sigma_w_; }
  int m() const { return static_cast<int>(sigma_v_.size()); }
  int n() const { return static_cast<int>(sigma_w_.size()); }

  Permutation Inverse() const;

 private:
  Permutation(std::vector<int> sigma_v, std::vector<int> sigma_w)
      : sigma_v_(std::move(sigma_v)), sigma_w_(std::move(sigma_w)) {}

  std::vector<int> sigma_v_;
  std::vector<int> sigma_w_;
};

class MilpGraph {
 public:
  MilpGraph(SparseMatrix edges, std::vector<ConstraintFeature> v_features,
            std::vector<VariableFeature> w_features,
            std::optional<RandomFeatures> random_features = std::nullopt);

  int m() const { return edges_.rows(); }
  int n() const { return edges_.cols(); }

  const SparseMatrix& edges() const { return edges_; }
  const std::vector<ConstraintFeature>& v_features() const {
    return v_features_;
  }
  const std::vector<VariableFeature>& w_features() const {
    return w_features_;
  }
  const std::optional<RandomFeatures>& random_features() const {
    return random_features_;
  }

  friend bool operator==(const MilpGraph&, const MilpGraph&) = default;

 private:
  SparseMatrix edges_;
  std::vector<ConstraintFeature> v_features_;
  std::vector<VariableFeature> w_features_;
  std::optional<RandomFeatures> random_features_;
};

MilpGraph EncodeGraph(const MilpInstance& inst);

// Inverse of EncodeGraph. Random features, if any, are ignored.
absl::StatusOr<MilpInstance> DecodeGraph(const MilpGraph& g);

// Relabels vertices: edge (i, j, w) becomes (sigma_v[i], sigma_w[j], w).
// Features and random features move with their vertices.
absl::StatusOr<MilpGraph> ApplyPermutation(const MilpGraph& g,
                                           const Permutation& p);

// Same action on the instance: rows of (A, b, senses) follow sigma_v, columns
// of A and entries of (c, l, u, I) follow sigma_w.
absl::StatusOr<MilpInstance> PermuteInstance(const MilpInstance& inst,
                                             const Permutation& p);

// Reorders a per-variable vector: out[sigma_w[j]] = values[j].
std::vector<double> PermuteVariables(const std::vector<double>& values,
                                     const Permutation& p);

}  // namespace milpgnn

#endif  // MILPGNN_MILP_GRAPH_H_
