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

// Message-passing GNN on MILP graphs.
//
//   s_i^0 = p0(h_i^V),  t_j^0 = q0(h_j^W)
//   s_i^l = p_l(s_i^{l-1}, sum_j E_ij f_l(t_j^{l-1}))
//   t_j^l = q_l(t_j^{l-1}, sum_i E_ij g_l(s_i^{l-1}))
//   graph readout  y   = r_G(sum_i s_i^L, sum_j t_j^L)
//   node readout   y_j = r_W(sum_i s_i^L, sum_j t_j^L, t_j^L)
//
// Every learnable map is an Mlp; multi-argument maps take the concatenation
// of their arguments. A batch of graphs is processed as one block-diagonal
// graph so each Mlp runs once per batch on a stacked matrix.

#ifndef MILPGNN_GNN_H_
#define MILPGNN_GNN_H_

#include <cstdint>
#include <string>
#include <vector>

#include "Eigen/SparseCore"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "milpgnn/milp_graph.h"
#include "milpgnn/mlp.h"

namespace milpgnn {

enum class Readout { kGraph, kNode };

struct GnnConfig {
  int depth = 2;
  int width = 8;
  Readout readout = Readout::kGraph;
  bool random_feature = false;
  // The fan-in scheme shrinks the signal through the stacked MLPs enough that
  // small feature differences (such as random features) barely reach the
  // output; Glorot keeps them visible.
  InitScheme init = InitScheme::kGlorotUniform;
};

// (b, onehot(sense)) and (c, l, has_l, u, has_u, tau); infinite bounds are
// encoded as value 0 with flag 0.
inline constexpr int kVFeatureWidth = 4;
inline constexpr int kWFeatureWidth = 6;

struct EncodedGraph {
  Matrix v;  // m x (4 or 5)
  Matrix w;  // n x (6 or 7)
  std::vector<MatrixEntry> edges;
};

// Appends the random feature as the last column when present.
EncodedGraph EncodeFeatures(const MilpGraph& g);

struct GraphBatch {
  int num_graphs = 0;
  Matrix v;
  Matrix w;
  Eigen::SparseMatrix<double, Eigen::RowMajor> e;   // M x N, block diagonal
  Eigen::SparseMatrix<double, Eigen::RowMajor> et;  // N x M
  std::vector<int> v_offset;  // size num_graphs + 1
  std::vector<int> w_offset;
};

GraphBatch MakeBatch(const std::vector<const EncodedGraph*>& graphs);

// Fixed per-column affine map x -> (x - shift) * scale applied to the
// vertex features before the first layer. Empty vectors mean identity.
struct InputNormalization {
  Eigen::RowVectorXd v_shift, v_scale;
  Eigen::RowVectorXd w_shift, w_scale;

  bool empty() const { return v_shift.size() == 0 && w_shift.size() == 0; }
};

// Column means and 1 / standard deviation over every vertex of the graphs.
// Constant columns get scale 1.
InputNormalization FitInputNormalization(const std::vector<const EncodedGraph*>& graphs);

// Shared per-vertex random features in [0, 1].
RandomFeatures SampleRandomFeatures(int m, int n, uint64_t seed);

// Copy of g carrying omega. Fails on size mismatch or entries outside [0, 1].
absl::StatusOr<MilpGraph> AttachRandomFeatures(const MilpGraph& g,
                                               const RandomFeatures& omega);

// True when omega repeats a value among the constraints or among the
// variables, the measure-zero case in which symmetry breaking can fail.
bool InDegenerateSet(const RandomFeatures& omega);

class GnnModel {
 public:
  struct Tape {
    Mlp::Cache p0, q0, readout;
    std::vector<Mlp::Cache> f, g, p, q;
  };

  // Weights are drawn from Rng(seed) in a fixed order.
  static absl::StatusOr<GnnModel> Create(const GnnConfig& config, uint64_t seed);

  const GnnConfig& config() const { return config_; }
  int v_input_width() const { return kVFeatureWidth + (config_.random_feature ? 1 : 0); }
  int w_input_width() const { return kWFeatureWidth + (config_.random_feature ? 1 : 0); }
  int64_t NumParameters();

  const InputNormalization& input_normalization() const { return norm_; }
  // Fails on widths other than v_input_width() / w_input_width().
  absl::Status SetInputNormalization(InputNormalization norm);

  // Checks the batch feature widths against the model.
  absl::Status Validate(const GraphBatch& batch) const;

  // B x 1 for the graph readout, N x 1 (stacked variables) for the node
  // readout. Pass a tape to enable Backward.
  Matrix Forward(const GraphBatch& batch, Tape* tape) const;

  absl::StatusOr<double> ForwardGraph(const MilpGraph& g) const;
  absl::StatusOr<std::vector<double>> ForwardNodes(const MilpGraph& g) const;

  void ZeroGrad();
  // Accumulates d(loss)/d(parameters) given d(loss)/d(output).
  void Backward(const GraphBatch& batch, const Tape& tape, const Matrix& d_out);

  // Visits every tensor in a fixed order with names such as "p0.l1.w",
  // "f1.l3.b" or "readout.l2.w".
  void ForEachParameter(const Mlp::Visitor& visit);

 private:
  explicit GnnModel(const GnnConfig& config) : config_(config) {}

  GnnConfig config_;
  InputNormalization norm_;
  Mlp p0_, q0_, readout_;
  std::vector<Mlp> f_, g_, p_, q_;
};

// Sum over graphs of the per-graph squared error: (y - t)^2 for the graph
// readout, the mean over variables of (y_j - t_j)^2 for the node readout.
// Targets are laid out like Forward's output. Writes d(loss)/d(output).
// Fails on a non-finite loss.
absl::StatusOr<double> SquaredErrorLoss(const GraphBatch& batch, Readout readout,
                                        const Matrix& output, const Matrix& target,
                                        Matrix* d_output);

}  // namespace milpgnn

#endif  // MILPGNN_GNN_H_
