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

#include "milpgnn/gnn.h"

#include <cmath>
#include <set>
#include <utility>

#include "absl/strings/str_format.h"

namespace milpgnn {
namespace {

Matrix HCat(const Matrix& a, const Matrix& b) {
  Matrix x(a.rows(), a.cols() + b.cols());
  x << a, b;
  return x;
}

Matrix Normalize(const Matrix& x, const Eigen::RowVectorXd& shift,
                 const Eigen::RowVectorXd& scale) {
  if (shift.size() == 0) return x;
  return (x.rowwise() - shift).array().rowwise() * scale.array();
}

void FitColumns(const Matrix& x, Eigen::RowVectorXd* shift, Eigen::RowVectorXd* scale) {
  *shift = x.colwise().mean();
  *scale = Eigen::RowVectorXd::Ones(x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double var = (x.col(c).array() - (*shift)(c)).square().mean();
    if (var > 0.0) (*scale)(c) = 1.0 / std::sqrt(var);
  }
}

Matrix Run(const Mlp& mlp, const Matrix& x, Mlp::Cache* cache) {
  return cache != nullptr ? mlp.Forward(x, cache) : mlp.Forward(x);
}

// Per-graph column sums of the stacked rows.
Matrix BlockSums(const Matrix& x, const std::vector<int>& offset) {
  const int b = static_cast<int>(offset.size()) - 1;
  Matrix out(b, x.cols());
  for (int k = 0; k < b; ++k) {
    out.row(k) = x.middleRows(offset[k], offset[k + 1] - offset[k]).colwise().sum();
  }
  return out;
}

// Adds row k of src to every row of block k of dst.
void AddBroadcast(const Matrix& src, const std::vector<int>& offset, Matrix* dst) {
  for (int k = 0; k + 1 < static_cast<int>(offset.size()); ++k) {
    for (int r = offset[k]; r < offset[k + 1]; ++r) dst->row(r) += src.row(k);
  }
}

}  // namespace

EncodedGraph EncodeFeatures(const MilpGraph& g) {
  const auto& omega = g.random_features();
  const int extra = omega.has_value() ? 1 : 0;
  EncodedGraph out;
  out.v = Matrix::Zero(g.m(), kVFeatureWidth + extra);
  for (int i = 0; i < g.m(); ++i) {
    const ConstraintFeature& f = g.v_features()[i];
    out.v(i, 0) = f.rhs;
    out.v(i, 1 + static_cast<int>(f.sense)) = 1.0;
    if (extra) out.v(i, kVFeatureWidth) = omega->v[i];
  }
  out.w = Matrix::Zero(g.n(), kWFeatureWidth + extra);
  for (int j = 0; j < g.n(); ++j) {
    const VariableFeature& f = g.w_features()[j];
    out.w(j, 0) = f.cost;
    if (f.lower.is_finite()) {
      out.w(j, 1) = f.lower.value();
      out.w(j, 2) = 1.0;
    }
    if (f.upper.is_finite()) {
      out.w(j, 3) = f.upper.value();
      out.w(j, 4) = 1.0;
    }
    out.w(j, 5) = f.is_integer ? 1.0 : 0.0;
    if (extra) out.w(j, kWFeatureWidth) = omega->w[j];
  }
  out.edges.assign(g.edges().entries().begin(), g.edges().entries().end());
  return out;
}

GraphBatch MakeBatch(const std::vector<const EncodedGraph*>& graphs) {
  GraphBatch batch;
  batch.num_graphs = static_cast<int>(graphs.size());
  batch.v_offset = {0};
  batch.w_offset = {0};
  for (const EncodedGraph* g : graphs) {
    batch.v_offset.push_back(batch.v_offset.back() + static_cast<int>(g->v.rows()));
    batch.w_offset.push_back(batch.w_offset.back() + static_cast<int>(g->w.rows()));
  }
  const int rows_v = batch.v_offset.back();
  const int rows_w = batch.w_offset.back();
  const int cols_v = graphs.empty() ? kVFeatureWidth : static_cast<int>(graphs[0]->v.cols());
  const int cols_w = graphs.empty() ? kWFeatureWidth : static_cast<int>(graphs[0]->w.cols());
  batch.v.resize(rows_v, cols_v);
  batch.w.resize(rows_w, cols_w);
  std::vector<Eigen::Triplet<double>> triplets;
  for (size_t k = 0; k < graphs.size(); ++k) {
    const EncodedGraph& g = *graphs[k];
    batch.v.middleRows(batch.v_offset[k], g.v.rows()) = g.v;
    batch.w.middleRows(batch.w_offset[k], g.w.rows()) = g.w;
    for (const MatrixEntry& e : g.edges) {
      triplets.emplace_back(batch.v_offset[k] + e.row, batch.w_offset[k] + e.col, e.value);
    }
  }
  batch.e.resize(rows_v, rows_w);
  batch.e.setFromTriplets(triplets.begin(), triplets.end());
  batch.et = batch.e.transpose();
  return batch;
}

RandomFeatures SampleRandomFeatures(int m, int n, uint64_t seed) {
  Rng rng(seed);
  RandomFeatures omega;
  for (int i = 0; i < m; ++i) omega.v.push_back(rng.Uniform01());
  for (int j = 0; j < n; ++j) omega.w.push_back(rng.Uniform01());
  return omega;
}

absl::StatusOr<MilpGraph> AttachRandomFeatures(const MilpGraph& g,
                                               const RandomFeatures& omega) {
  if (static_cast<int>(omega.v.size()) != g.m() ||
      static_cast<int>(omega.w.size()) != g.n()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "random features sized %d x %d for a %d x %d graph", omega.v.size(),
        omega.w.size(), g.m(), g.n()));
  }
  for (const auto* side : {&omega.v, &omega.w}) {
    for (double x : *side) {
      if (!(x >= 0.0 && x <= 1.0)) {
        return absl::InvalidArgumentError(
            absl::StrFormat("random feature %g outside [0, 1]", x));
      }
    }
  }
  return MilpGraph(g.edges(), g.v_features(), g.w_features(), omega);
}

bool InDegenerateSet(const RandomFeatures& omega) {
  return std::set<double>(omega.v.begin(), omega.v.end()).size() != omega.v.size() ||
         std::set<double>(omega.w.begin(), omega.w.end()).size() != omega.w.size();
}

absl::StatusOr<GnnModel> GnnModel::Create(const GnnConfig& config, uint64_t seed) {
  if (config.depth < 0 || config.width <= 0) {
    return absl::InvalidArgumentError("depth must be >= 0 and width > 0");
  }
  GnnModel model(config);
  const int d = config.width;
  model.p0_ = Mlp(model.v_input_width(), d, d);
  model.q0_ = Mlp(model.w_input_width(), d, d);
  for (int l = 0; l < config.depth; ++l) {
    model.f_.emplace_back(d, d, d);
    model.g_.emplace_back(d, d, d);
    model.p_.emplace_back(2 * d, d, d);
    model.q_.emplace_back(2 * d, d, d);
  }
  model.readout_ = config.readout == Readout::kGraph ? Mlp(2 * d, d, 1) : Mlp(3 * d, d, 1);

  Rng rng(seed);
  model.p0_.Initialize(rng, config.init);
  model.q0_.Initialize(rng, config.init);
  for (int l = 0; l < config.depth; ++l) {
    model.f_[l].Initialize(rng, config.init);
    model.g_[l].Initialize(rng, config.init);
    model.p_[l].Initialize(rng, config.init);
    model.q_[l].Initialize(rng, config.init);
  }
  model.readout_.Initialize(rng, config.init);
  return model;
}

int64_t GnnModel::NumParameters() {
  int64_t total = 0;
  ForEachParameter([&](const std::string&, double*, double*, Eigen::Index size,
                       Eigen::Index, Eigen::Index) { total += size; });
  return total;
}

absl::Status GnnModel::Validate(const GraphBatch& batch) const {
  if (batch.v.cols() != v_input_width() || batch.w.cols() != w_input_width()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "feature widths %d/%d do not match the model's %d/%d (random feature %s)",
        batch.v.cols(), batch.w.cols(), v_input_width(), w_input_width(),
        config_.random_feature ? "expected" : "not expected"));
  }
  return absl::OkStatus();
}

InputNormalization FitInputNormalization(const std::vector<const EncodedGraph*>& graphs) {
  InputNormalization norm;
  if (graphs.empty()) return norm;
  const GraphBatch batch = MakeBatch(graphs);
  FitColumns(batch.v, &norm.v_shift, &norm.v_scale);
  FitColumns(batch.w, &norm.w_shift, &norm.w_scale);
  return norm;
}

absl::Status GnnModel::SetInputNormalization(InputNormalization norm) {
  if (!norm.empty() &&
      (norm.v_shift.size() != v_input_width() || norm.v_scale.size() != v_input_width() ||
       norm.w_shift.size() != w_input_width() || norm.w_scale.size() != w_input_width())) {
    return absl::InvalidArgumentError("input normalization width differs from the model");
  }
  norm_ = std::move(norm);
  return absl::OkStatus();
}

Matrix GnnModel::Forward(const GraphBatch& batch, Tape* tape) const {
  const int depth = config_.depth;
  if (tape != nullptr) {
    tape->f.assign(depth, {});
    tape->g.assign(depth, {});
    tape->p.assign(depth, {});
    tape->q.assign(depth, {});
  }
  Matrix s = Run(p0_, Normalize(batch.v, norm_.v_shift, norm_.v_scale),
                 tape ? &tape->p0 : nullptr);
  Matrix t = Run(q0_, Normalize(batch.w, norm_.w_shift, norm_.w_scale),
                 tape ? &tape->q0 : nullptr);
  for (int l = 0; l < depth; ++l) {
    const Matrix agg_v = batch.e * Run(f_[l], t, tape ? &tape->f[l] : nullptr);
    const Matrix agg_w = batch.et * Run(g_[l], s, tape ? &tape->g[l] : nullptr);
    Matrix s_next = Run(p_[l], HCat(s, agg_v), tape ? &tape->p[l] : nullptr);
    Matrix t_next = Run(q_[l], HCat(t, agg_w), tape ? &tape->q[l] : nullptr);
    s = std::move(s_next);
    t = std::move(t_next);
  }
  const Matrix s_bar = BlockSums(s, batch.v_offset);
  const Matrix t_bar = BlockSums(t, batch.w_offset);
  Mlp::Cache* rc = tape ? &tape->readout : nullptr;
  if (config_.readout == Readout::kGraph) return Run(readout_, HCat(s_bar, t_bar), rc);

  const int d = config_.width;
  Matrix x(t.rows(), 3 * d);
  for (int k = 0; k < batch.num_graphs; ++k) {
    for (int r = batch.w_offset[k]; r < batch.w_offset[k + 1]; ++r) {
      x.row(r) << s_bar.row(k), t_bar.row(k), t.row(r);
    }
  }
  return Run(readout_, x, rc);
}

absl::StatusOr<double> GnnModel::ForwardGraph(const MilpGraph& g) const {
  if (config_.readout != Readout::kGraph) {
    return absl::FailedPreconditionError("model has a node-level readout");
  }
  const EncodedGraph enc = EncodeFeatures(g);
  const GraphBatch batch = MakeBatch({&enc});
  if (absl::Status s = Validate(batch); !s.ok()) return s;
  return Forward(batch, nullptr)(0, 0);
}

absl::StatusOr<std::vector<double>> GnnModel::ForwardNodes(const MilpGraph& g) const {
  if (config_.readout != Readout::kNode) {
    return absl::FailedPreconditionError("model has a graph-level readout");
  }
  const EncodedGraph enc = EncodeFeatures(g);
  const GraphBatch batch = MakeBatch({&enc});
  if (absl::Status s = Validate(batch); !s.ok()) return s;
  const Matrix y = Forward(batch, nullptr);
  return std::vector<double>(y.data(), y.data() + y.size());
}

void GnnModel::ZeroGrad() {
  ForEachParameter([](const std::string&, double*, double* grads, Eigen::Index size,
                      Eigen::Index, Eigen::Index) {
    std::fill(grads, grads + size, 0.0);
  });
}

void GnnModel::Backward(const GraphBatch& batch, const Tape& tape, const Matrix& d_out) {
  const int d = config_.width;
  const Matrix d_in = readout_.Backward(d_out, tape.readout);
  Matrix ds = Matrix::Zero(batch.v.rows(), d);
  Matrix dt = Matrix::Zero(batch.w.rows(), d);
  if (config_.readout == Readout::kGraph) {
    AddBroadcast(d_in.leftCols(d), batch.v_offset, &ds);
    AddBroadcast(d_in.rightCols(d), batch.w_offset, &dt);
  } else {
    AddBroadcast(BlockSums(d_in.leftCols(d), batch.w_offset), batch.v_offset, &ds);
    AddBroadcast(BlockSums(d_in.middleCols(d, d), batch.w_offset), batch.w_offset, &dt);
    dt += d_in.rightCols(d);
  }
  for (int l = config_.depth - 1; l >= 0; --l) {
    const Matrix dp = p_[l].Backward(ds, tape.p[l]);
    const Matrix dq = q_[l].Backward(dt, tape.q[l]);
    Matrix ds_prev = dp.leftCols(d);
    Matrix dt_prev = dq.leftCols(d);
    const Matrix df = batch.et * dp.rightCols(d);
    dt_prev += f_[l].Backward(df, tape.f[l]);
    const Matrix dg = batch.e * dq.rightCols(d);
    ds_prev += g_[l].Backward(dg, tape.g[l]);
    ds = std::move(ds_prev);
    dt = std::move(dt_prev);
  }
  p0_.Backward(ds, tape.p0);
  q0_.Backward(dt, tape.q0);
}

void GnnModel::ForEachParameter(const Mlp::Visitor& visit) {
  auto prefixed = [&](const std::string& prefix) {
    return [&visit, prefix](const std::string& name, double* v, double* g,
                            Eigen::Index size, Eigen::Index rows, Eigen::Index cols) {
      visit(prefix + "." + name, v, g, size, rows, cols);
    };
  };
  p0_.ForEachParameter(prefixed("p0"));
  q0_.ForEachParameter(prefixed("q0"));
  for (int l = 0; l < config_.depth; ++l) {
    const std::string k = std::to_string(l + 1);
    f_[l].ForEachParameter(prefixed("f" + k));
    g_[l].ForEachParameter(prefixed("g" + k));
    p_[l].ForEachParameter(prefixed("p" + k));
    q_[l].ForEachParameter(prefixed("q" + k));
  }
  readout_.ForEachParameter(prefixed("readout"));
}

absl::StatusOr<double> SquaredErrorLoss(const GraphBatch& batch, Readout readout,
                                        const Matrix& output, const Matrix& target,
                                        Matrix* d_output) {
  if (output.rows() != target.rows() || output.cols() != target.cols()) {
    return absl::InvalidArgumentError("output and target shapes differ");
  }
  const Matrix diff = output - target;
  double loss = 0.0;
  if (readout == Readout::kGraph) {
    loss = diff.squaredNorm();
    *d_output = 2.0 * diff;
  } else {
    d_output->resize(diff.rows(), diff.cols());
    for (int k = 0; k < batch.num_graphs; ++k) {
      const int lo = batch.w_offset[k];
      const int cnt = batch.w_offset[k + 1] - lo;
      loss += diff.middleRows(lo, cnt).squaredNorm() / cnt;
      d_output->middleRows(lo, cnt) = (2.0 / cnt) * diff.middleRows(lo, cnt);
    }
  }
  if (!std::isfinite(loss)) return absl::InternalError("non-finite loss");
  return loss;
}

}  // namespace milpgnn
