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

#include "milpgnn/train.h"

#include <chrono>
#include <cmath>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "milpgnn/instance_io.h"
#include "milpgnn/rng.h"

namespace milpgnn {
namespace {

struct PreparedSet {
  std::vector<EncodedGraph> graphs;
};

absl::StatusOr<PreparedSet> Prepare(const std::vector<Sample>& data, Task task) {
  PreparedSet set;
  for (size_t k = 0; k < data.size(); ++k) {
    if (task == Task::kSolu &&
        static_cast<int>(data[k].solution.size()) != data[k].graph.n()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("sample %d: solution length differs from n", k));
    }
    set.graphs.push_back(EncodeFeatures(data[k].graph));
  }
  return set;
}

// Targets laid out like GnnModel::Forward's output.
Matrix Targets(const std::vector<Sample>& data, const std::vector<int>& idx, Task task,
               const TargetScaling& s) {
  if (task != Task::kSolu) {
    Matrix t(idx.size(), 1);
    for (size_t k = 0; k < idx.size(); ++k) {
      t(k, 0) = (data[idx[k]].value - s.mean) / s.stddev;
    }
    return t;
  }
  int rows = 0;
  for (int i : idx) rows += static_cast<int>(data[i].solution.size());
  Matrix t(rows, 1);
  int r = 0;
  for (int i : idx) {
    for (double x : data[i].solution) t(r++, 0) = (x - s.mean) / s.stddev;
  }
  return t;
}

// Sum over graphs of the task error (see the header for the definitions).
double TaskErrorSum(const GraphBatch& batch, Task task, const Matrix& out,
                    const Matrix& target, const TargetScaling& s) {
  double total = 0.0;
  switch (task) {
    case Task::kFeas:
      for (Eigen::Index k = 0; k < out.rows(); ++k) {
        total += ((out(k, 0) > 0.5) != (target(k, 0) > 0.5)) ? 1.0 : 0.0;
      }
      break;
    case Task::kObj:
      for (Eigen::Index k = 0; k < out.rows(); ++k) {
        const double e = (out(k, 0) - target(k, 0)) * s.stddev;
        total += e * e;
      }
      break;
    case Task::kSolu:
      for (int k = 0; k < batch.num_graphs; ++k) {
        const int lo = batch.w_offset[k];
        const int cnt = batch.w_offset[k + 1] - lo;
        const double sq = (out.middleRows(lo, cnt) - target.middleRows(lo, cnt)).squaredNorm();
        total += sq * s.stddev * s.stddev / cnt;
      }
      break;
  }
  return total;
}

GraphBatch BatchOf(const PreparedSet& set, const std::vector<int>& idx) {
  std::vector<const EncodedGraph*> ptrs;
  for (int i : idx) ptrs.push_back(&set.graphs[i]);
  return MakeBatch(ptrs);
}

constexpr int kEvalChunk = 256;

}  // namespace

std::string_view TaskToString(Task task) {
  switch (task) {
    case Task::kFeas:
      return "feas";
    case Task::kObj:
      return "obj";
    case Task::kSolu:
      return "solu";
  }
  return "?";
}

absl::StatusOr<Task> TaskFromString(std::string_view text) {
  for (Task t : {Task::kFeas, Task::kObj, Task::kSolu}) {
    if (text == TaskToString(t)) return t;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown task '", std::string(text), "'"));
}

Readout ReadoutFor(Task task) {
  return task == Task::kSolu ? Readout::kNode : Readout::kGraph;
}

Adam::Adam(GnnModel& model, const AdamConfig& config) : model_(model), config_(config) {
  const int64_t size = model.NumParameters();
  m_.assign(size, 0.0);
  v_.assign(size, 0.0);
}

void Adam::Step(double grad_scale) {
  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  int64_t offset = 0;
  model_.ForEachParameter([&](const std::string&, double* values, double* grads,
                              Eigen::Index size, Eigen::Index, Eigen::Index) {
    for (Eigen::Index k = 0; k < size; ++k) {
      const double g = grads[k] * grad_scale;
      double& m = m_[offset + k];
      double& v = v_[offset + k];
      m = config_.beta1 * m + (1.0 - config_.beta1) * g;
      v = config_.beta2 * v + (1.0 - config_.beta2) * g * g;
      values[k] -= config_.learning_rate * (m / c1) / (std::sqrt(v / c2) + config_.epsilon);
    }
    offset += size;
  });
}

TargetScaling FitScaling(const std::vector<Sample>& train, Task task) {
  TargetScaling s;
  if (task == Task::kFeas) return s;
  std::vector<double> values;
  for (const Sample& x : train) {
    if (task == Task::kObj) {
      values.push_back(x.value);
    } else {
      values.insert(values.end(), x.solution.begin(), x.solution.end());
    }
  }
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  var /= values.size();
  s.stddev = var > 0.0 ? std::sqrt(var) : 1.0;
  return s;
}

absl::StatusOr<TrainResult> Train(GnnModel& model, const std::vector<Sample>& train,
                                  const TrainConfig& config) {
  if (config.epochs < 0 || config.batch_size <= 0) {
    return absl::InvalidArgumentError("epochs must be >= 0 and batch_size > 0");
  }
  if (train.empty()) return absl::InvalidArgumentError("empty training set");
  if (model.config().readout != ReadoutFor(config.task)) {
    return absl::FailedPreconditionError(
        absl::StrCat("task ", std::string(TaskToString(config.task)), " needs a ",
                     config.task == Task::kSolu ? "node" : "graph", "-level readout"));
  }
  auto prepared = Prepare(train, config.task);
  if (!prepared.ok()) return prepared.status();
  if (absl::Status s = model.Validate(BatchOf(*prepared, {0})); !s.ok()) return s;
  if (config.normalize_inputs) {
    std::vector<const EncodedGraph*> all;
    for (const EncodedGraph& g : prepared->graphs) all.push_back(&g);
    if (absl::Status s = model.SetInputNormalization(FitInputNormalization(all)); !s.ok()) {
      return s;
    }
  }

  TrainResult result;
  result.scaling = FitScaling(train, config.task);
  Adam adam(model, config.adam);
  Rng rng(config.seed);
  const int n = static_cast<int>(train.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto start = std::chrono::steady_clock::now();

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    for (int k = n - 1; k > 0; --k) {
      std::swap(order[k], order[rng.UniformInt(k + 1)]);
    }
    double loss_sum = 0.0;
    double error_sum = 0.0;
    for (int lo = 0; lo < n; lo += config.batch_size) {
      const std::vector<int> idx(order.begin() + lo,
                                 order.begin() + std::min(n, lo + config.batch_size));
      const GraphBatch batch = BatchOf(*prepared, idx);
      const Matrix target = Targets(train, idx, config.task, result.scaling);
      GnnModel::Tape tape;
      const Matrix out = model.Forward(batch, &tape);
      Matrix d_out;
      auto loss = SquaredErrorLoss(batch, model.config().readout, out, target, &d_out);
      if (!loss.ok()) {
        return absl::InternalError(
            absl::StrFormat("epoch %d: %s", epoch, loss.status().message()));
      }
      loss_sum += *loss;
      error_sum += TaskErrorSum(batch, config.task, out, target, result.scaling);
      model.ZeroGrad();
      model.Backward(batch, tape, d_out);
      adam.Step(1.0 / static_cast<double>(idx.size()));
    }
    const auto now = std::chrono::steady_clock::now();
    result.log.push_back(
        {epoch, loss_sum / n, error_sum / n,
         std::chrono::duration_cast<std::chrono::milliseconds>(now - start).count()});
    result.epochs_run = epoch;
    if (config.target_error.has_value() && config.eval_every > 0 &&
        epoch % config.eval_every == 0) {
      auto err = Evaluate(model, train, config.task, result.scaling);
      if (!err.ok()) return err.status();
      if (*err <= *config.target_error) break;
    }
  }
  auto err = Evaluate(model, train, config.task, result.scaling);
  if (!err.ok()) return err.status();
  result.train_error = *err;
  return result;
}

absl::StatusOr<double> Evaluate(const GnnModel& model, const std::vector<Sample>& data,
                                Task task, const TargetScaling& scaling) {
  if (data.empty()) return absl::InvalidArgumentError("empty evaluation set");
  auto prepared = Prepare(data, task);
  if (!prepared.ok()) return prepared.status();
  double total = 0.0;
  const int n = static_cast<int>(data.size());
  for (int lo = 0; lo < n; lo += kEvalChunk) {
    std::vector<int> idx(std::min(n, lo + kEvalChunk) - lo);
    std::iota(idx.begin(), idx.end(), lo);
    const GraphBatch batch = BatchOf(*prepared, idx);
    if (absl::Status s = model.Validate(batch); !s.ok()) return s;
    const Matrix out = model.Forward(batch, nullptr);
    total += TaskErrorSum(batch, task, out, Targets(data, idx, task, scaling), scaling);
  }
  return total / n;
}

std::string TrainLogCsv(const std::vector<EpochRecord>& log) {
  std::string out = "epoch,loss,task_error,wall_ms\n";
  for (const EpochRecord& r : log) {
    absl::StrAppend(&out, r.epoch, ",", FormatDouble(r.loss), ",",
                    FormatDouble(r.task_error), ",", r.wall_ms, "\n");
  }
  return out;
}

}  // namespace milpgnn
