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

// Three-layer perceptron in -> d -> d -> out with ReLU on both hidden layers
// and a linear output, applied row-wise to a batch matrix.

#ifndef MILPGNN_MLP_H_
#define MILPGNN_MLP_H_

#include <functional>
#include <string>
#include <string_view>

#include "Eigen/Dense"
#include "absl/status/statusor.h"
#include "milpgnn/rng.h"

namespace milpgnn {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class InitScheme {
  // Weights uniform in [-sqrt(6/(in+out)), +sqrt(6/(in+out))].
  kGlorotUniform,
  // Weights uniform in [-sqrt(1/in), +sqrt(1/in)].
  kFanInUniform,
};

// "glorot_uniform" and "fan_in_uniform".
std::string_view InitSchemeToString(InitScheme scheme);
absl::StatusOr<InitScheme> InitSchemeFromString(std::string_view text);

struct Linear {
  Matrix w;  // out x in
  Vector b;  // out
  Matrix grad_w;
  Vector grad_b;

  Linear() = default;
  Linear(int in, int out);

  // Biases are uniform in [-sqrt(1/in), sqrt(1/in)] under either scheme.
  void Initialize(Rng& rng, InitScheme scheme);

  Matrix Forward(const Matrix& x) const;
  // Accumulates parameter gradients; returns the gradient w.r.t. x.
  Matrix Backward(const Matrix& x, const Matrix& dy);
};

class Mlp {
 public:
  struct Cache {
    Matrix x, z1, h1, z2, h2;
  };

  Mlp() = default;
  Mlp(int in, int hidden, int out);

  int in_dim() const { return static_cast<int>(l1_.w.cols()); }
  int out_dim() const { return static_cast<int>(l3_.w.rows()); }

  void Initialize(Rng& rng, InitScheme scheme);
  Matrix Forward(const Matrix& x, Cache* cache) const;
  Matrix Forward(const Matrix& x) const;
  Matrix Backward(const Matrix& dy, const Cache& cache);

  // Visits (suffix, values, gradient) for every tensor: l1.w, l1.b, ...
  using Visitor = std::function<void(const std::string&, double* values,
                                     double* grads, Eigen::Index size,
                                     Eigen::Index rows, Eigen::Index cols)>;
  void ForEachParameter(const Visitor& visit);

  Linear& layer(int k) { return k == 0 ? l1_ : (k == 1 ? l2_ : l3_); }

 private:
  Linear l1_, l2_, l3_;
};

}  // namespace milpgnn

#endif  // MILPGNN_MLP_H_
