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

#include "milpgnn/mlp.h"

#include <cmath>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace milpgnn {

Linear::Linear(int in, int out)
    : w(Matrix::Zero(out, in)),
      b(Vector::Zero(out)),
      grad_w(Matrix::Zero(out, in)),
      grad_b(Vector::Zero(out)) {}

std::string_view InitSchemeToString(InitScheme scheme) {
  return scheme == InitScheme::kGlorotUniform ? "glorot_uniform" : "fan_in_uniform";
}

absl::StatusOr<InitScheme> InitSchemeFromString(std::string_view text) {
  if (text == "glorot_uniform") return InitScheme::kGlorotUniform;
  if (text == "fan_in_uniform") return InitScheme::kFanInUniform;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown init scheme '", std::string(text), "'"));
}

void Linear::Initialize(Rng& rng, InitScheme scheme) {
  const double in = static_cast<double>(w.cols());
  const double out = static_cast<double>(w.rows());
  const double scale = scheme == InitScheme::kGlorotUniform
                           ? std::sqrt(6.0 / (in + out))
                           : std::sqrt(1.0 / in);
  for (Eigen::Index r = 0; r < w.rows(); ++r) {
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      w(r, c) = scale * (2.0 * rng.Uniform01() - 1.0);
    }
  }
  const double bias_scale = std::sqrt(1.0 / in);
  for (Eigen::Index r = 0; r < b.size(); ++r) {
    b(r) = bias_scale * (2.0 * rng.Uniform01() - 1.0);
  }
}

Matrix Linear::Forward(const Matrix& x) const {
  Matrix y = x * w.transpose();
  y.rowwise() += b.transpose();
  return y;
}

Matrix Linear::Backward(const Matrix& x, const Matrix& dy) {
  grad_w.noalias() += dy.transpose() * x;
  grad_b += dy.colwise().sum().transpose();
  return dy * w;
}

Mlp::Mlp(int in, int hidden, int out)
    : l1_(in, hidden), l2_(hidden, hidden), l3_(hidden, out) {}

void Mlp::Initialize(Rng& rng, InitScheme scheme) {
  l1_.Initialize(rng, scheme);
  l2_.Initialize(rng, scheme);
  l3_.Initialize(rng, scheme);
}

Matrix Mlp::Forward(const Matrix& x, Cache* cache) const {
  cache->x = x;
  cache->z1 = l1_.Forward(x);
  cache->h1 = cache->z1.cwiseMax(0.0);
  cache->z2 = l2_.Forward(cache->h1);
  cache->h2 = cache->z2.cwiseMax(0.0);
  return l3_.Forward(cache->h2);
}

Matrix Mlp::Forward(const Matrix& x) const {
  return l3_.Forward(l2_.Forward(l1_.Forward(x).cwiseMax(0.0)).cwiseMax(0.0));
}

Matrix Mlp::Backward(const Matrix& dy, const Cache& cache) {
  Matrix d = l3_.Backward(cache.h2, dy);
  d = d.cwiseProduct((cache.z2.array() > 0.0).cast<double>().matrix());
  d = l2_.Backward(cache.h1, d);
  d = d.cwiseProduct((cache.z1.array() > 0.0).cast<double>().matrix());
  return l1_.Backward(cache.x, d);
}

void Mlp::ForEachParameter(const Visitor& visit) {
  Linear* layers[3] = {&l1_, &l2_, &l3_};
  for (int k = 0; k < 3; ++k) {
    Linear& l = *layers[k];
    const std::string prefix = "l" + std::to_string(k + 1);
    visit(prefix + ".w", l.w.data(), l.grad_w.data(), l.w.size(), l.w.rows(),
          l.w.cols());
    visit(prefix + ".b", l.b.data(), l.grad_b.data(), l.b.size(), l.b.size(), 1);
  }
}

}  // namespace milpgnn
