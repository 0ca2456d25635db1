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

#include "milpgnn/milp_graph.h"

#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace milpgnn {
namespace {

absl::Status CheckBijection(const std::vector<int>& sigma, const char* name) {
  std::vector<bool> seen(sigma.size(), false);
  for (int x : sigma) {
    if (x < 0 || x >= std::ssize(sigma) || seen[x]) {
      return absl::InvalidArgumentError(
          absl::StrFormat("%s is not a bijection", name));
    }
    seen[x] = true;
  }
  return absl::OkStatus();
}

absl::Status CheckDims(int m, int n, const Permutation& p) {
  if (p.m() != m || p.n() != n) {
    return absl::InvalidArgumentError(
        absl::StrFormat("permutation is %dx%d but target is %dx%d", p.m(),
                        p.n(), m, n));
  }
  return absl::OkStatus();
}

template <typename T>
std::vector<T> Scatter(const std::vector<T>& values,
                       const std::vector<int>& sigma) {
  std::vector<T> out(values.size());
  for (size_t k = 0; k < values.size(); ++k) out[sigma[k]] = values[k];
  return out;
}

SparseMatrix PermuteEntries(const SparseMatrix& a, const Permutation& p) {
  std::vector<MatrixEntry> entries;
  entries.reserve(a.entries().size());
  for (const MatrixEntry& e : a.entries()) {
    entries.push_back({p.sigma_v()[e.row], p.sigma_w()[e.col], e.value});
  }
  // Indices stay in range and unique under a bijection.
  return *SparseMatrix::FromTriplets(a.rows(), a.cols(), std::move(entries));
}

}  // namespace

absl::StatusOr<Permutation> Permutation::Create(std::vector<int> sigma_v,
                                                std::vector<int> sigma_w) {
  if (auto s = CheckBijection(sigma_v, "sigma_v"); !s.ok()) return s;
  if (auto s = CheckBijection(sigma_w, "sigma_w"); !s.ok()) return s;
  return Permutation(std::move(sigma_v), std::move(sigma_w));
}

Permutation Permutation::Identity(int m, int n) {
  std::vector<int> v(m), w(n);
  for (int i = 0; i < m; ++i) v[i] = i;
  for (int j = 0; j < n; ++j) w[j] = j;
  return Permutation(std::move(v), std::move(w));
}

Permutation Permutation::Inverse() const {
  std::vector<int> v(sigma_v_.size()), w(sigma_w_.size());
  for (size_t i = 0; i < v.size(); ++i) v[sigma_v_[i]] = static_cast<int>(i);
  for (size_t j = 0; j < w.size(); ++j) w[sigma_w_[j]] = static_cast<int>(j);
  return Permutation(std::move(v), std::move(w));
}

MilpGraph::MilpGraph(SparseMatrix edges,
                     std::vector<ConstraintFeature> v_features,
                     std::vector<VariableFeature> w_features,
                     std::optional<RandomFeatures> random_features)
    : edges_(std::move(edges)),
      v_features_(std::move(v_features)),
      w_features_(std::move(w_features)),
      random_features_(std::move(random_features)) {}

MilpGraph EncodeGraph(const MilpInstance& inst) {
  std::vector<ConstraintFeature> v(inst.num_constraints());
  for (int i = 0; i < inst.num_constraints(); ++i) {
    v[i] = {inst.b()[i], inst.senses()[i]};
  }
  std::vector<VariableFeature> w(inst.num_variables());
  for (int j = 0; j < inst.num_variables(); ++j) {
    w[j] = {inst.c()[j], inst.lower()[j], inst.upper()[j],
            inst.is_integer(j)};
  }
  return MilpGraph(inst.a(), std::move(v), std::move(w));
}

absl::StatusOr<MilpInstance> DecodeGraph(const MilpGraph& g) {
  std::vector<double> b(g.m()), c(g.n());
  std::vector<Sense> senses(g.m());
  std::vector<Bound> lower, upper;
  std::vector<bool> mask(g.n());
  for (int i = 0; i < g.m(); ++i) {
    b[i] = g.v_features()[i].rhs;
    senses[i] = g.v_features()[i].sense;
  }
  lower.reserve(g.n());
  upper.reserve(g.n());
  for (int j = 0; j < g.n(); ++j) {
    const VariableFeature& f = g.w_features()[j];
    c[j] = f.cost;
    lower.push_back(f.lower);
    upper.push_back(f.upper);
    mask[j] = f.is_integer;
  }
  return MilpInstance::Create(g.edges(), std::move(b), std::move(senses),
                              std::move(c), std::move(lower), std::move(upper),
                              std::move(mask));
}

absl::StatusOr<MilpGraph> ApplyPermutation(const MilpGraph& g,
                                           const Permutation& p) {
  if (auto s = CheckDims(g.m(), g.n(), p); !s.ok()) return s;
  std::optional<RandomFeatures> omega;
  if (g.random_features().has_value()) {
    omega = RandomFeatures{Scatter(g.random_features()->v, p.sigma_v()),
                           Scatter(g.random_features()->w, p.sigma_w())};
  }
  return MilpGraph(PermuteEntries(g.edges(), p),
                   Scatter(g.v_features(), p.sigma_v()),
                   Scatter(g.w_features(), p.sigma_w()), std::move(omega));
}

absl::StatusOr<MilpInstance> PermuteInstance(const MilpInstance& inst,
                                             const Permutation& p) {
  if (auto s = CheckDims(inst.num_constraints(), inst.num_variables(), p);
      !s.ok()) {
    return s;
  }
  return MilpInstance::Create(
      PermuteEntries(inst.a(), p), Scatter(inst.b(), p.sigma_v()),
      Scatter(inst.senses(), p.sigma_v()), Scatter(inst.c(), p.sigma_w()),
      Scatter(inst.lower(), p.sigma_w()), Scatter(inst.upper(), p.sigma_w()),
      Scatter(inst.integer_mask(), p.sigma_w()));
}

std::vector<double> PermuteVariables(const std::vector<double>& values,
                                     const Permutation& p) {
  return Scatter(values, p.sigma_w());
}

}  // namespace milpgnn
