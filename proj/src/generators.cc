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

#include "milpgnn/generators.h"

#include <algorithm>
#include <array>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "milpgnn/milp_graph.h"
#include "milpgnn/rng.h"
#include "milpgnn/wl.h"

namespace milpgnn {
namespace {

// Six rows x_a + x_b = 1 over the listed (a, b) pairs.
MilpInstance CycleInstance(int n, const std::array<std::pair<int, int>, 6>& rows,
                           std::vector<double> c, std::vector<Bound> lower,
                           std::vector<Bound> upper,
                           std::vector<bool> integer) {
  std::vector<MatrixEntry> entries;
  for (int i = 0; i < 6; ++i) {
    entries.push_back({i, rows[i].first, 1.0});
    entries.push_back({i, rows[i].second, 1.0});
  }
  auto a = SparseMatrix::FromTriplets(6, n, std::move(entries));
  auto inst = MilpInstance::Create(*std::move(a), std::vector<double>(6, 1.0),
                                   std::vector<Sense>(6, Sense::kEq),
                                   std::move(c), std::move(lower),
                                   std::move(upper), std::move(integer));
  return *std::move(inst);
}

std::array<std::pair<int, int>, 6> SixCycle(const std::vector<int>& j) {
  return {{{j[0], j[1]}, {j[1], j[2]}, {j[2], j[3]},
           {j[3], j[4]}, {j[4], j[5]}, {j[5], j[0]}}};
}

std::array<std::pair<int, int>, 6> TwoTriangles(const std::vector<int>& j) {
  return {{{j[0], j[1]}, {j[1], j[2]}, {j[2], j[0]},
           {j[3], j[4]}, {j[4], j[5]}, {j[5], j[3]}}};
}

std::pair<double, double> SortedPair(Rng& rng, double stddev) {
  double l = rng.Normal(0.0, stddev);
  double u = rng.Normal(0.0, stddev);
  if (l > u) std::swap(l, u);
  return {l, u};
}

}  // namespace

std::string_view VariantToString(Variant v) {
  switch (v) {
    case Variant::kD1:
      return "d1";
    case Variant::kD2:
      return "d2";
    case Variant::kD2Gen:
      return "d2gen";
    case Variant::kCounterexample:
      return "counterexample";
  }
  return "?";
}

absl::StatusOr<Variant> VariantFromString(std::string_view text) {
  for (Variant v : {Variant::kD1, Variant::kD2, Variant::kD2Gen,
                    Variant::kCounterexample}) {
    if (text == VariantToString(v)) return v;
  }
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown variant '%s'", std::string(text)));
}

absl::StatusOr<std::vector<MilpInstance>> GenerateD1(const GenConfig& cfg,
                                                     GenStats* stats) {
  const int m = cfg.m;
  const int n = cfg.n;
  if (m <= 0 || n <= 0 || cfg.count < 0) {
    return absl::InvalidArgumentError("m, n must be positive, count >= 0");
  }
  if (cfg.nnz < 0 || cfg.nnz > m * n) {
    return absl::InvalidArgumentError(
        absl::StrFormat("nnz %d outside [0, m*n = %d]", cfg.nnz, m * n));
  }
  Rng rng(cfg.seed);
  GenStats local;
  std::vector<MilpInstance> out;
  int streak = 0;
  while (static_cast<int>(out.size()) < cfg.count) {
    std::vector<double> c(n);
    std::vector<Bound> lower(n), upper(n);
    std::vector<bool> integer(n);
    for (int j = 0; j < n; ++j) {
      c[j] = rng.Normal(0.0, 0.01);
      const auto [l, u] = SortedPair(rng, 10.0);
      lower[j] = Bound::Finite(l);
      upper[j] = Bound::Finite(u);
      integer[j] = rng.Bernoulli(0.5);
    }
    std::vector<double> b(m);
    std::vector<Sense> senses(m);
    for (int i = 0; i < m; ++i) {
      senses[i] = static_cast<Sense>(rng.UniformInt(3));
      b[i] = rng.Normal(0.0, 1.0);
    }
    std::vector<MatrixEntry> entries;
    for (int pos : rng.SampleDistinct(cfg.nnz, m * n)) {
      entries.push_back({pos / n, pos % n, rng.Normal(0.0, 1.0)});
    }
    auto a = SparseMatrix::FromTriplets(m, n, std::move(entries));
    if (!a.ok()) return a.status();
    auto inst = MilpInstance::Create(*std::move(a), std::move(b),
                                     std::move(senses), std::move(c),
                                     std::move(lower), std::move(upper),
                                     std::move(integer));
    if (!inst.ok()) return inst.status();
    if (IsFoldable(EncodeGraph(*inst))) {
      ++local.rejected;
      if (++streak >= cfg.rejection_limit) {
        return absl::ResourceExhaustedError(absl::StrFormat(
            "rejection limit: %d consecutive foldable draws", streak));
      }
      continue;
    }
    streak = 0;
    ++local.accepted;
    out.push_back(*std::move(inst));
  }
  if (stats != nullptr) *stats = local;
  return out;
}

absl::StatusOr<std::vector<MilpInstance>> GenerateD2(const GenConfig& cfg) {
  const int n = cfg.n;
  if (n < 6) return absl::InvalidArgumentError("d2 needs n >= 6");
  if (cfg.count < 0 || cfg.count % 2 != 0) {
    return absl::InvalidArgumentError("d2 count must be even");
  }
  const double cost = cfg.variant == Variant::kD2Gen ? 0.01 : 0.0;
  Rng rng(cfg.seed);
  std::vector<MilpInstance> out;
  for (int k = 0; k < cfg.count / 2; ++k) {
    const std::vector<int> j = rng.SampleDistinct(6, n);
    std::vector<Bound> lower(n), upper(n);
    std::vector<bool> integer(n, false);
    std::vector<bool> in_cycle(n, false);
    for (int v : j) in_cycle[v] = true;
    for (int v = 0; v < n; ++v) {
      if (in_cycle[v]) {
        lower[v] = Bound::Finite(0.0);
        upper[v] = Bound::Finite(1.0);
        integer[v] = true;
      } else {
        const auto [l, u] = SortedPair(rng, 10.0);
        lower[v] = Bound::Finite(l);
        upper[v] = Bound::Finite(u);
      }
    }
    const std::vector<double> c(n, cost);
    out.push_back(CycleInstance(n, SixCycle(j), c, lower, upper, integer));
    out.push_back(CycleInstance(n, TwoTriangles(j), c, lower, upper, integer));
  }
  return out;
}

absl::StatusOr<std::vector<MilpInstance>> Generate(const GenConfig& cfg,
                                                   GenStats* stats) {
  switch (cfg.variant) {
    case Variant::kD1:
      return GenerateD1(cfg, stats);
    case Variant::kD2:
    case Variant::kD2Gen:
      return GenerateD2(cfg);
    case Variant::kCounterexample: {
      auto [first, second] = CycleCounterexamplePair();
      return std::vector<MilpInstance>{std::move(first), std::move(second)};
    }
  }
  return absl::InvalidArgumentError("unknown variant");
}

std::pair<MilpInstance, MilpInstance> CycleCounterexamplePair() {
  const std::vector<int> j = {0, 1, 2, 3, 4, 5};
  const std::vector<double> c(6, 1.0);
  const std::vector<Bound> lower(6, Bound::Finite(0.0));
  const std::vector<Bound> upper(6, Bound::Finite(1.0));
  const std::vector<bool> integer(6, true);
  return {CycleInstance(6, SixCycle(j), c, lower, upper, integer),
          CycleInstance(6, TwoTriangles(j), c, lower, upper, integer)};
}

MilpInstance TwoVariableExample() {
  auto a = SparseMatrix::FromTriplets(
      2, 2, {{0, 0, 1.0}, {0, 1, 3.0}, {1, 0, 1.0}, {1, 1, 1.0}});
  auto inst = MilpInstance::Create(
      *std::move(a), {1.0, 1.0}, {Sense::kGe, Sense::kGe}, {1.0, 1.0},
      {Bound::NegInf(), Bound::NegInf()},
      {Bound::Finite(3.0), Bound::Finite(5.0)}, {false, true});
  return *std::move(inst);
}

}  // namespace milpgnn
