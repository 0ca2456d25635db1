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

#include "milpgnn/canonical_order.h"

#include <algorithm>
#include <numeric>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace milpgnn {
namespace {

struct RefinedKey {
  int rank;
  std::vector<std::pair<double, int>> neighbors;  // sorted ascending

  friend std::partial_ordering operator<=>(const RefinedKey&,
                                           const RefinedKey&) = default;
  friend bool operator==(const RefinedKey&, const RefinedKey&) = default;
};

// Compresses keys to dense ranks 0..k-1 preserving their order. Returns k.
template <typename Key>
int DenseRanks(const std::vector<Key>& keys, std::vector<int>* ranks) {
  std::vector<int> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return keys[a] < keys[b]; });
  ranks->assign(keys.size(), 0);
  int next = -1;
  for (size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || keys[order[k - 1]] < keys[order[k]]) ++next;
    (*ranks)[order[k]] = next;
  }
  return next + 1;
}

int CountDistinct(const std::vector<int>& ranks) {
  return ranks.empty() ? 0 : *std::max_element(ranks.begin(), ranks.end()) + 1;
}

}  // namespace

ConstraintOrderKey InitialOrderKeyV(const ConstraintFeature& f) {
  return {f.rhs, static_cast<int>(f.sense) - 1, std::nullopt};
}

VariableOrderKey InitialOrderKeyW(const VariableFeature& f) {
  return {f.cost, f.lower, f.upper, f.is_integer ? 1 : 0, std::nullopt};
}

absl::StatusOr<CanonicalOrder> SortGraph(const MilpGraph& g) {
  const int m = g.m();
  const int n = g.n();
  const auto& omega = g.random_features();

  std::vector<ConstraintOrderKey> v_keys;
  for (int i = 0; i < m; ++i) {
    v_keys.push_back(InitialOrderKeyV(g.v_features()[i]));
    if (omega.has_value()) v_keys.back().random = omega->v[i];
  }
  std::vector<VariableOrderKey> w_keys;
  for (int j = 0; j < n; ++j) {
    w_keys.push_back(InitialOrderKeyW(g.w_features()[j]));
    if (omega.has_value()) w_keys.back().random = omega->w[j];
  }

  CanonicalOrder order;
  int v_count = DenseRanks(v_keys, &order.v_rank);
  int w_count = DenseRanks(w_keys, &order.w_rank);

  std::vector<std::vector<std::pair<int, double>>> of_v(m), of_w(n);
  for (const MatrixEntry& e : g.edges().entries()) {
    of_v[e.row].emplace_back(e.col, e.value);
    of_w[e.col].emplace_back(e.row, e.value);
  }
  auto refine = [](const std::vector<std::vector<std::pair<int, double>>>& adj,
                   const std::vector<int>& own,
                   const std::vector<int>& other) {
    std::vector<RefinedKey> keys(own.size());
    for (size_t k = 0; k < own.size(); ++k) {
      keys[k].rank = own[k];
      for (const auto& [nbr, weight] : adj[k]) {
        keys[k].neighbors.emplace_back(weight, other[nbr]);
      }
      std::sort(keys[k].neighbors.begin(), keys[k].neighbors.end());
    }
    return keys;
  };

  while (order.rounds < m + n) {
    const auto new_v = refine(of_v, order.v_rank, order.w_rank);
    const auto new_w = refine(of_w, order.w_rank, order.v_rank);
    const int new_v_count = DenseRanks(new_v, &order.v_rank);
    const int new_w_count = DenseRanks(new_w, &order.w_rank);
    ++order.rounds;
    const bool stable = new_v_count == v_count && new_w_count == w_count;
    v_count = new_v_count;
    w_count = new_w_count;
    if (stable) break;
  }

  if (CountDistinct(order.v_rank) != m || CountDistinct(order.w_rank) != n) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "foldable input: %d of %d constraint ranks and %d of %d variable "
        "ranks distinct after refinement",
        CountDistinct(order.v_rank), m, CountDistinct(order.w_rank), n));
  }
  order.sigma_w.assign(n, 0);
  for (int j = 0; j < n; ++j) order.sigma_w[order.w_rank[j]] = j;
  return order;
}

}  // namespace milpgnn
