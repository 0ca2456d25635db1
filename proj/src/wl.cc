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

#include "milpgnn/wl.h"

#include <algorithm>
#include <cmath>
#include <compare>
#include <map>
#include <span>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace milpgnn {
namespace {

using FeatureKey = std::vector<double>;
using Neighbor = std::pair<double, int>;  // (edge weight, neighbor color)

struct Signature {
  int color;
  std::vector<Neighbor> neighbors;  // sorted

  friend auto operator<=>(const Signature&, const Signature&) = default;
};

double Bucket(double x, double tol) { return tol > 0 ? std::floor(x / tol) : x; }

FeatureKey ConstraintKey(const MilpGraph& g, int i, double tol) {
  const ConstraintFeature& f = g.v_features()[i];
  FeatureKey key = {Bucket(f.rhs, tol), static_cast<double>(f.sense)};
  if (g.random_features().has_value()) {
    key.push_back(Bucket(g.random_features()->v[i], tol));
  }
  return key;
}

FeatureKey VariableKey(const MilpGraph& g, int j, double tol) {
  const VariableFeature& f = g.w_features()[j];
  auto bound = [tol](const Bound& b) {
    return b.is_finite() ? Bucket(b.value(), tol) : 0.0;
  };
  FeatureKey key = {Bucket(f.cost, tol),
                    static_cast<double>(f.lower.kind_code()),
                    bound(f.lower),
                    static_cast<double>(f.upper.kind_code()),
                    bound(f.upper),
                    f.is_integer ? 1.0 : 0.0};
  if (g.random_features().has_value()) {
    key.push_back(Bucket(g.random_features()->w[j], tol));
  }
  return key;
}

// Per-graph adjacency lists: for each vertex, (neighbor index, weight).
struct Adjacency {
  std::vector<std::vector<std::pair<int, double>>> of_v;
  std::vector<std::vector<std::pair<int, double>>> of_w;
};

Adjacency BuildAdjacency(const MilpGraph& g, double tol) {
  Adjacency adj;
  adj.of_v.resize(g.m());
  adj.of_w.resize(g.n());
  for (const MatrixEntry& e : g.edges().entries()) {
    const double w = Bucket(e.value, tol);
    adj.of_v[e.row].emplace_back(e.col, w);
    adj.of_w[e.col].emplace_back(e.row, w);
  }
  return adj;
}

// Interns keys of every graph into one shared table and returns dense ids in
// key order.
template <typename Key>
std::vector<std::vector<int>> Intern(
    const std::vector<std::vector<Key>>& keys_per_graph, int* distinct) {
  std::map<Key, int> table;
  for (const auto& keys : keys_per_graph) {
    for (const Key& k : keys) table.emplace(k, 0);
  }
  int next = 0;
  for (auto& [key, id] : table) id = next++;
  std::vector<std::vector<int>> ids(keys_per_graph.size());
  for (size_t g = 0; g < keys_per_graph.size(); ++g) {
    ids[g].reserve(keys_per_graph[g].size());
    for (const Key& k : keys_per_graph[g]) ids[g].push_back(table.at(k));
  }
  *distinct = next;
  return ids;
}

std::vector<std::vector<int>> Blocks(const std::vector<int>& colors) {
  std::map<int, std::vector<int>> by_color;
  for (size_t k = 0; k < colors.size(); ++k) {
    by_color[colors[k]].push_back(static_cast<int>(k));
  }
  std::vector<std::vector<int>> blocks;
  blocks.reserve(by_color.size());
  for (auto& [color, members] : by_color) blocks.push_back(std::move(members));
  return blocks;
}

std::vector<Signature> Signatures(
    const std::vector<std::vector<std::pair<int, double>>>& adjacency,
    const std::vector<int>& own, const std::vector<int>& other) {
  std::vector<Signature> sigs(own.size());
  for (size_t k = 0; k < own.size(); ++k) {
    sigs[k].color = own[k];
    sigs[k].neighbors.reserve(adjacency[k].size());
    for (const auto& [nbr, weight] : adjacency[k]) {
      sigs[k].neighbors.emplace_back(weight, other[nbr]);
    }
    std::sort(sigs[k].neighbors.begin(), sigs[k].neighbors.end());
  }
  return sigs;
}

std::vector<ColoringResult> RefineJoint(std::span<const MilpGraph* const> graphs,
                                        const WlOptions& options) {
  const size_t count = graphs.size();
  const double tol = options.fold_tolerance;
  int max_rounds = options.max_rounds;
  if (max_rounds <= 0) {
    max_rounds = 0;
    for (const MilpGraph* g : graphs) max_rounds += g->m() + g->n();
  }

  std::vector<Adjacency> adj;
  std::vector<std::vector<FeatureKey>> v_keys(count), w_keys(count);
  for (size_t g = 0; g < count; ++g) {
    adj.push_back(BuildAdjacency(*graphs[g], tol));
    for (int i = 0; i < graphs[g]->m(); ++i) {
      v_keys[g].push_back(ConstraintKey(*graphs[g], i, tol));
    }
    for (int j = 0; j < graphs[g]->n(); ++j) {
      w_keys[g].push_back(VariableKey(*graphs[g], j, tol));
    }
  }

  int v_distinct = 0;
  int w_distinct = 0;
  std::vector<std::vector<int>> v_colors = Intern(v_keys, &v_distinct);
  std::vector<std::vector<int>> w_colors = Intern(w_keys, &w_distinct);

  std::vector<ColoringResult> results(count);
  for (size_t g = 0; g < count; ++g) {
    results[g].history.push_back({v_colors[g], w_colors[g]});
  }

  int rounds = 0;
  while (rounds < max_rounds) {
    std::vector<std::vector<Signature>> v_sigs(count), w_sigs(count);
    for (size_t g = 0; g < count; ++g) {
      v_sigs[g] = Signatures(adj[g].of_v, v_colors[g], w_colors[g]);
      w_sigs[g] = Signatures(adj[g].of_w, w_colors[g], v_colors[g]);
    }
    int new_v_distinct = 0;
    int new_w_distinct = 0;
    v_colors = Intern(v_sigs, &new_v_distinct);
    w_colors = Intern(w_sigs, &new_w_distinct);
    ++rounds;
    for (size_t g = 0; g < count; ++g) {
      results[g].history.push_back({v_colors[g], w_colors[g]});
    }
    // Each signature embeds the old color, so the new partition refines the
    // old one and an unchanged class count means an unchanged partition.
    const bool stable =
        new_v_distinct == v_distinct && new_w_distinct == w_distinct;
    v_distinct = new_v_distinct;
    w_distinct = new_w_distinct;
    if (stable) break;
  }

  for (size_t g = 0; g < count; ++g) {
    ColoringResult& r = results[g];
    r.rounds = rounds;
    r.v_colors = v_colors[g];
    r.w_colors = w_colors[g];
    r.v_partition = Blocks(r.v_colors);
    r.w_partition = Blocks(r.w_colors);
    r.is_discrete = std::ssize(r.v_partition) == graphs[g]->m() &&
                    std::ssize(r.w_partition) == graphs[g]->n();
  }
  return results;
}

absl::Status CheckSameShape(const MilpGraph& g1, const MilpGraph& g2) {
  if (g1.m() != g2.m() || g1.n() != g2.n()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "graph shapes differ: %dx%d vs %dx%d", g1.m(), g1.n(), g2.m(), g2.n()));
  }
  if (g1.random_features().has_value() != g2.random_features().has_value()) {
    return absl::InvalidArgumentError(
        "only one of the graphs carries random features");
  }
  return absl::OkStatus();
}

std::vector<int> Sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Sum of `values` in ascending order, so equal multisets give bit-equal sums.
double CanonicalSum(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  double s = 0.0;
  for (double x : values) s += x;
  return s;
}

absl::StatusOr<std::vector<int>> BlockIndex(
    const std::vector<std::vector<int>>& partition, int size, const char* name) {
  std::vector<int> block(size, -1);
  for (size_t p = 0; p < partition.size(); ++p) {
    for (int k : partition[p]) {
      if (k < 0 || k >= size || block[k] != -1) {
        return absl::InvalidArgumentError(
            absl::StrFormat("%s is not a partition of 0..%d", name, size - 1));
      }
      block[k] = static_cast<int>(p);
    }
  }
  for (int k = 0; k < size; ++k) {
    if (block[k] == -1) {
      return absl::InvalidArgumentError(
          absl::StrFormat("%s does not cover index %d", name, k));
    }
  }
  return block;
}

}  // namespace

ColoringResult RefineColors(const MilpGraph& g, const WlOptions& options) {
  const MilpGraph* graphs[] = {&g};
  return std::move(RefineJoint(graphs, options)[0]);
}

absl::StatusOr<bool> GraphsEquivalent(const MilpGraph& g1, const MilpGraph& g2,
                                      const WlOptions& options) {
  if (auto s = CheckSameShape(g1, g2); !s.ok()) return s;
  const MilpGraph* graphs[] = {&g1, &g2};
  const auto r = RefineJoint(graphs, options);
  return Sorted(r[0].v_colors) == Sorted(r[1].v_colors) &&
         Sorted(r[0].w_colors) == Sorted(r[1].w_colors);
}

absl::StatusOr<bool> GraphsWEquivalent(const MilpGraph& g1,
                                       const MilpGraph& g2,
                                       const WlOptions& options) {
  if (auto s = CheckSameShape(g1, g2); !s.ok()) return s;
  const MilpGraph* graphs[] = {&g1, &g2};
  const auto r = RefineJoint(graphs, options);
  return Sorted(r[0].v_colors) == Sorted(r[1].v_colors) &&
         r[0].w_colors == r[1].w_colors;
}

bool IsFoldable(const MilpGraph& g, const WlOptions& options) {
  return !RefineColors(g, options).is_discrete;
}

absl::StatusOr<bool> CheckFoldPartition(
    const MilpInstance& inst, const std::vector<std::vector<int>>& v_partition,
    const std::vector<std::vector<int>>& w_partition) {
  const int m = inst.num_constraints();
  const int n = inst.num_variables();
  auto v_block = BlockIndex(v_partition, m, "constraint partition");
  if (!v_block.ok()) return v_block.status();
  auto w_block = BlockIndex(w_partition, n, "variable partition");
  if (!w_block.ok()) return w_block.status();

  const MilpGraph g = EncodeGraph(inst);
  for (const auto& block : v_partition) {
    for (int i : block) {
      if (!(g.v_features()[i] == g.v_features()[block.front()])) return false;
    }
  }
  for (const auto& block : w_partition) {
    for (int j : block) {
      if (!(g.w_features()[j] == g.w_features()[block.front()])) return false;
    }
  }

  const int s = static_cast<int>(v_partition.size());
  const int t = static_cast<int>(w_partition.size());
  // row_terms[i][q]: entries A_ij with j in J_q; col_terms[j][p] likewise.
  std::vector<std::vector<std::vector<double>>> row_terms(
      m, std::vector<std::vector<double>>(t));
  std::vector<std::vector<std::vector<double>>> col_terms(
      n, std::vector<std::vector<double>>(s));
  for (const MatrixEntry& e : inst.a().entries()) {
    row_terms[e.row][(*w_block)[e.col]].push_back(e.value);
    col_terms[e.col][(*v_block)[e.row]].push_back(e.value);
  }

  for (const auto& block : v_partition) {
    for (int q = 0; q < t; ++q) {
      const double ref = CanonicalSum(row_terms[block.front()][q]);
      for (int i : block) {
        if (CanonicalSum(row_terms[i][q]) != ref) return false;
      }
    }
  }
  for (const auto& block : w_partition) {
    for (int p = 0; p < s; ++p) {
      const double ref = CanonicalSum(col_terms[block.front()][p]);
      for (int j : block) {
        if (CanonicalSum(col_terms[j][p]) != ref) return false;
      }
    }
  }
  return true;
}

absl::StatusOr<bool> CheckFoldPartition(const MilpInstance& inst,
                                        const ColoringResult& coloring) {
  if (std::ssize(coloring.v_colors) != inst.num_constraints() ||
      std::ssize(coloring.w_colors) != inst.num_variables()) {
    return absl::InvalidArgumentError(
        "coloring dimensions do not match the instance");
  }
  return CheckFoldPartition(inst, coloring.v_partition, coloring.w_partition);
}

}  // namespace milpgnn
