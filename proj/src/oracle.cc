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

#include "milpgnn/oracle.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "milpgnn/canonical_order.h"

namespace milpgnn {
namespace {

struct Node {
  double bound;
  int64_t id;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct NodeAfter {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

struct SearchResult {
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> point;
  int64_t nodes = 0;
};

void SetBounds(LpProblem* lp, const std::vector<double>& lower,
               const std::vector<double>& upper) {
  for (int j = 0; j < lp->n; ++j) {
    lp->lower[j] = Bound::Finite(lower[j]);
    lp->upper[j] = Bound::Finite(upper[j]);
  }
}

double Dot(const std::vector<double>& c, const std::vector<double>& x) {
  double s = 0.0;
  for (size_t j = 0; j < c.size(); ++j) s += c[j] * x[j];
  return s;
}

// Re-solves with the integer variables fixed at their rounded values so the
// returned point is exactly integral and its continuous part consistent.
absl::StatusOr<std::vector<double>> Polish(LpProblem lp,
                                           const std::vector<bool>& integer,
                                           std::vector<double> point,
                                           const OracleOptions& options) {
  for (int j = 0; j < lp.n; ++j) {
    if (!integer[j]) continue;
    point[j] = std::round(point[j]);
    lp.lower[j] = lp.upper[j] = Bound::Finite(point[j]);
  }
  auto res = SolveLp(lp, options.simplex);
  if (!res.ok()) return res.status();
  if (res->status != LpStatus::kOptimal) return point;
  for (int j = 0; j < lp.n; ++j) {
    if (integer[j]) res->point[j] = point[j];
  }
  return res->point;
}

// Best-first branch and bound. `lp` must carry finite bounds.
absl::StatusOr<SearchResult> BranchAndBound(const LpProblem& lp,
                                            const std::vector<bool>& integer,
                                            const OracleOptions& options) {
  SearchResult result;
  Node root{0.0, 0, std::vector<double>(lp.n), std::vector<double>(lp.n)};
  for (int j = 0; j < lp.n; ++j) {
    double lo = lp.lower[j].value();
    double hi = lp.upper[j].value();
    if (integer[j]) {
      lo = std::ceil(lo - options.tol_int);
      hi = std::floor(hi + options.tol_int);
    }
    if (lo > hi) return result;
    root.lower[j] = lo;
    root.upper[j] = hi;
  }

  std::priority_queue<Node, std::vector<Node>, NodeAfter> open;
  open.push(std::move(root));
  int64_t next_id = 1;
  LpProblem work = lp;

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (result.feasible &&
        node.bound >= result.objective - options.TolObj(result.objective)) {
      continue;
    }
    if (++result.nodes > options.node_limit) {
      return absl::ResourceExhaustedError(absl::StrFormat(
          "branch and bound node limit of %d reached", options.node_limit));
    }
    SetBounds(&work, node.lower, node.upper);
    auto relaxed = SolveLp(work, options.simplex);
    if (!relaxed.ok()) return relaxed.status();
    if (relaxed->status == LpStatus::kInfeasible) continue;
    if (relaxed->status == LpStatus::kUnbounded) {
      return absl::InternalError("bounded relaxation reported unbounded");
    }
    const double bound = relaxed->objective;
    if (result.feasible &&
        bound >= result.objective - options.TolObj(result.objective)) {
      continue;
    }

    int branch = -1;
    double most = options.tol_int;
    for (int j = 0; j < lp.n; ++j) {
      if (!integer[j]) continue;
      const double v = relaxed->point[j];
      const double frac = std::abs(v - std::round(v));
      if (frac > most) {
        most = frac;
        branch = j;
      }
    }
    if (branch < 0) {
      auto point = Polish(work, integer, relaxed->point, options);
      if (!point.ok()) return point.status();
      const double z = Dot(lp.c, *point);
      if (!result.feasible || z < result.objective) {
        result.feasible = true;
        result.objective = z;
        result.point = *std::move(point);
      }
      continue;
    }

    const double v = relaxed->point[branch];
    Node down{bound, next_id++, node.lower, node.upper};
    down.upper[branch] = std::floor(v);
    Node up{bound, next_id++, std::move(node.lower), std::move(node.upper)};
    up.lower[branch] = std::ceil(v);
    if (down.lower[branch] <= down.upper[branch]) open.push(std::move(down));
    if (up.lower[branch] <= up.upper[branch]) open.push(std::move(up));
  }
  return result;
}

absl::Status RequireFiniteBounds(const MilpInstance& inst) {
  if (!inst.HasFiniteBounds()) {
    return absl::FailedPreconditionError(
        "unbounded domain: every variable needs finite lower and upper bounds");
  }
  return absl::OkStatus();
}

}  // namespace

double OracleOptions::TolObj(double z) const {
  return tol_obj_rel * std::max(1.0, std::abs(z));
}

absl::StatusOr<OracleLabel> SolveMilp(const MilpInstance& inst,
                                      const OracleOptions& options) {
  if (absl::Status s = RequireFiniteBounds(inst); !s.ok()) return s;
  auto search = BranchAndBound(LpProblem::FromInstance(inst),
                               inst.integer_mask(), options);
  if (!search.ok()) return search.status();
  OracleLabel label;
  label.node_count = search->nodes;
  label.feasible = search->feasible;
  if (search->feasible) {
    label.objective = search->objective;
    label.solution = std::move(search->point);
  }
  return label;
}

absl::StatusOr<std::vector<double>> LexMinOptimalSolution(
    const MilpInstance& inst, const std::vector<int>& order,
    const OracleOptions& options) {
  if (absl::Status s = RequireFiniteBounds(inst); !s.ok()) return s;
  const int n = inst.num_variables();
  if (static_cast<int>(order.size()) != n) {
    return absl::InvalidArgumentError("order length differs from n");
  }
  const LpProblem base = LpProblem::FromInstance(inst);
  const std::vector<bool>& integer = inst.integer_mask();

  auto first = BranchAndBound(base, integer, options);
  if (!first.ok()) return first.status();
  if (!first->feasible) {
    return absl::FailedPreconditionError("instance is infeasible");
  }
  const double z = first->objective;

  // Append the optimality band c.x <= z + tol as an extra row.
  LpProblem lp;
  lp.m = base.m + 1;
  lp.n = n;
  lp.a = base.a;
  lp.a.insert(lp.a.end(), base.c.begin(), base.c.end());
  lp.b = base.b;
  lp.b.push_back(z + options.TolObj(z));
  lp.senses = base.senses;
  lp.senses.push_back(Sense::kLe);
  lp.lower = base.lower;
  lp.upper = base.upper;

  std::vector<double> point = first->point;
  for (int k = 0; k < n; ++k) {
    const int j = order[k];
    if (lp.lower[j].value() == lp.upper[j].value()) {
      point[j] = lp.lower[j].value();
      continue;
    }
    lp.c.assign(n, 0.0);
    lp.c[j] = 1.0;
    auto step = BranchAndBound(lp, integer, options);
    if (!step.ok()) return step.status();
    if (!step->feasible) {
      return absl::InternalError(absl::StrFormat(
          "lexicographic step %d lost feasibility inside the optimality band",
          k));
    }
    point = step->point;
    const double v = point[j];
    if (integer[j]) {
      lp.lower[j] = lp.upper[j] = Bound::Finite(std::round(v));
    } else {
      lp.lower[j] = Bound::Finite(
          std::max(base.lower[j].value(), v - options.tol_fix));
      lp.upper[j] = Bound::Finite(
          std::min(base.upper[j].value(), v + options.tol_fix));
    }
  }
  return point;
}

absl::StatusOr<std::vector<double>> CanonicalSolution(
    const MilpInstance& inst, const MilpGraph& order_graph,
    const OracleOptions& options) {
  if (order_graph.m() != inst.num_constraints() ||
      order_graph.n() != inst.num_variables()) {
    return absl::InvalidArgumentError("order graph does not match instance");
  }
  auto order = SortGraph(order_graph);
  if (!order.ok()) return order.status();
  return LexMinOptimalSolution(inst, order->sigma_w, options);
}

absl::StatusOr<std::vector<double>> CanonicalSolution(
    const MilpInstance& inst, const OracleOptions& options) {
  return CanonicalSolution(inst, EncodeGraph(inst), options);
}

}  // namespace milpgnn
