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

#include "milpgnn/simplex.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace milpgnn {
namespace {

enum class IterationOutcome { kOptimal, kUnbounded };

// Column layout: [0, n) structural, [n, n + m) slacks, [n + m, n + 2m)
// artificials.
class BoundedSimplex {
 public:
  BoundedSimplex(const LpProblem& lp, const SimplexOptions& options)
      : lp_(lp),
        opt_(options),
        m_(lp.m),
        n_(lp.n),
        cols_(lp.n + 2 * lp.m),
        tableau_(static_cast<size_t>(m_) * cols_, 0.0),
        beta_(m_, 0.0),
        basis_(m_, -1),
        is_basic_(cols_, false),
        x_(cols_, 0.0),
        lo_(cols_, 0.0),
        up_(cols_, 0.0),
        has_lo_(cols_, false),
        has_up_(cols_, false) {
    bland_after_ = options.bland_after_pivots >= 0
                       ? options.bland_after_pivots
                       : 50 * static_cast<int64_t>(m_ + n_);
  }

  absl::StatusOr<LpResult> Solve() {
    Setup();
    LpResult result;

    std::vector<double> phase1_cost(cols_, 0.0);
    for (int i = 0; i < m_; ++i) phase1_cost[Art(i)] = 1.0;
    auto p1 = Iterate(phase1_cost);
    if (!p1.ok()) return p1.status();
    RecomputeBasics();
    double infeasibility = 0.0;
    for (int i = 0; i < m_; ++i) infeasibility += std::max(0.0, x_[Art(i)]);
    result.pivots = pivots_;
    if (infeasibility > opt_.infeasibility_tol) {
      result.status = LpStatus::kInfeasible;
      return result;
    }

    // Artificials are pinned at zero from here on; basic ones leave on the
    // first pivot that touches their row.
    for (int i = 0; i < m_; ++i) {
      has_lo_[Art(i)] = has_up_[Art(i)] = true;
      lo_[Art(i)] = up_[Art(i)] = 0.0;
      if (!is_basic_[Art(i)]) x_[Art(i)] = 0.0;
    }
    std::vector<double> cost(cols_, 0.0);
    for (int j = 0; j < n_; ++j) cost[j] = lp_.c[j];
    auto p2 = Iterate(cost);
    if (!p2.ok()) return p2.status();
    result.pivots = pivots_;
    if (*p2 == IterationOutcome::kUnbounded) {
      result.status = LpStatus::kUnbounded;
      return result;
    }
    RecomputeBasics();
    result.status = LpStatus::kOptimal;
    result.point.assign(x_.begin(), x_.begin() + n_);
    for (int j = 0; j < n_; ++j) {
      // Clamp round-off so the point honours its bounds exactly.
      if (has_lo_[j]) result.point[j] = std::max(result.point[j], lo_[j]);
      if (has_up_[j]) result.point[j] = std::min(result.point[j], up_[j]);
      result.objective += lp_.c[j] * result.point[j];
    }
    return result;
  }

 private:
  int Slack(int i) const { return n_ + i; }
  int Art(int i) const { return n_ + m_ + i; }
  double& T(int i, int k) { return tableau_[static_cast<size_t>(i) * cols_ + k]; }

  void Setup() {
    for (int j = 0; j < n_; ++j) {
      has_lo_[j] = lp_.lower[j].is_finite();
      has_up_[j] = lp_.upper[j].is_finite();
      if (has_lo_[j]) lo_[j] = lp_.lower[j].value();
      if (has_up_[j]) up_[j] = lp_.upper[j].value();
      x_[j] = has_lo_[j] ? lo_[j] : (has_up_[j] ? up_[j] : 0.0);
    }
    for (int i = 0; i < m_; ++i) {
      const int s = Slack(i);
      switch (lp_.senses[i]) {
        case Sense::kLe:
          has_lo_[s] = true;
          break;
        case Sense::kGe:
          has_up_[s] = true;
          break;
        case Sense::kEq:
          has_lo_[s] = has_up_[s] = true;
          break;
      }
      double residual = lp_.b[i];
      for (int j = 0; j < n_; ++j) residual -= lp_.at(i, j) * x_[j];

      const bool slack_feasible =
          (!has_lo_[s] || residual >= 0.0) && (!has_up_[s] || residual <= 0.0);
      const double sign = residual >= 0.0 ? 1.0 : -1.0;
      for (int j = 0; j < n_; ++j) T(i, j) = lp_.at(i, j);
      T(i, s) = 1.0;
      T(i, Art(i)) = sign;
      beta_[i] = lp_.b[i];
      has_lo_[Art(i)] = true;
      if (slack_feasible) {
        has_up_[Art(i)] = true;  // fixed at 0
        basis_[i] = s;
      } else {
        // Basis column is sign * e_i; scale the row so it reads +e_i.
        for (int k = 0; k < cols_; ++k) T(i, k) *= sign;
        beta_[i] *= sign;
        basis_[i] = Art(i);
      }
      is_basic_[basis_[i]] = true;
    }
    RecomputeBasics();
  }

  // x_B = beta - sum over nonbasic k of T[:, k] x_k.
  void RecomputeBasics() {
    for (int i = 0; i < m_; ++i) {
      double v = beta_[i];
      for (int k = 0; k < cols_; ++k) {
        if (!is_basic_[k] && x_[k] != 0.0) v -= T(i, k) * x_[k];
      }
      x_[basis_[i]] = v;
    }
  }

  void Pivot(int r, int k) {
    const double piv = T(r, k);
    for (int q = 0; q < cols_; ++q) T(r, q) /= piv;
    beta_[r] /= piv;
    T(r, k) = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = T(i, k);
      if (f == 0.0) continue;
      for (int q = 0; q < cols_; ++q) T(i, q) -= f * T(r, q);
      T(i, k) = 0.0;
      beta_[i] -= f * beta_[r];
    }
    is_basic_[basis_[r]] = false;
    basis_[r] = k;
    is_basic_[k] = true;
  }

  absl::StatusOr<IterationOutcome> Iterate(const std::vector<double>& cost) {
    std::vector<double> reduced(cols_, 0.0);
    while (true) {
      if (pivots_ >= opt_.max_pivots) {
        return absl::ResourceExhaustedError(absl::StrFormat(
            "simplex iteration limit of %d pivots reached", opt_.max_pivots));
      }
      RecomputeBasics();
      const bool bland = pivots_ >= bland_after_;

      // Pricing.
      int entering = -1;
      double best = 0.0;
      int direction = 0;
      for (int k = 0; k < cols_; ++k) {
        if (is_basic_[k]) continue;
        if (has_lo_[k] && has_up_[k] && up_[k] - lo_[k] <= opt_.primal_tol) {
          continue;
        }
        double d = cost[k];
        for (int i = 0; i < m_; ++i) d -= cost[basis_[i]] * T(i, k);
        reduced[k] = d;
        const bool can_increase =
            !has_up_[k] || x_[k] < up_[k] - opt_.primal_tol;
        const bool can_decrease =
            !has_lo_[k] || x_[k] > lo_[k] + opt_.primal_tol;
        int dir = 0;
        if (d < -opt_.dual_tol && can_increase) dir = 1;
        if (d > opt_.dual_tol && can_decrease) dir = -1;
        if (dir == 0) continue;
        if (bland) {
          entering = k;
          direction = dir;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          entering = k;
          direction = dir;
        }
      }
      if (entering < 0) return IterationOutcome::kOptimal;

      // Ratio test.
      const int k = entering;
      double step = -1.0;
      int leave_row = -1;
      double leave_alpha = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double alpha = direction * T(i, k);
        if (std::abs(alpha) <= opt_.pivot_tol) continue;
        const int bv = basis_[i];
        double limit;
        if (alpha > 0.0) {
          if (!has_lo_[bv]) continue;
          limit = (x_[bv] - lo_[bv]) / alpha;
        } else {
          if (!has_up_[bv]) continue;
          limit = (up_[bv] - x_[bv]) / -alpha;
        }
        limit = std::max(limit, 0.0);
        bool take = leave_row < 0 || limit < step - 1e-12;
        if (!take && leave_row >= 0 && limit <= step + 1e-12) {
          take = bland ? bv < basis_[leave_row]
                       : std::abs(alpha) > std::abs(leave_alpha);
        }
        if (take) {
          step = limit;
          leave_row = i;
          leave_alpha = alpha;
        }
      }
      double flip = -1.0;
      if (direction > 0 && has_up_[k]) flip = up_[k] - x_[k];
      if (direction < 0 && has_lo_[k]) flip = x_[k] - lo_[k];

      if (leave_row < 0 && flip < 0.0) return IterationOutcome::kUnbounded;

      ++pivots_;
      if (flip >= 0.0 && (leave_row < 0 || flip <= step)) {
        x_[k] = direction > 0 ? up_[k] : lo_[k];
        continue;
      }
      const int leaving = basis_[leave_row];
      x_[k] += direction * step;
      Pivot(leave_row, k);
      x_[leaving] = leave_alpha > 0.0 ? lo_[leaving] : up_[leaving];
    }
  }

  const LpProblem& lp_;
  const SimplexOptions opt_;
  const int m_;
  const int n_;
  const int cols_;
  int64_t bland_after_ = 0;
  int64_t pivots_ = 0;

  std::vector<double> tableau_;  // B^{-1} [A | I | D], row-major
  std::vector<double> beta_;     // B^{-1} b
  std::vector<int> basis_;
  std::vector<bool> is_basic_;
  std::vector<double> x_;
  std::vector<double> lo_;
  std::vector<double> up_;
  std::vector<bool> has_lo_;
  std::vector<bool> has_up_;
};

}  // namespace

LpProblem LpProblem::FromInstance(const MilpInstance& inst) {
  LpProblem lp;
  lp.m = inst.num_constraints();
  lp.n = inst.num_variables();
  lp.a.assign(static_cast<size_t>(lp.m) * lp.n, 0.0);
  for (const MatrixEntry& e : inst.a().entries()) lp.at(e.row, e.col) = e.value;
  lp.b = inst.b();
  lp.senses = inst.senses();
  lp.c = inst.c();
  lp.lower = inst.lower();
  lp.upper = inst.upper();
  return lp;
}

absl::StatusOr<LpResult> SolveLp(const LpProblem& lp,
                                 const SimplexOptions& options) {
  for (int j = 0; j < lp.n; ++j) {
    if (lp.lower[j].is_finite() && lp.upper[j].is_finite() &&
        lp.lower[j].value() > lp.upper[j].value()) {
      LpResult r;
      r.status = LpStatus::kInfeasible;
      return r;
    }
  }
  if (lp.m == 0) {
    // Pure box problem: each variable sits at its cheaper bound.
    LpResult r;
    r.point.assign(lp.n, 0.0);
    for (int j = 0; j < lp.n; ++j) {
      const double cj = lp.c[j];
      const Bound& want = cj > 0 ? lp.lower[j] : lp.upper[j];
      if (cj != 0.0 && !want.is_finite()) {
        r.status = LpStatus::kUnbounded;
        return r;
      }
      if (cj != 0.0) {
        r.point[j] = want.value();
      } else if (lp.lower[j].is_finite()) {
        r.point[j] = lp.lower[j].value();
      } else if (lp.upper[j].is_finite()) {
        r.point[j] = lp.upper[j].value();
      }
      r.objective += cj * r.point[j];
    }
    r.status = LpStatus::kOptimal;
    return r;
  }
  BoundedSimplex simplex(lp, options);
  return simplex.Solve();
}

absl::StatusOr<LpResult> SolveLp(const MilpInstance& inst,
                                 const SimplexOptions& options) {
  return SolveLp(LpProblem::FromInstance(inst), options);
}

}  // namespace milpgnn
