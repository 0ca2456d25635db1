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

#include "milpgnn/milp_instance.h"

#include <algorithm>
#include <string>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace milpgnn {

std::string_view SenseToString(Sense sense) {
  switch (sense) {
    case Sense::kLe:
      return "<=";
    case Sense::kEq:
      return "=";
    case Sense::kGe:
      return ">=";
  }
  return "?";
}

absl::StatusOr<Sense> SenseFromString(std::string_view text) {
  if (text == "<=") return Sense::kLe;
  if (text == "=" || text == "==") return Sense::kEq;
  if (text == ">=") return Sense::kGe;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown constraint sense '%s'", std::string(text)));
}

absl::StatusOr<SparseMatrix> SparseMatrix::FromTriplets(
    int rows, int cols, std::vector<MatrixEntry> entries) {
  if (rows < 0 || cols < 0) {
    return absl::InvalidArgumentError("negative matrix dimension");
  }
  std::erase_if(entries, [](const MatrixEntry& e) { return e.value == 0.0; });
  for (const MatrixEntry& e : entries) {
    if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "entry (%d, %d) outside a %dx%d matrix", e.row, e.col, rows, cols));
    }
    if (!std::isfinite(e.value)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("non-finite entry at (%d, %d)", e.row, e.col));
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const MatrixEntry& x, const MatrixEntry& y) {
              return std::pair(x.row, x.col) < std::pair(y.row, y.col);
            });
  for (size_t k = 1; k < entries.size(); ++k) {
    if (entries[k].row == entries[k - 1].row &&
        entries[k].col == entries[k - 1].col) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "duplicate entry (%d, %d)", entries[k].row, entries[k].col));
    }
  }

  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.entries_ = std::move(entries);
  m.row_start_.assign(rows + 1, 0);
  for (const MatrixEntry& e : m.entries_) ++m.row_start_[e.row + 1];
  for (int i = 0; i < rows; ++i) m.row_start_[i + 1] += m.row_start_[i];
  return m;
}

std::span<const MatrixEntry> SparseMatrix::row(int i) const {
  return std::span<const MatrixEntry>(entries_).subspan(
      row_start_[i], row_start_[i + 1] - row_start_[i]);
}

double SparseMatrix::Get(int i, int j) const {
  const auto r = row(i);
  auto it = std::lower_bound(
      r.begin(), r.end(), j,
      [](const MatrixEntry& e, int col) { return e.col < col; });
  if (it != r.end() && it->col == j) return it->value;
  return 0.0;
}

absl::StatusOr<MilpInstance> MilpInstance::Create(
    SparseMatrix a, std::vector<double> b, std::vector<Sense> senses,
    std::vector<double> c, std::vector<Bound> lower, std::vector<Bound> upper,
    std::vector<bool> integer_mask) {
  const int m = a.rows();
  const int n = a.cols();
  if (m <= 0 || n <= 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("instance needs m, n > 0 (got %d, %d)", m, n));
  }
  if (std::ssize(b) != m || std::ssize(senses) != m) {
    return absl::InvalidArgumentError("b/senses length differs from m");
  }
  if (std::ssize(c) != n || std::ssize(lower) != n || std::ssize(upper) != n ||
      std::ssize(integer_mask) != n) {
    return absl::InvalidArgumentError("c/l/u/I length differs from n");
  }
  for (int i = 0; i < m; ++i) {
    if (!std::isfinite(b[i])) {
      return absl::InvalidArgumentError(absl::StrFormat("b[%d] not finite", i));
    }
  }
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(c[j])) {
      return absl::InvalidArgumentError(absl::StrFormat("c[%d] not finite", j));
    }
    if (lower[j].is_pos_inf() || upper[j].is_neg_inf()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("variable %d has an inverted infinite bound", j));
    }
    if ((lower[j].is_finite() && !std::isfinite(lower[j].value())) ||
        (upper[j].is_finite() && !std::isfinite(upper[j].value()))) {
      return absl::InvalidArgumentError(
          absl::StrFormat("variable %d has a non-finite finite bound", j));
    }
    if (lower[j].is_finite() && upper[j].is_finite() &&
        lower[j].value() > upper[j].value()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("variable %d has lower > upper", j));
    }
  }
  MilpInstance inst;
  inst.a_ = std::move(a);
  inst.b_ = std::move(b);
  inst.senses_ = std::move(senses);
  inst.c_ = std::move(c);
  inst.lower_ = std::move(lower);
  inst.upper_ = std::move(upper);
  inst.integer_mask_ = std::move(integer_mask);
  return inst;
}

bool MilpInstance::HasFiniteBounds() const {
  for (int j = 0; j < num_variables(); ++j) {
    if (!lower_[j].is_finite() || !upper_[j].is_finite()) return false;
  }
  return true;
}

double MaxViolation(const MilpInstance& inst, std::span<const double> x) {
  double worst = 0.0;
  for (int i = 0; i < inst.num_constraints(); ++i) {
    double activity = 0.0;
    for (const MatrixEntry& e : inst.a().row(i)) activity += e.value * x[e.col];
    const double r = activity - inst.b()[i];
    switch (inst.senses()[i]) {
      case Sense::kLe:
        worst = std::max(worst, r);
        break;
      case Sense::kEq:
        worst = std::max(worst, std::abs(r));
        break;
      case Sense::kGe:
        worst = std::max(worst, -r);
        break;
    }
  }
  for (int j = 0; j < inst.num_variables(); ++j) {
    if (inst.lower()[j].is_finite()) {
      worst = std::max(worst, inst.lower()[j].value() - x[j]);
    }
    if (inst.upper()[j].is_finite()) {
      worst = std::max(worst, x[j] - inst.upper()[j].value());
    }
  }
  return worst;
}

double Objective(const MilpInstance& inst, std::span<const double> x) {
  double obj = 0.0;
  for (int j = 0; j < inst.num_variables(); ++j) obj += inst.c()[j] * x[j];
  return obj;
}

}  // namespace milpgnn
