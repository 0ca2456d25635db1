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

#ifndef MILPGNN_MILP_INSTANCE_H_
#define MILPGNN_MILP_INSTANCE_H_

#include <compare>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace milpgnn {

// Constraint sense. The enumerator order LE < EQ < GE is the order used by
// the canonical initial ordering of constraint features.
enum class Sense : int8_t { kLe = 0, kEq = 1, kGe = 2 };

std::string_view SenseToString(Sense sense);
absl::StatusOr<Sense> SenseFromString(std::string_view text);

// A variable bound that is either a finite real or an infinite endpoint.
// Infinite endpoints are tagged, never represented as floating-point infinity.
// Ordering: NegInf < any finite value < PosInf.
class Bound {
 public:
  // Finite zero.
  Bound() : Bound(Kind::kFinite, 0.0) {}

  static Bound Finite(double value) { return Bound(Kind::kFinite, value); }
  static Bound NegInf() { return Bound(Kind::kNegInf, 0.0); }
  static Bound PosInf() { return Bound(Kind::kPosInf, 0.0); }

  bool is_finite() const { return kind_ == Kind::kFinite; }
  bool is_neg_inf() const { return kind_ == Kind::kNegInf; }
  bool is_pos_inf() const { return kind_ == Kind::kPosInf; }

  // Only meaningful when is_finite().
  double value() const { return value_; }

  // -1, 0 or +1 for NegInf, finite, PosInf.
  int kind_code() const { return static_cast<int>(kind_); }

  friend std::partial_ordering operator<=>(const Bound& a, const Bound& b) {
    if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
    return a.value_ <=> b.value_;
  }
  friend bool operator==(const Bound& a, const Bound& b) {
    return a.kind_ == b.kind_ && a.value_ == b.value_;
  }

 private:
  enum class Kind : int8_t { kNegInf = -1, kFinite = 0, kPosInf = 1 };
  Bound(Kind kind, double value) : kind_(kind), value_(value) {}

  Kind kind_;
  double value_;
};

struct MatrixEntry {
  int row = 0;
  int col = 0;
  double value = 0.0;

  friend bool operator==(const MatrixEntry&, const MatrixEntry&) = default;
};

// Immutable sparse matrix with entries stored in row-major order. Explicit
// zeros are dropped at construction, so the entry set is exactly the nonzero
// pattern.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  // Fails on out-of-range indices, non-finite values, or duplicate (i, j).
  // Insertion order does not matter.
  static absl::StatusOr<SparseMatrix> FromTriplets(
      int rows, int cols, std::vector<MatrixEntry> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int64_t nnz() const { return static_cast<int64_t>(entries_.size()); }

  std::span<const MatrixEntry> entries() const { return entries_; }
  std::span<const MatrixEntry> row(int i) const;

  // Returns 0 for entries outside the nonzero pattern.
  double Get(int i, int j) const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<MatrixEntry> entries_;
  std::vector<int64_t> row_start_;
};

// min c^T x  s.t.  A x (senses) b,  lower <= x <= upper,  x_j integer for
// integer_mask[j].
class MilpInstance {
 public:
  static absl::StatusOr<MilpInstance> Create(SparseMatrix a,
                                             std::vector<double> b,
                                             std::vector<Sense> senses,
                                             std::vector<double> c,
                                             std::vector<Bound> lower,
                                             std::vector<Bound> upper,
                                             std::vector<bool> integer_mask);

  int num_constraints() const { return a_.rows(); }
  int num_variables() const { return a_.cols(); }

  const SparseMatrix& a() const { return a_; }
  const std::vector<double>& b() const { return b_; }
  const std::vector<Sense>& senses() const { return senses_; }
  const std::vector<double>& c() const { return c_; }
  const std::vector<Bound>& lower() const { return lower_; }
  const std::vector<Bound>& upper() const { return upper_; }
  const std::vector<bool>& integer_mask() const { return integer_mask_; }

  bool is_integer(int j) const { return integer_mask_[j]; }
  bool HasFiniteBounds() const;

  friend bool operator==(const MilpInstance&, const MilpInstance&) = default;

 private:
  MilpInstance() = default;

  SparseMatrix a_;
  std::vector<double> b_;
  std::vector<Sense> senses_;
  std::vector<double> c_;
  std::vector<Bound> lower_;
  std::vector<Bound> upper_;
  std::vector<bool> integer_mask_;
};

// Maximum constraint violation of x, including bound violations. Infinite
// bounds never contribute.
double MaxViolation(const MilpInstance& inst, std::span<const double> x);

double Objective(const MilpInstance& inst, std::span<const double> x);

}  // namespace milpgnn

#endif  // MILPGNN_MILP_INSTANCE_H_
