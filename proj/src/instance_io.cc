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

#include "milpgnn/instance_io.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "json.hpp"

namespace milpgnn {
namespace {

using nlohmann::json;

std::string FormatBound(const Bound& b) {
  if (b.is_neg_inf()) return "\"-inf\"";
  if (b.is_pos_inf()) return "\"+inf\"";
  return FormatDouble(b.value());
}

absl::StatusOr<double> ReadReal(const json& v, const char* field) {
  if (!v.is_number()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("field '%s' holds a non-number", field));
  }
  return v.get<double>();
}

absl::StatusOr<Bound> ReadBound(const json& v, const char* field) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "-inf") return Bound::NegInf();
    if (s == "+inf" || s == "inf") return Bound::PosInf();
    return absl::InvalidArgumentError(
        absl::StrFormat("field '%s' holds unknown bound '%s'", field, s));
  }
  auto value = ReadReal(v, field);
  if (!value.ok()) return value.status();
  return Bound::Finite(*value);
}

absl::StatusOr<const json*> Field(const json& doc, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("missing field '%s'", name));
  }
  return &*it;
}

absl::StatusOr<const json*> ArrayField(const json& doc, const char* name,
                                       int expected_size) {
  auto f = Field(doc, name);
  if (!f.ok()) return f.status();
  if (!(*f)->is_array() ||
      (expected_size >= 0 && std::ssize(**f) != expected_size)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "field '%s' must be an array of length %d", name, expected_size));
  }
  return *f;
}

absl::StatusOr<MilpInstance> FromDocument(const json& doc) {
  auto m_field = Field(doc, "m");
  if (!m_field.ok()) return m_field.status();
  auto n_field = Field(doc, "n");
  if (!n_field.ok()) return n_field.status();
  if (!(*m_field)->is_number_integer() || !(*n_field)->is_number_integer()) {
    return absl::InvalidArgumentError("'m' and 'n' must be integers");
  }
  const int m = (*m_field)->get<int>();
  const int n = (*n_field)->get<int>();

  auto a_field = ArrayField(doc, "A", -1);
  if (!a_field.ok()) return a_field.status();
  std::vector<MatrixEntry> entries;
  for (const json& t : **a_field) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() ||
        !t[1].is_number_integer() || !t[2].is_number()) {
      return absl::InvalidArgumentError("'A' entries must be [i, j, value]");
    }
    entries.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<double>()});
  }
  auto a = SparseMatrix::FromTriplets(m, n, std::move(entries));
  if (!a.ok()) return a.status();

  std::vector<double> b(m), c(n);
  std::vector<Sense> senses(m);
  std::vector<Bound> lower, upper;
  std::vector<bool> mask(n, false);

  auto b_field = ArrayField(doc, "b", m);
  if (!b_field.ok()) return b_field.status();
  auto s_field = ArrayField(doc, "senses", m);
  if (!s_field.ok()) return s_field.status();
  for (int i = 0; i < m; ++i) {
    auto v = ReadReal((**b_field)[i], "b");
    if (!v.ok()) return v.status();
    b[i] = *v;
    if (!(**s_field)[i].is_string()) {
      return absl::InvalidArgumentError("'senses' entries must be strings");
    }
    auto s = SenseFromString((**s_field)[i].get<std::string>());
    if (!s.ok()) return s.status();
    senses[i] = *s;
  }

  auto c_field = ArrayField(doc, "c", n);
  if (!c_field.ok()) return c_field.status();
  auto l_field = ArrayField(doc, "l", n);
  if (!l_field.ok()) return l_field.status();
  auto u_field = ArrayField(doc, "u", n);
  if (!u_field.ok()) return u_field.status();
  for (int j = 0; j < n; ++j) {
    auto v = ReadReal((**c_field)[j], "c");
    if (!v.ok()) return v.status();
    c[j] = *v;
    auto lo = ReadBound((**l_field)[j], "l");
    if (!lo.ok()) return lo.status();
    lower.push_back(*lo);
    auto up = ReadBound((**u_field)[j], "u");
    if (!up.ok()) return up.status();
    upper.push_back(*up);
  }

  auto i_field = ArrayField(doc, "I", -1);
  if (!i_field.ok()) return i_field.status();
  for (const json& idx : **i_field) {
    if (!idx.is_number_integer()) {
      return absl::InvalidArgumentError("'I' entries must be integers");
    }
    const int j = idx.get<int>();
    if (j < 0 || j >= n) {
      return absl::InvalidArgumentError(
          absl::StrFormat("integer index %d out of range", j));
    }
    mask[j] = true;
  }
  return MilpInstance::Create(*std::move(a), std::move(b), std::move(senses),
                              std::move(c), std::move(lower), std::move(upper),
                              std::move(mask));
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string InstanceToJson(const MilpInstance& inst) {
  const int m = inst.num_constraints();
  const int n = inst.num_variables();
  std::string out = absl::StrCat("{\n  \"m\": ", m, ",\n  \"n\": ", n,
                                 ",\n  \"A\": [");
  bool first = true;
  for (const MatrixEntry& e : inst.a().entries()) {
    absl::StrAppend(&out, first ? "" : ", ", "[", e.row, ", ", e.col, ", ",
                    FormatDouble(e.value), "]");
    first = false;
  }
  auto reals = [](const std::vector<double>& v) {
    return absl::StrJoin(v, ", ", [](std::string* o, double x) {
      o->append(FormatDouble(x));
    });
  };
  auto bounds = [](const std::vector<Bound>& v) {
    return absl::StrJoin(v, ", ", [](std::string* o, const Bound& x) {
      o->append(FormatBound(x));
    });
  };
  std::vector<std::string> senses;
  for (Sense s : inst.senses()) {
    senses.push_back("\"" + std::string(SenseToString(s)) + "\"");
  }
  std::vector<int> ints;
  for (int j = 0; j < n; ++j) {
    if (inst.is_integer(j)) ints.push_back(j);
  }
  absl::StrAppend(&out, "],\n  \"b\": [", reals(inst.b()), "],\n  \"senses\": [",
                  absl::StrJoin(senses, ", "), "],\n  \"c\": [", reals(inst.c()),
                  "],\n  \"l\": [", bounds(inst.lower()), "],\n  \"u\": [",
                  bounds(inst.upper()), "],\n  \"I\": [",
                  absl::StrJoin(ints, ", "), "]\n}\n");
  return out;
}

absl::StatusOr<MilpInstance> InstanceFromJson(std::string_view text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("instance file is not a JSON object");
  }
  return FromDocument(doc);
}

absl::Status WriteInstanceFile(const std::string& path,
                               const MilpInstance& inst) {
  return WriteTextFile(path, InstanceToJson(inst));
}

absl::StatusOr<MilpInstance> ReadInstanceFile(const std::string& path) {
  auto text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  auto inst = InstanceFromJson(*text);
  if (!inst.ok()) {
    return absl::Status(inst.status().code(),
                        absl::StrCat(path, ": ", inst.status().message()));
  }
  return inst;
}

absl::StatusOr<std::string> ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

absl::Status WriteTextFile(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) return absl::DataLossError(absl::StrCat("short write to ", path));
  return absl::OkStatus();
}

}  // namespace milpgnn
