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

#include "milpgnn/dataset.h"

#include <filesystem>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "milpgnn/gnn.h"
#include "milpgnn/instance_io.h"
#include "milpgnn/milp_graph.h"

namespace milpgnn {
namespace {

using nlohmann::json;

std::string FormatVector(const std::vector<double>& v) {
  std::string out = "[";
  for (size_t k = 0; k < v.size(); ++k) {
    if (k > 0) out += ", ";
    out += FormatDouble(v[k]);
  }
  return out + "]";
}

absl::StatusOr<std::vector<double>> ReadVector(const json& v,
                                               const char* field) {
  if (!v.is_array()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("field '%s' must be an array", field));
  }
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("field '%s' holds a non-number", field));
    }
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace

std::string ManifestToJson(const Manifest& manifest) {
  json doc;
  doc["variant"] = manifest.variant;
  doc["seed"] = manifest.seed;
  doc["count"] = manifest.count;
  doc["m"] = manifest.m;
  doc["n"] = manifest.n;
  doc["nnz"] = manifest.nnz;
  doc["files"] = manifest.files;
  return doc.dump(2) + "\n";
}

absl::StatusOr<Manifest> ManifestFromJson(const std::string& text) {
  const json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("manifest is not a JSON object");
  }
  Manifest m;
  try {
    m.variant = doc.at("variant").get<std::string>();
    m.seed = doc.at("seed").get<uint64_t>();
    m.count = doc.at("count").get<int>();
    m.m = doc.at("m").get<int>();
    m.n = doc.at("n").get<int>();
    m.nnz = doc.value("nnz", 0);
    m.files = doc.at("files").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("manifest: ", e.what()));
  }
  if (static_cast<int>(m.files.size()) != m.count) {
    return absl::InvalidArgumentError("manifest count differs from file list");
  }
  return m;
}

std::string LabelToJson(const LabelRecord& record) {
  const OracleLabel& l = record.label;
  std::string out = absl::StrCat("{\"feasible\": ", l.feasible ? 1 : 0,
                                 ", \"objective\": ");
  out += l.objective.has_value() ? FormatDouble(*l.objective) : "\"inf\"";
  out += ", \"solution\": ";
  out += l.solution.has_value() ? FormatVector(*l.solution) : "null";
  absl::StrAppend(&out, ", \"node_count\": ", l.node_count);
  if (record.canonical_solution.has_value()) {
    out += ", \"canonical_solution\": " +
           FormatVector(*record.canonical_solution);
  }
  if (record.omega_seed.has_value()) {
    absl::StrAppend(&out, ", \"omega_seed\": ", *record.omega_seed);
  }
  return out + "}\n";
}

absl::StatusOr<LabelRecord> LabelFromJson(const std::string& text) {
  const json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("label is not a JSON object");
  }
  LabelRecord r;
  if (!doc.contains("feasible") || !doc["feasible"].is_number_integer()) {
    return absl::InvalidArgumentError("label lacks integer 'feasible'");
  }
  r.label.feasible = doc["feasible"].get<int>() != 0;
  r.label.node_count = doc.value("node_count", int64_t{0});
  const json& obj = doc.value("objective", json());
  if (r.label.feasible) {
    if (!obj.is_number()) {
      return absl::InvalidArgumentError("feasible label needs an objective");
    }
    r.label.objective = obj.get<double>();
    if (!doc.contains("solution")) {
      return absl::InvalidArgumentError("feasible label needs a solution");
    }
    auto sol = ReadVector(doc["solution"], "solution");
    if (!sol.ok()) return sol.status();
    r.label.solution = *std::move(sol);
  } else if (!(obj.is_string() && obj.get<std::string>() == "inf")) {
    return absl::InvalidArgumentError("infeasible label needs objective \"inf\"");
  }
  if (doc.contains("canonical_solution")) {
    auto sol = ReadVector(doc["canonical_solution"], "canonical_solution");
    if (!sol.ok()) return sol.status();
    r.canonical_solution = *std::move(sol);
  }
  if (doc.contains("omega_seed")) {
    if (!doc["omega_seed"].is_number_unsigned()) {
      return absl::InvalidArgumentError("omega_seed must be a non-negative integer");
    }
    r.omega_seed = doc["omega_seed"].get<uint64_t>();
  }
  return r;
}

std::string LabelPath(const std::string& instance_path) {
  std::filesystem::path p(instance_path);
  p.replace_extension(".label.json");
  return p.string();
}

absl::StatusOr<std::string> WriteDataset(
    const std::string& dir, const GenConfig& cfg,
    const std::vector<MilpInstance>& insts) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create ", dir, ": ", ec.message()));
  }
  Manifest manifest;
  manifest.variant = std::string(VariantToString(cfg.variant));
  manifest.seed = cfg.seed;
  manifest.count = static_cast<int>(insts.size());
  manifest.m = insts.empty() ? cfg.m : insts[0].num_constraints();
  manifest.n = insts.empty() ? cfg.n : insts[0].num_variables();
  manifest.nnz = cfg.variant == Variant::kD1 ? cfg.nnz : 0;
  for (size_t k = 0; k < insts.size(); ++k) {
    const std::string name = absl::StrFormat("inst_%05d.json", k);
    const std::string path = (std::filesystem::path(dir) / name).string();
    if (absl::Status s = WriteInstanceFile(path, insts[k]); !s.ok()) return s;
    manifest.files.push_back(name);
  }
  const std::string path = (std::filesystem::path(dir) / "manifest.json").string();
  if (absl::Status s = WriteTextFile(path, ManifestToJson(manifest)); !s.ok()) {
    return s;
  }
  return path;
}

absl::StatusOr<Dataset> LoadDataset(const std::string& manifest_path) {
  auto text = ReadTextFile(manifest_path);
  if (!text.ok()) return text.status();
  auto manifest = ManifestFromJson(*text);
  if (!manifest.ok()) return manifest.status();
  Dataset ds;
  ds.manifest = *std::move(manifest);
  ds.manifest_path = manifest_path;
  const auto dir = std::filesystem::path(manifest_path).parent_path();
  for (const std::string& f : ds.manifest.files) {
    const std::string path = (dir / f).string();
    auto inst = ReadInstanceFile(path);
    if (!inst.ok()) return inst.status();
    ds.paths.push_back(path);
    ds.instances.push_back(*std::move(inst));
  }
  return ds;
}

absl::Status LoadLabels(Dataset* dataset) {
  dataset->labels.clear();
  for (size_t k = 0; k < dataset->paths.size(); ++k) {
    const std::string path = LabelPath(dataset->paths[k]);
    auto text = ReadTextFile(path);
    if (!text.ok()) return text.status();
    auto rec = LabelFromJson(*text);
    if (!rec.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": ", rec.status().message()));
    }
    if (rec->label.solution.has_value() &&
        static_cast<int>(rec->label.solution->size()) !=
            dataset->instances[k].num_variables()) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": solution length differs from n"));
    }
    dataset->labels.push_back(*std::move(rec));
  }
  return absl::OkStatus();
}

absl::StatusOr<LabelRecord> LabelInstance(const MilpInstance& inst,
                                          const LabelOptions& options) {
  LabelRecord record;
  auto label = SolveMilp(inst, options.oracle);
  if (!label.ok()) return label.status();
  record.label = *std::move(label);
  if (!options.canonical || !record.label.feasible) return record;
  MilpGraph order_graph = EncodeGraph(inst);
  if (options.omega_seed.has_value()) {
    auto with_omega = AttachRandomFeatures(
        order_graph, SampleRandomFeatures(inst.num_constraints(),
                                          inst.num_variables(),
                                          *options.omega_seed));
    if (!with_omega.ok()) return with_omega.status();
    order_graph = *std::move(with_omega);
    record.omega_seed = options.omega_seed;
  }
  auto canonical = CanonicalSolution(inst, order_graph, options.oracle);
  if (!canonical.ok()) return canonical.status();
  record.canonical_solution = *std::move(canonical);
  return record;
}

absl::Status LabelDataset(Dataset* dataset, const LabelOptions& options) {
  dataset->labels.clear();
  for (size_t k = 0; k < dataset->instances.size(); ++k) {
    auto record = LabelInstance(dataset->instances[k], options);
    if (!record.ok()) {
      return absl::Status(record.status().code(),
                          absl::StrCat(dataset->paths[k], ": ",
                                       record.status().message()));
    }
    const std::string path = LabelPath(dataset->paths[k]);
    if (absl::Status s = WriteTextFile(path, LabelToJson(*record)); !s.ok()) {
      return s;
    }
    dataset->labels.push_back(*std::move(record));
  }
  return absl::OkStatus();
}

}  // namespace milpgnn
