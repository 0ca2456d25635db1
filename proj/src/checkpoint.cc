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

#include "milpgnn/checkpoint.h"

#include <algorithm>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "milpgnn/instance_io.h"

namespace milpgnn {
namespace {

using nlohmann::json;

constexpr char kFormat[] = "milpgnn-checkpoint";

std::vector<double> ToVector(const Eigen::RowVectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::RowVectorXd FromJson(const json& v) {
  const auto values = v.get<std::vector<double>>();
  return Eigen::Map<const Eigen::RowVectorXd>(values.data(), values.size());
}

}  // namespace

std::string CheckpointToJson(GnnModel& model, const CheckpointMeta& meta) {
  const GnnConfig& cfg = model.config();
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kCheckpointVersion;
  doc["config"] = {{"depth", cfg.depth},
                   {"width", cfg.width},
                   {"readout", cfg.readout == Readout::kGraph ? "graph" : "node"},
                   {"random_feature", cfg.random_feature},
                   {"init", std::string(InitSchemeToString(cfg.init))}};
  doc["seed"] = meta.seed;
  doc["task"] = std::string(TaskToString(meta.task));
  doc["scaling"] = {{"mean", meta.scaling.mean}, {"stddev", meta.scaling.stddev}};
  doc["omega_seed"] = meta.omega_seed.has_value() ? json(*meta.omega_seed) : json();
  const InputNormalization& norm = model.input_normalization();
  doc["input_normalization"] =
      norm.empty() ? json()
                   : json{{"v_shift", ToVector(norm.v_shift)},
                          {"v_scale", ToVector(norm.v_scale)},
                          {"w_shift", ToVector(norm.w_shift)},
                          {"w_scale", ToVector(norm.w_scale)}};
  json tensors = json::array();
  model.ForEachParameter([&](const std::string& name, double* values, double*,
                             Eigen::Index size, Eigen::Index rows, Eigen::Index cols) {
    tensors.push_back({{"name", name},
                       {"rows", rows},
                       {"cols", cols},
                       {"values", std::vector<double>(values, values + size)}});
  });
  doc["tensors"] = std::move(tensors);
  return doc.dump() + "\n";
}

absl::StatusOr<LoadedModel> CheckpointFromJson(const std::string& text) {
  const json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("checkpoint is not a JSON object");
  }
  if (doc.value("format", "") != kFormat) {
    return absl::InvalidArgumentError("not a milpgnn checkpoint");
  }
  if (doc.value("version", -1) != kCheckpointVersion) {
    return absl::InvalidArgumentError(absl::StrCat(
        "unsupported checkpoint version ", doc.value("version", -1)));
  }
  GnnConfig cfg;
  CheckpointMeta meta;
  InputNormalization norm;
  json tensors;
  try {
    const json& c = doc.at("config");
    cfg.depth = c.at("depth").get<int>();
    cfg.width = c.at("width").get<int>();
    const std::string readout = c.at("readout").get<std::string>();
    if (readout != "graph" && readout != "node") {
      return absl::InvalidArgumentError(absl::StrCat("unknown readout '", readout, "'"));
    }
    cfg.readout = readout == "graph" ? Readout::kGraph : Readout::kNode;
    cfg.random_feature = c.at("random_feature").get<bool>();
    auto init = InitSchemeFromString(c.at("init").get<std::string>());
    if (!init.ok()) return init.status();
    cfg.init = *init;
    meta.seed = doc.at("seed").get<uint64_t>();
    auto task = TaskFromString(doc.at("task").get<std::string>());
    if (!task.ok()) return task.status();
    meta.task = *task;
    meta.scaling.mean = doc.at("scaling").at("mean").get<double>();
    meta.scaling.stddev = doc.at("scaling").at("stddev").get<double>();
    if (!doc.at("omega_seed").is_null()) {
      meta.omega_seed = doc.at("omega_seed").get<uint64_t>();
    }
    if (const json n = doc.value("input_normalization", json()); !n.is_null()) {
      norm.v_shift = FromJson(n.at("v_shift"));
      norm.v_scale = FromJson(n.at("v_scale"));
      norm.w_shift = FromJson(n.at("w_shift"));
      norm.w_scale = FromJson(n.at("w_scale"));
    }
    tensors = doc.at("tensors");
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("checkpoint: ", e.what()));
  }

  auto model = GnnModel::Create(cfg, meta.seed);
  if (!model.ok()) return model.status();
  if (absl::Status s = model->SetInputNormalization(std::move(norm)); !s.ok()) return s;
  if (!tensors.is_array()) {
    return absl::InvalidArgumentError("checkpoint tensors must be an array");
  }
  size_t next = 0;
  absl::Status status;
  model->ForEachParameter([&](const std::string& name, double* values, double*,
                              Eigen::Index size, Eigen::Index rows, Eigen::Index cols) {
    if (!status.ok()) return;
    if (next >= tensors.size()) {
      status = absl::InvalidArgumentError(absl::StrCat("checkpoint lacks tensor ", name));
      return;
    }
    const json& t = tensors[next++];
    try {
      if (t.at("name").get<std::string>() != name || t.at("rows").get<Eigen::Index>() != rows ||
          t.at("cols").get<Eigen::Index>() != cols) {
        status = absl::InvalidArgumentError(
            absl::StrCat("tensor ", next - 1, " does not match ", name, " (", rows, "x", cols, ")"));
        return;
      }
      const auto v = t.at("values").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(v.size()) != size) {
        status = absl::InvalidArgumentError(absl::StrCat("tensor ", name, " has wrong size"));
        return;
      }
      std::copy(v.begin(), v.end(), values);
    } catch (const json::exception& e) {
      status = absl::InvalidArgumentError(absl::StrCat("tensor ", name, ": ", e.what()));
    }
  });
  if (!status.ok()) return status;
  if (next != tensors.size()) {
    return absl::InvalidArgumentError("checkpoint has extra tensors");
  }
  return LoadedModel{*std::move(model), meta};
}

absl::Status SaveCheckpoint(const std::string& path, GnnModel& model,
                            const CheckpointMeta& meta) {
  return WriteTextFile(path, CheckpointToJson(model, meta));
}

absl::StatusOr<LoadedModel> LoadCheckpoint(const std::string& path) {
  auto text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  return CheckpointFromJson(*text);
}

}  // namespace milpgnn
