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

#include "milpgnn/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "milpgnn/checkpoint.h"
#include "milpgnn/gnn.h"
#include "milpgnn/instance_io.h"
#include "milpgnn/milp_graph.h"

namespace milpgnn {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr char kResultsHeader[] =
    "experiment,task,variant,d,n_params,seed,train_size,train_err,test_err,"
    "epochs,wall_ms,manifest,checkpoint";

std::string Resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty() || base_dir.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base_dir) / path).lexically_normal().string();
}

struct Cell {
  int train_size;
  int d;
  uint64_t seed;
};

std::string CellStem(const ExperimentSpec& spec, const Cell& cell) {
  return absl::StrFormat("%s_n%d_d%d_s%d", spec.name, cell.train_size, cell.d, cell.seed);
}

absl::StatusOr<Dataset> LoadLabeled(const std::string& manifest) {
  auto ds = LoadDataset(manifest);
  if (!ds.ok()) return ds.status();
  if (absl::Status s = LoadLabels(&*ds); !s.ok()) {
    return absl::FailedPreconditionError(
        absl::StrCat("missing labels for ", manifest, ": ", s.message()));
  }
  return ds;
}

absl::StatusOr<double> ParseDouble(const std::string& field) {
  double v;
  if (!absl::SimpleAtod(field, &v)) {
    return absl::InvalidArgumentError(absl::StrCat("bad number '", field, "'"));
  }
  return v;
}

}  // namespace

absl::StatusOr<ExperimentSpec> ExperimentSpecFromJson(const std::string& text,
                                                      const std::string& base_dir) {
  const json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("experiment spec is not a JSON object");
  }
  static const char* const kKeys[] = {
      "name", "task", "train_manifest", "test_manifest", "widths", "seeds",
      "train_sizes", "test_size", "random_feature", "omega_seed", "depth", "init",
      "normalize_inputs", "epochs", "steps", "batch_size", "learning_rate", "eval_every",
      "target_error", "out_dir", "jobs"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      return absl::InvalidArgumentError(absl::StrCat("unknown spec field '", key, "'"));
    }
  }
  ExperimentSpec spec;
  try {
    spec.name = doc.value("name", spec.name);
    if (doc.contains("task")) {
      auto task = TaskFromString(doc["task"].get<std::string>());
      if (!task.ok()) return task.status();
      spec.task = *task;
    }
    spec.train_manifest = Resolve(base_dir, doc.value("train_manifest", std::string()));
    spec.test_manifest = Resolve(base_dir, doc.value("test_manifest", std::string()));
    spec.widths = doc.value("widths", spec.widths);
    spec.seeds = doc.value("seeds", spec.seeds);
    spec.train_sizes = doc.value("train_sizes", spec.train_sizes);
    spec.test_size = doc.value("test_size", spec.test_size);
    spec.random_feature = doc.value("random_feature", spec.random_feature);
    spec.normalize_inputs = doc.value("normalize_inputs", spec.normalize_inputs);
    if (doc.contains("omega_seed") && !doc["omega_seed"].is_null()) {
      spec.omega_seed = doc["omega_seed"].get<uint64_t>();
    }
    spec.depth = doc.value("depth", spec.depth);
    if (doc.contains("init")) {
      auto init = InitSchemeFromString(doc["init"].get<std::string>());
      if (!init.ok()) return init.status();
      spec.init = *init;
    }
    spec.epochs = doc.value("epochs", spec.epochs);
    if (doc.contains("steps") && !doc["steps"].is_null()) {
      spec.steps = doc["steps"].get<int64_t>();
    }
    spec.batch_size = doc.value("batch_size", spec.batch_size);
    spec.learning_rate = doc.value("learning_rate", spec.learning_rate);
    spec.eval_every = doc.value("eval_every", spec.eval_every);
    if (doc.contains("target_error") && !doc["target_error"].is_null()) {
      spec.target_error = doc["target_error"].get<double>();
    }
    spec.out_dir = Resolve(base_dir, doc.value("out_dir", std::string()));
    spec.jobs = doc.value("jobs", spec.jobs);
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("experiment spec: ", e.what()));
  }
  return spec;
}

std::string ExperimentSpecToJson(const ExperimentSpec& spec) {
  json doc;
  doc["name"] = spec.name;
  doc["task"] = std::string(TaskToString(spec.task));
  doc["train_manifest"] = spec.train_manifest;
  doc["test_manifest"] = spec.test_manifest;
  doc["widths"] = spec.widths;
  doc["seeds"] = spec.seeds;
  doc["train_sizes"] = spec.train_sizes;
  doc["test_size"] = spec.test_size;
  doc["random_feature"] = spec.random_feature;
  doc["omega_seed"] = spec.omega_seed.has_value() ? json(*spec.omega_seed) : json();
  doc["depth"] = spec.depth;
  doc["init"] = std::string(InitSchemeToString(spec.init));
  doc["normalize_inputs"] = spec.normalize_inputs;
  doc["epochs"] = spec.epochs;
  doc["steps"] = spec.steps.has_value() ? json(*spec.steps) : json();
  doc["batch_size"] = spec.batch_size;
  doc["learning_rate"] = spec.learning_rate;
  doc["eval_every"] = spec.eval_every;
  doc["target_error"] = spec.target_error.has_value() ? json(*spec.target_error) : json();
  doc["out_dir"] = spec.out_dir;
  doc["jobs"] = spec.jobs;
  return doc.dump(2) + "\n";
}

absl::Status ValidateSpec(const ExperimentSpec& spec) {
  if (spec.name.empty() || spec.name.find_first_of(",/\\ ") != std::string::npos) {
    return absl::InvalidArgumentError("experiment name must be non-empty without ',', '/' or spaces");
  }
  if (spec.out_dir.empty()) return absl::InvalidArgumentError("out_dir is required");
  if (spec.widths.empty() || spec.seeds.empty()) {
    return absl::InvalidArgumentError("widths and seeds must be non-empty");
  }
  for (int d : spec.widths) {
    if (d <= 0) return absl::InvalidArgumentError("widths must be positive");
  }
  if (spec.depth < 0 || spec.epochs < 0 || spec.batch_size <= 0 || spec.jobs <= 0 ||
      spec.eval_every < 0 || spec.test_size < 0 || !(spec.learning_rate > 0.0)) {
    return absl::InvalidArgumentError("negative or zero size/rate field in spec");
  }
  if (spec.steps.has_value() && *spec.steps < 0) {
    return absl::InvalidArgumentError("steps must be non-negative");
  }
  if (spec.random_feature != spec.omega_seed.has_value()) {
    return absl::InvalidArgumentError(
        "omega_seed must be given exactly when random_feature is set");
  }
  for (const auto& [manifest, sizes] :
       {std::pair{spec.train_manifest, spec.train_sizes},
        std::pair{spec.test_manifest, std::vector<int>{spec.test_size}}}) {
    if (manifest.empty()) continue;
    auto text = ReadTextFile(manifest);
    if (!text.ok()) {
      return absl::NotFoundError(absl::StrCat("manifest ", manifest, " not readable"));
    }
    auto m = ManifestFromJson(*text);
    if (!m.ok()) return m.status();
    for (int size : sizes) {
      if (size < 0 || size > m->count) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "size %d exceeds the %d instances of %s", size, m->count, manifest));
      }
    }
  }
  if (spec.train_manifest.empty()) {
    return absl::InvalidArgumentError("train_manifest is required");
  }
  for (int size : spec.train_sizes) {
    if (size <= 0) return absl::InvalidArgumentError("train sizes must be positive");
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<Sample>> BuildSamples(const Dataset& dataset, Task task,
                                                 int count, bool random_feature,
                                                 std::optional<uint64_t> omega_seed) {
  const int total = static_cast<int>(dataset.instances.size());
  if (count < 0) count = total;
  if (count > total) {
    return absl::InvalidArgumentError(
        absl::StrFormat("requested %d instances of a %d-instance dataset", count, total));
  }
  if (static_cast<int>(dataset.labels.size()) != total) {
    return absl::FailedPreconditionError("missing labels");
  }
  if (random_feature && !omega_seed.has_value()) {
    return absl::InvalidArgumentError("random features need an omega seed");
  }
  std::vector<Sample> out;
  for (int k = 0; k < count; ++k) {
    const MilpInstance& inst = dataset.instances[k];
    const LabelRecord& rec = dataset.labels[k];
    if (task != Task::kFeas && !rec.label.feasible) continue;
    Sample s{EncodeGraph(inst), 0.0, {}};
    if (random_feature) {
      auto g = AttachRandomFeatures(
          s.graph, SampleRandomFeatures(inst.num_constraints(), inst.num_variables(),
                                        *omega_seed));
      if (!g.ok()) return g.status();
      s.graph = *std::move(g);
    }
    switch (task) {
      case Task::kFeas:
        s.value = rec.label.feasible ? 1.0 : 0.0;
        break;
      case Task::kObj:
        s.value = *rec.label.objective;
        break;
      case Task::kSolu: {
        if (!rec.canonical_solution.has_value()) {
          return absl::FailedPreconditionError(absl::StrCat(
              "missing canonical solution label for ", dataset.paths[k]));
        }
        const std::optional<uint64_t> expected =
            random_feature ? omega_seed : std::nullopt;
        if (rec.omega_seed != expected) {
          return absl::FailedPreconditionError(absl::StrCat(
              "config mismatch: ", dataset.paths[k],
              " was canonically ordered with omega seed ",
              rec.omega_seed.has_value() ? absl::StrCat(*rec.omega_seed) : "none",
              " but the experiment uses ",
              expected.has_value() ? absl::StrCat(*expected) : "none"));
        }
        s.solution = *rec.canonical_solution;
        break;
      }
    }
    out.push_back(std::move(s));
  }
  if (out.empty()) {
    return absl::FailedPreconditionError("no usable samples for this task");
  }
  return out;
}

std::string ResultsCsv(const std::vector<ResultRow>& rows) {
  std::string out = absl::StrCat(kResultsHeader, "\n");
  for (const ResultRow& r : rows) {
    absl::StrAppend(&out, r.experiment, ",", r.task, ",", r.variant, ",", r.d, ",",
                    r.n_params, ",", r.seed, ",", r.train_size, ",",
                    FormatDouble(r.train_err), ",",
                    r.test_err.has_value() ? FormatDouble(*r.test_err) : "", ",",
                    r.epochs, ",", r.wall_ms, ",", r.manifest, ",", r.checkpoint, "\n");
  }
  return out;
}

absl::StatusOr<std::vector<ResultRow>> ParseResultsCsv(const std::string& text) {
  std::vector<std::string> lines = absl::StrSplit(text, '\n', absl::SkipEmpty());
  if (lines.empty() || lines[0] != kResultsHeader) {
    return absl::InvalidArgumentError("results CSV header mismatch");
  }
  std::vector<ResultRow> rows;
  for (size_t k = 1; k < lines.size(); ++k) {
    const std::vector<std::string> f = absl::StrSplit(lines[k], ',');
    if (f.size() != 13) {
      return absl::InvalidArgumentError(
          absl::StrFormat("results line %d has %d fields", k + 1, f.size()));
    }
    ResultRow r;
    r.experiment = f[0];
    r.task = f[1];
    r.variant = f[2];
    int64_t d, n_params, train_size, epochs;
    uint64_t seed;
    if (!absl::SimpleAtoi(f[3], &d) || !absl::SimpleAtoi(f[4], &n_params) ||
        !absl::SimpleAtoi(f[5], &seed) || !absl::SimpleAtoi(f[6], &train_size) ||
        !absl::SimpleAtoi(f[9], &epochs) || !absl::SimpleAtoi(f[10], &r.wall_ms)) {
      return absl::InvalidArgumentError(absl::StrFormat("bad integer on results line %d", k + 1));
    }
    r.d = static_cast<int>(d);
    r.n_params = n_params;
    r.seed = seed;
    r.train_size = static_cast<int>(train_size);
    r.epochs = static_cast<int>(epochs);
    auto train_err = ParseDouble(f[7]);
    if (!train_err.ok()) return train_err.status();
    r.train_err = *train_err;
    if (!f[8].empty()) {
      auto test_err = ParseDouble(f[8]);
      if (!test_err.ok()) return test_err.status();
      r.test_err = *test_err;
    }
    r.manifest = f[11];
    r.checkpoint = f[12];
    rows.push_back(std::move(r));
  }
  return rows;
}

absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentSpec& spec) {
  if (absl::Status s = ValidateSpec(spec); !s.ok()) return s;
  auto train_ds = LoadLabeled(spec.train_manifest);
  if (!train_ds.ok()) return train_ds.status();
  std::optional<std::vector<Sample>> test;
  if (!spec.test_manifest.empty()) {
    auto test_ds = LoadLabeled(spec.test_manifest);
    if (!test_ds.ok()) return test_ds.status();
    auto samples = BuildSamples(*test_ds, spec.task, spec.test_size > 0 ? spec.test_size : -1,
                                spec.random_feature, spec.omega_seed);
    if (!samples.ok()) return samples.status();
    test = *std::move(samples);
  }

  std::vector<int> sizes = spec.train_sizes;
  if (sizes.empty()) sizes.push_back(static_cast<int>(train_ds->instances.size()));
  std::map<int, std::vector<Sample>> train_sets;
  for (int size : sizes) {
    if (train_sets.count(size)) continue;
    auto samples = BuildSamples(*train_ds, spec.task, size, spec.random_feature,
                                spec.omega_seed);
    if (!samples.ok()) return samples.status();
    train_sets.emplace(size, *std::move(samples));
  }

  const fs::path out(spec.out_dir);
  std::error_code ec;
  fs::create_directories(out / "logs", ec);
  fs::create_directories(out / "checkpoints", ec);
  if (ec) {
    return absl::PermissionDeniedError(absl::StrCat("cannot create ", spec.out_dir, ": ", ec.message()));
  }

  std::vector<Cell> cells;
  for (int size : sizes) {
    for (int d : spec.widths) {
      for (uint64_t seed : spec.seeds) cells.push_back({size, d, seed});
    }
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return std::tie(a.train_size, a.d, a.seed) < std::tie(b.train_size, b.d, b.seed);
  });
  cells.erase(std::unique(cells.begin(), cells.end(),
                          [](const Cell& a, const Cell& b) {
                            return std::tie(a.train_size, a.d, a.seed) ==
                                   std::tie(b.train_size, b.d, b.seed);
                          }),
              cells.end());

  auto run_cell = [&](const Cell& cell) -> absl::StatusOr<ResultRow> {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<Sample>& train = train_sets.at(cell.train_size);
    GnnConfig cfg;
    cfg.depth = spec.depth;
    cfg.width = cell.d;
    cfg.readout = ReadoutFor(spec.task);
    cfg.random_feature = spec.random_feature;
    cfg.init = spec.init;
    auto model = GnnModel::Create(cfg, cell.seed);
    if (!model.ok()) return model.status();

    TrainConfig tc;
    tc.adam.learning_rate = spec.learning_rate;
    tc.task = spec.task;
    tc.batch_size = spec.batch_size;
    tc.seed = cell.seed;
    tc.eval_every = spec.eval_every;
    tc.target_error = spec.target_error;
    tc.normalize_inputs = spec.normalize_inputs;
    tc.epochs = spec.epochs;
    if (spec.steps.has_value()) {
      const int64_t per_epoch =
          (static_cast<int64_t>(train.size()) + spec.batch_size - 1) / spec.batch_size;
      tc.epochs = static_cast<int>((*spec.steps + per_epoch - 1) / per_epoch);
    }
    auto result = Train(*model, train, tc);
    if (!result.ok()) return result.status();

    ResultRow row;
    row.experiment = spec.name;
    row.task = std::string(TaskToString(spec.task));
    row.variant = train_ds->manifest.variant;
    row.d = cell.d;
    row.n_params = model->NumParameters();
    row.seed = cell.seed;
    row.train_size = cell.train_size;
    row.train_err = result->train_error;
    if (test.has_value()) {
      auto err = Evaluate(*model, *test, spec.task, result->scaling);
      if (!err.ok()) return err.status();
      row.test_err = *err;
    }
    row.epochs = result->epochs_run;
    row.manifest = spec.train_manifest;
    const std::string stem = CellStem(spec, cell);
    row.checkpoint = (out / "checkpoints" / (stem + ".json")).string();
    CheckpointMeta meta{cell.seed, spec.task, result->scaling, spec.omega_seed};
    if (absl::Status s = SaveCheckpoint(row.checkpoint, *model, meta); !s.ok()) return s;
    if (absl::Status s = WriteTextFile((out / "logs" / (stem + ".csv")).string(),
                                       TrainLogCsv(result->log));
        !s.ok()) {
      return s;
    }
    row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    return row;
  };

  std::vector<std::optional<ResultRow>> rows(cells.size());
  std::atomic<size_t> next{0};
  std::mutex mu;
  absl::Status first_error;
  auto worker = [&]() {
    for (size_t k = next++; k < cells.size(); k = next++) {
      {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error.ok()) return;
      }
      auto row = run_cell(cells[k]);
      std::lock_guard<std::mutex> lock(mu);
      if (!row.ok()) {
        if (first_error.ok()) first_error = row.status();
        return;
      }
      rows[k] = *std::move(row);
    }
  };
  const int jobs = std::min<int>(spec.jobs, static_cast<int>(cells.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  if (!first_error.ok()) return first_error;

  ExperimentResult result;
  for (auto& row : rows) result.rows.push_back(*std::move(row));
  result.results_path = (out / (spec.name + ".results.csv")).string();
  if (absl::Status s = WriteTextFile(result.results_path, ResultsCsv(result.rows)); !s.ok()) {
    return s;
  }
  return result;
}

double Median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

absl::StatusOr<std::vector<SummaryRow>> Summarize(const std::vector<ResultRow>& rows) {
  if (rows.empty()) return absl::InvalidArgumentError("no results to summarize");
  using Key = std::tuple<std::string, std::string, std::string, int, int>;
  std::map<Key, std::vector<const ResultRow*>> groups;
  for (const ResultRow& r : rows) {
    groups[{r.experiment, r.task, r.variant, r.train_size, r.d}].push_back(&r);
  }
  std::vector<SummaryRow> out;
  for (const auto& [key, members] : groups) {
    SummaryRow s;
    s.experiment = std::get<0>(key);
    s.task = std::get<1>(key);
    s.variant = std::get<2>(key);
    s.train_size = std::get<3>(key);
    s.d = std::get<4>(key);
    s.n_params = members.front()->n_params;
    s.num_seeds = static_cast<int>(members.size());
    std::vector<double> train, test;
    for (const ResultRow* r : members) {
      train.push_back(r->train_err);
      if (r->test_err.has_value()) test.push_back(*r->test_err);
    }
    s.train_err = Median(train);
    if (test.size() == members.size()) s.test_err = Median(test);
    out.push_back(std::move(s));
  }
  return out;
}

std::string SummaryText(const std::vector<SummaryRow>& summary) {
  std::string out;
  for (const SummaryRow& s : summary) {
    absl::StrAppendFormat(&out,
                          "%s task=%s variant=%s train_size=%d d=%d n_params=%d seeds=%d "
                          "train_err=%s",
                          s.experiment, s.task, s.variant, s.train_size, s.d, s.n_params,
                          s.num_seeds, FormatDouble(s.train_err));
    if (s.test_err.has_value()) {
      absl::StrAppend(&out, " test_err=", FormatDouble(*s.test_err));
    }
    out += "\n";
  }
  return out;
}

std::string PlotCsv(const std::vector<SummaryRow>& summary, Task task) {
  std::string out = "experiment,variant,d,n_params,train_size,train_err,test_err\n";
  for (const SummaryRow& s : summary) {
    if (s.task != TaskToString(task)) continue;
    absl::StrAppend(&out, s.experiment, ",", s.variant, ",", s.d, ",", s.n_params, ",",
                    s.train_size, ",", FormatDouble(s.train_err), ",",
                    s.test_err.has_value() ? FormatDouble(*s.test_err) : "", "\n");
  }
  return out;
}

absl::StatusOr<std::string> Report(const std::vector<std::string>& results_paths,
                                   const std::string& out_dir) {
  std::vector<ResultRow> rows;
  for (const std::string& path : results_paths) {
    auto text = ReadTextFile(path);
    if (!text.ok()) return text.status();
    auto parsed = ParseResultsCsv(*text);
    if (!parsed.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(path, ": ", parsed.status().message()));
    }
    rows.insert(rows.end(), parsed->begin(), parsed->end());
  }
  auto summary = Summarize(rows);
  if (!summary.ok()) return summary.status();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) return absl::PermissionDeniedError(absl::StrCat("cannot create ", out_dir));
  const std::string text = SummaryText(*summary);
  if (absl::Status s = WriteTextFile((fs::path(out_dir) / "summary.txt").string(), text);
      !s.ok()) {
    return s;
  }
  for (Task task : {Task::kFeas, Task::kObj, Task::kSolu}) {
    const bool present = std::any_of(summary->begin(), summary->end(), [&](const SummaryRow& s) {
      return s.task == TaskToString(task);
    });
    if (!present) continue;
    const std::string name = absl::StrCat("plot_", std::string(TaskToString(task)), ".csv");
    if (absl::Status s = WriteTextFile((fs::path(out_dir) / name).string(), PlotCsv(*summary, task));
        !s.ok()) {
      return s;
    }
  }
  return text;
}

}  // namespace milpgnn
