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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "absl/strings/str_split.h"
#include "gtest/gtest.h"
#include "milpgnn/checkpoint.h"
#include "milpgnn/dataset.h"
#include "milpgnn/experiment.h"
#include "milpgnn/generators.h"
#include "milpgnn/gnn.h"
#include "milpgnn/instance_io.h"

namespace milpgnn {
namespace {

namespace fs = std::filesystem;

std::string FreshDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("milpgnn_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

// Generates, writes and labels a dataset; returns the manifest path.
std::string MakeLabeled(const std::string& dir, Variant variant, uint64_t seed, int count,
                        LabelOptions options = {}) {
  GenConfig cfg;
  cfg.variant = variant;
  cfg.seed = seed;
  cfg.count = count;
  const std::string manifest = *WriteDataset(dir, cfg, *Generate(cfg));
  Dataset ds = *LoadDataset(manifest);
  EXPECT_TRUE(LabelDataset(&ds, options).ok());
  return manifest;
}

std::string MaskWallMs(const std::string& csv) {
  std::string out;
  const std::vector<std::string> lines = absl::StrSplit(csv, '\n');
  for (const std::string& line : lines) {
    std::vector<std::string> f = absl::StrSplit(line, ',');
    if (f.size() == 13) f[10] = "*";
    if (f.size() == 4) f[3] = "*";
    for (size_t k = 0; k < f.size(); ++k) out += (k ? "," : "") + f[k];
    out += "\n";
  }
  return out;
}

TEST(CheckpointTest, RoundTripReproducesOutputs) {
  GnnConfig cfg;
  cfg.width = 5;
  cfg.readout = Readout::kNode;
  cfg.random_feature = true;
  cfg.init = InitScheme::kFanInUniform;
  GnnModel model = *GnnModel::Create(cfg, 17);
  const CheckpointMeta meta{17, Task::kSolu, {0.25, 3.5}, 99};
  const LoadedModel loaded = *CheckpointFromJson(CheckpointToJson(model, meta));
  EXPECT_EQ(loaded.meta.seed, 17u);
  EXPECT_EQ(loaded.meta.task, Task::kSolu);
  EXPECT_EQ(loaded.meta.scaling.mean, 0.25);
  EXPECT_EQ(loaded.meta.scaling.stddev, 3.5);
  EXPECT_EQ(loaded.meta.omega_seed, std::optional<uint64_t>(99));
  EXPECT_EQ(loaded.model.config().width, 5);
  EXPECT_EQ(loaded.model.config().init, InitScheme::kFanInUniform);

  GenConfig gen;
  gen.count = 2;
  const MilpGraph g = *AttachRandomFeatures(EncodeGraph((*GenerateD1(gen))[0]),
                                            SampleRandomFeatures(6, 20, 99));
  // Perturb the weights so the check does not pass just by re-seeding.
  model.ForEachParameter([](const std::string&, double* v, double*, Eigen::Index size,
                            Eigen::Index, Eigen::Index) {
    for (Eigen::Index k = 0; k < size; ++k) v[k] += 0.001 * static_cast<double>(k % 7);
  });
  const EncodedGraph enc = EncodeFeatures(g);
  ASSERT_TRUE(model.SetInputNormalization(FitInputNormalization({&enc})).ok());
  const LoadedModel perturbed = *CheckpointFromJson(CheckpointToJson(model, meta));
  EXPECT_EQ(*model.ForwardNodes(g), *perturbed.model.ForwardNodes(g));
  EXPECT_EQ(perturbed.model.input_normalization().w_scale,
            model.input_normalization().w_scale);
}

TEST(CheckpointTest, RejectsBadDocuments) {
  GnnModel model = *GnnModel::Create(GnnConfig{}, 1);
  std::string text = CheckpointToJson(model, {});
  EXPECT_TRUE(CheckpointFromJson(text).ok());
  std::string wrong_version = text;
  wrong_version.replace(wrong_version.find("\"version\":1"), 11, "\"version\":9");
  EXPECT_EQ(CheckpointFromJson(wrong_version).status().code(),
            absl::StatusCode::kInvalidArgument);
  std::string wrong_width = text;
  wrong_width.replace(wrong_width.find("\"width\":8"), 9, "\"width\":7");
  EXPECT_FALSE(CheckpointFromJson(wrong_width).ok());
  EXPECT_FALSE(CheckpointFromJson("{}").ok());
  EXPECT_FALSE(CheckpointFromJson("not json").ok());
  EXPECT_FALSE(LoadCheckpoint("/nonexistent/ckpt.json").ok());
}

TEST(LabelDatasetTest, WritesReadableLabels) {
  const std::string dir = FreshDir("label_test");
  LabelOptions options;
  options.canonical = true;
  options.omega_seed = 5;
  const std::string manifest = MakeLabeled(dir, Variant::kD2Gen, 3, 4, options);
  Dataset ds = *LoadDataset(manifest);
  ASSERT_TRUE(LoadLabels(&ds).ok());
  ASSERT_EQ(ds.labels.size(), 4u);
  for (size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(ds.labels[k].label.feasible, k % 2 == 0);
    EXPECT_EQ(ds.labels[k].canonical_solution.has_value(), k % 2 == 0);
    if (k % 2 == 0) {
      EXPECT_EQ(ds.labels[k].omega_seed, std::optional<uint64_t>(5));
      // The canonical solution is optimal.
      EXPECT_NEAR(Objective(ds.instances[k], *ds.labels[k].canonical_solution),
                  *ds.labels[k].label.objective, 1e-7);
    }
  }
}

TEST(LabelDatasetTest, CanonicalNeedsRandomFeaturesOnFoldableData) {
  const std::string dir = FreshDir("label_foldable");
  GenConfig cfg;
  cfg.variant = Variant::kD2Gen;
  cfg.count = 2;
  Dataset ds = *LoadDataset(*WriteDataset(dir, cfg, *Generate(cfg)));
  LabelOptions options;
  options.canonical = true;
  EXPECT_EQ(LabelDataset(&ds, options).code(), absl::StatusCode::kFailedPrecondition);
}

TEST(BuildSamplesTest, TaskFilteringAndMismatches) {
  const std::string dir = FreshDir("samples_test");
  LabelOptions options;
  options.canonical = true;
  options.omega_seed = 5;
  const std::string manifest = MakeLabeled(dir, Variant::kD2Gen, 4, 6, options);
  Dataset ds = *LoadDataset(manifest);
  EXPECT_EQ(BuildSamples(ds, Task::kFeas, -1, false, {}).status().code(),
            absl::StatusCode::kFailedPrecondition);
  ASSERT_TRUE(LoadLabels(&ds).ok());
  EXPECT_EQ(BuildSamples(ds, Task::kFeas, -1, true, 5)->size(), 6u);
  EXPECT_EQ(BuildSamples(ds, Task::kFeas, 4, true, 5)->size(), 4u);
  EXPECT_EQ(BuildSamples(ds, Task::kObj, 4, true, 5)->size(), 2u);
  const auto solu = *BuildSamples(ds, Task::kSolu, -1, true, 5);
  ASSERT_EQ(solu.size(), 3u);
  EXPECT_EQ(solu[0].solution, *ds.labels[0].canonical_solution);
  EXPECT_TRUE(solu[0].graph.random_features().has_value());
  EXPECT_EQ(BuildSamples(ds, Task::kSolu, -1, true, 6).status().code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(BuildSamples(ds, Task::kSolu, -1, false, {}).status().code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_FALSE(BuildSamples(ds, Task::kFeas, 7, false, {}).ok());
}

TEST(ResultsTest, CsvRoundTripAndMedians) {
  ResultRow a{"exp", "feas", "d1", 4, 100, 1, 20, 0.5, 0.25, 3, 12, "m.json", "c1.json"};
  ResultRow b = a, c = a;
  b.seed = 2;
  b.train_err = 0.1;
  b.test_err = 0.75;
  c.seed = 3;
  c.train_err = 0.3;
  c.test_err = std::nullopt;
  const auto rows = *ParseResultsCsv(ResultsCsv({a, b, c}));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].train_err, 0.5);
  EXPECT_EQ(rows[1].test_err, std::optional<double>(0.75));
  EXPECT_FALSE(rows[2].test_err.has_value());
  EXPECT_EQ(rows[2].checkpoint, "c1.json");
  EXPECT_FALSE(ParseResultsCsv("wrong,header\n").ok());

  EXPECT_EQ(Median({3.0}), 3.0);
  EXPECT_EQ(Median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(Median({4.0, 1.0, 2.0, 3.0}), 2.5);

  const auto single = *Summarize({a});
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].train_err, a.train_err);
  EXPECT_EQ(single[0].test_err, a.test_err);
  EXPECT_EQ(single[0].n_params, a.n_params);
  EXPECT_EQ(single[0].num_seeds, 1);

  const auto three = *Summarize({a, b, c});
  ASSERT_EQ(three.size(), 1u);
  EXPECT_EQ(three[0].train_err, 0.3);
  EXPECT_FALSE(three[0].test_err.has_value());
  EXPECT_EQ(three[0].num_seeds, 3);
  EXPECT_FALSE(Summarize({}).ok());

  const std::string plot = PlotCsv(*Summarize({a, b}), Task::kFeas);
  EXPECT_EQ(plot,
            "experiment,variant,d,n_params,train_size,train_err,test_err\n"
            "exp,d1,4,100,20,0.3,0.5\n");
  EXPECT_EQ(PlotCsv(*Summarize({a}), Task::kObj),
            "experiment,variant,d,n_params,train_size,train_err,test_err\n");
}

TEST(ExperimentSpecTest, JsonRoundTripAndValidation) {
  ExperimentSpec spec;
  spec.name = "gen";
  spec.task = Task::kObj;
  spec.train_manifest = "/data/train/manifest.json";
  spec.widths = {2, 8};
  spec.seeds = {1, 2, 3};
  spec.train_sizes = {10, 100};
  spec.random_feature = true;
  spec.omega_seed = 7;
  spec.steps = 1000;
  spec.target_error = 0.0;
  spec.out_dir = "/tmp/out";
  const ExperimentSpec back = *ExperimentSpecFromJson(ExperimentSpecToJson(spec));
  EXPECT_EQ(ExperimentSpecToJson(back), ExperimentSpecToJson(spec));
  EXPECT_FALSE(ExperimentSpecFromJson("{\"widthz\": [2]}").ok());
  EXPECT_FALSE(ExperimentSpecFromJson("{\"task\": \"sort\"}").ok());

  const ExperimentSpec rel =
      *ExperimentSpecFromJson("{\"train_manifest\": \"a/manifest.json\"}", "/base");
  EXPECT_EQ(rel.train_manifest, "/base/a/manifest.json");

  const std::string dir = FreshDir("spec_validate");
  spec.train_manifest = MakeLabeled(dir, Variant::kD1, 1, 4);
  spec.out_dir = dir;
  spec.train_sizes = {4};
  EXPECT_TRUE(ValidateSpec(spec).ok());
  spec.train_sizes = {5};
  EXPECT_FALSE(ValidateSpec(spec).ok());
  spec.train_sizes = {4};
  spec.omega_seed.reset();
  EXPECT_FALSE(ValidateSpec(spec).ok());
  spec.random_feature = false;
  EXPECT_TRUE(ValidateSpec(spec).ok());
  spec.train_manifest = dir + "/missing.json";
  EXPECT_EQ(ValidateSpec(spec).code(), absl::StatusCode::kNotFound);
}

TEST(RunExperimentTest, DeterministicAcrossJobCounts) {
  const std::string dir = FreshDir("experiment_run");
  ExperimentSpec spec;
  spec.name = "small";
  spec.train_manifest = MakeLabeled(dir + "/train", Variant::kD1, 11, 12);
  spec.test_manifest = MakeLabeled(dir + "/test", Variant::kD1, 12, 6);
  spec.widths = {4, 2};
  spec.seeds = {2, 1};
  spec.train_sizes = {12, 6};
  spec.epochs = 3;
  spec.batch_size = 4;

  spec.out_dir = dir + "/one";
  const ExperimentResult one = *RunExperiment(spec);
  spec.out_dir = dir + "/two";
  spec.jobs = 3;
  const ExperimentResult two = *RunExperiment(spec);

  ASSERT_EQ(one.rows.size(), 8u);
  for (size_t k = 1; k < one.rows.size(); ++k) {
    const auto& p = one.rows[k - 1];
    const auto& q = one.rows[k];
    EXPECT_LE(std::tie(p.train_size, p.d, p.seed), std::tie(q.train_size, q.d, q.seed));
  }
  std::string a = MaskWallMs(*ReadTextFile(one.results_path));
  std::string b = MaskWallMs(*ReadTextFile(two.results_path));
  // Output locations differ by construction.
  for (std::string* s : {&a, &b}) {
    for (const std::string& from : {dir + "/one", dir + "/two"}) {
      for (size_t pos; (pos = s->find(from)) != std::string::npos;) s->replace(pos, from.size(), "OUT");
    }
  }
  EXPECT_EQ(a, b);

  for (const ResultRow& r : one.rows) {
    EXPECT_EQ(r.variant, "d1");
    EXPECT_TRUE(r.test_err.has_value());
    EXPECT_EQ(r.manifest, spec.train_manifest);
    const LoadedModel loaded = *LoadCheckpoint(r.checkpoint);
    EXPECT_EQ(loaded.model.config().width, r.d);
    GnnModel model = loaded.model;
    EXPECT_EQ(model.NumParameters(), r.n_params);
  }
  const std::string log = (fs::path(spec.out_dir) / "logs" / "small_n6_d2_s1.csv").string();
  const std::string log_text = *ReadTextFile(log);
  EXPECT_EQ(log_text.substr(0, log_text.find('\n')), "epoch,loss,task_error,wall_ms");

  const std::string summary = *Report({one.results_path}, dir + "/report");
  EXPECT_NE(summary.find("small task=feas variant=d1 train_size=12 d=4"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir + "/report/summary.txt"));
  EXPECT_TRUE(fs::exists(dir + "/report/plot_feas.csv"));
  EXPECT_FALSE(fs::exists(dir + "/report/plot_obj.csv"));
}

TEST(RunExperimentTest, MissingLabelsFail) {
  const std::string dir = FreshDir("experiment_unlabeled");
  GenConfig cfg;
  cfg.count = 4;
  ExperimentSpec spec;
  spec.name = "x";
  spec.train_manifest = *WriteDataset(dir, cfg, *Generate(cfg));
  spec.out_dir = dir + "/out";
  EXPECT_EQ(RunExperiment(spec).status().code(), absl::StatusCode::kFailedPrecondition);
}

}  // namespace
}  // namespace milpgnn
