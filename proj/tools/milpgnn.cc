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

// Command-line front end: gen, label, analyze, canon, train, experiment,
// report. Every verb exits nonzero with a diagnostic on failure.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "milpgnn/canonical_order.h"
#include "milpgnn/checkpoint.h"
#include "milpgnn/dataset.h"
#include "milpgnn/experiment.h"
#include "milpgnn/generators.h"
#include "milpgnn/gnn.h"
#include "milpgnn/instance_io.h"
#include "milpgnn/milp_graph.h"
#include "milpgnn/train.h"
#include "milpgnn/wl.h"

namespace milpgnn {
namespace {

namespace fs = std::filesystem;

// Plain graph, or the graph with SampleRandomFeatures(m, n, seed) attached.
absl::StatusOr<MilpGraph> GraphFor(const MilpInstance& inst,
                                   std::optional<uint64_t> omega_seed) {
  MilpGraph g = EncodeGraph(inst);
  if (!omega_seed.has_value()) return g;
  return AttachRandomFeatures(
      g, SampleRandomFeatures(inst.num_constraints(), inst.num_variables(), *omega_seed));
}

struct GenArgs {
  std::string variant = "d1";
  uint64_t seed = 0;
  int count = 1;
  int m = 6;
  int n = 20;
  int nnz = 60;
  int rejection_limit = 1000;
  std::string out;
};

absl::Status RunGen(const GenArgs& args) {
  auto variant = VariantFromString(args.variant);
  if (!variant.ok()) return variant.status();
  GenConfig cfg;
  cfg.variant = *variant;
  cfg.seed = args.seed;
  cfg.count = args.count;
  cfg.m = args.m;
  cfg.n = args.n;
  cfg.nnz = args.nnz;
  cfg.rejection_limit = args.rejection_limit;
  GenStats stats;
  auto insts = Generate(cfg, &stats);
  if (!insts.ok()) return insts.status();
  auto manifest = WriteDataset(args.out, cfg, *insts);
  if (!manifest.ok()) return manifest.status();
  std::cout << "wrote " << insts->size() << " instances to " << *manifest;
  if (cfg.variant == Variant::kD1) std::cout << " (rejected " << stats.rejected << " foldable draws)";
  std::cout << "\n";
  return absl::OkStatus();
}

struct LabelArgs {
  std::vector<std::string> inputs;
  bool canonical = false;
  std::optional<uint64_t> omega_seed;
  std::string out;
};

absl::Status RunLabel(const LabelArgs& args) {
  LabelOptions options;
  options.canonical = args.canonical;
  options.omega_seed = args.omega_seed;
  if (!args.out.empty() && args.inputs.size() != 1) {
    return absl::InvalidArgumentError("--out needs exactly one input instance");
  }
  int labeled = 0, feasible = 0;
  for (const std::string& input : args.inputs) {
    auto text = ReadTextFile(input);
    if (!text.ok()) return text.status();
    if (ManifestFromJson(*text).ok()) {
      if (!args.out.empty()) {
        return absl::InvalidArgumentError("--out applies to single instance files only");
      }
      auto ds = LoadDataset(input);
      if (!ds.ok()) return ds.status();
      if (absl::Status s = LabelDataset(&*ds, options); !s.ok()) return s;
      for (const LabelRecord& r : ds->labels) feasible += r.label.feasible ? 1 : 0;
      labeled += static_cast<int>(ds->labels.size());
      continue;
    }
    auto inst = InstanceFromJson(*text);
    if (!inst.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(input, ": ", inst.status().message()));
    }
    auto record = LabelInstance(*inst, options);
    if (!record.ok()) return record.status();
    const std::string path = args.out.empty() ? LabelPath(input) : args.out;
    if (absl::Status s = WriteTextFile(path, LabelToJson(*record)); !s.ok()) return s;
    feasible += record->label.feasible ? 1 : 0;
    ++labeled;
  }
  std::cout << "labeled " << labeled << " instances (" << feasible << " feasible)\n";
  return absl::OkStatus();
}

struct AnalyzeArgs {
  std::string input;
  std::optional<uint64_t> omega_seed;
  double tolerance = 0.0;
  std::string dump_colors;
};

absl::Status RunAnalyze(const AnalyzeArgs& args) {
  auto inst = ReadInstanceFile(args.input);
  if (!inst.ok()) return inst.status();
  auto g = GraphFor(*inst, args.omega_seed);
  if (!g.ok()) return g.status();
  WlOptions options;
  options.fold_tolerance = args.tolerance;
  const ColoringResult res = RefineColors(*g, options);
  std::cout << "rounds: " << res.rounds << "\n"
            << "blocks: s=" << res.v_partition.size() << " t=" << res.w_partition.size() << "\n"
            << "is_discrete: " << (res.is_discrete ? "true" : "false") << "\n"
            << "foldable: " << (res.is_discrete ? "no" : "yes") << "\n";
  if (!args.dump_colors.empty()) {
    std::string csv = "round,side,index,color\n";
    for (size_t r = 0; r < res.history.size(); ++r) {
      for (size_t i = 0; i < res.history[r].v.size(); ++i) {
        absl::StrAppend(&csv, r, ",V,", i, ",", res.history[r].v[i], "\n");
      }
      for (size_t j = 0; j < res.history[r].w.size(); ++j) {
        absl::StrAppend(&csv, r, ",W,", j, ",", res.history[r].w[j], "\n");
      }
    }
    if (absl::Status s = WriteTextFile(args.dump_colors, csv); !s.ok()) return s;
  }
  return absl::OkStatus();
}

absl::Status RunCanon(const std::string& input, std::optional<uint64_t> omega_seed) {
  auto inst = ReadInstanceFile(input);
  if (!inst.ok()) return inst.status();
  auto g = GraphFor(*inst, omega_seed);
  if (!g.ok()) return g.status();
  auto order = SortGraph(*g);
  if (!order.ok()) return order.status();
  std::cout << "[" << absl::StrJoin(order->sigma_w, ", ") << "]\n";
  return absl::OkStatus();
}

struct TrainArgs {
  std::string train;
  std::string test;
  std::string task = "feas";
  int count = -1;
  int width = 8;
  int depth = 2;
  std::string init = "glorot_uniform";
  bool raw_inputs = false;
  int epochs = 100;
  int batch_size = 10;
  double lr = 1e-4;
  uint64_t seed = 0;
  std::optional<uint64_t> omega_seed;
  int eval_every = 0;
  std::optional<double> target_error;
  std::string out = ".";
};

absl::Status RunTrain(const TrainArgs& args) {
  auto task = TaskFromString(args.task);
  if (!task.ok()) return task.status();
  auto init = InitSchemeFromString(args.init);
  if (!init.ok()) return init.status();
  auto load = [&](const std::string& manifest, int count) -> absl::StatusOr<std::vector<Sample>> {
    auto ds = LoadDataset(manifest);
    if (!ds.ok()) return ds.status();
    if (absl::Status s = LoadLabels(&*ds); !s.ok()) {
      return absl::FailedPreconditionError(absl::StrCat("missing labels: ", s.message()));
    }
    return BuildSamples(*ds, *task, count, args.omega_seed.has_value(), args.omega_seed);
  };
  auto train = load(args.train, args.count);
  if (!train.ok()) return train.status();

  GnnConfig cfg;
  cfg.depth = args.depth;
  cfg.width = args.width;
  cfg.readout = ReadoutFor(*task);
  cfg.random_feature = args.omega_seed.has_value();
  cfg.init = *init;
  auto model = GnnModel::Create(cfg, args.seed);
  if (!model.ok()) return model.status();
  TrainConfig tc;
  tc.adam.learning_rate = args.lr;
  tc.task = *task;
  tc.epochs = args.epochs;
  tc.batch_size = args.batch_size;
  tc.seed = args.seed;
  tc.eval_every = args.eval_every;
  tc.target_error = args.target_error;
  tc.normalize_inputs = !args.raw_inputs;
  auto result = Train(*model, *train, tc);
  if (!result.ok()) return result.status();

  std::error_code ec;
  fs::create_directories(args.out, ec);
  const std::string log = (fs::path(args.out) / "train_log.csv").string();
  const std::string ckpt = (fs::path(args.out) / "checkpoint.json").string();
  if (absl::Status s = WriteTextFile(log, TrainLogCsv(result->log)); !s.ok()) return s;
  const CheckpointMeta meta{args.seed, *task, result->scaling, args.omega_seed};
  if (absl::Status s = SaveCheckpoint(ckpt, *model, meta); !s.ok()) return s;
  std::cout << "epochs: " << result->epochs_run << "\n"
            << "train_err: " << FormatDouble(result->train_error) << "\n";
  if (!args.test.empty()) {
    auto test = load(args.test, -1);
    if (!test.ok()) return test.status();
    auto err = Evaluate(*model, *test, *task, result->scaling);
    if (!err.ok()) return err.status();
    std::cout << "test_err: " << FormatDouble(*err) << "\n";
  }
  std::cout << "log: " << log << "\ncheckpoint: " << ckpt << "\n";
  return absl::OkStatus();
}

struct ExperimentArgs {
  std::string config;
  std::optional<uint64_t> seed;
  std::string out;
  std::optional<int> jobs;
  std::optional<int> epochs;
};

absl::Status RunExperimentVerb(const ExperimentArgs& args) {
  auto text = ReadTextFile(args.config);
  if (!text.ok()) return text.status();
  auto spec = ExperimentSpecFromJson(*text, fs::path(args.config).parent_path().string());
  if (!spec.ok()) return spec.status();
  if (args.seed.has_value()) spec->seeds = {*args.seed};
  if (!args.out.empty()) spec->out_dir = args.out;
  if (args.jobs.has_value()) spec->jobs = *args.jobs;
  if (args.epochs.has_value()) spec->epochs = *args.epochs;
  auto result = RunExperiment(*spec);
  if (!result.ok()) return result.status();
  std::cout << "wrote " << result->rows.size() << " rows to " << result->results_path << "\n";
  return absl::OkStatus();
}

absl::Status RunReport(const std::vector<std::string>& inputs, const std::string& out) {
  auto text = Report(inputs, out);
  if (!text.ok()) return text.status();
  std::cout << *text;
  return absl::OkStatus();
}

int Main(int argc, char** argv) {
  CLI::App app{"MILP graph encoding, WL analysis, exact labels and GNN training"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a dataset");
  gen_cmd->set_config("--config", "", "TOML/INI file with option defaults");
  gen_cmd->add_option("--variant", gen.variant, "d1, d2, d2gen or counterexample");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--count", gen.count, "Number of instances");
  gen_cmd->add_option("--m", gen.m, "Constraints");
  gen_cmd->add_option("--n", gen.n, "Variables");
  gen_cmd->add_option("--nnz", gen.nnz, "Nonzeros per d1 instance");
  gen_cmd->add_option("--rejection-limit", gen.rejection_limit, "Consecutive foldable d1 draws tolerated");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  LabelArgs label;
  std::optional<uint64_t> label_seed;
  CLI::App* label_cmd = app.add_subcommand("label", "Label instance files or dataset manifests");
  label_cmd->set_config("--config", "", "TOML/INI file with option defaults");
  label_cmd->add_option("inputs", label.inputs, "Instance files or manifest.json")->required();
  label_cmd->add_flag("--canonical", label.canonical, "Also compute canonical optimal solutions");
  label_cmd->add_option("--omega-seed,--seed", label_seed, "Order canonical solutions with these random features");
  label_cmd->add_option("--out", label.out, "Label path (single instance only)");

  AnalyzeArgs analyze;
  std::optional<uint64_t> analyze_seed;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "WL color refinement of an instance");
  analyze_cmd->set_config("--config", "", "TOML/INI file with option defaults");
  analyze_cmd->add_option("input", analyze.input, "Instance file")->required();
  analyze_cmd->add_option("--omega-seed,--seed", analyze_seed, "Attach random features from this seed");
  analyze_cmd->add_option("--tolerance", analyze.tolerance, "Bucket width for real values (0 = exact)");
  analyze_cmd->add_option("--dump-colors,--out", analyze.dump_colors, "Write per-round colors as CSV");

  std::string canon_input;
  std::optional<uint64_t> canon_seed;
  CLI::App* canon_cmd = app.add_subcommand("canon", "Print the canonical variable order");
  canon_cmd->set_config("--config", "", "TOML/INI file with option defaults");
  canon_cmd->add_option("input", canon_input, "Instance file")->required();
  canon_cmd->add_option("--omega-seed,--seed", canon_seed, "Attach random features from this seed");

  TrainArgs train;
  std::optional<uint64_t> train_omega;
  std::optional<double> train_target;
  CLI::App* train_cmd = app.add_subcommand("train", "Train one model");
  train_cmd->set_config("--config", "", "TOML/INI file with option defaults");
  train_cmd->add_option("--train", train.train, "Labeled training manifest")->required();
  train_cmd->add_option("--test", train.test, "Labeled test manifest");
  train_cmd->add_option("--task", train.task, "feas, obj or solu");
  train_cmd->add_option("--count", train.count, "Leading training instances to use (-1 = all)");
  train_cmd->add_option("--width,-d", train.width, "Embedding size");
  train_cmd->add_option("--depth", train.depth, "Message-passing layers");
  train_cmd->add_option("--init", train.init, "glorot_uniform or fan_in_uniform");
  train_cmd->add_flag("--raw-inputs", train.raw_inputs,
                      "Skip input standardization with training-set statistics");
  train_cmd->add_option("--epochs", train.epochs, "Maximum epochs");
  train_cmd->add_option("--batch-size", train.batch_size, "Minibatch size");
  train_cmd->add_option("--lr", train.lr, "Adam learning rate");
  train_cmd->add_option("--seed", train.seed, "Model and shuffle seed");
  train_cmd->add_option("--omega-seed", train_omega, "Use shared random features from this seed");
  train_cmd->add_option("--eval-every", train.eval_every, "Epochs between early-stop checks");
  train_cmd->add_option("--target-error", train_target, "Stop once the training error reaches this");
  train_cmd->add_option("--out", train.out, "Directory for train_log.csv and checkpoint.json");

  ExperimentArgs experiment;
  std::optional<uint64_t> experiment_seed;
  std::optional<int> experiment_jobs, experiment_epochs;
  CLI::App* experiment_cmd = app.add_subcommand("experiment", "Run an experiment spec");
  experiment_cmd->add_option("--config", experiment.config, "Experiment spec JSON")->required();
  experiment_cmd->add_option("--seed", experiment_seed, "Run this single seed instead of the spec's");
  experiment_cmd->add_option("--out", experiment.out, "Override out_dir");
  experiment_cmd->add_option("--jobs", experiment_jobs, "Override concurrent cells");
  experiment_cmd->add_option("--epochs", experiment_epochs, "Override maximum epochs");

  std::vector<std::string> report_inputs;
  std::string report_out = ".";
  CLI::App* report_cmd = app.add_subcommand("report", "Aggregate results CSVs over seeds");
  report_cmd->set_config("--config", "", "TOML/INI file with option defaults");
  report_cmd->add_option("results", report_inputs, "Results CSV files")->required();
  report_cmd->add_option("--out", report_out, "Directory for summary.txt and plot CSVs");

  CLI11_PARSE(app, argc, argv);

  absl::Status status;
  if (gen_cmd->parsed()) {
    status = RunGen(gen);
  } else if (label_cmd->parsed()) {
    label.omega_seed = label_seed;
    status = RunLabel(label);
  } else if (analyze_cmd->parsed()) {
    analyze.omega_seed = analyze_seed;
    status = RunAnalyze(analyze);
  } else if (canon_cmd->parsed()) {
    status = RunCanon(canon_input, canon_seed);
  } else if (train_cmd->parsed()) {
    train.omega_seed = train_omega;
    train.target_error = train_target;
    status = RunTrain(train);
  } else if (experiment_cmd->parsed()) {
    experiment.seed = experiment_seed;
    experiment.jobs = experiment_jobs;
    experiment.epochs = experiment_epochs;
    status = RunExperimentVerb(experiment);
  } else if (report_cmd->parsed()) {
    status = RunReport(report_inputs, report_out);
  }
  if (!status.ok()) {
    std::cerr << "error: " << status << "\n";
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace milpgnn

int main(int argc, char** argv) { return milpgnn::Main(argc, argv); }
