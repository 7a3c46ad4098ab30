// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/tools/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "vad/error.hpp"
#include "vad/eval/evaluate.hpp"
#include "vad/features/feature_file.hpp"
#include "vad/features/synthetic.hpp"
#include "vad/mil/checkpoint.hpp"
#include "vad/mil/trainer.hpp"
#include "vad/tsa/topk.hpp"

namespace fs = std::filesystem;

namespace vad::tools {

namespace {

using Clock = std::chrono::steady_clock;

struct DataPaths {
  std::string dir;
  std::string train;
  std::string test;
  std::string truth;

  void resolve() {
    if (dir.empty()) return;
    if (train.empty()) train = (fs::path(dir) / features::kTrainManifestName).string();
    if (test.empty()) test = (fs::path(dir) / features::kTestManifestName).string();
    if (truth.empty()) truth = (fs::path(dir) / features::kGroundTruthName).string();
  }
  void require(bool need_train, bool need_test) const {
    if (need_train && train.empty()) throw CLI::RequiredError("--manifest (or --data)");
    if (need_test && test.empty()) throw CLI::RequiredError("--test-manifest (or --data)");
    if (need_test && truth.empty()) throw CLI::RequiredError("--ground-truth (or --data)");
  }
};

struct TrainFlags {
  mil::TrainConfig cfg;
  bool no_tsa = false;
  bool straight_through = false;

  mil::TrainConfig resolved() const {
    mil::TrainConfig c = cfg;
    c.tsa_enabled = !no_tsa;
    c.tsa.gradient = straight_through ? tsa::SelectionGradient::kStraightThrough : tsa::SelectionGradient::kPerturbed;
    return c;
  }
};

void add_data_options(CLI::App* app, DataPaths& p, bool train, bool test) {
  app->add_option("--data", p.dir, "Dataset directory written by `gen`");
  if (train) app->add_option("--manifest", p.train, "Training manifest JSON");
  if (test) {
    app->add_option("--test-manifest", p.test, "Test manifest JSON");
    app->add_option("--ground-truth", p.truth, "Frame-level ground truth JSON");
  }
}

void add_train_options(CLI::App* app, TrainFlags& f, bool with_seed) {
  mil::TrainConfig& c = f.cfg;
  if (with_seed) app->add_option("--seed", c.seed, "Seed for initialization, batching, dropout and noise");
  app->add_option("--r", c.tsa.ratio, "Selection ratio, kappa = floor(T * r)")->check(CLI::Range(0.0, 1.0));
  app->add_option("--alpha", c.dmt.alpha, "Top-alpha snippets in the margin and BCE terms");
  app->add_option("--margin", c.dmt.margin, "Margin m of the hinge");
  app->add_option("--sigma-noise", c.tsa.sigma, "Std of the perturbation noise");
  app->add_option("--samples", c.tsa.samples, "Perturbed samples M");
  app->add_option("--epochs", c.epochs, "Optimizer steps (one sampled batch each)");
  app->add_option("--batch", c.half_batch, "Bags per class per batch (B)");
  app->add_option("--T", c.length, "Snippets per bag after temporal normalization");
  app->add_option("--lr", c.lr, "Adam learning rate");
  app->add_option("--weight-decay", c.weight_decay, "L2 weight decay");
  app->add_option("--dropout", c.dropout, "Classifier dropout probability");
  app->add_option("--margin-weight", c.dmt.margin_weight, "Weight of the margin term");
  app->add_option("--bce-weight", c.dmt.bce_weight, "Weight of the BCE term");
  app->add_option("--scorer-hidden", c.model.scorer_hidden1, "First hidden width of the snippet scorer");
  app->add_option("--scorer-hidden2", c.model.scorer_hidden2, "Second hidden width of the snippet scorer");
  app->add_flag("--no-tsa", f.no_tsa, "Disable temporal self-attention");
  app->add_flag("--straight-through", f.straight_through, "Straight-through selection gradient");
}

void write_text(const fs::path& path, const std::string& text) { features::write_file(path, text); }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

mil::TrainResult run_training(const features::Dataset& train_set, const mil::TrainConfig& cfg,
                              const features::Dataset* val_set, const features::GroundTruth* truth) {
  mil::TrainConfig c = cfg;
  c.model.d = train_set.manifest.d;
  mil::Validator validator;
  if (val_set != nullptr && c.validate_every > 0) {
    validator = [&](mil::ModelParams& model) {
      const eval::InferConfig inf{c.tsa_enabled, c.tsa, c.seed};
      return eval::evaluate(*val_set, *truth, model, inf).report.auc_roc;
    };
  }
  return mil::train(train_set, c, validator);
}

nlohmann::json checkpoint_metadata(const mil::TrainConfig& cfg, std::size_t d) {
  mil::TrainConfig c = cfg;
  c.model.d = d;
  return {{"train", mil::to_json(c)}};
}

eval::EvalResult evaluate_model(mil::ModelParams& model, const mil::TrainConfig& cfg, const features::Dataset& test,
                                const features::GroundTruth& truth, std::uint64_t eval_seed) {
  const eval::InferConfig inf{cfg.tsa_enabled, cfg.tsa, eval_seed};
  return eval::evaluate(test, truth, model, inf, checkpoint_metadata(cfg, model.shape.d));
}

void write_timing(const fs::path& dir, const char* what, Clock::time_point start, std::ostream& err) {
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  err << what << ": " << format_double(seconds) << " s\n";
  write_text(dir / "timing.json", nlohmann::json{{what, seconds}}.dump(2) + "\n");
}

// gen ------------------------------------------------------------------------

struct GenFlags {
  std::string out;
  std::string preset = "default";
  std::uint64_t seed = 0;
  std::optional<std::size_t> n_normal, n_abnormal, d, delta, min_frames, max_frames, eps_min, eps_max;
  std::optional<double> shift;
};

int run_gen(const GenFlags& f, std::ostream& out) {
  features::SyntheticConfig cfg =
      f.preset == "hard" ? features::hard_synthetic_config(f.seed) : features::default_synthetic_config(f.seed);
  // Per-coordinate shift in noise standard deviations; kept when d changes.
  const double per_coord = cfg.anomaly_shift / (cfg.noise_std * std::sqrt(static_cast<double>(cfg.d)));
  if (f.n_normal) cfg.n_normal = *f.n_normal;
  if (f.n_abnormal) cfg.n_abnormal = *f.n_abnormal;
  if (f.d) cfg.d = *f.d;
  if (f.delta) cfg.delta = *f.delta;
  if (f.min_frames) cfg.min_frames = *f.min_frames;
  if (f.max_frames) cfg.max_frames = *f.max_frames;
  if (f.eps_min) cfg.epsilon_min = *f.eps_min;
  if (f.eps_max) cfg.epsilon_max = *f.eps_max;
  cfg.anomaly_shift = (f.shift ? *f.shift : per_coord) * cfg.noise_std * std::sqrt(static_cast<double>(cfg.d));
  const features::SyntheticDataset data = features::generate_synthetic(cfg);
  features::write_synthetic(data, f.out);
  out << "wrote " << data.train.records.size() << " train and " << data.test.records.size() << " test videos to "
      << f.out << "\n";
  return kExitOk;
}

// train / eval -----------------------------------------------------------------

int run_train(DataPaths paths, const TrainFlags& f, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  paths.resolve();
  paths.require(true, false);
  const auto start = Clock::now();
  const features::Dataset train_set = features::load_dataset(paths.train);
  std::optional<features::Dataset> val;
  std::optional<features::GroundTruth> truth;
  const mil::TrainConfig cfg = f.resolved();
  if (cfg.validate_every > 0) {
    paths.require(true, true);
    val = features::load_dataset(paths.test);
    truth = features::load_ground_truth(paths.truth);
  }
  mil::TrainResult result = run_training(train_set, cfg, val ? &*val : nullptr, truth ? &*truth : nullptr);
  const fs::path dir(out_dir);
  mil::save_checkpoint(dir / "model.vadc", result.model, checkpoint_metadata(cfg, train_set.manifest.d));
  std::ostringstream log;
  mil::write_training_log(log, result.log);
  write_text(dir / "train_log.csv", log.str());
  if (!result.log.empty()) {
    out << "epochs " << result.log.size() << ", loss " << format_double(result.log.front().loss) << " -> "
        << format_double(result.log.back().loss) << "\n";
  }
  out << "checkpoint " << (dir / "model.vadc").string() << "\n";
  write_timing(dir, "train_seconds", start, err);
  return kExitOk;
}

int run_eval(DataPaths paths, const std::string& checkpoint, std::uint64_t seed, const std::string& out_dir,
             std::ostream& out, std::ostream& err) {
  paths.resolve();
  paths.require(false, true);
  const auto start = Clock::now();
  mil::Checkpoint ckpt = mil::load_checkpoint(checkpoint);
  if (!ckpt.metadata.contains("train")) throw FormatError(checkpoint + ": metadata lacks the training config");
  const mil::TrainConfig cfg = mil::train_config_from_json(ckpt.metadata.at("train"));
  const features::Dataset test = features::load_dataset(paths.test);
  const features::GroundTruth truth = features::load_ground_truth(paths.truth);
  const eval::EvalResult result = evaluate_model(ckpt.model, cfg, test, truth, seed);
  const fs::path dir(out_dir);
  write_text(dir / "report.json", eval::report_to_json(result.report));
  std::ostringstream csv;
  eval::write_frame_csv(csv, result);
  write_text(dir / "frames.csv", csv.str());
  out << "auc_roc " << format_double(result.report.auc_roc) << "\nauc_pr " << format_double(result.report.auc_pr)
      << "\n";
  write_timing(dir, "eval_seconds", start, err);
  return kExitOk;
}

// sweep-r / ablate -----------------------------------------------------------

double train_and_score(const features::Dataset& train_set, const features::Dataset& test,
                       const features::GroundTruth& truth, const mil::TrainConfig& cfg) {
  mil::TrainResult result = run_training(train_set, cfg, nullptr, nullptr);
  return evaluate_model(result.model, cfg, test, truth, cfg.seed).report.auc_roc;
}

int run_sweep(DataPaths paths, const TrainFlags& f, const std::vector<double>& grid, const std::string& out_dir,
              std::ostream& out, std::ostream& err) {
  paths.resolve();
  paths.require(true, true);
  const auto start = Clock::now();
  const features::Dataset train_set = features::load_dataset(paths.train);
  const features::Dataset test = features::load_dataset(paths.test);
  const features::GroundTruth truth = features::load_ground_truth(paths.truth);
  std::string csv = "r,kappa,auc_roc\n";
  for (double r : grid) {
    mil::TrainConfig cfg = f.resolved();
    cfg.tsa.ratio = r;
    const double auc = train_and_score(train_set, test, truth, cfg);
    const std::string line = format_double(r) + "," + std::to_string(tsa::kappa_from_ratio(cfg.length, r)) + "," +
                             format_double(auc) + "\n";
    csv += line;
    out << line;
  }
  write_text(fs::path(out_dir) / "sweep_r.csv", csv);
  write_timing(out_dir, "sweep_seconds", start, err);
  return kExitOk;
}

int run_ablate(DataPaths paths, const TrainFlags& f, const std::vector<std::uint64_t>& seeds,
               const std::string& out_dir, std::ostream& out, std::ostream& err) {
  paths.resolve();
  paths.require(true, true);
  const auto start = Clock::now();
  const features::Dataset train_set = features::load_dataset(paths.train);
  const features::Dataset test = features::load_dataset(paths.test);
  const features::GroundTruth truth = features::load_ground_truth(paths.truth);
  std::string csv = "seed,auc_tsa_on,auc_tsa_off,delta\n";
  double total = 0.0;
  for (std::uint64_t seed : seeds) {
    mil::TrainConfig cfg = f.resolved();
    cfg.seed = seed;
    cfg.tsa_enabled = true;
    const double on = train_and_score(train_set, test, truth, cfg);
    cfg.tsa_enabled = false;
    const double off = train_and_score(train_set, test, truth, cfg);
    total += on - off;
    const std::string line = std::to_string(seed) + "," + format_double(on) + "," + format_double(off) + "," +
                             format_double(on - off) + "\n";
    csv += line;
    out << line;
  }
  const double mean = seeds.empty() ? 0.0 : total / static_cast<double>(seeds.size());
  out << "mean_delta " << format_double(mean) << "\n";
  write_text(fs::path(out_dir) / "ablate.csv", csv);
  write_text(fs::path(out_dir) / "ablate.json", nlohmann::json{{"mean_delta", mean}, {"seeds", seeds}}.dump(2) + "\n");
  write_timing(out_dir, "ablate_seconds", start, err);
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weakly-supervised video anomaly detection on snippet features"};
  app.name(args.empty() ? "vad" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);

  GenFlags gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Write a synthetic dataset");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--preset", gen.preset, "default or hard")->check(CLI::IsMember({"default", "hard"}));
  gen_cmd->add_option("--n-normal", gen.n_normal, "Normal videos per split");
  gen_cmd->add_option("--n-abnormal", gen.n_abnormal, "Abnormal videos per split");
  gen_cmd->add_option("--d", gen.d, "Feature dimension");
  gen_cmd->add_option("--delta", gen.delta, "Frames per snippet");
  gen_cmd->add_option("--min-frames", gen.min_frames, "Minimum frames per video");
  gen_cmd->add_option("--max-frames", gen.max_frames, "Maximum frames per video");
  gen_cmd->add_option("--eps-min", gen.eps_min, "Minimum abnormal snippets per abnormal video");
  gen_cmd->add_option("--eps-max", gen.eps_max, "Maximum abnormal snippets per abnormal video");
  gen_cmd->add_option("--shift", gen.shift, "Per-coordinate anomaly shift in noise standard deviations");

  DataPaths train_paths;
  TrainFlags train_flags;
  std::string train_out;
  CLI::App* train_cmd = app.add_subcommand("train", "Fit a model and write a checkpoint");
  add_data_options(train_cmd, train_paths, true, true);
  add_train_options(train_cmd, train_flags, true);
  train_cmd->add_option("--validate-every", train_flags.cfg.validate_every, "Validation AUC period, 0 = off");
  train_cmd->add_option("--out", train_out, "Output directory")->required();

  DataPaths eval_paths;
  std::string checkpoint, eval_out;
  std::uint64_t eval_seed = 0;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score a test split and write a report");
  add_data_options(eval_cmd, eval_paths, false, true);
  eval_cmd->add_option("--manifest", eval_paths.test, "Alias of --test-manifest");
  eval_cmd->add_option("--checkpoint", checkpoint, "Checkpoint written by `train`")->required();
  eval_cmd->add_option("--seed", eval_seed, "Seed of the inference noise");
  eval_cmd->add_option("--out", eval_out, "Output directory")->required();

  DataPaths sweep_paths;
  TrainFlags sweep_flags;
  std::vector<double> grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::string sweep_out;
  CLI::App* sweep_cmd = app.add_subcommand("sweep-r", "Train and evaluate over a grid of selection ratios");
  add_data_options(sweep_cmd, sweep_paths, true, true);
  add_train_options(sweep_cmd, sweep_flags, true);
  sweep_cmd->add_option("--r-grid", grid, "Ratios to try")->delimiter(',');
  sweep_cmd->add_option("--out", sweep_out, "Output directory")->required();

  DataPaths ablate_paths;
  TrainFlags ablate_flags;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::string ablate_out;
  CLI::App* ablate_cmd = app.add_subcommand("ablate", "Paired TSA on / off runs over several seeds");
  add_data_options(ablate_cmd, ablate_paths, true, true);
  add_train_options(ablate_cmd, ablate_flags, false);
  ablate_cmd->add_option("--seeds", seeds, "Seeds to pair")->delimiter(',');
  ablate_cmd->add_option("--out", ablate_out, "Output directory")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("vad");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (*gen_cmd) return run_gen(gen, out);
    if (*train_cmd) return run_train(train_paths, train_flags, train_out, out, err);
    if (*eval_cmd) return run_eval(eval_paths, checkpoint, eval_seed, eval_out, out, err);
    if (*sweep_cmd) return run_sweep(sweep_paths, sweep_flags, grid, sweep_out, out, err);
    if (*ablate_cmd) return run_ablate(ablate_paths, ablate_flags, seeds, ablate_out, out, err);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace vad::tools
