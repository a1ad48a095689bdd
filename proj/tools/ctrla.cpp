/**
 * Copyright 2026 The ctrla Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// ctrla command-line entry point.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ctrla/augpool.hpp"
#include "ctrla/config.hpp"
#include "ctrla/evalstats.hpp"
#include "ctrla/kernels/kernels.hpp"
#include "ctrla/nn/models.hpp"
#include "ctrla/plant.hpp"
#include "ctrla/ror.hpp"
#include "ctrla/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRun = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

void write_json(const fs::path& file, const json& j) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot create '" + file.string() + "'");
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string config;
  std::string preset;
  std::string mode;
  std::string model;
  std::string output;
  std::string data_dir;
  std::optional<std::size_t> epochs, ops, subset, threads, ror_period;
  std::optional<std::uint64_t> seed;
  std::optional<double> setpoint;
  bool print_config = false;
};

ctrla::RunConfig resolve_train_config(const TrainArgs& a) {
  ctrla::RunConfig c;
  if (!a.config.empty()) {
    c = ctrla::load_run_config(a.config);
  } else if (a.preset.empty()) {
    throw UsageError("train needs --config or --preset");
  }
  if (!a.preset.empty()) ctrla::apply_preset(c, ctrla::find_preset(a.preset));
  auto& t = c.train;
  if (!a.mode.empty()) t.mode = ctrla::augment_mode_from_name(a.mode);
  if (!a.model.empty()) c.model = a.model;
  if (!a.output.empty()) c.output_dir = a.output;
  if (!a.data_dir.empty()) c.dataset.dir = a.data_dir;
  if (a.epochs) t.epochs = *a.epochs;
  if (a.ops) t.ops_per_sample = *a.ops;
  if (a.subset) c.dataset.subset = *a.subset;
  if (a.threads) t.threads = *a.threads;
  if (a.ror_period) t.ror_period = *a.ror_period;
  if (a.seed) t.seed = *a.seed;
  if (a.setpoint) t.setpoint = *a.setpoint;
  t.validate();
  return c;
}

int cmd_train(const TrainArgs& args) {
  const ctrla::RunConfig config = resolve_train_config(args);
  if (args.print_config) {
    std::cout << ctrla::to_json(config).dump(2) << '\n';
    return 0;
  }
  const fs::path dir = config.output_dir;
  fs::create_directories(dir);
  write_json(dir / "config.json", ctrla::to_json(config));

  const ctrla::Splits data = ctrla::prepare_data(config);
  std::cerr << "train " << data.train.size() << ", val " << data.val.size() << ", test "
            << data.test.size() << " images; kernels: " << ctrla::kernels::isa_name(ctrla::kernels::active_isa()) << '\n';
  auto model = ctrla::nn::make_model(config.model, data.train.height(), data.train.width(),
                                     data.train.num_classes, config.train.seed);

  std::ofstream phases(dir / "phases.jsonl");
  if (!phases) throw std::runtime_error("cannot create '" + (dir / "phases.jsonl").string() + "'");
  ctrla::TrainingHooks hooks;
  hooks.on_phase = [&](const ctrla::PhaseLogRecord& rec) {
    phases << ctrla::to_json(rec).dump() << '\n';
    phases.flush();
    std::cerr << "phase " << rec.phase_index << ": xi " << rec.xi << " -> " << rec.xi_next << ", kappa "
              << (rec.kappa_infinite ? std::string("inf") : fmt(rec.kappa)) << ", val acc "
              << rec.val_accuracy << " (" << std::fixed << std::setprecision(1) << rec.seconds << " s)"
              << std::defaultfloat << std::setprecision(6) << '\n';
  };

  const ctrla::TrainingResult result = ctrla::run_training(*model, data, config.train, hooks);
  ctrla::save_snapshot(dir / "model.ctrla1", *model);
  if (!result.metrics) {
    std::cerr << "error: training aborted: " << result.error << '\n'
              << "partial log kept in " << (dir / "phases.jsonl").string() << '\n';
    return kExitRun;
  }
  json m = ctrla::to_json(*result.metrics);
  m["seed"] = config.train.seed;
  m["val_size"] = data.val.size();
  m["test_size"] = data.test.size();
  write_json(dir / "metrics.json", m);
  std::cerr << "val " << result.metrics->val_accuracy << ", test " << result.metrics->test_accuracy
            << ", test+tta " << result.metrics->test_tta_accuracy << '\n';
  return 0;
}

// ---------------------------------------------------------------- ror-curves

struct RorArgs {
  std::string config;
  std::string snapshot;
  bool untrained = false;
  std::string output = "ror-curves";
  std::string data_dir;
  double xi = 0.9;
  double step = 0.1;
  std::size_t threads = 1;
  std::uint64_t phase = 0;
};

std::string op_file_stem(ctrla::OperationKind op) {
  std::ostringstream s;
  s << "ror_" << std::setw(2) << std::setfill('0') << ctrla::operation_index(op) << '_'
    << ctrla::operation_name(op);
  return s.str();
}

int cmd_ror_curves(const RorArgs& args) {
  if (args.snapshot.empty() == !args.untrained) {
    throw UsageError("ror-curves needs exactly one of --snapshot or --untrained");
  }
  ctrla::RunConfig config = ctrla::load_run_config(args.config);
  if (!args.data_dir.empty()) config.dataset.dir = args.data_dir;
  if (!args.snapshot.empty() && !fs::exists(args.snapshot)) {
    throw std::runtime_error("snapshot '" + args.snapshot + "' not found");
  }
  const ctrla::Splits data = ctrla::prepare_data(config);
  auto model = ctrla::nn::make_model(config.model, data.train.height(), data.train.width(),
                                     data.train.num_classes, config.train.seed);
  if (!args.snapshot.empty()) ctrla::load_snapshot(args.snapshot, *model);
  const ctrla::Normalization norm =
      ctrla::normalization_for(ctrla::channel_statistics(data.train), config.train.aux);

  ctrla::ModelProbe probe(*model, data.val, norm, config.train.seed, args.phase, config.train.eval_batch);
  const ctrla::RorUpdate upd =
      ctrla::update_all(probe, ctrla::AsdTable::zeros(), args.xi, {args.step, args.threads});
  if (upd.aborted) throw std::runtime_error("base accuracy on the validation split is zero");

  const fs::path dir = args.output;
  fs::create_directories(dir);
  std::ofstream summary(dir / "fits.csv");
  summary << "op_index,name,base_accuracy,R_at_one,A,B,rmse,fit_failed,gamma_max,alpha\n";
  for (std::size_t i = 0; i < ctrla::kNumOperations; ++i) {
    const auto& curve = upd.curves[i];
    const auto& fit = upd.fits[i];
    const std::size_t idx = i + 1;
    std::ofstream out(dir / (op_file_stem(curve.op) + ".csv"));
    if (!out) throw std::runtime_error("cannot write into '" + dir.string() + "'");
    // Measured rows carry R; fitted rows carry R_fit on a 0.01 grid.
    out << "op_index,gamma,R,A,B,rmse,R_fit\n";
    std::map<long long, double> measured;
    for (const auto& p : curve.points) measured[std::llround(p.gamma * 1e4)] = p.r;
    std::map<long long, double> rows = measured;
    for (int k = 0; k <= 100; ++k) rows.emplace(std::llround(k * 100.0), NAN);
    for (const auto& [key, r] : rows) {
      const double g = static_cast<double>(key) / 1e4;
      out << idx << ',' << fmt(g) << ',';
      if (measured.count(key)) out << fmt(r);
      out << ',' << fmt(fit.amplitude) << ',' << fmt(fit.scale) << ',' << fmt(fit.rmse) << ','
          << fmt(fit.predict(g)) << '\n';
    }
    const auto params = upd.table[curve.op];
    summary << idx << ',' << ctrla::operation_name(curve.op) << ',' << fmt(curve.base_accuracy) << ','
            << fmt(curve.r_at_one()) << ',' << fmt(fit.amplitude) << ',' << fmt(fit.scale) << ','
            << fmt(fit.rmse) << ',' << (upd.fit_failed[i] ? 1 : 0) << ',' << fmt(params.gamma_max)
            << ',' << fmt(params.skew) << '\n';
  }
  std::cerr << "base accuracy " << upd.curves.front().base_accuracy << "; wrote 15 curves to "
            << dir.string() << '\n';
  return 0;
}

// ---------------------------------------------------------------- ctrl-sim

struct SimArgs {
  std::string config;
  std::string output = "-";
  std::optional<double> setpoint, xi0;
  std::optional<std::size_t> phases, noise;
  std::optional<std::uint64_t> seed;
  bool init_from_xi = false;
  bool print_config = false;
};

int cmd_ctrl_sim(const SimArgs& args) {
  ctrla::SimConfig c = args.config.empty() ? ctrla::SimConfig{} : ctrla::load_sim_config(args.config);
  if (args.setpoint) c.setpoint = *args.setpoint;
  if (args.xi0) c.xi0 = *args.xi0;
  if (args.phases) c.phases = *args.phases;
  if (args.noise) c.plant.noise_samples = *args.noise;
  if (args.seed) c.plant.seed = *args.seed;
  if (args.init_from_xi) c.init_table_from_xi = true;
  if (args.print_config) {
    std::cout << ctrla::to_json(c).dump(2) << '\n';
    return 0;
  }

  const auto log = ctrla::simulate_control(c);
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (args.output != "-") {
    file.open(args.output);
    if (!file) throw std::runtime_error("cannot create '" + args.output + "'");
    out = &file;
  }
  for (const auto& rec : log) *out << ctrla::to_json(rec).dump() << '\n';
  if (!log.empty()) {
    const auto& last = log.back();
    std::cerr << "final phase " << last.phase << ": kappa " << last.kappa << " (setpoint " << c.setpoint
              << "), xi " << last.xi_next << ", saturated " << (last.saturated ? "yes" : "no") << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::vector<std::string> runs;
  std::string json_out = "-";
  std::string csv_out;
  std::size_t tail_phases = 3;
};

// Config fields that must agree for runs to be pooled.
json run_signature(const json& config) {
  json sig = config;
  sig.erase("output_dir");
  if (sig.contains("training")) sig["training"].erase("seed");
  if (sig.contains("training")) sig["training"].erase("threads");
  if (sig.contains("split")) sig["split"].erase("seed");
  return sig;
}

json interval_json(const std::vector<double>& v) {
  const auto ci = ctrla::t_interval(v);
  json j;
  j["n"] = ci.n;
  j["mean"] = ci.mean;
  j["halfwidth"] = std::isfinite(ci.halfwidth) ? json(ci.halfwidth) : json(nullptr);
  j["values"] = v;
  return j;
}

int cmd_report(const ReportArgs& args) {
  std::map<std::string, std::vector<double>> metrics;
  std::vector<double> kappa_error;
  std::optional<json> signature;
  std::string first_run;
  json runs = json::array();
  for (const auto& r : args.runs) {
    const fs::path dir = r;
    const json m = ctrla::read_json_file(dir / "metrics.json");
    if (fs::exists(dir / "config.json")) {
      const json sig = run_signature(ctrla::read_json_file(dir / "config.json"));
      if (!signature) {
        signature = sig;
        first_run = r;
      } else if (sig != *signature) {
        throw std::runtime_error("incompatible logs: '" + r + "' was run with a different configuration than '" +
                                 first_run + "'");
      }
    } else if (signature) {
      throw std::runtime_error("incompatible logs: '" + r + "' has no config.json");
    }
    json run{{"path", r}};
    for (const char* key : {"val_accuracy", "test_accuracy", "test_tta_accuracy"}) {
      if (m.contains(key) && m[key].is_number()) {
        metrics[key].push_back(m[key].get<double>());
        run[key] = m[key];
      }
    }
    if (fs::exists(dir / "phases.jsonl") && signature && signature->contains("controller")) {
      std::ifstream in(dir / "phases.jsonl");
      std::vector<double> kappas;
      for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        const json rec = json::parse(line);
        kappas.push_back(rec["kappa"].is_number() ? rec["kappa"].get<double>() : INFINITY);
      }
      const double sp = (*signature)["controller"].value("setpoint", 1.5);
      const std::size_t k = std::min(args.tail_phases, kappas.size());
      if (k > 0) {
        double e = 0.0;
        for (std::size_t i = kappas.size() - k; i < kappas.size(); ++i) e += std::abs(kappas[i] - sp);
        run["tail_kappa_error"] = e / static_cast<double>(k);
        kappa_error.push_back(e / static_cast<double>(k));
      }
    }
    runs.push_back(run);
  }

  json report;
  report["runs"] = runs;
  report["interval_method"] =
      "95% two-sided t-interval over run-level accuracies: halfwidth = t(0.975, n-1) * s / sqrt(n), "
      "s the sample standard deviation; null for a single run";
  json summary = json::object();
  for (const auto& [key, v] : metrics) summary[key] = interval_json(v);
  if (!kappa_error.empty()) summary["tail_kappa_error"] = interval_json(kappa_error);
  report["summary"] = summary;
  const auto& val = metrics["val_accuracy"];
  const auto& test = metrics["test_accuracy"];
  if (val.size() >= 2 && test.size() >= 2) {
    const auto w = ctrla::welch_one_sided(val, test);
    report["welch_val_vs_test"] = {{"alternative", "mean validation accuracy > mean test accuracy"},
                                   {"t", w.t},
                                   {"df", w.df},
                                   {"p", w.p},
                                   {"reject_at_0.05", w.p < 0.05}};
  }

  if (args.json_out == "-") {
    std::cout << report.dump(2) << '\n';
  } else {
    write_json(args.json_out, report);
  }
  if (!args.csv_out.empty()) {
    std::ofstream csv(args.csv_out);
    if (!csv) throw std::runtime_error("cannot create '" + args.csv_out + "'");
    csv << "metric,n,mean,halfwidth\n";
    for (const auto& [key, j] : summary.items()) {
      csv << key << ',' << j["n"].get<std::size_t>() << ',' << fmt(j["mean"].get<double>()) << ',';
      if (!j["halfwidth"].is_null()) csv << fmt(j["halfwidth"].get<double>());
      csv << '\n';
    }
  }
  return 0;
}

// ---------------------------------------------------------------- augment

struct AugmentArgs {
  std::string input;
  std::string output;
  std::string op;
  double gamma = 0.5;
  int sign = 1;
};

int cmd_augment(const AugmentArgs& args) {
  const auto op = ctrla::operation_from_name(args.op);
  if (!op) throw UsageError("unknown operation '" + args.op + "'");
  if (!(args.gamma >= 0.0 && args.gamma <= 1.0)) throw UsageError("--gamma must lie in [0, 1]");
  const ctrla::ImageU8 img = ctrla::read_png(args.input);
  ctrla::write_png(args.output, ctrla::apply_operation(img, *op, {args.gamma, args.sign < 0 ? -1 : 1}));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ctrla: feedback-controlled data augmentation"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* t = app.add_subcommand("train", "train a model with the augmentation control loop");
  t->add_option("-c,--config", train.config, "JSON run configuration")->check(CLI::ExistingFile);
  t->add_option("--preset", train.preset, "setup preset applied over the config");
  t->add_option("--mode", train.mode, "ctrl-a, fixed-table or none");
  t->add_option("--model", train.model, "small-convnet or linear-softmax");
  t->add_option("-o,--output", train.output, "output directory");
  t->add_option("--data-dir", train.data_dir, "CIFAR directory");
  t->add_option("--epochs", train.epochs);
  t->add_option("--ops", train.ops, "operations per sample");
  t->add_option("--subset", train.subset, "keep the first n training images");
  t->add_option("--threads", train.threads, "worker threads, 0 = all cores");
  t->add_option("--ror-period", train.ror_period, "rebuild the table every m-th phase");
  t->add_option("--seed", train.seed);
  t->add_option("--setpoint", train.setpoint, "loss-ratio setpoint");
  t->add_flag("--print-config", train.print_config, "print the resolved configuration and exit");

  RorArgs ror;
  auto* r = app.add_subcommand("ror-curves", "export ROR curves and fits of a model snapshot");
  r->add_option("-c,--config", ror.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  r->add_option("-s,--snapshot", ror.snapshot, "CTRLA1 model snapshot");
  r->add_flag("--untrained", ror.untrained, "use the freshly initialized model");
  r->add_option("-o,--output", ror.output, "output directory")->capture_default_str();
  r->add_option("--data-dir", ror.data_dir, "CIFAR directory");
  r->add_option("--xi", ror.xi, "target relative accuracy for the reported table")->capture_default_str();
  r->add_option("--step", ror.step, "strength grid spacing")->capture_default_str();
  r->add_option("--threads", ror.threads, "worker threads, 0 = all cores")->capture_default_str();
  r->add_option("--phase", ror.phase, "sign-draw key")->capture_default_str();

  SimArgs sim;
  auto* s = app.add_subcommand("ctrl-sim", "run the control loop against a synthetic plant");
  s->add_option("-c,--config", sim.config, "JSON plant configuration")->check(CLI::ExistingFile);
  s->add_option("-o,--output", sim.output, "JSONL trajectory, - for stdout")->capture_default_str();
  s->add_option("--setpoint", sim.setpoint);
  s->add_option("--xi0", sim.xi0);
  s->add_option("--phases", sim.phases);
  s->add_option("--noise", sim.noise, "virtual validation size, 0 = noiseless");
  s->add_option("--seed", sim.seed);
  s->add_flag("--init-from-xi", sim.init_from_xi, "start from the table at xi0 instead of zeros");
  s->add_flag("--print-config", sim.print_config, "print the resolved configuration and exit");

  ReportArgs rep;
  auto* p = app.add_subcommand("report", "aggregate the metrics of several runs");
  p->add_option("runs", rep.runs, "run output directories")->required()->check(CLI::ExistingDirectory);
  p->add_option("--json", rep.json_out, "JSON report, - for stdout")->capture_default_str();
  p->add_option("--csv", rep.csv_out, "CSV summary");
  p->add_option("--tail", rep.tail_phases, "phases averaged for the setpoint error")->capture_default_str();

  AugmentArgs aug;
  auto* a = app.add_subcommand("augment", "apply one pool operation to a PNG");
  a->add_option("-i,--input", aug.input)->required()->check(CLI::ExistingFile);
  a->add_option("-o,--output", aug.output)->required();
  a->add_option("--op", aug.op, "operation name")->required();
  a->add_option("--gamma", aug.gamma, "strength in [0, 1]")->capture_default_str();
  a->add_option("--sign", aug.sign, "+1 or -1")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*t) return cmd_train(train);
    if (*r) return cmd_ror_curves(ror);
    if (*s) return cmd_ctrl_sim(sim);
    if (*p) return cmd_report(rep);
    if (*a) return cmd_augment(aug);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRun;
  }
  return 0;
}
