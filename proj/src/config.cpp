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

#include "ctrla/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <stdexcept>

namespace ctrla {

using nlohmann::json;

namespace {

// Reads the members of one JSON object and rejects any it was not asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw std::invalid_argument(where_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <typename T>
  bool get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return false;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw std::invalid_argument(where_ + "." + key + ": " + e.what());
    }
    return true;
  }

  const json* child(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw std::invalid_argument(where_ + ": unknown key '" + key + "'");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

void check_schema(ObjectReader& r) {
  int version = kConfigSchemaVersion;
  if (!r.get("schema_version", version)) {
    throw std::invalid_argument("config: missing schema_version");
  }
  if (version != kConfigSchemaVersion) {
    throw std::invalid_argument("config: unsupported schema_version " + std::to_string(version) +
                                " (expected " + std::to_string(kConfigSchemaVersion) + ")");
  }
}

std::vector<double> vec15(const json& j, const std::string& where) {
  std::vector<double> v;
  try {
    v = j.get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(where + ": " + e.what());
  }
  if (v.size() != kNumOperations) throw std::invalid_argument(where + ": expected 15 values");
  return v;
}

}  // namespace

std::string dataset_kind_name(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::Cifar10: return "cifar10";
    case DatasetKind::Cifar100: return "cifar100";
    case DatasetKind::Raw: return "raw";
  }
  return "?";
}

DatasetKind dataset_kind_from_name(const std::string& name) {
  if (name == "cifar10") return DatasetKind::Cifar10;
  if (name == "cifar100") return DatasetKind::Cifar100;
  if (name == "raw") return DatasetKind::Raw;
  throw std::invalid_argument("unknown dataset kind '" + name + "' (expected cifar10, cifar100 or raw)");
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = {
      {"standard-cifar10", DatasetKind::Cifar10, 200, 0.1, 5e-4, 125, 0.9, true, false, 4, 16, false,
       TtaMode::HorizontalFlip},
      {"standard-cifar100", DatasetKind::Cifar100, 200, 0.1, 5e-4, 125, 0.9, true, false, 4, 16, false,
       TtaMode::HorizontalFlip},
      {"modified-cifar10", DatasetKind::Cifar10, 500, 0.05, 2.5e-4, 125, 0.9, false, true, 4, 0, false,
       TtaMode::HorizontalFlip},
      {"modified-cifar100", DatasetKind::Cifar100, 500, 0.05, 5e-4, 125, 0.9, false, true, 4, 16, false,
       TtaMode::HorizontalFlip},
      {"standard-svhn", DatasetKind::Raw, 200, 0.005, 0.005, 125, 0.9, false, false, 0, 16, false,
       TtaMode::Invert},
      {"modified-svhn", DatasetKind::Raw, 300, 0.005, 0.005, 125, 0.9, false, false, 0, 10, true,
       TtaMode::Invert},
  };
  return table;
}

const Preset& find_preset(const std::string& name) {
  std::string valid;
  for (const auto& p : presets()) {
    if (p.name == name) return p;
    valid += (valid.empty() ? "" : ", ") + p.name;
  }
  throw std::invalid_argument("unknown preset '" + name + "'; valid presets: " + valid);
}

void apply_preset(RunConfig& config, const Preset& p) {
  config.preset = p.name;
  config.dataset.kind = p.dataset;
  config.flip_doubling = p.flip_doubling;
  auto& t = config.train;
  t.epochs = p.epochs;
  t.lr = p.lr;
  t.weight_decay = p.weight_decay;
  t.batch_size = p.batch_size;
  t.momentum = p.momentum;
  t.aux.random_hflip = p.random_hflip;
  t.aux.pad = p.pad;
  t.aux.cutout = p.cutout;
  t.aux.invert = p.invert;
  t.tta = p.tta;
}

std::filesystem::path default_data_root() {
  if (const char* env = std::getenv("CTRLA_DATA_DIR"); env && *env) return env;
  return "data";
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  ObjectReader r(j, "config");
  check_schema(r);
  std::string preset;
  if (r.get("preset", preset) && !preset.empty()) apply_preset(c, find_preset(preset));
  r.get("model", c.model);
  std::string out;
  if (r.get("output_dir", out)) c.output_dir = out;

  if (const json* d = r.child("dataset")) {
    ObjectReader dr(*d, r.path("dataset"));
    std::string s;
    if (dr.get("kind", s)) c.dataset.kind = dataset_kind_from_name(s);
    if (dr.get("dir", s)) c.dataset.dir = s;
    if (dr.get("train_file", s)) c.dataset.train_file = s;
    if (dr.get("test_file", s)) c.dataset.test_file = s;
    dr.get("subset", c.dataset.subset);
    dr.finish();
  }
  if (const json* s = r.child("split")) {
    ObjectReader sr(*s, r.path("split"));
    std::string mode;
    if (sr.get("mode", mode)) c.split.mode = split_mode_from_name(mode);
    sr.get("val_size", c.split.val_size);
    sr.get("seed", c.split.seed);
    sr.finish();
  }
  auto& t = c.train;
  if (const json* s = r.child("training")) {
    ObjectReader tr(*s, r.path("training"));
    tr.get("epochs", t.epochs);
    tr.get("phase_epochs", t.phase_epochs);
    tr.get("lr", t.lr);
    tr.get("momentum", t.momentum);
    tr.get("weight_decay", t.weight_decay);
    tr.get("batch_size", t.batch_size);
    tr.get("seed", t.seed);
    tr.get("eval_batch", t.eval_batch);
    tr.get("threads", t.threads);
    tr.finish();
  }
  if (const json* s = r.child("augmentation")) {
    ObjectReader ar(*s, r.path("augmentation"));
    std::string name;
    if (ar.get("mode", name)) t.mode = augment_mode_from_name(name);
    ar.get("ops_per_sample", t.ops_per_sample);
    if (ar.get("tta", name)) t.tta = tta_mode_from_name(name);
    if (const json* ft = ar.child("fixed_table")) {
      ObjectReader fr(*ft, ar.path("fixed_table"));
      const json* g = fr.child("gamma");
      const json* a = fr.child("alpha");
      fr.finish();
      if (!g || !a) throw std::invalid_argument(ar.path("fixed_table") + ": needs gamma and alpha");
      t.fixed_table = AsdTable::from_vectors(vec15(*g, fr.path("gamma")), vec15(*a, fr.path("alpha")));
    }
    ar.finish();
  }
  if (const json* s = r.child("auxiliary")) {
    ObjectReader xr(*s, r.path("auxiliary"));
    xr.get("random_hflip", t.aux.random_hflip);
    xr.get("flip_doubling", c.flip_doubling);
    xr.get("invert", t.aux.invert);
    xr.get("invert_probability", t.aux.invert_probability);
    xr.get("pad", t.aux.pad);
    xr.get("cutout", t.aux.cutout);
    xr.finish();
  }
  if (const json* s = r.child("controller")) {
    ObjectReader cr(*s, r.path("controller"));
    cr.get("setpoint", t.setpoint);
    cr.get("xi0", t.xi0);
    cr.get("step_min", t.step_min);
    cr.get("step_max", t.step_max);
    cr.get("ror_period", t.ror_period);
    cr.get("ror_step", t.ror_step);
    cr.finish();
  }
  r.finish();
  t.validate();
  return c;
}

json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open '" + file.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("'" + file.string() + "': " + e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path& file) {
  return run_config_from_json(read_json_file(file));
}

json to_json(const RunConfig& c) {
  const auto& t = c.train;
  json j;
  j["schema_version"] = kConfigSchemaVersion;
  if (!c.preset.empty()) j["preset"] = c.preset;
  j["model"] = c.model;
  j["output_dir"] = c.output_dir.string();
  j["dataset"] = {{"kind", dataset_kind_name(c.dataset.kind)},
                  {"dir", c.dataset.dir.string()},
                  {"train_file", c.dataset.train_file.string()},
                  {"test_file", c.dataset.test_file.string()},
                  {"subset", c.dataset.subset}};
  j["split"] = {{"mode", split_mode_name(c.split.mode)}, {"val_size", c.split.val_size}, {"seed", c.split.seed}};
  j["training"] = {{"epochs", t.epochs},       {"phase_epochs", t.phase_epochs},
                   {"lr", t.lr},               {"momentum", t.momentum},
                   {"weight_decay", t.weight_decay}, {"batch_size", t.batch_size},
                   {"seed", t.seed},           {"eval_batch", t.eval_batch},
                   {"threads", t.threads}};
  j["augmentation"] = {{"mode", augment_mode_name(t.mode)},
                       {"ops_per_sample", t.ops_per_sample},
                       {"tta", tta_mode_name(t.tta)},
                       {"fixed_table", {{"gamma", t.fixed_table.gamma_vector()},
                                        {"alpha", t.fixed_table.alpha_vector()}}}};
  j["auxiliary"] = {{"random_hflip", t.aux.random_hflip}, {"flip_doubling", c.flip_doubling},
                    {"invert", t.aux.invert},             {"invert_probability", t.aux.invert_probability},
                    {"pad", t.aux.pad},                   {"cutout", t.aux.cutout}};
  j["controller"] = {{"setpoint", t.setpoint}, {"xi0", t.xi0},
                     {"step_min", t.step_min}, {"step_max", t.step_max},
                     {"ror_period", t.ror_period}, {"ror_step", t.ror_step}};
  return j;
}

std::filesystem::path cifar_dir(const RunConfig& config) {
  if (!config.dataset.dir.empty()) return config.dataset.dir;
  return default_data_root() /
         (config.dataset.kind == DatasetKind::Cifar100 ? "cifar-100-binary" : "cifar-10-batches-bin");
}

Splits prepare_data(const RunConfig& config) {
  TrainTest raw;
  switch (config.dataset.kind) {
    case DatasetKind::Cifar10:
      raw = load_cifar_binary(cifar_dir(config), CifarVariant::Cifar10);
      break;
    case DatasetKind::Cifar100:
      raw = load_cifar_binary(cifar_dir(config), CifarVariant::Cifar100);
      break;
    case DatasetKind::Raw:
      if (config.dataset.train_file.empty() || config.dataset.test_file.empty()) {
        throw std::invalid_argument("dataset kind raw needs train_file and test_file");
      }
      raw.train = load_raw_container(config.dataset.train_file);
      raw.test = load_raw_container(config.dataset.test_file);
      break;
  }
  if (config.dataset.subset > 0) raw.train = head(raw.train, config.dataset.subset);
  Splits s = make_splits(raw.train, raw.test, config.split);
  if (config.flip_doubling) s.train = flip_doubled(s.train);
  return s;
}

SimConfig sim_config_from_json(const json& j) {
  SimConfig c;
  ObjectReader r(j, "plant config");
  check_schema(r);
  r.get("setpoint", c.setpoint);
  r.get("xi0", c.xi0);
  r.get("step_min", c.step_min);
  r.get("step_max", c.step_max);
  r.get("phases", c.phases);
  r.get("grid_step", c.grid_step);
  r.get("init_table_from_xi", c.init_table_from_xi);
  if (const json* p = r.child("plant")) {
    ObjectReader pr(*p, r.path("plant"));
    if (const json* a = pr.child("amplitude")) {
      const auto v = vec15(*a, pr.path("amplitude"));
      std::copy(v.begin(), v.end(), c.plant.amplitude.begin());
    }
    if (const json* b = pr.child("scale")) {
      const auto v = vec15(*b, pr.path("scale"));
      std::copy(v.begin(), v.end(), c.plant.scale.begin());
    }
    pr.get("base_train_loss", c.plant.base_train_loss);
    pr.get("strength_gain", c.plant.strength_gain);
    pr.get("val_loss", c.plant.val_loss);
    pr.get("noise_samples", c.plant.noise_samples);
    pr.get("seed", c.plant.seed);
    pr.finish();
  }
  r.finish();
  c.plant.validate();
  gamma_grid(c.grid_step);
  return c;
}

SimConfig load_sim_config(const std::filesystem::path& file) {
  return sim_config_from_json(read_json_file(file));
}

json to_json(const SimConfig& c) {
  return {{"schema_version", kConfigSchemaVersion},
          {"setpoint", c.setpoint},
          {"xi0", c.xi0},
          {"step_min", c.step_min},
          {"step_max", c.step_max},
          {"phases", c.phases},
          {"grid_step", c.grid_step},
          {"init_table_from_xi", c.init_table_from_xi},
          {"plant",
           {{"amplitude", c.plant.amplitude},
            {"scale", c.plant.scale},
            {"base_train_loss", c.plant.base_train_loss},
            {"strength_gain", c.plant.strength_gain},
            {"val_loss", c.plant.val_loss},
            {"noise_samples", c.plant.noise_samples},
            {"seed", c.plant.seed}}}};
}

json to_json(const PhaseLogRecord& r) {
  json j = {{"phase_index", r.phase_index},
            {"first_epoch", r.first_epoch},
            {"epochs", r.epochs},
            {"xi", r.xi},
            {"xi_next", r.xi_next},
            {"kappa", r.kappa_infinite ? json(nullptr) : json(r.kappa)},
            {"kappa_infinite", r.kappa_infinite},
            {"gamma", r.gamma},
            {"alpha", r.alpha},
            {"mean_train_loss", r.mean_train_loss},
            {"mean_val_loss", r.mean_val_loss},
            {"val_accuracy", r.val_accuracy},
            {"lr_last", r.lr_last},
            {"saturated", r.saturated},
            {"table_updated", r.table_updated},
            {"ror_aborted", r.ror_aborted},
            {"fit_failed_ops", r.fit_failed_ops},
            {"seconds", r.seconds}};
  return j;
}

json to_json(const SimRecord& r) {
  return {{"phase_index", r.phase}, {"xi", r.xi},       {"xi_next", r.xi_next},
          {"kappa", r.kappa},       {"gamma", r.gamma}, {"alpha", r.alpha},
          {"saturated", r.saturated}, {"fit_failed", r.fit_failed}};
}

json to_json(const FinalMetrics& m) {
  return {{"val_accuracy", m.val_accuracy},
          {"test_accuracy", m.test_accuracy},
          {"test_tta_accuracy", m.test_tta_accuracy}};
}

}  // namespace ctrla
