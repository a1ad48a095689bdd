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

#pragma once

// Run configuration files, setup presets and JSON forms of the run logs.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "ctrla/data.hpp"
#include "ctrla/plant.hpp"
#include "ctrla/trainer.hpp"

namespace ctrla {

inline constexpr int kConfigSchemaVersion = 1;

enum class DatasetKind { Cifar10, Cifar100, Raw };

std::string dataset_kind_name(DatasetKind kind);
DatasetKind dataset_kind_from_name(const std::string& name);

struct Preset {
  std::string name;
  DatasetKind dataset;
  std::size_t epochs;
  double lr;
  double weight_decay;
  std::size_t batch_size;
  double momentum;
  bool random_hflip;
  bool flip_doubling;
  std::size_t pad;
  std::size_t cutout;
  bool invert;
  TtaMode tta;
};

const std::vector<Preset>& presets();
// Throws std::invalid_argument listing the valid names.
const Preset& find_preset(const std::string& name);

struct DatasetSpec {
  DatasetKind kind = DatasetKind::Cifar10;
  std::filesystem::path dir;         // CIFAR directory; defaults to $CTRLA_DATA_DIR/<variant>
  std::filesystem::path train_file;  // CARAW1 files for kind Raw
  std::filesystem::path test_file;
  std::size_t subset = 0;  // keep the first n training images; 0 = all
};

struct RunConfig {
  std::string preset;
  DatasetSpec dataset;
  SplitSpec split;
  std::string model = "small-convnet";
  std::filesystem::path output_dir = "ctrla-run";
  bool flip_doubling = false;
  TrainConfig train;
};

// Applies a preset's training constants and auxiliary flags.
void apply_preset(RunConfig& config, const Preset& preset);

// Parses a configuration object. A "preset" key is applied first and every
// other key overrides it. Unknown keys and a schema_version other than
// kConfigSchemaVersion are errors (std::invalid_argument).
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& file);
nlohmann::json to_json(const RunConfig& config);

// Directory holding CIFAR data when the config names none: $CTRLA_DATA_DIR
// if set, otherwise ./data.
std::filesystem::path default_data_root();

// Resolved CIFAR directory for a config (dataset.dir or the default root).
std::filesystem::path cifar_dir(const RunConfig& config);

// Loads the configured data, keeps the training subset, splits off the
// validation set and applies flip doubling to the training split.
Splits prepare_data(const RunConfig& config);

SimConfig sim_config_from_json(const nlohmann::json& j);
SimConfig load_sim_config(const std::filesystem::path& file);
nlohmann::json to_json(const SimConfig& config);

nlohmann::json to_json(const PhaseLogRecord& rec);
nlohmann::json to_json(const SimRecord& rec);
nlohmann::json to_json(const FinalMetrics& m);

nlohmann::json read_json_file(const std::filesystem::path& file);

}  // namespace ctrla
