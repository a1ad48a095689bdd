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

// Phase-partitioned training with the augmentation control loop.
//
// Each phase trains n_p epochs with a frozen strength table. At the phase
// boundary xi is updated from the phase's loss ratio and, every m-th full
// phase, the table is rebuilt from ROR curves measured at the new xi.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctrla/asd.hpp"
#include "ctrla/controller.hpp"
#include "ctrla/data.hpp"
#include "ctrla/evalstats.hpp"
#include "ctrla/nn/classifier.hpp"
#include "ctrla/ror.hpp"

namespace ctrla {

enum class AugmentMode { CtrlA, FixedTable, None };

std::string augment_mode_name(AugmentMode mode);
AugmentMode augment_mode_from_name(const std::string& name);

struct TrainConfig {
  std::size_t epochs = 60;       // n_max
  std::size_t phase_epochs = 5;  // n_p
  double lr = 0.05;              // eta_0
  double momentum = 0.9;
  double weight_decay = 2.5e-4;
  std::size_t batch_size = 125;
  std::size_t ops_per_sample = 2;  // N
  double setpoint = 1.5;           // kappa_sp
  double xi0 = 0.9;
  double step_min = 0.005;
  double step_max = 0.1;
  std::uint64_t seed = 0;
  AugmentMode mode = AugmentMode::CtrlA;
  AsdTable fixed_table;  // used by FixedTable mode
  AuxiliaryFlags aux;
  std::size_t ror_period = 1;  // m: rebuild the table every m-th phase
  double ror_step = 0.1;
  std::size_t eval_batch = 500;
  std::size_t threads = 1;  // augmentation and ROR workers, 0 = all cores
  TtaMode tta = TtaMode::HorizontalFlip;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

double cosine_lr(std::size_t epoch, double eta0, std::size_t n_max);

// SGD with Nesterov momentum and weight decay folded into the gradient:
//   g = dL/dw + wd w;  v = mu v + g;  w -= lr (g + mu v)
class SgdNesterov {
 public:
  SgdNesterov(double momentum, double weight_decay) : momentum_(momentum), weight_decay_(weight_decay) {}

  // One forward/backward pass and update. Returns the batch loss; throws
  // std::runtime_error (before touching the weights) if it is not finite.
  double step(nn::Classifier& model, const nn::Batch& batch, std::span<const int> labels, double lr);

  void reset() { velocity_.clear(); }

 private:
  double momentum_;
  double weight_decay_;
  std::vector<std::vector<float>> velocity_;
};

double sgd_nesterov_step(nn::Classifier& model, SgdNesterov& optimizer, const nn::Batch& batch,
                         std::span<const int> labels, double lr);

// Normalized batch of the given images (no augmentation).
nn::Batch make_batch(std::span<const ImageU8> images, const Normalization& norm);

// Evaluation-mode top-1 accuracy and mean cross-entropy over a dataset.
double evaluate_accuracy(const nn::Classifier& model, const Dataset& data, const Normalization& norm,
                         std::size_t batch_size = 500);
double evaluate_loss(const nn::Classifier& model, const Dataset& data, const Normalization& norm,
                     std::size_t batch_size = 500);

// ROR accuracy oracle over a validation set. Each sample's sign for signed
// kinds comes from (seed, phase, op, sample), so curves are reproducible and
// the same across the grid.
class ModelProbe final : public AccuracyProbe {
 public:
  ModelProbe(const nn::Classifier& model, const Dataset& val, const Normalization& norm,
             std::uint64_t seed, std::uint64_t phase, std::size_t batch_size = 500);
  double base_accuracy() override;
  double accuracy(OperationKind op, double gamma) override;

 private:
  const nn::Classifier& model_;
  const Dataset& val_;
  const Normalization& norm_;
  std::uint64_t seed_;
  std::uint64_t phase_;
  std::size_t batch_size_;
  std::optional<double> base_;
};

// Pool plan of one sample in one epoch, drawn from the Plan stream.
AugmentationPlan sample_plan(const AsdTable& table, const TrainConfig& config, std::uint64_t epoch,
                             std::uint64_t sample);

// Fully augmented, normalized training input for one sample in one epoch.
// Draws from the Plan stream only when mode != None and from the Auxiliary
// stream for the pre/post transforms.
void augment_sample(const ImageU8& img, const AsdTable& table, const TrainConfig& config,
                    const Normalization& norm, std::uint64_t epoch, std::uint64_t sample,
                    std::span<float> out);

// Order in which an epoch visits the training set.
std::vector<std::size_t> epoch_order(std::uint64_t seed, std::uint64_t epoch, std::size_t n);

struct PhaseResult {
  PhaseStats stats;
  std::vector<double> train_losses;  // one per batch
  std::vector<double> val_losses;    // one per epoch
};

// Trains epochs [first_epoch, first_epoch + count) with a frozen table.
PhaseResult run_phase(nn::Classifier& model, SgdNesterov& optimizer, const Dataset& train,
                      const Dataset& val, const Normalization& norm, const AsdTable& table,
                      const TrainConfig& config, std::size_t first_epoch, std::size_t count);

struct PhaseLogRecord {
  std::size_t phase_index = 0;
  std::size_t first_epoch = 0;
  std::size_t epochs = 0;
  double xi = 0.0;  // in effect during the phase
  double xi_next = 0.0;
  double kappa = 0.0;
  bool kappa_infinite = false;
  std::vector<double> gamma;  // table in effect during the phase
  std::vector<double> alpha;
  double mean_train_loss = 0.0;
  double mean_val_loss = 0.0;
  double val_accuracy = 0.0;
  double lr_last = 0.0;
  bool saturated = false;
  bool table_updated = false;  // ROR recomputed at the end of the phase
  bool ror_aborted = false;
  std::vector<int> fit_failed_ops;
  double seconds = 0.0;
};

struct FinalMetrics {
  double val_accuracy = 0.0;
  double test_accuracy = 0.0;
  double test_tta_accuracy = 0.0;
};

struct TrainingResult {
  std::vector<PhaseLogRecord> phases;
  std::optional<FinalMetrics> metrics;  // absent if the run aborted
  std::string error;                    // diagnostic of an aborted run
  std::vector<RorCurve> last_curves;
  std::vector<ErfFit> last_fits;
};

struct TrainingHooks {
  std::function<void(const PhaseLogRecord&)> on_phase;
  std::function<void(const RorUpdate&, std::size_t phase)> on_ror;
};

// Runs all phases and the final evaluation. Errors during training end the
// run with the phases completed so far and `error` set.
TrainingResult run_training(nn::Classifier& model, const Splits& data, const TrainConfig& config,
                            const TrainingHooks& hooks = {});

// CTRLA1 snapshot: "CTRLA1" then, per tensor, u32 name length, name, u32 rank,
// rank x u32 dims, little-endian float32 values. Parameters first, then
// buffers, until end of file.
void save_snapshot(const std::filesystem::path& file, nn::Classifier& model);
// Every model tensor must be present with a matching shape.
void load_snapshot(const std::filesystem::path& file, nn::Classifier& model);

}  // namespace ctrla
