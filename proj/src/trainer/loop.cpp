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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "ctrla/augpool.hpp"
#include "ctrla/parallel.hpp"
#include "ctrla/trainer.hpp"

namespace ctrla {

std::string augment_mode_name(AugmentMode mode) {
  switch (mode) {
    case AugmentMode::CtrlA: return "ctrl-a";
    case AugmentMode::FixedTable: return "fixed-table";
    case AugmentMode::None: return "none";
  }
  return "?";
}

AugmentMode augment_mode_from_name(const std::string& name) {
  if (name == "ctrl-a") return AugmentMode::CtrlA;
  if (name == "fixed-table") return AugmentMode::FixedTable;
  if (name == "none") return AugmentMode::None;
  throw std::invalid_argument("unknown augmentation mode '" + name +
                              "' (expected ctrl-a, fixed-table or none)");
}

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("train config: " + what); };
  if (epochs == 0) fail("epochs must be positive");
  if (phase_epochs == 0) fail("phase_epochs must be positive");
  if (!(lr >= 0.0) || !std::isfinite(lr)) fail("lr must be finite and >= 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) fail("momentum must be in [0, 1)");
  if (!(weight_decay >= 0.0)) fail("weight_decay must be >= 0");
  if (batch_size == 0) fail("batch_size must be positive");
  if (ops_per_sample < 1 || ops_per_sample > kNumOperations) fail("ops_per_sample must be in [1, 15]");
  if (ror_period == 0) fail("ror_period must be positive");
  if (eval_batch == 0) fail("eval_batch must be positive");
  if (aux.invert && !(aux.invert_probability >= 0.0 && aux.invert_probability <= 1.0)) {
    fail("invert_probability must be in [0, 1]");
  }
  gamma_grid(ror_step);
  ControllerState s;
  s.xi = xi0;
  s.setpoint = setpoint;
  s.step_min = step_min;
  s.step_max = step_max;
  s.validate();
}

std::vector<std::size_t> epoch_order(std::uint64_t seed, std::uint64_t epoch, std::size_t n) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed, Stream::Shuffle, {epoch});
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  return order;
}

AugmentationPlan sample_plan(const AsdTable& table, const TrainConfig& config, std::uint64_t epoch,
                             std::uint64_t sample) {
  Rng rng(config.seed, Stream::Plan, {epoch, sample});
  return draw_plan(table, config.ops_per_sample, rng);
}

void augment_sample(const ImageU8& img, const AsdTable& table, const TrainConfig& config,
                    const Normalization& norm, std::uint64_t epoch, std::uint64_t sample,
                    std::span<float> out) {
  Rng aux(config.seed, Stream::Auxiliary, {epoch, sample});
  ImageU8 x = pre_transform(img, config.aux, aux);
  if (config.mode != AugmentMode::None) {
    const auto plan = sample_plan(table, config, epoch, sample);
    x = compose_augment(x, plan.steps);
  }
  post_transform(x, norm, config.aux, aux, out);
}

PhaseResult run_phase(nn::Classifier& model, SgdNesterov& optimizer, const Dataset& train,
                      const Dataset& val, const Normalization& norm, const AsdTable& table,
                      const TrainConfig& config, std::size_t first_epoch, std::size_t count) {
  if (train.empty()) throw std::invalid_argument("run_phase: empty training set");
  PhaseResult out;
  const std::size_t h = train.height();
  const std::size_t w = train.width();
  for (std::size_t epoch = first_epoch; epoch < first_epoch + count; ++epoch) {
    const double lr = cosine_lr(epoch, config.lr, config.epochs);
    const auto order = epoch_order(config.seed, epoch, train.size());
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t n = std::min(config.batch_size, order.size() - start);
      nn::Batch batch(n, 3, h, w);
      std::vector<int> labels(n);
      parallel_for(n, config.threads, [&](std::size_t i) {
        const std::size_t s = order[start + i];
        augment_sample(train.images[s], table, config, norm, epoch, s, batch.sample(i));
        labels[i] = train.labels[s];
      });
      out.train_losses.push_back(optimizer.step(model, batch, labels, lr));
    }
    out.val_losses.push_back(evaluate_loss(model, val, norm, config.eval_batch));
  }
  out.stats = compute_kappa(out.train_losses, out.val_losses);
  return out;
}

TrainingResult run_training(nn::Classifier& model, const Splits& data, const TrainConfig& config,
                            const TrainingHooks& hooks) {
  config.validate();
  for (const Dataset* d : {&data.train, &data.val, &data.test}) {
    d->validate();
    if (d->empty()) throw std::invalid_argument("run_training: empty dataset split");
  }
  if (config.aux.cutout > std::min(data.train.height(), data.train.width())) {
    throw std::invalid_argument("run_training: cutout square larger than the images");
  }
  if (model.num_classes() != data.train.num_classes) {
    throw std::invalid_argument("run_training: model and dataset disagree on the class count");
  }

  const Normalization norm = normalization_for(channel_statistics(data.train), config.aux);
  AsdTable table = config.mode == AugmentMode::FixedTable ? config.fixed_table : AsdTable::zeros();
  ControllerState state;
  state.xi = config.xi0;
  state.setpoint = config.setpoint;
  state.step_min = config.step_min;
  state.step_max = config.step_max;
  bool saturated = false;

  SgdNesterov optimizer(config.momentum, config.weight_decay);
  TrainingResult result;
  const std::size_t phases = (config.epochs + config.phase_epochs - 1) / config.phase_epochs;
  for (std::size_t j = 1; j <= phases; ++j) {
    const auto t0 = std::chrono::steady_clock::now();
    PhaseLogRecord rec;
    rec.phase_index = j;
    rec.first_epoch = (j - 1) * config.phase_epochs + 1;
    rec.epochs = std::min(config.phase_epochs, config.epochs - rec.first_epoch + 1);
    rec.xi = state.xi;
    rec.gamma = table.gamma_vector();
    rec.alpha = table.alpha_vector();
    rec.saturated = saturated;
    rec.lr_last = cosine_lr(rec.first_epoch + rec.epochs - 1, config.lr, config.epochs);
    try {
      const PhaseResult pr =
          run_phase(model, optimizer, data.train, data.val, norm, table, config, rec.first_epoch, rec.epochs);
      rec.kappa = pr.stats.kappa;
      rec.kappa_infinite = pr.stats.kappa_infinite;
      rec.mean_train_loss = pr.stats.mean_train_loss;
      rec.mean_val_loss = pr.stats.mean_val_loss;
      rec.val_accuracy = evaluate_accuracy(model, data.val, norm, config.eval_batch);

      if (config.mode == AugmentMode::CtrlA) {
        state = update_xi(state, pr.stats);
        const bool full = rec.epochs == config.phase_epochs;
        if (full && j % config.ror_period == 0) {
          ModelProbe probe(model, data.val, norm, config.seed, j, config.eval_batch);
          const RorUpdate upd = update_all(probe, table, state.xi, {config.ror_step, config.threads});
          rec.table_updated = true;
          rec.ror_aborted = upd.aborted;
          if (!upd.aborted) {
            table = upd.table;
            saturated = detect_saturation(table, upd.curves);
            result.last_curves = upd.curves;
            result.last_fits = upd.fits;
          }
          for (std::size_t i = 0; i < kNumOperations; ++i) {
            if (upd.fit_failed[i]) rec.fit_failed_ops.push_back(static_cast<int>(i + 1));
          }
          if (hooks.on_ror) hooks.on_ror(upd, j);
        }
      }
    } catch (const std::runtime_error& e) {
      result.error = "phase " + std::to_string(j) + ": " + e.what();
      return result;
    }
    rec.xi_next = state.xi;
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.phases.push_back(rec);
    if (hooks.on_phase) hooks.on_phase(result.phases.back());
  }

  FinalMetrics m;
  m.val_accuracy = evaluate_accuracy(model, data.val, norm, config.eval_batch);
  m.test_accuracy = evaluate_accuracy(model, data.test, norm, config.eval_batch);
  m.test_tta_accuracy = tta_accuracy(model, data.test, norm, config.tta, config.eval_batch);
  result.metrics = m;
  return result;
}

}  // namespace ctrla
