// Copyright 2026 The MCCD Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>

#include "model.hpp"

namespace mccd {

struct TrainConfig {
    int distance = 3;
    MirrorType circuit_type = MirrorType::I;
    int num_logical_qubits = 1;
    std::vector<int> depths;
    int batch_size = 1024;
    double learning_rate = 0.001;
    double aux_weight = 0.5;
    int64_t num_batches = 0;
    int stage = 1;
    uint64_t seed = 0;
    std::string checkpoint_in;   // required for stage 2
    std::string checkpoint_out;
    std::string log_path;                 // per-batch loss log; empty = no log
    std::vector<std::string> data_files;  // optional dataset-file mode
    int hidden = 0;                       // 0 = per-distance default

    void validate() const;
};

/// Composite loss for one (sample, qubit): CE(main) + aux_weight * CE(aux).
double sample_loss(const double *main_logits, const double *aux_logits, int label,
                   double aux_weight);

/// Exact reverse-mode gradient of the mean composite loss over a batch.
/// Returns (mean main CE, mean aux CE); `grads` must be shaped like `model`
/// (allocated via make_model) and is overwritten.
std::pair<double, double> backward(const ModelParams &model,
                                   const std::vector<SyndromeTrajectory> &batch,
                                   double aux_weight, ModelParams &grads);

/// Batch mean loss only (used by the finite-difference oracle).
std::pair<double, double> batch_loss(const ModelParams &model,
                                     const std::vector<SyndromeTrajectory> &batch,
                                     double aux_weight);

struct AdamState {
    ModelParams m, v;  // first/second moment accumulators, parameter-shaped
    int64_t step = 0;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    explicit AdamState(const ModelParams &like);
};

/// Bias-corrected Adam update. `frozen` (optional) marks tensors to skip, by
/// visit order index.
void adam_step(ModelParams &params, const ModelParams &grads, AdamState &state, double lr,
               const std::vector<bool> *frozen = nullptr);

/// Tensor freeze mask for a training stage: stage 1 freezes the two-qubit
/// module, stage 2 freezes everything else.
std::vector<bool> stage_freeze_mask(const ModelParams &like, int stage);

struct TrainResult {
    ModelParams model;
    double first_loss = 0.0, last_loss = 0.0;
    int64_t batches = 0;
};

/// Stage 1: optimizes the five single-qubit modules and both readouts on
/// Type I data; the two-qubit module stays at its initialization.
TrainResult train_stage1(const TrainConfig &config);

/// Stage 2: loads a stage-1 checkpoint and trains only the two-qubit module
/// on Type II data; every other parameter is bit-identical afterwards.
TrainResult train_stage2(const TrainConfig &config);

/// Central finite-difference audit of backward(). Returns the max relative
/// error max |g - g_fd| / max(1, |g|, |g_fd|) over every parameter.
double grad_check(const ModelParams &model, const std::vector<SyndromeTrajectory> &batch,
                  double eps, double aux_weight = 0.5);

/// Deterministic per-trajectory sample generation used by training and
/// evaluation: circuit from (seed, circuit-tag, index), shot from
/// (seed, shot-tag, index).
SyndromeTrajectory generate_trajectory(const CodeLayout &layout, const NoiseModel &noise,
                                       MirrorType type, int num_qubits, int depth,
                                       uint64_t seed, uint64_t index,
                                       LogicalCircuit *circuit_out = nullptr);

/// Four d=3, D=2 trajectories under boosted noise that together exercise
/// every module type: all five single-qubit modules, the two-qubit module,
/// and both readouts. Used by the gradient audit.
std::vector<SyndromeTrajectory> gradcheck_batch(uint64_t seed);

}  // namespace mccd
