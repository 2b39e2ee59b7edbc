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

#include "dem.hpp"
#include "train.hpp"

namespace mccd {

struct BenchRow {
    std::string decoder;  // "mccd" or "mle"
    int distance = 0;
    MirrorType circuit_type = MirrorType::I;
    int depth = 0;
    int64_t shots = 0;          // scored (qubit, shot) pairs
    double accuracy = 0.0;
    double stderr_ = 0.0;       // sqrt(a(1-a)/n)
    double mean_walltime_s = 0.0;
    double majority_rate = 0.0; // majority-class rate of the same shots
};

struct BenchReport {
    std::vector<BenchRow> rows;
    // Least-squares fit of mean walltime vs depth; r2 is NaN when fewer than
    // two depths were measured.
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
    bool fitted = false;
};

struct EvalConfig {
    int distance = 3;
    MirrorType circuit_type = MirrorType::I;
    int num_logical_qubits = 1;
    std::vector<int> depths;
    int64_t shots_per_depth = 10000;
    uint64_t seed = 0;
    std::string decoder = "mccd";
    std::string checkpoint;  // mccd decoder
    int mle_max_weight = 2;  // mle decoder
    int hidden = 0;
};

/// Samples fresh circuits and noisy shots per depth, decodes them, and scores
/// per-logical-qubit correctness. Decode time is measured per trajectory.
BenchReport evaluate_accuracy(const EvalConfig &cfg);

/// Decode-only wall-time benchmark: trajectories are pre-generated, the timed
/// loop only decodes. Adds the linear fit of time vs depth.
BenchReport benchmark_walltime(const EvalConfig &cfg);

/// Machine-readable report (fixed header, one line per row).
std::string report_to_csv(const BenchReport &report);
/// Human-readable fixed-width table.
std::string report_to_table(const BenchReport &report);

/// Accuracy of the bounded-weight MLE baseline on an already-written dataset;
/// every record is decoded against the DEM of its own circuit.
BenchRow mle_decode_dataset(const std::string &dataset_path, int max_weight,
                            int64_t limit = -1);

}  // namespace mccd
