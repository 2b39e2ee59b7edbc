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

#include <string>

#include "compiler.hpp"
#include "frame_sim.hpp"

namespace mccd {

/// Per-(qubit, layer) routing tag for the decoder.
enum class GateTag : uint8_t {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
    H = 4,
    CnotControl = 5,
    CnotTarget = 6,
};

/// Model-ready view of one shot: per-qubit detector vectors for every round,
/// the reconstructed final-round half-stabilizer vector, the ground-truth
/// logical-flip label, and the gate tag consumed at each step.
struct SyndromeTrajectory {
    int32_t num_qubits = 0;      // Q
    int32_t depth = 0;           // D
    int32_t stabs_per_round = 0; // d^2 - 1
    int32_t final_slots = 0;     // (d^2 - 1) / 2

    std::vector<uint8_t> s_bits;   // [q][t][slot], t = 0..D-1
    std::vector<uint8_t> f_bits;   // [q][j]
    std::vector<uint8_t> labels;   // [q]
    std::vector<uint8_t> tags;     // [q][t]
    std::vector<uint8_t> partners; // [q][t], 0xFF when not a CNOT step

    uint8_t s(int q, int t, int slot) const {
        return s_bits[size_t((q * depth + t) * stabs_per_round + slot)];
    }
    uint8_t f(int q, int j) const { return f_bits[size_t(q * final_slots + j)]; }
    GateTag tag(int q, int t) const { return GateTag(tags[size_t(q * depth + t)]); }
    int partner(int q, int t) const {
        uint8_t p = partners[size_t(q * depth + t)];
        return p == 0xFF ? -1 : int(p);
    }
    bool operator==(const SyndromeTrajectory &o) const = default;
};

/// Computes the trajectory of one shot record under a detector map. The
/// logical circuit supplies the gate tags.
SyndromeTrajectory build_trajectory(const ShotRecord &shot, const DetectorMap &dmap,
                                    const LogicalCircuit &circuit);

/// Little-endian binary dataset, magic "MCCDDAT1". Requires homogeneous
/// (Q, D, d) across records; read(write(x)) == x bit-exactly.
void write_dataset(const std::string &path, const std::vector<SyndromeTrajectory> &trajs,
                   int distance);
std::vector<SyndromeTrajectory> read_dataset(const std::string &path, int *distance_out);

/// Header-only probe of a dataset file.
void dataset_info(const std::string &path, int *distance, int *num_qubits, int *depth,
                  uint64_t *count);

/// Rebuilds the logical circuit encoded in a trajectory's gate tags.
LogicalCircuit circuit_from_tags(const SyndromeTrajectory &t);

}  // namespace mccd
