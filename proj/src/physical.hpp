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

#include <vector>

#include "util.hpp"

namespace mccd {

enum class PhysOp : uint8_t {
    Gate1 = 0,     // single-qubit Clifford on each listed qubit
    Gate2 = 1,     // two-qubit Clifford on each listed (a, b) pair
    Reset = 2,     // |0> reset, followed by an X flip w.p. probs[0] each
    Measure = 3,   // Z measurement; recorded bit flips w.p. probs[0] each
    Channel1 = 4,  // independent 1q Pauli channel probs[3] on each qubit
    Channel2 = 5,  // 2q Pauli channel probs[15] on each pair
    Relabel = 6,   // noiseless data-qubit permutation (virtual H rotation)
};

enum class Phys1 : uint8_t { I = 0, X = 1, Y = 2, Z = 3, H = 4 };
enum class Phys2 : uint8_t { CNOT = 0, CZ = 1 };

struct PhysInstruction {
    PhysOp op;
    Phys1 g1 = Phys1::I;
    Phys2 g2 = Phys2::CNOT;
    // Gate1/Reset/Measure/Channel1: flat qubit list. Gate2/Channel2: flat
    // (first, second) pairs, first = control. Relabel: state at qubit i moves
    // to qubit perm[i] (identity outside the affected block).
    std::vector<int32_t> qubits;
    std::vector<double> probs;
    int32_t meas_base = -1;  // Measure: event index of qubits[0]

    size_t num_pairs() const { return qubits.size() / 2; }
};

/// Time-ordered physical instruction stream plus the measurement-event
/// bookkeeping produced by compilation.
struct PhysicalCircuit {
    int32_t num_qubits = 0;
    int32_t num_meas = 0;
    std::vector<PhysInstruction> instructions;

    // Compilation metadata (set by compile()):
    int32_t blocks = 0;    // number of logical qubits
    int32_t distance = 0;  // code distance d
    int32_t depth = 0;     // logical layer count D
    // Measurement event of the ancilla for (block b, round t=1..D, stabilizer
    // slot s): anc_event[((b*D)+(t-1))*S + s], S = d^2-1.
    std::vector<int32_t> anc_event;
    // Final transversal data measurement: final_event[b*d^2 + data_index].
    std::vector<int32_t> final_event;

    int32_t anc(int b, int t, int slot) const {
        int S = distance * distance - 1;
        return anc_event[size_t(((b * depth) + (t - 1)) * S + slot)];
    }
    int32_t fin(int b, int data_idx) const {
        return final_event[size_t(b * distance * distance + data_idx)];
    }
    /// Count of per-qubit gate applications (pairs count once), for tests.
    size_t count_gate_applications() const {
        size_t n = 0;
        for (const auto &ins : instructions) {
            if (ins.op == PhysOp::Gate1) n += ins.qubits.size();
            if (ins.op == PhysOp::Gate2) n += ins.num_pairs();
        }
        return n;
    }
};

}  // namespace mccd
