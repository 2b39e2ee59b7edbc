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

#include "circuit.hpp"
#include "physical.hpp"

namespace mccd {

/// X/Z flip record per physical qubit, tracking how injected Pauli errors
/// propagate through a Clifford circuit. All-zero at circuit start.
struct PauliFrame {
    BitVec x, z;

    explicit PauliFrame(size_t n = 0) : x(n), z(n) {}
    size_t size() const { return x.size(); }
    void clear() {
        x.clear();
        z.clear();
    }
    void xor_pauli(int q, bool px, bool pz) {
        if (px) x.flip(size_t(q));
        if (pz) z.flip(size_t(q));
    }
};

/// Measurement flips relative to the noiseless reference record.
struct ShotRecord {
    BitVec meas_flips;       // all measurement events, in event order
    BitVec final_data_flips; // the trailing data-measurement section
};

/// One sampled Pauli fault, anchored immediately after an instruction
/// (after_instr = -1 injects before the circuit starts).
struct PauliInjection {
    int32_t after_instr;
    int32_t qubit;
    bool px, pz;
};

/// A fully resolved noise realization: Pauli faults plus classical
/// measurement-record flips. Consumable by both the frame simulator and the
/// tableau simulator so the two can be compared shot-for-shot.
struct NoiseRealization {
    std::vector<PauliInjection> paulis;
    std::vector<int32_t> meas_flips;  // flipped measurement event indices
};

/// Conjugates the frame by a single gate, in place.
void propagate_gate1(PauliFrame &f, Phys1 g, int q);
void propagate_gate2(PauliFrame &f, Phys2 g, int a, int b);

/// Samples one Pauli component index from a 3- or 15-entry channel:
/// returns -1 (identity) or k in [0, probs.size()).
int sample_channel_component(const double *probs, size_t n, Rng &rng);

/// XORs a sampled channel component into the frame. `qubits` holds one or two
/// qubit indices matching a 3- or 15-entry probability vector.
void apply_pauli_channel(PauliFrame &f, const std::vector<int> &qubits,
                         const std::vector<double> &probs, Rng &rng);

/// Decodes channel component k into per-qubit (x, z) flip bits.
/// For 1q channels k in {0,1,2} = X,Y,Z. For 2q channels k in [0,15) follows
/// the lexicographic pair order (first letter = first qubit of the pair).
void component_pauli(size_t channel_size, int k, int which_qubit, bool *px, bool *pz);

/// Samples every annotated noise site of the circuit, in instruction order,
/// into an explicit realization. Consumes rng deterministically.
NoiseRealization sample_noise(const PhysicalCircuit &c, Rng &rng);

/// Propagates a realization through the circuit; returns measurement flips.
ShotRecord run_frame(const PhysicalCircuit &c, const NoiseRealization &noise);

/// Samples one noisy shot: sample_noise + run_frame.
ShotRecord frame_sample(const PhysicalCircuit &c, Rng &rng);

}  // namespace mccd
