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
#include "geometry.hpp"
#include "physical.hpp"

namespace mccd {

/// Detector definitions for one compiled circuit. A detector is a parity of
/// recorded measurement outcomes that is deterministic (zero in flip space)
/// on every noiseless shot.
///
/// Index layout, with S = d^2-1 stabilizers per round, F = S/2 reconstructable
/// final stabilizers, Q logical qubits, D rounds:
///   round detector (q, t=1..D, slot)  ->  ((q*D)+(t-1))*S + slot
///   final detector (q, j=0..F-1)      ->  Q*D*S + q*F + j
struct DetectorMap {
    int num_qubits = 0;       // Q
    int depth = 0;            // D
    int stabs_per_round = 0;  // S
    int final_slots = 0;      // F
    std::vector<std::vector<int32_t>> detector_events;  // parity over these events
    // Per logical qubit: the measurement events whose parity reads out the
    // logical-Z observable. Besides the final data measurements this includes
    // the stabilizer records folded in whenever a logical H converts an X
    // component of the tracked observable (the virtual rotation re-expresses
    // it through freshly measured stabilizers).
    std::vector<std::vector<int32_t>> observable_events;
    // Noiseless value-space parity of each observable (0 unless logical Pauli
    // gates flipped the tracked sign). Flip-space labels are unaffected.
    std::vector<uint8_t> observable_expected;

    int num_round_detectors() const { return num_qubits * depth * stabs_per_round; }
    int num_detectors() const { return int(detector_events.size()); }
    int round_index(int q, int t, int slot) const {
        return ((q * depth) + (t - 1)) * stabs_per_round + slot;
    }
    int final_index(int q, int j) const { return num_round_detectors() + q * final_slots + j; }
};

/// Lowers a logical circuit to a physical instruction stream. Every layer
/// emits its transversal gates with noise annotations, then one full
/// stabilizer-measurement round per logical qubit; the final layer is
/// followed by a transversal data-qubit Z measurement. Logical H additionally
/// emits a noiseless relabel permutation (the virtual rotation).
PhysicalCircuit compile(const LogicalCircuit &circuit, const CodeLayout &layout,
                        const NoiseModel &noise);

/// Derives the detector and observable definitions of a compiled circuit.
DetectorMap build_detector_map(const LogicalCircuit &circuit, const CodeLayout &layout,
                               const PhysicalCircuit &phys);

}  // namespace mccd
