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

#include <array>
#include <string>
#include <vector>

#include "util.hpp"

namespace mccd {

enum class GateKind : uint8_t { I = 0, X = 1, Y = 2, Z = 3, H = 4, CNOT = 5 };

const char *gate_name(GateKind k);

struct LogicalGate {
    GateKind kind;
    int q0;       // the qubit, or the control for CNOT
    int q1 = -1;  // CNOT target
};

enum class MirrorType : uint8_t { I = 0, II = 1 };

/// A logical circuit over Q surface-code qubits: `layers[t]` assigns exactly
/// one gate to every logical qubit (a CNOT covers two).
struct LogicalCircuit {
    int num_qubits = 0;
    MirrorType type = MirrorType::I;
    std::vector<std::vector<LogicalGate>> layers;

    int depth() const { return int(layers.size()); }
    /// Gate acting on logical qubit q in layer t (0-based).
    const LogicalGate &gate_on(int t, int q) const;
    void validate() const;  // throws Error(invalid_argument) on malformed input
};

/// Samples a mirror-symmetric random circuit: a forward half of D/2 layers
/// followed by the same layers in reverse order (every gate in the set is
/// self-inverse). Type I: iid uniform single-qubit gates. Type II: alternating
/// single-qubit and CNOT layers; each CNOT layer is a uniform random perfect
/// matching with uniform orientation per pair.
LogicalCircuit sample_mirror(MirrorType type, int num_qubits, int depth, Rng &rng);

/// Text form: header `Q=<n> D=<n> TYPE=<I|II>`, then one line per layer with
/// tokens like `H@0 X@1` and `CNOT@0,1`. Round-trips bit-exactly.
std::string circuit_to_text(const LogicalCircuit &c);
LogicalCircuit circuit_from_text(const std::string &text);

/// Circuit-level noise model. Two-qubit channel entries follow lexicographic
/// Pauli-pair order IX IY IZ XI XX XY XZ YI YX YY YZ ZI ZX ZY ZZ with the
/// first letter acting on the first (control) qubit of the pair.
struct NoiseModel {
    std::array<double, 15> p2q{};
    std::array<double, 3> p1q{};
    std::array<double, 3> p_move{};
    double p_reset = 0.0;
    double p_meas = 0.0;

    void validate() const;
    static NoiseModel zero() { return NoiseModel{}; }
    /// The neutral-atom circuit-level model used throughout.
    static NoiseModel standard();
};

}  // namespace mccd
