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

#include "frame_sim.hpp"
#include "physical.hpp"

namespace mccd {

/// Stabilizer/destabilizer generator table over n qubits with phase bits,
/// in the Aaronson-Gottesman layout: rows [0, n) destabilizers, [n, 2n)
/// stabilizers, plus one scratch row. Rows are bit-packed.
class CliffordTableau {
  public:
    explicit CliffordTableau(int num_qubits);

    int num_qubits() const { return n_; }

    void apply_h(int q);
    void apply_cnot(int a, int b);
    void apply_cz(int a, int b);
    /// Pauli gates only flip row phases.
    void apply_pauli(int q, bool px, bool pz);
    void apply_relabel(const std::vector<int32_t> &perm);

    /// Z measurement. Random outcomes are resolved by the caller-supplied
    /// tape bit; `was_random` reports which branch was taken.
    bool measure(int q, Rng &tape, bool *was_random);
    void reset(int q, Rng &tape);

    /// Self-check on small instances: the 2n generator rows form a valid
    /// symplectic basis (destabilizer i anticommutes exactly with stabilizer i).
    bool is_valid_basis() const;

  private:
    int n_, words_;
    std::vector<uint64_t> x_, z_;  // (2n+1) rows, words_ words each
    std::vector<uint8_t> r_;

    uint64_t *xrow(int i) { return x_.data() + size_t(i) * size_t(words_); }
    uint64_t *zrow(int i) { return z_.data() + size_t(i) * size_t(words_); }
    const uint64_t *xrow(int i) const { return x_.data() + size_t(i) * size_t(words_); }
    const uint64_t *zrow(int i) const { return z_.data() + size_t(i) * size_t(words_); }
    bool xbit(int i, int q) const { return (xrow(i)[q >> 6] >> (q & 63)) & 1; }
    bool zbit(int i, int q) const { return (zrow(i)[q >> 6] >> (q & 63)) & 1; }
    void rowsum(int h, int i);
    void row_clear(int i);
    void row_copy(int dst, int src);
};

struct TableauRecord {
    BitVec outcomes;    // measured values, in event order
    BitVec was_random;  // per event: outcome came from the random tape
};

/// Runs the circuit on the collapse-based tableau simulator. Nondeterministic
/// measurement outcomes are resolved from a tape seeded with `seed`; an
/// optional noise realization injects Pauli faults and record flips.
TableauRecord tableau_run(const PhysicalCircuit &c, uint64_t seed,
                          const NoiseRealization *noise = nullptr);

/// Heisenberg-picture oracle: the exact measurement-record difference caused
/// by one injected Pauli, obtained by conjugating it through the remainder of
/// the circuit (no state simulation, no randomness).
BitVec heisenberg_flips(const PhysicalCircuit &c, const PauliInjection &inj);

}  // namespace mccd
