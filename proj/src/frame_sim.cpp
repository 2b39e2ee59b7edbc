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

#include "frame_sim.hpp"

#include <algorithm>

namespace mccd {

void propagate_gate1(PauliFrame &f, Phys1 g, int q) {
    if (g == Phys1::H) {
        bool xb = f.x.get(static_cast<size_t>(q)), zb = f.z.get(static_cast<size_t>(q));
        f.x.set(size_t(q), zb);
        f.z.set(size_t(q), xb);
    }
    // Pauli gates commute with the frame up to phase.
}

void propagate_gate2(PauliFrame &f, Phys2 g, int a, int b) {
    if (g == Phys2::CNOT) {
        if (f.x.get(static_cast<size_t>(a))) f.x.flip(static_cast<size_t>(b));
        if (f.z.get(static_cast<size_t>(b))) f.z.flip(static_cast<size_t>(a));
    } else {  // CZ
        bool xa = f.x.get(static_cast<size_t>(a)), xb = f.x.get(static_cast<size_t>(b));
        if (xb) f.z.flip(static_cast<size_t>(a));
        if (xa) f.z.flip(static_cast<size_t>(b));
    }
}

int sample_channel_component(const double *probs, size_t n, Rng &rng) {
    double u = rng.next_double();
    double acc = 0.0;
    for (size_t k = 0; k < n; k++) {
        acc += probs[k];
        if (u < acc) return int(k);
    }
    return -1;
}

void component_pauli(size_t channel_size, int k, int which_qubit, bool *px, bool *pz) {
    int p;  // 0=I 1=X 2=Y 3=Z
    if (channel_size == 3) {
        p = k + 1;
    } else {
        int a = (k + 1) / 4, b = (k + 1) % 4;
        p = (which_qubit == 0) ? a : b;
    }
    *px = (p == 1 || p == 2);
    *pz = (p == 2 || p == 3);
}

void apply_pauli_channel(PauliFrame &f, const std::vector<int> &qubits,
                         const std::vector<double> &probs, Rng &rng) {
    require((qubits.size() == 1 && probs.size() == 3) ||
                (qubits.size() == 2 && probs.size() == 15),
            ErrorCode::invalid_argument, "pauli channel arity mismatch");
    int k = sample_channel_component(probs.data(), probs.size(), rng);
    if (k < 0) return;
    for (size_t w = 0; w < qubits.size(); w++) {
        bool px, pz;
        component_pauli(probs.size(), k, int(w), &px, &pz);
        f.xor_pauli(qubits[w], px, pz);
    }
}

NoiseRealization sample_noise(const PhysicalCircuit &c, Rng &rng) {
    NoiseRealization out;
    for (int32_t idx = 0; idx < int32_t(c.instructions.size()); idx++) {
        const auto &ins = c.instructions[size_t(idx)];
        switch (ins.op) {
            case PhysOp::Channel1:
                for (int32_t q : ins.qubits) {
                    int k = sample_channel_component(ins.probs.data(), 3, rng);
                    if (k < 0) continue;
                    bool px, pz;
                    component_pauli(3, k, 0, &px, &pz);
                    out.paulis.push_back({idx, q, px, pz});
                }
                break;
            case PhysOp::Channel2:
                for (size_t p = 0; p < ins.num_pairs(); p++) {
                    int k = sample_channel_component(ins.probs.data(), 15, rng);
                    if (k < 0) continue;
                    for (int w = 0; w < 2; w++) {
                        bool px, pz;
                        component_pauli(15, k, w, &px, &pz);
                        if (px || pz) out.paulis.push_back({idx, ins.qubits[2 * p + size_t(w)], px, pz});
                    }
                }
                break;
            case PhysOp::Reset:
                for (int32_t q : ins.qubits)
                    if (rng.next_double() < ins.probs[0]) out.paulis.push_back({idx, q, true, false});
                break;
            case PhysOp::Measure:
                for (size_t i = 0; i < ins.qubits.size(); i++)
                    if (rng.next_double() < ins.probs[0])
                        out.meas_flips.push_back(ins.meas_base + int32_t(i));
                break;
            default:
                break;
        }
    }
    return out;
}

ShotRecord run_frame(const PhysicalCircuit &c, const NoiseRealization &noise) {
    PauliFrame f(static_cast<size_t>(c.num_qubits));
    ShotRecord rec;
    rec.meas_flips.resize(static_cast<size_t>(c.num_meas));
    for (int32_t e : noise.meas_flips) rec.meas_flips.flip(static_cast<size_t>(e));

    // Injections grouped by anchor; entries are already in anchor order by
    // construction, but sort defensively for hand-built lists.
    std::vector<PauliInjection> inj = noise.paulis;
    std::stable_sort(inj.begin(), inj.end(),
                     [](const PauliInjection &a, const PauliInjection &b) {
                         return a.after_instr < b.after_instr;
                     });
    size_t next = 0;
    auto flush = [&](int32_t idx) {
        while (next < inj.size() && inj[next].after_instr == idx) {
            f.xor_pauli(inj[next].qubit, inj[next].px, inj[next].pz);
            next++;
        }
    };
    flush(-1);

    std::vector<uint64_t> scratch;
    for (int32_t idx = 0; idx < int32_t(c.instructions.size()); idx++) {
        const auto &ins = c.instructions[size_t(idx)];
        switch (ins.op) {
            case PhysOp::Gate1:
                if (ins.g1 == Phys1::H)
                    for (int32_t q : ins.qubits) propagate_gate1(f, Phys1::H, q);
                break;
            case PhysOp::Gate2:
                for (size_t p = 0; p < ins.num_pairs(); p++)
                    propagate_gate2(f, ins.g2, ins.qubits[2 * p], ins.qubits[2 * p + 1]);
                break;
            case PhysOp::Reset:
                for (int32_t q : ins.qubits) {
                    f.x.set(size_t(q), false);
                    f.z.set(size_t(q), false);
                }
                break;
            case PhysOp::Measure:
                for (size_t i = 0; i < ins.qubits.size(); i++)
                    if (f.x.get(static_cast<size_t>(ins.qubits[i])))
                        rec.meas_flips.flip(size_t(ins.meas_base) + i);
                break;
            case PhysOp::Relabel: {
                BitVec nx(f.size()), nz(f.size());
                for (size_t q = 0; q < f.size(); q++) {
                    size_t to = size_t(ins.qubits[q]);
                    if (f.x.get(q)) nx.set(to, true);
                    if (f.z.get(q)) nz.set(to, true);
                }
                f.x = std::move(nx);
                f.z = std::move(nz);
                break;
            }
            default:
                break;
        }
        flush(idx);
    }

    if (!c.final_event.empty()) {
        rec.final_data_flips.resize(c.final_event.size());
        for (size_t i = 0; i < c.final_event.size(); i++)
            rec.final_data_flips.set(i, rec.meas_flips.get(static_cast<size_t>(c.final_event[i])));
    }
    return rec;
}

ShotRecord frame_sample(const PhysicalCircuit &c, Rng &rng) {
    NoiseRealization n = sample_noise(c, rng);
    return run_frame(c, n);
}

}  // namespace mccd
