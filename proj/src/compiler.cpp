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

#include "compiler.hpp"

#include <algorithm>

namespace mccd {

namespace {

struct Emitter {
    PhysicalCircuit out;
    const CodeLayout &lay;
    const NoiseModel &noise;
    int stride;  // physical qubits per block: d^2 data + d^2-1 ancillas

    Emitter(const CodeLayout &l, const NoiseModel &n, int blocks) : lay(l), noise(n) {
        stride = l.num_data() + l.num_stabilizers();
        out.num_qubits = blocks * stride;
        out.blocks = blocks;
        out.distance = l.distance;
    }

    int data_q(int b, int i) const { return b * stride + i; }
    int anc_q(int b, int slot) const { return b * stride + lay.num_data() + slot; }

    void push(PhysInstruction ins) { out.instructions.push_back(std::move(ins)); }

    void gate1(Phys1 g, std::vector<int32_t> qs) {
        if (qs.empty()) return;
        PhysInstruction ins;
        ins.op = PhysOp::Gate1;
        ins.g1 = g;
        ins.qubits = std::move(qs);
        push(ins);
        PhysInstruction ch;
        ch.op = PhysOp::Channel1;
        ch.qubits = out.instructions.back().qubits;
        ch.probs.assign(noise.p1q.begin(), noise.p1q.end());
        push(ch);
    }

    void gate2(Phys2 g, std::vector<int32_t> pairs) {
        if (pairs.empty()) return;
        PhysInstruction ins;
        ins.op = PhysOp::Gate2;
        ins.g2 = g;
        ins.qubits = std::move(pairs);
        push(ins);
        PhysInstruction ch;
        ch.op = PhysOp::Channel2;
        ch.qubits = out.instructions.back().qubits;
        ch.probs.assign(noise.p2q.begin(), noise.p2q.end());
        push(ch);
    }

    // Returns the event index of the first listed qubit.
    int32_t measure(std::vector<int32_t> qs) {
        PhysInstruction ins;
        ins.op = PhysOp::Measure;
        ins.qubits = std::move(qs);
        ins.probs = {noise.p_meas};
        ins.meas_base = out.num_meas;
        int32_t base = out.num_meas;
        out.num_meas += int32_t(ins.qubits.size());
        push(ins);
        return base;
    }

    void qec_round(int blocks, int round_t) {
        std::vector<int32_t> ancs;
        for (int b = 0; b < blocks; b++)
            for (int s = 0; s < lay.num_stabilizers(); s++) ancs.push_back(anc_q(b, s));
        PhysInstruction rst;
        rst.op = PhysOp::Reset;
        rst.qubits = ancs;
        rst.probs = {noise.p_reset};
        push(rst);
        gate1(Phys1::H, ancs);
        for (int k = 0; k < 4; k++) {
            std::vector<int32_t> cz_pairs, cx_pairs;
            for (int b = 0; b < blocks; b++) {
                for (int s = 0; s < lay.num_stabilizers(); s++) {
                    int dq = lay.stabilizers[size_t(s)].substep[size_t(k)];
                    if (dq < 0) continue;
                    if (lay.stabilizers[size_t(s)].basis == StabBasis::Z) {
                        // data qubit is the CZ control, ancilla the target
                        cz_pairs.push_back(data_q(b, dq));
                        cz_pairs.push_back(anc_q(b, s));
                    } else {
                        // X check: ancilla-controlled CNOT onto the data qubit
                        cx_pairs.push_back(anc_q(b, s));
                        cx_pairs.push_back(data_q(b, dq));
                    }
                }
            }
            gate2(Phys2::CZ, std::move(cz_pairs));
            gate2(Phys2::CNOT, std::move(cx_pairs));
        }
        gate1(Phys1::H, ancs);
        int32_t base = measure(ancs);
        // Events were emitted block-major within this round; store them under
        // the (block, round, slot) indexing.
        const int S = lay.num_stabilizers();
        for (int b = 0; b < blocks; b++)
            for (int s = 0; s < S; s++)
                out.anc_event[size_t(((b * out.depth) + (round_t - 1)) * S + s)] =
                    base + int32_t(b * S + s);
    }
};

}  // namespace

PhysicalCircuit compile(const LogicalCircuit &circuit, const CodeLayout &layout,
                        const NoiseModel &noise) {
    circuit.validate();
    noise.validate();
    const int Q = circuit.num_qubits;
    const int nd = layout.num_data();
    Emitter em(layout, noise, Q);
    em.out.depth = circuit.depth();
    em.out.anc_event.assign(size_t(Q) * size_t(circuit.depth()) * size_t(layout.num_stabilizers()),
                            -1);

    for (int t = 0; t < circuit.depth(); t++) {
        const auto &layer = circuit.layers[size_t(t)];
        // Transversal single-qubit gates, grouped by kind in a fixed order.
        for (GateKind kind : {GateKind::I, GateKind::X, GateKind::Y, GateKind::Z, GateKind::H}) {
            std::vector<int32_t> qs;
            std::vector<int> blocks;
            for (const auto &g : layer)
                if (g.kind == kind) blocks.push_back(g.q0);
            std::sort(blocks.begin(), blocks.end());
            for (int b : blocks)
                for (int i = 0; i < nd; i++) qs.push_back(em.data_q(b, i));
            if (qs.empty()) continue;
            em.gate1(Phys1(uint8_t(kind)), std::move(qs));
            if (kind == GateKind::H) {
                PhysInstruction rel;
                rel.op = PhysOp::Relabel;
                rel.qubits.resize(size_t(em.out.num_qubits));
                for (int32_t q = 0; q < em.out.num_qubits; q++) rel.qubits[size_t(q)] = q;
                for (int b : blocks)
                    for (int i = 0; i < nd; i++)
                        rel.qubits[size_t(em.data_q(b, i))] =
                            em.data_q(b, layout.h_rotation_perm[size_t(i)]);
                em.push(rel);
            }
        }
        // Transversal CNOTs: movement idling noise on both blocks' data
        // qubits, then the pairwise physical CNOTs.
        std::vector<const LogicalGate *> cnots;
        for (const auto &g : layer)
            if (g.kind == GateKind::CNOT) cnots.push_back(&g);
        std::sort(cnots.begin(), cnots.end(), [](const LogicalGate *a, const LogicalGate *b) {
            return std::min(a->q0, a->q1) < std::min(b->q0, b->q1);
        });
        if (!cnots.empty()) {
            std::vector<int> blocks;
            for (const auto *g : cnots) {
                blocks.push_back(g->q0);
                blocks.push_back(g->q1);
            }
            std::sort(blocks.begin(), blocks.end());
            PhysInstruction mv;
            mv.op = PhysOp::Channel1;
            mv.probs.assign(noise.p_move.begin(), noise.p_move.end());
            for (int b : blocks)
                for (int i = 0; i < nd; i++) mv.qubits.push_back(em.data_q(b, i));
            em.push(mv);
            std::vector<int32_t> pairs;
            for (const auto *g : cnots)
                for (int i = 0; i < nd; i++) {
                    pairs.push_back(em.data_q(g->q0, i));
                    pairs.push_back(em.data_q(g->q1, i));
                }
            em.gate2(Phys2::CNOT, std::move(pairs));
        }
        em.qec_round(Q, t + 1);
    }

    // Final transversal data-qubit Z measurement, block-major and row-major.
    std::vector<int32_t> data;
    for (int b = 0; b < Q; b++)
        for (int i = 0; i < nd; i++) data.push_back(em.data_q(b, i));
    int32_t fbase = em.measure(std::move(data));
    for (int32_t i = 0; i < Q * nd; i++) em.out.final_event.push_back(fbase + i);
    return std::move(em.out);
}

DetectorMap build_detector_map(const LogicalCircuit &circuit, const CodeLayout &layout,
                               const PhysicalCircuit &phys) {
    require(phys.blocks == circuit.num_qubits && phys.depth == circuit.depth() &&
                phys.distance == layout.distance,
            ErrorCode::mismatch, "detector map inputs come from different compilations");
    DetectorMap dm;
    dm.num_qubits = circuit.num_qubits;
    dm.depth = circuit.depth();
    dm.stabs_per_round = layout.num_stabilizers();
    dm.final_slots = layout.num_z;
    dm.detector_events.resize(size_t(dm.num_round_detectors() + dm.num_qubits * dm.final_slots));

    for (int q = 0; q < dm.num_qubits; q++) {
        for (int t = 1; t <= dm.depth; t++) {
            const LogicalGate &g = circuit.gate_on(t - 1, q);
            for (int s = 0; s < dm.stabs_per_round; s++) {
                auto &ev = dm.detector_events[size_t(dm.round_index(q, t, s))];
                ev.push_back(phys.anc(q, t, s));
                if (t == 1) continue;  // compared against the implicit reference
                switch (g.kind) {
                    case GateKind::H:
                        ev.push_back(phys.anc(q, t - 1, layout.h_flow_partner[size_t(s)]));
                        break;
                    case GateKind::CNOT: {
                        bool is_target = (g.q1 == q);
                        bool z_slot = (s < layout.num_z);
                        ev.push_back(phys.anc(q, t - 1, s));
                        if (is_target && z_slot) ev.push_back(phys.anc(g.q0, t - 1, s));
                        if (!is_target && !z_slot) ev.push_back(phys.anc(g.q1, t - 1, s));
                        break;
                    }
                    default:
                        ev.push_back(phys.anc(q, t - 1, s));
                }
            }
        }
        // Final-round reconstructable Z stabilizers, compared against their
        // last ancilla measurement (no gate layer in between: identity flow).
        for (int j = 0; j < dm.final_slots; j++) {
            auto &ev = dm.detector_events[size_t(dm.final_index(q, j))];
            for (int dq : layout.stabilizers[size_t(j)].support) ev.push_back(phys.fin(q, dq));
            ev.push_back(phys.anc(q, dm.depth, j));
        }
    }
    // Logical observables: conjugate each block's initial logical Z forward
    // through the logical circuit as a CHP-style Pauli row over the logical
    // qubits. A logical H maps X-bar to Z@col(d-1) = Z-bar times the product
    // of all Z stabilizers, so whenever an H hits an X component the round's
    // full Z-stabilizer record is folded into the observable.
    const int Q = dm.num_qubits;
    struct ObsTracker {
        std::vector<uint8_t> x, z;
        uint8_t sign = 0;
        std::vector<int32_t> folds;
    };
    std::vector<ObsTracker> obs(static_cast<size_t>(Q));
    for (int q = 0; q < Q; q++) {
        obs[size_t(q)].x.assign(size_t(Q), 0);
        obs[size_t(q)].z.assign(size_t(Q), 0);
        obs[size_t(q)].z[size_t(q)] = 1;
    }
    for (int t = 0; t < dm.depth; t++) {
        for (const auto &g : circuit.layers[size_t(t)]) {
            for (auto &ob : obs) {
                size_t b = size_t(g.q0);
                switch (g.kind) {
                    case GateKind::I:
                        break;
                    case GateKind::X:
                        ob.sign ^= ob.z[b];
                        break;
                    case GateKind::Y:
                        ob.sign ^= uint8_t(ob.x[b] ^ ob.z[b]);
                        break;
                    case GateKind::Z:
                        ob.sign ^= ob.x[b];
                        break;
                    case GateKind::H: {
                        if (ob.x[b])
                            for (int j = 0; j < layout.num_z; j++)
                                ob.folds.push_back(phys.anc(g.q0, t + 1, j));
                        ob.sign ^= uint8_t(ob.x[b] & ob.z[b]);
                        std::swap(ob.x[b], ob.z[b]);
                        break;
                    }
                    case GateKind::CNOT: {
                        size_t c = size_t(g.q0), tg = size_t(g.q1);
                        ob.sign ^= uint8_t(ob.x[c] & ob.z[tg] & (ob.x[tg] ^ ob.z[c] ^ 1));
                        ob.x[tg] ^= ob.x[c];
                        ob.z[c] ^= ob.z[tg];
                        break;
                    }
                }
            }
        }
    }
    dm.observable_events.resize(size_t(Q));
    dm.observable_expected.resize(size_t(Q));
    for (int q = 0; q < Q; q++) {
        auto &ev = dm.observable_events[size_t(q)];
        // Z-basis readout: only the Z components of the tracked observable
        // are measurable; mirror circuits always end with a pure Z-bar.
        for (int b = 0; b < Q; b++)
            if (obs[size_t(q)].z[size_t(b)])
                for (int dq : layout.logical_z_support) ev.push_back(phys.fin(b, dq));
        for (int32_t e : obs[size_t(q)].folds) ev.push_back(e);
        dm.observable_expected[size_t(q)] = obs[size_t(q)].sign;
    }
    return dm;
}

}  // namespace mccd
