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

#include "tableau_sim.hpp"

#include <algorithm>

namespace mccd {

CliffordTableau::CliffordTableau(int num_qubits)
    : n_(num_qubits), words_((num_qubits + 63) / 64) {
    x_.assign(size_t(2 * n_ + 1) * size_t(words_), 0);
    z_.assign(size_t(2 * n_ + 1) * size_t(words_), 0);
    r_.assign(size_t(2 * n_ + 1), 0);
    for (int i = 0; i < n_; i++) {
        xrow(i)[i >> 6] |= uint64_t(1) << (i & 63);       // destabilizer X_i
        zrow(n_ + i)[i >> 6] |= uint64_t(1) << (i & 63);  // stabilizer Z_i
    }
}

void CliffordTableau::apply_h(int q) {
    const int w = q >> 6;
    const uint64_t m = uint64_t(1) << (q & 63);
    for (int i = 0; i < 2 * n_; i++) {
        uint64_t &xw = xrow(i)[w], &zw = zrow(i)[w];
        bool xb = xw & m, zb = zw & m;
        r_[size_t(i)] ^= uint8_t(xb && zb);
        if (xb != zb) {
            xw ^= m;
            zw ^= m;
        }
    }
}

void CliffordTableau::apply_cnot(int a, int b) {
    const int wa = a >> 6, wb = b >> 6;
    const uint64_t ma = uint64_t(1) << (a & 63), mb = uint64_t(1) << (b & 63);
    for (int i = 0; i < 2 * n_; i++) {
        bool xa = xrow(i)[wa] & ma, za = zrow(i)[wa] & ma;
        bool xb = xrow(i)[wb] & mb, zb = zrow(i)[wb] & mb;
        r_[size_t(i)] ^= uint8_t(xa && zb && (xb == za));
        if (xa) xrow(i)[wb] ^= mb;
        if (zb) zrow(i)[wa] ^= ma;
    }
}

void CliffordTableau::apply_cz(int a, int b) {
    const int wa = a >> 6, wb = b >> 6;
    const uint64_t ma = uint64_t(1) << (a & 63), mb = uint64_t(1) << (b & 63);
    for (int i = 0; i < 2 * n_; i++) {
        bool xa = xrow(i)[wa] & ma, za = zrow(i)[wa] & ma;
        bool xb = xrow(i)[wb] & mb, zb = zrow(i)[wb] & mb;
        r_[size_t(i)] ^= uint8_t(xa && xb && (za != zb));
        if (xb) zrow(i)[wa] ^= ma;
        if (xa) zrow(i)[wb] ^= mb;
    }
}

void CliffordTableau::apply_pauli(int q, bool px, bool pz) {
    const int w = q >> 6;
    const uint64_t m = uint64_t(1) << (q & 63);
    for (int i = 0; i < 2 * n_; i++) {
        bool xb = xrow(i)[w] & m, zb = zrow(i)[w] & m;
        // The gate flips the row sign iff it anticommutes with the row's
        // Pauli on this qubit.
        bool anti = (px && zb) != (pz && xb);
        r_[size_t(i)] ^= uint8_t(anti);
    }
}

void CliffordTableau::apply_relabel(const std::vector<int32_t> &perm) {
    std::vector<uint64_t> nx(static_cast<size_t>(words_)), nz(static_cast<size_t>(words_));
    for (int i = 0; i < 2 * n_; i++) {
        std::fill(nx.begin(), nx.end(), 0);
        std::fill(nz.begin(), nz.end(), 0);
        for (int q = 0; q < n_; q++) {
            int to = perm[size_t(q)];
            if (xbit(i, q)) nx[size_t(to >> 6)] |= uint64_t(1) << (to & 63);
            if (zbit(i, q)) nz[size_t(to >> 6)] |= uint64_t(1) << (to & 63);
        }
        std::copy(nx.begin(), nx.end(), xrow(i));
        std::copy(nz.begin(), nz.end(), zrow(i));
    }
}

void CliffordTableau::rowsum(int h, int i) {
    // Row h := row i * row h, with the CHP mod-4 phase bookkeeping done
    // bit-parallel over words.
    long plus = 0, minus = 0;
    uint64_t *xh = xrow(h), *zh = zrow(h);
    const uint64_t *xi = xrow(i), *zi = zrow(i);
    for (int w = 0; w < words_; w++) {
        uint64_t x1 = xi[w], z1 = zi[w], x2 = xh[w], z2 = zh[w];
        uint64_t p = (x1 & z1 & z2 & ~x2) | (x1 & ~z1 & x2 & z2) | (~x1 & z1 & x2 & ~z2);
        uint64_t q = (x1 & z1 & x2 & ~z2) | (x1 & ~z1 & ~x2 & z2) | (~x1 & z1 & x2 & z2);
        plus += __builtin_popcountll(p);
        minus += __builtin_popcountll(q);
        xh[w] ^= x1;
        zh[w] ^= z1;
    }
    long tot = 2 * long(r_[size_t(h)]) + 2 * long(r_[size_t(i)]) + plus - minus;
    tot &= 3;
    r_[size_t(h)] = uint8_t(tot >> 1);
}

void CliffordTableau::row_clear(int i) {
    std::fill(xrow(i), xrow(i) + words_, 0);
    std::fill(zrow(i), zrow(i) + words_, 0);
    r_[size_t(i)] = 0;
}

void CliffordTableau::row_copy(int dst, int src) {
    std::copy(xrow(src), xrow(src) + words_, xrow(dst));
    std::copy(zrow(src), zrow(src) + words_, zrow(dst));
    r_[size_t(dst)] = r_[size_t(src)];
}

bool CliffordTableau::measure(int q, Rng &tape, bool *was_random) {
    int pivot = -1;
    for (int p = n_; p < 2 * n_; p++) {
        if (xbit(p, q)) {
            pivot = p;
            break;
        }
    }
    if (pivot >= 0) {
        if (was_random) *was_random = true;
        for (int i = 0; i < 2 * n_; i++)
            if (i != pivot && xbit(i, q)) rowsum(i, pivot);
        row_copy(pivot - n_, pivot);
        row_clear(pivot);
        zrow(pivot)[q >> 6] |= uint64_t(1) << (q & 63);
        bool outcome = tape.next_bool();
        r_[size_t(pivot)] = uint8_t(outcome);
        return outcome;
    }
    if (was_random) *was_random = false;
    row_clear(2 * n_);
    for (int i = 0; i < n_; i++)
        if (xbit(i, q)) rowsum(2 * n_, i + n_);
    return r_[size_t(2 * n_)] != 0;
}

void CliffordTableau::reset(int q, Rng &tape) {
    bool outcome = measure(q, tape, nullptr);
    if (outcome) apply_pauli(q, true, false);  // X to flip |1> back to |0>
}

bool CliffordTableau::is_valid_basis() const {
    auto symp = [&](int i, int j) {
        uint64_t acc = 0;
        for (int w = 0; w < words_; w++)
            acc ^= (xrow(i)[w] & zrow(j)[w]) ^ (zrow(i)[w] & xrow(j)[w]);
        return __builtin_parityll(acc) != 0;
    };
    for (int i = 0; i < 2 * n_; i++)
        for (int j = i; j < 2 * n_; j++) {
            bool want = (j == i + n_);  // destabilizer i vs stabilizer i
            if (symp(i, j) != want) return false;
        }
    return true;
}

TableauRecord tableau_run(const PhysicalCircuit &c, uint64_t seed, const NoiseRealization *noise) {
    CliffordTableau tab(c.num_qubits);
    Rng tape(derive_seed(seed, stream_tag::meas_tape, 0));
    TableauRecord rec;
    rec.outcomes.resize(static_cast<size_t>(c.num_meas));
    rec.was_random.resize(static_cast<size_t>(c.num_meas));

    std::vector<PauliInjection> inj;
    if (noise) inj = noise->paulis;
    std::stable_sort(inj.begin(), inj.end(),
                     [](const PauliInjection &a, const PauliInjection &b) {
                         return a.after_instr < b.after_instr;
                     });
    size_t next = 0;
    auto flush = [&](int32_t idx) {
        while (next < inj.size() && inj[next].after_instr == idx) {
            tab.apply_pauli(inj[next].qubit, inj[next].px, inj[next].pz);
            next++;
        }
    };
    flush(-1);

    for (int32_t idx = 0; idx < int32_t(c.instructions.size()); idx++) {
        const auto &ins = c.instructions[size_t(idx)];
        switch (ins.op) {
            case PhysOp::Gate1:
                for (int32_t q : ins.qubits) {
                    switch (ins.g1) {
                        case Phys1::H: tab.apply_h(q); break;
                        case Phys1::X: tab.apply_pauli(q, true, false); break;
                        case Phys1::Y: tab.apply_pauli(q, true, true); break;
                        case Phys1::Z: tab.apply_pauli(q, false, true); break;
                        case Phys1::I: break;
                    }
                }
                break;
            case PhysOp::Gate2:
                for (size_t p = 0; p < ins.num_pairs(); p++) {
                    int a = ins.qubits[2 * p], b = ins.qubits[2 * p + 1];
                    if (ins.g2 == Phys2::CNOT)
                        tab.apply_cnot(a, b);
                    else
                        tab.apply_cz(a, b);
                }
                break;
            case PhysOp::Reset:
                for (int32_t q : ins.qubits) tab.reset(q, tape);
                break;
            case PhysOp::Measure:
                for (size_t i = 0; i < ins.qubits.size(); i++) {
                    bool rnd = false;
                    bool v = tab.measure(ins.qubits[i], tape, &rnd);
                    rec.outcomes.set(size_t(ins.meas_base) + i, v);
                    rec.was_random.set(size_t(ins.meas_base) + i, rnd);
                }
                break;
            case PhysOp::Relabel:
                tab.apply_relabel(ins.qubits);
                break;
            default:
                break;
        }
        flush(idx);
    }
    if (noise)
        for (int32_t e : noise->meas_flips) rec.outcomes.flip(static_cast<size_t>(e));
    return rec;
}

BitVec heisenberg_flips(const PhysicalCircuit &c, const PauliInjection &inj) {
    BitVec flips(static_cast<size_t>(c.num_meas));
    BitVec px(static_cast<size_t>(c.num_qubits)), pz(static_cast<size_t>(c.num_qubits));
    if (inj.px) px.set(size_t(inj.qubit), true);
    if (inj.pz) pz.set(size_t(inj.qubit), true);

    for (int32_t idx = inj.after_instr + 1; idx < int32_t(c.instructions.size()); idx++) {
        const auto &ins = c.instructions[size_t(idx)];
        switch (ins.op) {
            case PhysOp::Gate1:
                if (ins.g1 == Phys1::H)
                    for (int32_t q : ins.qubits) {
                        bool xb = px.get(static_cast<size_t>(q));
                        px.set(size_t(q), pz.get(static_cast<size_t>(q)));
                        pz.set(size_t(q), xb);
                    }
                break;
            case PhysOp::Gate2:
                for (size_t p = 0; p < ins.num_pairs(); p++) {
                    size_t a = size_t(ins.qubits[2 * p]), b = size_t(ins.qubits[2 * p + 1]);
                    if (ins.g2 == Phys2::CNOT) {
                        if (px.get(a)) px.flip(b);
                        if (pz.get(b)) pz.flip(a);
                    } else {
                        if (px.get(b)) pz.flip(a);
                        if (px.get(a)) pz.flip(b);
                    }
                }
                break;
            case PhysOp::Reset:
                for (int32_t q : ins.qubits) {
                    px.set(size_t(q), false);
                    pz.set(size_t(q), false);
                }
                break;
            case PhysOp::Measure:
                for (size_t i = 0; i < ins.qubits.size(); i++)
                    if (px.get(static_cast<size_t>(ins.qubits[i])))
                        flips.set(size_t(ins.meas_base) + i, true);
                break;
            case PhysOp::Relabel: {
                BitVec nx(px.size()), nz(pz.size());
                for (size_t q = 0; q < px.size(); q++) {
                    size_t to = size_t(ins.qubits[q]);
                    if (px.get(q)) nx.set(to, true);
                    if (pz.get(q)) nz.set(to, true);
                }
                px = std::move(nx);
                pz = std::move(nz);
                break;
            }
            default:
                break;
        }
    }
    return flips;
}

}  // namespace mccd
