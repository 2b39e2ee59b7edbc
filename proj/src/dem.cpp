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

#include "dem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace mccd {

namespace {

// Forward-conjugates a set of same-anchor Pauli injections to the circuit end
// (linearity makes a multi-qubit fault the XOR of its single-qubit parts).
BitVec multi_flips(const PhysicalCircuit &c, const std::vector<PauliInjection> &injs) {
    BitVec acc(static_cast<size_t>(c.num_meas));
    for (const auto &inj : injs) acc ^= heisenberg_flips(c, inj);
    return acc;
}

std::string bitvec_key(const BitVec &a, const BitVec &b) {
    std::string k;
    k.reserve((a.words().size() + b.words().size() + 1) * 8);
    auto put = [&](const std::vector<uint64_t> &w) {
        for (uint64_t v : w)
            for (int i = 0; i < 8; i++) k.push_back(char(v >> (8 * i)));
        k.push_back('|');
    };
    put(a.words());
    put(b.words());
    return k;
}

}  // namespace

DetectorErrorModel extract_dem(const PhysicalCircuit &circuit, const DetectorMap &dmap) {
    DetectorErrorModel dem;
    dem.num_detectors = dmap.num_detectors();
    dem.num_observables = dmap.num_qubits;

    // Event -> incident detectors / observables.
    std::vector<std::vector<int32_t>> ev2det(static_cast<size_t>(circuit.num_meas));
    std::vector<std::vector<int32_t>> ev2obs(static_cast<size_t>(circuit.num_meas));
    for (int dix = 0; dix < dem.num_detectors; dix++)
        for (int32_t e : dmap.detector_events[size_t(dix)]) ev2det[size_t(e)].push_back(dix);
    for (int o = 0; o < dem.num_observables; o++)
        for (int32_t e : dmap.observable_events[size_t(o)]) ev2obs[size_t(e)].push_back(o);

    std::unordered_map<std::string, size_t> merged;
    auto add_fault = [&](double p, const BitVec &meas_flips) {
        if (p <= 0.0) return;
        BitVec dets(static_cast<size_t>(dem.num_detectors)), obs(static_cast<size_t>(dem.num_observables));
        for (size_t e : meas_flips.ones()) {
            for (int32_t dix : ev2det[e]) dets.flip(static_cast<size_t>(dix));
            for (int32_t o : ev2obs[e]) obs.flip(static_cast<size_t>(o));
        }
        if (!dets.any() && !obs.any()) return;
        std::string key = bitvec_key(dets, obs);
        auto it = merged.find(key);
        if (it == merged.end()) {
            merged.emplace(std::move(key), dem.faults.size());
            dem.faults.push_back({p, std::move(dets), std::move(obs)});
        } else {
            double &q = dem.faults[it->second].p;
            q = q * (1.0 - p) + p * (1.0 - q);
        }
    };

    for (int32_t idx = 0; idx < int32_t(circuit.instructions.size()); idx++) {
        const auto &ins = circuit.instructions[size_t(idx)];
        switch (ins.op) {
            case PhysOp::Channel1:
                for (int32_t q : ins.qubits)
                    for (int k = 0; k < 3; k++) {
                        if (ins.probs[size_t(k)] <= 0.0) continue;
                        bool px, pz;
                        component_pauli(3, k, 0, &px, &pz);
                        add_fault(ins.probs[size_t(k)], multi_flips(circuit, {{idx, q, px, pz}}));
                    }
                break;
            case PhysOp::Channel2:
                for (size_t pr = 0; pr < ins.num_pairs(); pr++)
                    for (int k = 0; k < 15; k++) {
                        if (ins.probs[size_t(k)] <= 0.0) continue;
                        std::vector<PauliInjection> injs;
                        for (int w = 0; w < 2; w++) {
                            bool px, pz;
                            component_pauli(15, k, w, &px, &pz);
                            if (px || pz)
                                injs.push_back({idx, ins.qubits[2 * pr + size_t(w)], px, pz});
                        }
                        add_fault(ins.probs[size_t(k)], multi_flips(circuit, injs));
                    }
                break;
            case PhysOp::Reset:
                if (ins.probs[0] > 0.0)
                    for (int32_t q : ins.qubits)
                        add_fault(ins.probs[0], multi_flips(circuit, {{idx, q, true, false}}));
                break;
            case PhysOp::Measure:
                if (ins.probs[0] > 0.0)
                    for (size_t i = 0; i < ins.qubits.size(); i++) {
                        BitVec rec(static_cast<size_t>(circuit.num_meas));
                        rec.set(size_t(ins.meas_base) + i, true);
                        add_fault(ins.probs[0], rec);
                    }
                break;
            default:
                break;
        }
    }
    return dem;
}

std::string dem_to_text(const DetectorErrorModel &dem) {
    std::vector<const Fault *> order;
    for (const auto &f : dem.faults) order.push_back(&f);
    auto key = [](const Fault *f) { return std::make_pair(f->dets.ones(), f->obs.ones()); };
    std::sort(order.begin(), order.end(),
              [&](const Fault *a, const Fault *b) { return key(a) < key(b); });
    std::ostringstream os;
    os << "MCCDDEM1 detectors=" << dem.num_detectors << " observables=" << dem.num_observables
       << " faults=" << dem.faults.size() << "\n";
    char buf[64];
    for (const Fault *f : order) {
        std::snprintf(buf, sizeof buf, "%.10g", f->p);
        os << buf << " D:{";
        auto ones = f->dets.ones();
        for (size_t i = 0; i < ones.size(); i++) os << (i ? "," : "") << ones[i];
        os << "} L:{";
        ones = f->obs.ones();
        for (size_t i = 0; i < ones.size(); i++) os << (i ? "," : "") << ones[i];
        os << "}\n";
    }
    return os.str();
}

namespace {

struct Cand {
    bool valid = false;
    double score = 0.0;
    std::vector<int> subset;

    void offer(double s, std::vector<int> idx) {
        std::sort(idx.begin(), idx.end());
        if (!valid || s > score || (s == score && idx < subset)) {
            valid = true;
            score = s;
            subset = std::move(idx);
        }
    }
};

uint64_t hash_bits(const BitVec &v) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (uint64_t w : v.words()) {
        h ^= w;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double log_choose_guard(int n, int w) {
    double c = 1.0;
    for (int k = 0; k < w; k++) c = c * double(n - k) / double(k + 1);
    return c;
}

}  // namespace

MleResult mle_decode(const DetectorErrorModel &dem, const BitVec &detectors, int max_weight) {
    require(max_weight >= 1, ErrorCode::invalid_argument, "max_weight must be >= 1");
    require(int(detectors.size()) == dem.num_detectors, ErrorCode::mismatch,
            "observed detector vector has the wrong length");
    const int n = int(dem.faults.size());
    require(log_choose_guard(n, max_weight) <= 1e7, ErrorCode::too_large,
            "fault-subset enumeration guard exceeded");

    double base = 0.0;
    std::vector<double> odds(static_cast<size_t>(n));
    for (int k = 0; k < n; k++) {
        base += std::log1p(-dem.faults[size_t(k)].p);
        odds[size_t(k)] =
            std::log(dem.faults[size_t(k)].p) - std::log1p(-dem.faults[size_t(k)].p);
    }

    Cand best;
    if (!detectors.any()) best.offer(0.0, {});

    // Top candidates per detector signature, for meet-in-the-middle lookups.
    std::unordered_map<uint64_t, std::vector<int>> singles;
    auto sig_less = [&](int a, int b) {
        return odds[size_t(a)] > odds[size_t(b)] || (odds[size_t(a)] == odds[size_t(b)] && a < b);
    };
    for (int k = 0; k < n; k++) {
        auto &lst = singles[hash_bits(dem.faults[size_t(k)].dets)];
        lst.push_back(k);
        std::sort(lst.begin(), lst.end(), sig_less);
        if (lst.size() > 3) lst.resize(3);
    }
    auto lookup = [&](const BitVec &target) -> const std::vector<int> * {
        auto it = singles.find(hash_bits(target));
        return it == singles.end() ? nullptr : &it->second;
    };

    BitVec t(static_cast<size_t>(dem.num_detectors));
    if (max_weight >= 1) {
        for (int k = 0; k < n; k++)
            if (dem.faults[size_t(k)].dets == detectors) best.offer(odds[size_t(k)], {k});
    }
    if (max_weight >= 2) {
        for (int i = 0; i < n; i++) {
            t = detectors;
            t ^= dem.faults[size_t(i)].dets;
            if (const auto *lst = lookup(t))
                for (int j : *lst)
                    if (j != i && dem.faults[size_t(j)].dets == t)
                        best.offer(odds[size_t(i)] + odds[size_t(j)], {i, j});
        }
    }
    if (max_weight >= 3) {
        for (int i = 0; i < n; i++)
            for (int j = i + 1; j < n; j++) {
                t = detectors;
                t ^= dem.faults[size_t(i)].dets;
                t ^= dem.faults[size_t(j)].dets;
                if (const auto *lst = lookup(t))
                    for (int k : *lst)
                        if (k != i && k != j && dem.faults[size_t(k)].dets == t)
                            best.offer(odds[size_t(i)] + odds[size_t(j)] + odds[size_t(k)],
                                       {i, j, k});
            }
    }
    if (max_weight >= 4) {
        // Generic lexicographic recursion for the rare deep calls.
        std::vector<int> pick;
        BitVec acc(static_cast<size_t>(dem.num_detectors));
        double score = 0.0;
        auto rec = [&](auto &&self, int start) -> void {
            if (acc == detectors && !pick.empty()) best.offer(score, pick);
            if (int(pick.size()) == max_weight) return;
            for (int k = start; k < n; k++) {
                pick.push_back(k);
                acc ^= dem.faults[size_t(k)].dets;
                score += odds[size_t(k)];
                self(self, k + 1);
                score -= odds[size_t(k)];
                acc ^= dem.faults[size_t(k)].dets;
                pick.pop_back();
            }
        };
        rec(rec, 0);
    }

    MleResult res;
    res.observable_flips.resize(static_cast<size_t>(dem.num_observables));
    if (!best.valid) {
        res.found = false;
        res.log_probability = base;
        return res;
    }
    res.found = true;
    res.log_probability = base + best.score;
    for (int k : best.subset) res.observable_flips ^= dem.faults[size_t(k)].obs;
    return res;
}

void dem_sample(const DetectorErrorModel &dem, Rng &rng, BitVec *dets, BitVec *obs) {
    dets->resize(static_cast<size_t>(dem.num_detectors));
    obs->resize(static_cast<size_t>(dem.num_observables));
    for (const auto &f : dem.faults)
        if (rng.next_double() < f.p) {
            *dets ^= f.dets;
            *obs ^= f.obs;
        }
}

BitVec trajectory_detectors(const SyndromeTrajectory &t) {
    const int Q = t.num_qubits, D = t.depth, S = t.stabs_per_round, F = t.final_slots;
    BitVec out(static_cast<size_t>(Q * D * S + Q * F));
    size_t at = 0;
    for (int q = 0; q < Q; q++)
        for (int tt = 0; tt < D; tt++)
            for (int s = 0; s < S; s++) out.set(at++, t.s(q, tt, s) != 0);
    for (int q = 0; q < Q; q++)
        for (int j = 0; j < F; j++) out.set(at++, t.f(q, j) != 0);
    return out;
}

}  // namespace mccd
