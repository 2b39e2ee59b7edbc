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

#include "dataset.hpp"

#include <cstdio>
#include <memory>

namespace mccd {

namespace {

constexpr char kMagic[8] = {'M', 'C', 'C', 'D', 'D', 'A', 'T', '1'};
constexpr uint32_t kVersion = 1;

struct FileCloser {
    void operator()(std::FILE *f) const {
        if (f) std::fclose(f);
    }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

void put_u32(std::FILE *f, uint32_t v) {
    uint8_t b[4] = {uint8_t(v), uint8_t(v >> 8), uint8_t(v >> 16), uint8_t(v >> 24)};
    require(std::fwrite(b, 1, 4, f) == 4, ErrorCode::io, "short write");
}
void put_u64(std::FILE *f, uint64_t v) {
    put_u32(f, uint32_t(v));
    put_u32(f, uint32_t(v >> 32));
}
uint32_t get_u32(std::FILE *f) {
    uint8_t b[4];
    require(std::fread(b, 1, 4, f) == 4, ErrorCode::format, "truncated file");
    return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 | uint32_t(b[3]) << 24;
}
uint64_t get_u64(std::FILE *f) {
    uint64_t lo = get_u32(f);
    return lo | (uint64_t(get_u32(f)) << 32);
}

void pack_bits(std::FILE *f, const uint8_t *bits, size_t n) {
    for (size_t i = 0; i < n; i += 8) {
        uint8_t byte = 0;
        for (size_t b = 0; b < 8 && i + b < n; b++)
            if (bits[i + b]) byte |= uint8_t(1u << b);
        require(std::fwrite(&byte, 1, 1, f) == 1, ErrorCode::io, "short write");
    }
}
void unpack_bits(std::FILE *f, uint8_t *bits, size_t n) {
    for (size_t i = 0; i < n; i += 8) {
        uint8_t byte;
        require(std::fread(&byte, 1, 1, f) == 1, ErrorCode::format, "truncated file");
        for (size_t b = 0; b < 8 && i + b < n; b++) bits[i + b] = (byte >> b) & 1;
    }
}

}  // namespace

SyndromeTrajectory build_trajectory(const ShotRecord &shot, const DetectorMap &dmap,
                                    const LogicalCircuit &circuit) {
    require(circuit.num_qubits == dmap.num_qubits && circuit.depth() == dmap.depth,
            ErrorCode::mismatch, "shot, detector map and circuit must share one compilation");
    SyndromeTrajectory t;
    t.num_qubits = dmap.num_qubits;
    t.depth = dmap.depth;
    t.stabs_per_round = dmap.stabs_per_round;
    t.final_slots = dmap.final_slots;

    auto parity = [&](const std::vector<int32_t> &events) {
        bool p = false;
        for (int32_t e : events) {
            require(e >= 0 && size_t(e) < shot.meas_flips.size(), ErrorCode::mismatch,
                    "detector event index outside shot record");
            p ^= shot.meas_flips.get(size_t(e));
        }
        return uint8_t(p);
    };

    t.s_bits.resize(size_t(t.num_qubits) * size_t(t.depth) * size_t(t.stabs_per_round));
    t.f_bits.resize(size_t(t.num_qubits) * size_t(t.final_slots));
    t.labels.resize(size_t(t.num_qubits));
    t.tags.resize(size_t(t.num_qubits) * size_t(t.depth));
    t.partners.assign(size_t(t.num_qubits) * size_t(t.depth), 0xFF);

    for (int q = 0; q < t.num_qubits; q++) {
        for (int tt = 1; tt <= t.depth; tt++)
            for (int s = 0; s < t.stabs_per_round; s++)
                t.s_bits[size_t((q * t.depth + tt - 1) * t.stabs_per_round + s)] =
                    parity(dmap.detector_events[size_t(dmap.round_index(q, tt, s))]);
        for (int j = 0; j < t.final_slots; j++)
            t.f_bits[size_t(q * t.final_slots + j)] =
                parity(dmap.detector_events[size_t(dmap.final_index(q, j))]);
        t.labels[size_t(q)] = parity(dmap.observable_events[size_t(q)]);
        for (int tt = 0; tt < t.depth; tt++) {
            const LogicalGate &g = circuit.gate_on(tt, q);
            size_t at = size_t(q * t.depth + tt);
            if (g.kind == GateKind::CNOT) {
                t.tags[at] = uint8_t(g.q0 == q ? GateTag::CnotControl : GateTag::CnotTarget);
                t.partners[at] = uint8_t(g.q0 == q ? g.q1 : g.q0);
            } else {
                t.tags[at] = uint8_t(g.kind);
            }
        }
    }
    return t;
}

void write_dataset(const std::string &path, const std::vector<SyndromeTrajectory> &trajs,
                   int distance) {
    int S = distance * distance - 1;
    for (const auto &t : trajs)
        require(t.stabs_per_round == S && t.final_slots == S / 2 &&
                    t.num_qubits == trajs.front().num_qubits && t.depth == trajs.front().depth,
                ErrorCode::invalid_argument, "dataset records must share (Q, D, d)");
    File f(std::fopen(path.c_str(), "wb"));
    require(f != nullptr, ErrorCode::io, "cannot open for writing: " + path);
    require(std::fwrite(kMagic, 1, 8, f.get()) == 8, ErrorCode::io, "short write");
    put_u32(f.get(), kVersion);
    put_u32(f.get(), uint32_t(distance));
    put_u32(f.get(), trajs.empty() ? 0 : uint32_t(trajs.front().num_qubits));
    put_u32(f.get(), trajs.empty() ? 0 : uint32_t(trajs.front().depth));
    put_u64(f.get(), trajs.size());
    for (const auto &t : trajs) {
        // Detector rows per (q, t), each padded to whole bytes.
        for (int q = 0; q < t.num_qubits; q++)
            for (int tt = 0; tt < t.depth; tt++)
                pack_bits(f.get(),
                          t.s_bits.data() + size_t((q * t.depth + tt) * t.stabs_per_round),
                          size_t(t.stabs_per_round));
        for (int q = 0; q < t.num_qubits; q++)
            pack_bits(f.get(), t.f_bits.data() + size_t(q * t.final_slots),
                      size_t(t.final_slots));
        pack_bits(f.get(), t.labels.data(), t.labels.size());
        require(std::fwrite(t.tags.data(), 1, t.tags.size(), f.get()) == t.tags.size(),
                ErrorCode::io, "short write");
        require(std::fwrite(t.partners.data(), 1, t.partners.size(), f.get()) ==
                    t.partners.size(),
                ErrorCode::io, "short write");
    }
    require(std::fflush(f.get()) == 0, ErrorCode::io, "flush failed");
}

namespace {

void read_header(std::FILE *f, int *distance, int *num_qubits, int *depth, uint64_t *count) {
    char magic[8];
    require(std::fread(magic, 1, 8, f) == 8, ErrorCode::format, "truncated file");
    require(std::memcmp(magic, kMagic, 8) == 0, ErrorCode::format, "bad dataset magic");
    uint32_t version = get_u32(f);
    require(version == kVersion, ErrorCode::format, "unsupported dataset version");
    *distance = int(get_u32(f));
    *num_qubits = int(get_u32(f));
    *depth = int(get_u32(f));
    *count = get_u64(f);
}

}  // namespace

std::vector<SyndromeTrajectory> read_dataset(const std::string &path, int *distance_out) {
    File f(std::fopen(path.c_str(), "rb"));
    require(f != nullptr, ErrorCode::io, "cannot open for reading: " + path);
    int d, q, depth;
    uint64_t count;
    read_header(f.get(), &d, &q, &depth, &count);
    int S = d * d - 1;
    std::vector<SyndromeTrajectory> out;
    out.reserve(count);
    for (uint64_t r = 0; r < count; r++) {
        SyndromeTrajectory t;
        t.num_qubits = q;
        t.depth = depth;
        t.stabs_per_round = S;
        t.final_slots = S / 2;
        t.s_bits.resize(size_t(q) * size_t(depth) * size_t(S));
        t.f_bits.resize(size_t(q) * size_t(S / 2));
        t.labels.resize(size_t(q));
        t.tags.resize(size_t(q) * size_t(depth));
        t.partners.resize(size_t(q) * size_t(depth));
        for (int qq = 0; qq < q; qq++)
            for (int tt = 0; tt < depth; tt++)
                unpack_bits(f.get(), t.s_bits.data() + size_t((qq * depth + tt) * S), size_t(S));
        for (int qq = 0; qq < q; qq++)
            unpack_bits(f.get(), t.f_bits.data() + size_t(qq * (S / 2)), size_t(S / 2));
        unpack_bits(f.get(), t.labels.data(), t.labels.size());
        require(std::fread(t.tags.data(), 1, t.tags.size(), f.get()) == t.tags.size(),
                ErrorCode::format, "truncated file");
        require(std::fread(t.partners.data(), 1, t.partners.size(), f.get()) ==
                    t.partners.size(),
                ErrorCode::format, "truncated file");
        out.push_back(std::move(t));
    }
    if (distance_out) *distance_out = d;
    return out;
}

void dataset_info(const std::string &path, int *distance, int *num_qubits, int *depth,
                  uint64_t *count) {
    File f(std::fopen(path.c_str(), "rb"));
    require(f != nullptr, ErrorCode::io, "cannot open for reading: " + path);
    read_header(f.get(), distance, num_qubits, depth, count);
}

LogicalCircuit circuit_from_tags(const SyndromeTrajectory &t) {
    LogicalCircuit c;
    c.num_qubits = t.num_qubits;
    for (int tt = 0; tt < t.depth; tt++) {
        std::vector<LogicalGate> layer;
        std::vector<bool> done(size_t(t.num_qubits), false);
        for (int q = 0; q < t.num_qubits; q++) {
            if (done[size_t(q)]) continue;
            GateTag tag = t.tag(q, tt);
            if (tag == GateTag::CnotControl || tag == GateTag::CnotTarget) {
                int p = t.partner(q, tt);
                require(p >= 0 && p < t.num_qubits, ErrorCode::format, "bad CNOT partner tag");
                int ctrl = (tag == GateTag::CnotControl) ? q : p;
                int tgt = (tag == GateTag::CnotControl) ? p : q;
                layer.push_back({GateKind::CNOT, ctrl, tgt});
                done[size_t(p)] = true;
            } else {
                layer.push_back({GateKind(uint8_t(tag)), q, -1});
            }
            done[size_t(q)] = true;
        }
        c.layers.push_back(std::move(layer));
    }
    c.validate();
    return c;
}

}  // namespace mccd
