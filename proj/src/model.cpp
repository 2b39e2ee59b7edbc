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

#include "model.hpp"

#include <cmath>
#include <cstdio>
#include <memory>

namespace mccd {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// y = W x + b, W row-major (rows x cols).
void affine(const Tensor &w, const Tensor &b, const double *x, double *y) {
    for (int r = 0; r < w.rows; r++) {
        double acc = b.v[size_t(r)];
        const double *row = w.v.data() + size_t(r) * size_t(w.cols);
        for (int c = 0; c < w.cols; c++) acc += row[c] * x[c];
        y[r] = acc;
    }
}

struct FileCloser {
    void operator()(std::FILE *f) const {
        if (f) std::fclose(f);
    }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

constexpr char kMagic[8] = {'M', 'C', 'C', 'D', 'C', 'K', 'P', '1'};
constexpr uint32_t kVersion = 1;

}  // namespace

int default_hidden(int distance) { return 8 * (distance * distance - 1); }

ModelParams make_model(int distance, int hidden) {
    require(distance >= 3 && distance % 2 == 1, ErrorCode::invalid_argument,
            "model distance must be odd >= 3");
    ModelParams m;
    m.distance = distance;
    m.input_size = distance * distance - 1;
    m.hidden = hidden > 0 ? hidden : default_hidden(distance);
    m.fx = m.input_size / 2;
    for (int g = 0; g < kNumGateModules; g++) {
        m.gate[g].l1 = LstmLayerParams(m.input_size, m.hidden);
        m.gate[g].l2 = LstmLayerParams(m.hidden, m.hidden);
    }
    m.two.l1 = LstmLayerParams(2 * m.input_size, 2 * m.hidden);
    m.two.l2 = LstmLayerParams(2 * m.hidden, 2 * m.hidden);
    int main_in = m.hidden + m.fx;
    m.main1 = AffineParams(main_in, main_in);
    m.main2 = AffineParams(2, main_in);
    m.aux1 = AffineParams(m.hidden, m.hidden);
    m.aux2 = AffineParams(2, m.hidden);
    return m;
}

ModelParams init_model(int distance, uint64_t seed, int hidden) {
    ModelParams m = make_model(distance, hidden);
    Rng rng(derive_seed(seed, stream_tag::model_init, 0));
    auto fill = [&](Tensor &t, double bound) {
        for (double &v : t.v) v = (2.0 * rng.next_double() - 1.0) * bound;
    };
    auto fill_module = [&](LstmModuleParams &mod) {
        for (auto *lay : {&mod.l1, &mod.l2}) {
            double bound = 1.0 / std::sqrt(double(lay->hidden));
            fill(lay->w_x, bound);
            fill(lay->w_h, bound);
            fill(lay->b_x, bound);
            fill(lay->b_h, bound);
        }
    };
    for (int g = 0; g < kNumGateModules; g++) fill_module(m.gate[g]);
    fill_module(m.two);
    for (auto *aff : {&m.main1, &m.main2, &m.aux1, &m.aux2}) {
        double bound = 1.0 / std::sqrt(double(aff->w.cols));
        fill(aff->w, bound);
        fill(aff->b, bound);
    }
    return m;
}

void lstm_cell_forward(const LstmLayerParams &p, const double *x, const double *c_prev,
                       const double *h_prev, double *c_out, double *h_out, CellCache *cache) {
    const int H = p.hidden;
    std::vector<double> z(static_cast<size_t>(4 * H));
    affine(p.w_x, p.b_x, x, z.data());
    for (int r = 0; r < 4 * H; r++) {
        double acc = p.b_h.v[size_t(r)];
        const double *row = p.w_h.v.data() + size_t(r) * size_t(H);
        for (int c = 0; c < H; c++) acc += row[c] * h_prev[c];
        z[size_t(r)] += acc;
    }
    std::vector<double> ig(static_cast<size_t>(H)), fg(static_cast<size_t>(H)), gg(static_cast<size_t>(H)), og(static_cast<size_t>(H)),
        tc(static_cast<size_t>(H));
    for (int k = 0; k < H; k++) {
        ig[size_t(k)] = sigmoid(z[size_t(k)]);
        fg[size_t(k)] = sigmoid(z[size_t(H + k)]);
        gg[size_t(k)] = std::tanh(z[size_t(2 * H + k)]);
        og[size_t(k)] = sigmoid(z[size_t(3 * H + k)]);
        c_out[k] = fg[size_t(k)] * c_prev[k] + ig[size_t(k)] * gg[size_t(k)];
        tc[size_t(k)] = std::tanh(c_out[k]);
        h_out[k] = og[size_t(k)] * tc[size_t(k)];
    }
    if (cache) {
        cache->x.assign(x, x + p.in);
        cache->c_prev.assign(c_prev, c_prev + H);
        cache->h_prev.assign(h_prev, h_prev + H);
        cache->ig = std::move(ig);
        cache->fg = std::move(fg);
        cache->gg = std::move(gg);
        cache->og = std::move(og);
        cache->c.assign(c_out, c_out + H);
        cache->tc = std::move(tc);
        cache->h.assign(h_out, h_out + H);
    }
}

namespace {

void run_module(const LstmModuleParams &mod, const double *x, std::vector<double> &c1,
                std::vector<double> &h1, std::vector<double> &c2, std::vector<double> &h2,
                CellCache *cache1, CellCache *cache2) {
    const int H = mod.l1.hidden;
    std::vector<double> nc1(static_cast<size_t>(H)), nh1(static_cast<size_t>(H)), nc2(static_cast<size_t>(H)), nh2(static_cast<size_t>(H));
    lstm_cell_forward(mod.l1, x, c1.data(), h1.data(), nc1.data(), nh1.data(), cache1);
    lstm_cell_forward(mod.l2, nh1.data(), c2.data(), h2.data(), nc2.data(), nh2.data(), cache2);
    c1 = std::move(nc1);
    h1 = std::move(nh1);
    c2 = std::move(nc2);
    h2 = std::move(nh2);
}

}  // namespace

void step_single(const ModelParams &m, GateTag gate, const double *syndrome,
                 HiddenState &state) {
    int g = int(gate);
    require(g >= 0 && g < kNumGateModules, ErrorCode::invalid_argument,
            "step_single needs a single-qubit gate tag");
    run_module(m.gate[g], syndrome, state.c1, state.h1, state.c2, state.h2, nullptr, nullptr);
}

void step_two(const ModelParams &m, HiddenState &control, HiddenState &target,
              const double *syn_control, const double *syn_target) {
    const int in = m.input_size, H = m.hidden;
    std::vector<double> x(static_cast<size_t>(2 * in));
    std::copy(syn_control, syn_control + in, x.begin());
    std::copy(syn_target, syn_target + in, x.begin() + in);
    auto cat = [&](const std::vector<double> &a, const std::vector<double> &b) {
        std::vector<double> out(static_cast<size_t>(2 * H));
        std::copy(a.begin(), a.end(), out.begin());
        std::copy(b.begin(), b.end(), out.begin() + H);
        return out;
    };
    std::vector<double> c1 = cat(control.c1, target.c1), h1 = cat(control.h1, target.h1);
    std::vector<double> c2 = cat(control.c2, target.c2), h2 = cat(control.h2, target.h2);
    run_module(m.two, x.data(), c1, h1, c2, h2, nullptr, nullptr);
    auto split = [&](const std::vector<double> &v, std::vector<double> &a,
                     std::vector<double> &b) {
        std::copy(v.begin(), v.begin() + H, a.begin());
        std::copy(v.begin() + H, v.end(), b.begin());
    };
    split(c1, control.c1, target.c1);
    split(h1, control.h1, target.h1);
    split(c2, control.c2, target.c2);
    split(h2, control.h2, target.h2);
}

void readout_main(const ModelParams &m, const double *h_final, const double *fvec,
                  double *logits) {
    const int H = m.hidden, FX = m.fx;
    std::vector<double> zin(static_cast<size_t>(H + FX));
    for (int k = 0; k < H; k++) zin[size_t(k)] = h_final[k] > 0 ? h_final[k] : 0.0;
    for (int k = 0; k < FX; k++) zin[size_t(H + k)] = fvec[k];
    std::vector<double> z1(static_cast<size_t>(H + FX));
    affine(m.main1.w, m.main1.b, zin.data(), z1.data());
    for (double &v : z1) v = v > 0 ? v : 0.0;
    affine(m.main2.w, m.main2.b, z1.data(), logits);
}

void readout_aux(const ModelParams &m, const double *h, double *logits) {
    const int H = m.hidden;
    std::vector<double> zin(static_cast<size_t>(H));
    for (int k = 0; k < H; k++) zin[size_t(k)] = h[k] > 0 ? h[k] : 0.0;
    std::vector<double> z1(static_cast<size_t>(H));
    affine(m.aux1.w, m.aux1.b, zin.data(), z1.data());
    for (double &v : z1) v = v > 0 ? v : 0.0;
    affine(m.aux2.w, m.aux2.b, z1.data(), logits);
}

std::vector<Prediction> decode_trajectory(const ModelParams &m, const SyndromeTrajectory &traj,
                                          DecodeStats *stats) {
    require(traj.stabs_per_round == m.input_size && traj.final_slots == m.fx,
            ErrorCode::mismatch, "trajectory dimensions do not match the model");
    const int Q = traj.num_qubits, D = traj.depth, in = m.input_size;
    std::vector<HiddenState> states(static_cast<size_t>(Q), HiddenState(m.hidden));
    std::vector<double> syn(static_cast<size_t>(in)), syn2(static_cast<size_t>(in));

    for (int t = 0; t < D; t++) {
        for (int q = 0; q < Q; q++) {
            GateTag tag = traj.tag(q, t);
            if (tag == GateTag::CnotTarget) continue;  // handled with its control
            for (int s = 0; s < in; s++) syn[size_t(s)] = double(traj.s(q, t, s));
            if (tag == GateTag::CnotControl) {
                int p = traj.partner(q, t);
                require(p >= 0 && traj.tag(p, t) == GateTag::CnotTarget &&
                            traj.partner(p, t) == q,
                        ErrorCode::mismatch, "inconsistent CNOT pair tags");
                for (int s = 0; s < in; s++) syn2[size_t(s)] = double(traj.s(p, t, s));
                step_two(m, states[size_t(q)], states[size_t(p)], syn.data(), syn2.data());
                if (stats) stats->two_steps++;
            } else {
                step_single(m, tag, syn.data(), states[size_t(q)]);
                if (stats) stats->single_steps++;
            }
        }
    }
    std::vector<Prediction> out;
    std::vector<double> fv(static_cast<size_t>(m.fx));
    for (int q = 0; q < Q; q++) {
        for (int j = 0; j < m.fx; j++) fv[size_t(j)] = double(traj.f(q, j));
        double logits[2];
        readout_main(m, states[size_t(q)].h2.data(), fv.data(), logits);
        double mx = std::max(logits[0], logits[1]);
        double e0 = std::exp(logits[0] - mx), e1 = std::exp(logits[1] - mx);
        Prediction p;
        p.prob_flip = e1 / (e0 + e1);
        p.predicted = logits[1] > logits[0] ? 1 : 0;
        out.push_back(p);
    }
    return out;
}

std::vector<Prediction> decode_trajectory(const ModelParams &m, const SyndromeTrajectory &traj,
                                          const LogicalCircuit &circuit, DecodeStats *stats) {
    require(circuit.num_qubits == traj.num_qubits && circuit.depth() == traj.depth,
            ErrorCode::mismatch, "trajectory and circuit shape mismatch");
    for (int t = 0; t < traj.depth; t++)
        for (int q = 0; q < traj.num_qubits; q++) {
            const LogicalGate &g = circuit.gate_on(t, q);
            GateTag tag = traj.tag(q, t);
            bool ok;
            if (g.kind == GateKind::CNOT)
                ok = (g.q0 == q) ? (tag == GateTag::CnotControl && traj.partner(q, t) == g.q1)
                                 : (tag == GateTag::CnotTarget && traj.partner(q, t) == g.q0);
            else
                ok = tag == GateTag(uint8_t(g.kind));
            require(ok, ErrorCode::mismatch, "trajectory gate tags disagree with the circuit");
        }
    return decode_trajectory(m, traj, stats);
}

void save_checkpoint(const std::string &path, const ModelParams &m) {
    File f(std::fopen(path.c_str(), "wb"));
    require(f != nullptr, ErrorCode::io, "cannot open for writing: " + path);
    auto put_u32 = [&](uint32_t v) {
        uint8_t b[4] = {uint8_t(v), uint8_t(v >> 8), uint8_t(v >> 16), uint8_t(v >> 24)};
        require(std::fwrite(b, 1, 4, f.get()) == 4, ErrorCode::io, "short write");
    };
    require(std::fwrite(kMagic, 1, 8, f.get()) == 8, ErrorCode::io, "short write");
    put_u32(kVersion);
    put_u32(uint32_t(m.distance));
    put_u32(uint32_t(m.hidden));
    put_u32(uint32_t(m.fx));
    visit_params(m, [&](const std::string &, const Tensor &t) {
        for (double d : t.v) {
            uint64_t bits;
            std::memcpy(&bits, &d, 8);
            uint8_t b[8];
            for (int k = 0; k < 8; k++) b[k] = uint8_t(bits >> (8 * k));
            require(std::fwrite(b, 1, 8, f.get()) == 8, ErrorCode::io, "short write");
        }
    });
    require(std::fflush(f.get()) == 0, ErrorCode::io, "flush failed");
}

ModelParams load_checkpoint(const std::string &path) {
    File f(std::fopen(path.c_str(), "rb"));
    require(f != nullptr, ErrorCode::io, "cannot open for reading: " + path);
    char magic[8];
    require(std::fread(magic, 1, 8, f.get()) == 8, ErrorCode::format, "truncated checkpoint");
    require(std::memcmp(magic, kMagic, 8) == 0, ErrorCode::format, "bad checkpoint magic");
    auto get_u32 = [&] {
        uint8_t b[4];
        require(std::fread(b, 1, 4, f.get()) == 4, ErrorCode::format, "truncated checkpoint");
        return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 | uint32_t(b[3]) << 24;
    };
    require(get_u32() == kVersion, ErrorCode::format, "unsupported checkpoint version");
    uint32_t d = get_u32(), hidden = get_u32(), fx = get_u32();
    ModelParams m = make_model(int(d), int(hidden));
    require(uint32_t(m.fx) == fx, ErrorCode::format, "checkpoint fx does not match distance");
    visit_params(m, [&](const std::string &, Tensor &t) {
        for (double &v : t.v) {
            uint8_t b[8];
            require(std::fread(b, 1, 8, f.get()) == 8, ErrorCode::format, "truncated checkpoint");
            uint64_t bits = 0;
            for (int k = 0; k < 8; k++) bits |= uint64_t(b[k]) << (8 * k);
            std::memcpy(&v, &bits, 8);
        }
    });
    return m;
}

}  // namespace mccd
