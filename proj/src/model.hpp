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

#include <string>
#include <vector>

#include "dataset.hpp"

namespace mccd {

struct Tensor {
    int rows = 0, cols = 1;
    std::vector<double> v;

    Tensor() = default;
    Tensor(int r, int c) : rows(r), cols(c), v(size_t(r) * size_t(c), 0.0) {}
    double &at(int r, int c) { return v[size_t(r) * size_t(cols) + size_t(c)]; }
    double at(int r, int c) const { return v[size_t(r) * size_t(cols) + size_t(c)]; }
    size_t size() const { return v.size(); }
    void zero() { std::fill(v.begin(), v.end(), 0.0); }
};

/// One LSTM layer: pre-activations z = w_x x + b_x + w_h h + b_h, with the
/// four gate groups stacked (i, f, g, o) along the rows.
struct LstmLayerParams {
    int in = 0, hidden = 0;
    Tensor w_x, w_h, b_x, b_h;

    LstmLayerParams() = default;
    LstmLayerParams(int in_sz, int hid)
        : in(in_sz), hidden(hid), w_x(4 * hid, in_sz), w_h(4 * hid, hid), b_x(4 * hid, 1),
          b_h(4 * hid, 1) {}
};

/// A gate-specific processing cell: a 2-layer LSTM.
struct LstmModuleParams {
    LstmLayerParams l1, l2;
};

struct AffineParams {
    Tensor w, b;
    AffineParams() = default;
    AffineParams(int out, int in) : w(out, in), b(out, 1) {}
};

constexpr int kNumGateModules = 5;  // I X Y Z H

/// All decoder parameters: five single-qubit modules, one double-width
/// two-qubit module, and the shared main/aux readout heads.
struct ModelParams {
    int distance = 0;
    int input_size = 0;  // d^2 - 1
    int hidden = 0;      // single-qubit hidden size
    int fx = 0;          // final-round vector length, (d^2 - 1) / 2

    LstmModuleParams gate[kNumGateModules];
    LstmModuleParams two;  // in 2*input_size, hidden 2*hidden
    AffineParams main1, main2, aux1, aux2;
};

/// Default hidden size per distance: 64 at d=3, 192 at d=5 (8 per stabilizer).
int default_hidden(int distance);

/// Allocates a model with the given sizes, all parameters zero.
ModelParams make_model(int distance, int hidden = 0);

/// Uniform(-1/sqrt(H), 1/sqrt(H)) initialization per module (1/sqrt(in) for
/// the readout layers), from a seeded stream.
ModelParams init_model(int distance, uint64_t seed, int hidden = 0);

/// Applies fn(name, tensor) to every parameter tensor in the fixed checkpoint
/// traversal order.
template <class P, class F>
void visit_params(P &&p, F &&fn) {
    const char *gn[kNumGateModules] = {"I", "X", "Y", "Z", "H"};
    auto mod = [&](const std::string &base, auto &m) {
        for (int l = 0; l < 2; l++) {
            auto &lay = (l == 0) ? m.l1 : m.l2;
            std::string pre = base + ".l" + std::to_string(l + 1);
            fn(pre + ".w_x", lay.w_x);
            fn(pre + ".w_h", lay.w_h);
            fn(pre + ".b_x", lay.b_x);
            fn(pre + ".b_h", lay.b_h);
        }
    };
    for (int g = 0; g < kNumGateModules; g++) mod(std::string("gate.") + gn[g], p.gate[g]);
    mod("two", p.two);
    fn("main1.w", p.main1.w);
    fn("main1.b", p.main1.b);
    fn("main2.w", p.main2.w);
    fn("main2.b", p.main2.b);
    fn("aux1.w", p.aux1.w);
    fn("aux1.b", p.aux1.b);
    fn("aux2.w", p.aux2.w);
    fn("aux2.b", p.aux2.b);
}

/// Hidden state of one logical qubit: (c, h) for each of the two layers,
/// zero-initialized at circuit start.
struct HiddenState {
    std::vector<double> c1, h1, c2, h2;
    explicit HiddenState(int hidden = 0)
        : c1(size_t(hidden), 0.0), h1(size_t(hidden), 0.0), c2(size_t(hidden), 0.0),
          h2(size_t(hidden), 0.0) {}
};

/// Cached activations of one LSTM layer evaluation (used by training).
struct CellCache {
    std::vector<double> x, c_prev, h_prev;
    std::vector<double> ig, fg, gg, og, c, tc, h;
};

/// One layer of Eq-style LSTM dynamics. Writes (c_out, h_out); fills `cache`
/// when non-null.
void lstm_cell_forward(const LstmLayerParams &p, const double *x, const double *c_prev,
                       const double *h_prev, double *c_out, double *h_out, CellCache *cache);

/// Routes one syndrome vector through the gate's 2-layer module.
void step_single(const ModelParams &m, GateTag gate, const double *syndrome, HiddenState &state);

/// Joint two-qubit step: concatenates syndromes and per-layer states
/// control-first, runs the double-width module, splits the outputs back.
void step_two(const ModelParams &m, HiddenState &control, HiddenState &target,
              const double *syn_control, const double *syn_target);

/// Main readout on concat(relu(h_final), F); returns 2 logits.
void readout_main(const ModelParams &m, const double *h_final, const double *fvec,
                  double *logits);
/// Auxiliary readout on relu(h); returns 2 logits.
void readout_aux(const ModelParams &m, const double *h, double *logits);

struct Prediction {
    int predicted;       // argmax, ties resolved to class 0
    double prob_flip;    // softmax probability of class 1
};

struct DecodeStats {
    int64_t single_steps = 0;
    int64_t two_steps = 0;
};

/// Full forward pass over a trajectory; per-qubit predictions.
std::vector<Prediction> decode_trajectory(const ModelParams &m, const SyndromeTrajectory &traj,
                                          DecodeStats *stats = nullptr);
/// Variant that cross-checks the trajectory's tags against a circuit.
std::vector<Prediction> decode_trajectory(const ModelParams &m, const SyndromeTrajectory &traj,
                                          const LogicalCircuit &circuit,
                                          DecodeStats *stats = nullptr);

/// Checkpoint file, magic "MCCDCKP1": header (version, d, h1q, fx) then all
/// parameters as little-endian f64 in visit_params order. Bit-exact.
void save_checkpoint(const std::string &path, const ModelParams &m);
ModelParams load_checkpoint(const std::string &path);

}  // namespace mccd
