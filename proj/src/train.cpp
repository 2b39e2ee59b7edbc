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

#include "train.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace mccd {

namespace {

// log softmax of the true class; also fills the stable softmax.
double cross_entropy(const double *logits, int label, double *softmax_out) {
    double mx = std::max(logits[0], logits[1]);
    double e0 = std::exp(logits[0] - mx), e1 = std::exp(logits[1] - mx);
    double z = e0 + e1;
    softmax_out[0] = e0 / z;
    softmax_out[1] = e1 / z;
    return -(logits[label] - mx - std::log(z));
}

// One executed module step in a trajectory forward pass.
struct StepExec {
    int module;  // 0..4 gate modules, 5 = two-qubit
    int q0, q1;  // q1 = -1 for single steps; control first otherwise
    CellCache l1, l2;
};

struct ReadoutCache {
    std::vector<double> h_final, fvec;
    std::vector<double> main_zin, main_z1;  // pre-relu kept implicitly via sign of z1
    std::vector<double> aux_zin, aux_z1;
    double main_logits[2], aux_logits[2];
    int label;
};

struct TrajForward {
    std::vector<StepExec> steps;     // execution order
    std::vector<ReadoutCache> outs;  // per qubit
};

void affine_fwd(const Tensor &w, const Tensor &b, const double *x, double *y) {
    for (int r = 0; r < w.rows; r++) {
        double acc = b.v[size_t(r)];
        const double *row = w.v.data() + size_t(r) * size_t(w.cols);
        for (int c = 0; c < w.cols; c++) acc += row[c] * x[c];
        y[r] = acc;
    }
}

// Accumulating backward of y = W x + b given dy; adds into dW, db, dx.
void affine_bwd(const Tensor &w, const double *x, const double *dy, Tensor &dw, Tensor &db,
                double *dx) {
    for (int r = 0; r < w.rows; r++) {
        double g = dy[r];
        db.v[size_t(r)] += g;
        double *dwrow = dw.v.data() + size_t(r) * size_t(w.cols);
        const double *wrow = w.v.data() + size_t(r) * size_t(w.cols);
        for (int c = 0; c < w.cols; c++) {
            dwrow[c] += g * x[c];
            if (dx) dx[c] += g * wrow[c];
        }
    }
}

// Reverse of one LSTM layer step. Consumes (dc_out, dh_out); emits
// (dc_prev, dh_prev, dx) and accumulates parameter gradients.
void lstm_cell_backward(const LstmLayerParams &p, const CellCache &cc, const double *dc_out,
                        const double *dh_out, LstmLayerParams &g, double *dc_prev,
                        double *dh_prev, double *dx) {
    const int H = p.hidden;
    std::vector<double> dz(static_cast<size_t>(4 * H));
    for (int k = 0; k < H; k++) {
        double o = cc.og[size_t(k)], tc = cc.tc[size_t(k)];
        double dO = dh_out[k] * tc;
        double dc = dc_out[k] + dh_out[k] * o * (1.0 - tc * tc);
        double i = cc.ig[size_t(k)], f = cc.fg[size_t(k)], gg = cc.gg[size_t(k)];
        double dF = dc * cc.c_prev[size_t(k)];
        double dI = dc * gg;
        double dG = dc * i;
        dc_prev[k] = dc * f;
        dz[size_t(k)] = dI * i * (1.0 - i);
        dz[size_t(H + k)] = dF * f * (1.0 - f);
        dz[size_t(2 * H + k)] = dG * (1.0 - gg * gg);
        dz[size_t(3 * H + k)] = dO * o * (1.0 - o);
    }
    for (int k = 0; k < H; k++) dh_prev[k] = 0.0;
    for (int k = 0; k < p.in; k++) dx[k] = 0.0;
    for (int r = 0; r < 4 * H; r++) {
        double gz = dz[size_t(r)];
        g.b_x.v[size_t(r)] += gz;
        g.b_h.v[size_t(r)] += gz;
        double *dwx = g.w_x.v.data() + size_t(r) * size_t(p.in);
        const double *wx = p.w_x.v.data() + size_t(r) * size_t(p.in);
        for (int c = 0; c < p.in; c++) {
            dwx[c] += gz * cc.x[size_t(c)];
            dx[c] += gz * wx[c];
        }
        double *dwh = g.w_h.v.data() + size_t(r) * size_t(H);
        const double *wh = p.w_h.v.data() + size_t(r) * size_t(H);
        for (int c = 0; c < H; c++) {
            dwh[c] += gz * cc.h_prev[size_t(c)];
            dh_prev[c] += gz * wh[c];
        }
    }
}

// Forward pass over one trajectory with full caching.
TrajForward forward_trajectory(const ModelParams &m, const SyndromeTrajectory &traj) {
    const int Q = traj.num_qubits, D = traj.depth, in = m.input_size, H = m.hidden;
    std::vector<HiddenState> st(static_cast<size_t>(Q), HiddenState(H));
    TrajForward fw;
    std::vector<double> x1(static_cast<size_t>(2 * in)), nc1(static_cast<size_t>(2 * H)), nh1(static_cast<size_t>(2 * H)),
        nc2(static_cast<size_t>(2 * H)), nh2(static_cast<size_t>(2 * H));

    for (int t = 0; t < D; t++) {
        for (int q = 0; q < Q; q++) {
            GateTag tag = traj.tag(q, t);
            if (tag == GateTag::CnotTarget) continue;
            StepExec se;
            if (tag == GateTag::CnotControl) {
                int p = traj.partner(q, t);
                require(p >= 0 && traj.tag(p, t) == GateTag::CnotTarget, ErrorCode::mismatch,
                        "inconsistent CNOT pair tags");
                se.module = kNumGateModules;
                se.q0 = q;
                se.q1 = p;
                for (int s = 0; s < in; s++) {
                    x1[size_t(s)] = double(traj.s(q, t, s));
                    x1[size_t(in + s)] = double(traj.s(p, t, s));
                }
                auto &a = st[size_t(q)], &b = st[size_t(p)];
                std::vector<double> c1(static_cast<size_t>(2 * H)), h1(static_cast<size_t>(2 * H)), c2(static_cast<size_t>(2 * H)),
                    h2(static_cast<size_t>(2 * H));
                auto cat = [&](const std::vector<double> &u, const std::vector<double> &v,
                               std::vector<double> &out) {
                    std::copy(u.begin(), u.end(), out.begin());
                    std::copy(v.begin(), v.end(), out.begin() + H);
                };
                cat(a.c1, b.c1, c1);
                cat(a.h1, b.h1, h1);
                cat(a.c2, b.c2, c2);
                cat(a.h2, b.h2, h2);
                lstm_cell_forward(m.two.l1, x1.data(), c1.data(), h1.data(), nc1.data(),
                                  nh1.data(), &se.l1);
                lstm_cell_forward(m.two.l2, nh1.data(), c2.data(), h2.data(), nc2.data(),
                                  nh2.data(), &se.l2);
                auto split = [&](const std::vector<double> &v, std::vector<double> &u,
                                 std::vector<double> &w) {
                    std::copy(v.begin(), v.begin() + H, u.begin());
                    std::copy(v.begin() + H, v.end(), w.begin());
                };
                split(nc1, a.c1, b.c1);
                split(nh1, a.h1, b.h1);
                split(nc2, a.c2, b.c2);
                split(nh2, a.h2, b.h2);
            } else {
                se.module = int(tag);
                se.q0 = q;
                se.q1 = -1;
                for (int s = 0; s < in; s++) x1[size_t(s)] = double(traj.s(q, t, s));
                auto &a = st[size_t(q)];
                std::vector<double> c1(static_cast<size_t>(H)), h1(static_cast<size_t>(H)), c2(static_cast<size_t>(H)), h2(static_cast<size_t>(H));
                lstm_cell_forward(m.gate[se.module].l1, x1.data(), a.c1.data(), a.h1.data(),
                                  c1.data(), h1.data(), &se.l1);
                lstm_cell_forward(m.gate[se.module].l2, h1.data(), a.c2.data(), a.h2.data(),
                                  c2.data(), h2.data(), &se.l2);
                a.c1 = std::move(c1);
                a.h1 = std::move(h1);
                a.c2 = std::move(c2);
                a.h2 = std::move(h2);
            }
            fw.steps.push_back(std::move(se));
        }
    }

    const int FX = m.fx, MIN = H + FX;
    for (int q = 0; q < Q; q++) {
        ReadoutCache rc;
        rc.h_final = st[size_t(q)].h2;
        rc.fvec.resize(static_cast<size_t>(FX));
        for (int j = 0; j < FX; j++) rc.fvec[size_t(j)] = double(traj.f(q, j));
        rc.main_zin.resize(static_cast<size_t>(MIN));
        for (int k = 0; k < H; k++)
            rc.main_zin[size_t(k)] = rc.h_final[size_t(k)] > 0 ? rc.h_final[size_t(k)] : 0.0;
        for (int j = 0; j < FX; j++) rc.main_zin[size_t(H + j)] = rc.fvec[size_t(j)];
        rc.main_z1.resize(static_cast<size_t>(MIN));
        affine_fwd(m.main1.w, m.main1.b, rc.main_zin.data(), rc.main_z1.data());
        std::vector<double> r1(static_cast<size_t>(MIN));
        for (int k = 0; k < MIN; k++) r1[size_t(k)] = rc.main_z1[size_t(k)] > 0 ? rc.main_z1[size_t(k)] : 0.0;
        affine_fwd(m.main2.w, m.main2.b, r1.data(), rc.main_logits);

        rc.aux_zin.resize(static_cast<size_t>(H));
        for (int k = 0; k < H; k++)
            rc.aux_zin[size_t(k)] = rc.h_final[size_t(k)] > 0 ? rc.h_final[size_t(k)] : 0.0;
        rc.aux_z1.resize(static_cast<size_t>(H));
        affine_fwd(m.aux1.w, m.aux1.b, rc.aux_zin.data(), rc.aux_z1.data());
        std::vector<double> ra(static_cast<size_t>(H));
        for (int k = 0; k < H; k++) ra[size_t(k)] = rc.aux_z1[size_t(k)] > 0 ? rc.aux_z1[size_t(k)] : 0.0;
        affine_fwd(m.aux2.w, m.aux2.b, ra.data(), rc.aux_logits);

        rc.label = traj.labels[size_t(q)];
        fw.outs.push_back(std::move(rc));
    }
    return fw;
}

}  // namespace

double sample_loss(const double *main_logits, const double *aux_logits, int label,
                   double aux_weight) {
    double sm[2];
    return cross_entropy(main_logits, label, sm) +
           aux_weight * cross_entropy(aux_logits, label, sm);
}

std::pair<double, double> batch_loss(const ModelParams &model,
                                     const std::vector<SyndromeTrajectory> &batch,
                                     double aux_weight) {
    (void)aux_weight;
    double main_sum = 0, aux_sum = 0;
    int64_t n = 0;
    for (const auto &traj : batch) {
        TrajForward fw = forward_trajectory(model, traj);
        for (const auto &rc : fw.outs) {
            double sm[2];
            main_sum += cross_entropy(rc.main_logits, rc.label, sm);
            aux_sum += cross_entropy(rc.aux_logits, rc.label, sm);
            n++;
        }
    }
    return {main_sum / double(n), aux_sum / double(n)};
}

std::pair<double, double> backward(const ModelParams &model,
                                   const std::vector<SyndromeTrajectory> &batch,
                                   double aux_weight, ModelParams &grads) {
    visit_params(grads, [](const std::string &, Tensor &t) { t.zero(); });
    int64_t total = 0;
    for (const auto &traj : batch) total += traj.num_qubits;
    const double scale = 1.0 / double(total);
    const int H = model.hidden, in = model.input_size, FX = model.fx, MIN = H + FX;
    double main_sum = 0, aux_sum = 0;

    for (const auto &traj : batch) {
        TrajForward fw = forward_trajectory(model, traj);
        const int Q = traj.num_qubits;
        // dc/dh accumulators per qubit per layer
        std::vector<std::vector<double>> dc1(size_t(Q), std::vector<double>(size_t(H), 0.0)),
            dh1 = dc1, dc2 = dc1, dh2 = dc1;

        for (int q = 0; q < Q; q++) {
            const ReadoutCache &rc = fw.outs[size_t(q)];
            double smm[2], sma[2];
            main_sum += cross_entropy(rc.main_logits, rc.label, smm);
            aux_sum += cross_entropy(rc.aux_logits, rc.label, sma);

            double dlog[2] = {scale * (smm[0] - (rc.label == 0 ? 1.0 : 0.0)),
                              scale * (smm[1] - (rc.label == 1 ? 1.0 : 0.0))};
            std::vector<double> r1(static_cast<size_t>(MIN));
            for (int k = 0; k < MIN; k++)
                r1[size_t(k)] = rc.main_z1[size_t(k)] > 0 ? rc.main_z1[size_t(k)] : 0.0;
            std::vector<double> dr1(size_t(MIN), 0.0);
            affine_bwd(model.main2.w, r1.data(), dlog, grads.main2.w, grads.main2.b, dr1.data());
            for (int k = 0; k < MIN; k++)
                if (rc.main_z1[size_t(k)] <= 0) dr1[size_t(k)] = 0.0;
            std::vector<double> dzin(size_t(MIN), 0.0);
            affine_bwd(model.main1.w, rc.main_zin.data(), dr1.data(), grads.main1.w,
                       grads.main1.b, dzin.data());
            for (int k = 0; k < H; k++)
                if (rc.h_final[size_t(k)] > 0) dh2[size_t(q)][size_t(k)] += dzin[size_t(k)];

            double dloga[2] = {aux_weight * scale * (sma[0] - (rc.label == 0 ? 1.0 : 0.0)),
                               aux_weight * scale * (sma[1] - (rc.label == 1 ? 1.0 : 0.0))};
            std::vector<double> ra(static_cast<size_t>(H));
            for (int k = 0; k < H; k++)
                ra[size_t(k)] = rc.aux_z1[size_t(k)] > 0 ? rc.aux_z1[size_t(k)] : 0.0;
            std::vector<double> dra(size_t(H), 0.0);
            affine_bwd(model.aux2.w, ra.data(), dloga, grads.aux2.w, grads.aux2.b, dra.data());
            for (int k = 0; k < H; k++)
                if (rc.aux_z1[size_t(k)] <= 0) dra[size_t(k)] = 0.0;
            std::vector<double> dzina(size_t(H), 0.0);
            affine_bwd(model.aux1.w, rc.aux_zin.data(), dra.data(), grads.aux1.w, grads.aux1.b,
                       dzina.data());
            for (int k = 0; k < H; k++)
                if (rc.h_final[size_t(k)] > 0) dh2[size_t(q)][size_t(k)] += dzina[size_t(k)];
        }

        // BPTT over executed steps, in reverse.
        std::vector<double> dco(static_cast<size_t>(2 * H)), dho(static_cast<size_t>(2 * H)), dcp(static_cast<size_t>(2 * H)),
            dhp(static_cast<size_t>(2 * H)), dx2(static_cast<size_t>(2 * H)), dx1(static_cast<size_t>(2 * in));
        for (auto it = fw.steps.rbegin(); it != fw.steps.rend(); ++it) {
            const StepExec &se = *it;
            if (se.module == kNumGateModules) {
                int a = se.q0, b = se.q1;
                auto cat = [&](const std::vector<double> &u, const std::vector<double> &v,
                               std::vector<double> &out) {
                    std::copy(u.begin(), u.end(), out.begin());
                    std::copy(v.begin(), v.end(), out.begin() + H);
                };
                cat(dc2[size_t(a)], dc2[size_t(b)], dco);
                cat(dh2[size_t(a)], dh2[size_t(b)], dho);
                lstm_cell_backward(model.two.l2, se.l2, dco.data(), dho.data(), grads.two.l2,
                                   dcp.data(), dhp.data(), dx2.data());
                std::vector<double> dcp2 = dcp, dhp2 = dhp;
                cat(dc1[size_t(a)], dc1[size_t(b)], dco);
                cat(dh1[size_t(a)], dh1[size_t(b)], dho);
                for (int k = 0; k < 2 * H; k++) dho[size_t(k)] += dx2[size_t(k)];
                lstm_cell_backward(model.two.l1, se.l1, dco.data(), dho.data(), grads.two.l1,
                                   dcp.data(), dhp.data(), dx1.data());
                auto split = [&](const std::vector<double> &v, std::vector<double> &u,
                                 std::vector<double> &w) {
                    std::copy(v.begin(), v.begin() + H, u.begin());
                    std::copy(v.begin() + H, v.end(), w.begin());
                };
                split(dcp2, dc2[size_t(a)], dc2[size_t(b)]);
                split(dhp2, dh2[size_t(a)], dh2[size_t(b)]);
                split(dcp, dc1[size_t(a)], dc1[size_t(b)]);
                split(dhp, dh1[size_t(a)], dh1[size_t(b)]);
            } else {
                int q = se.q0;
                auto &gm = grads.gate[se.module];
                const auto &pm = model.gate[se.module];
                lstm_cell_backward(pm.l2, se.l2, dc2[size_t(q)].data(), dh2[size_t(q)].data(),
                                   gm.l2, dcp.data(), dhp.data(), dx2.data());
                std::copy(dcp.begin(), dcp.begin() + H, dc2[size_t(q)].begin());
                std::copy(dhp.begin(), dhp.begin() + H, dh2[size_t(q)].begin());
                for (int k = 0; k < H; k++) dh1[size_t(q)][size_t(k)] += dx2[size_t(k)];
                lstm_cell_backward(pm.l1, se.l1, dc1[size_t(q)].data(), dh1[size_t(q)].data(),
                                   gm.l1, dcp.data(), dhp.data(), dx1.data());
                std::copy(dcp.begin(), dcp.begin() + H, dc1[size_t(q)].begin());
                std::copy(dhp.begin(), dhp.begin() + H, dh1[size_t(q)].begin());
            }
        }
    }
    return {main_sum / double(total), aux_sum / double(total)};
}

AdamState::AdamState(const ModelParams &like)
    : m(make_model(like.distance, like.hidden)), v(make_model(like.distance, like.hidden)) {}

void adam_step(ModelParams &params, const ModelParams &grads, AdamState &state, double lr,
               const std::vector<bool> *frozen) {
    state.step++;
    double bc1 = 1.0 - std::pow(state.beta1, double(state.step));
    double bc2 = 1.0 - std::pow(state.beta2, double(state.step));
    std::vector<Tensor *> pt, mt, vt;
    std::vector<const Tensor *> gt;
    visit_params(params, [&](const std::string &, Tensor &t) { pt.push_back(&t); });
    visit_params(grads, [&](const std::string &, const Tensor &t) { gt.push_back(&t); });
    visit_params(state.m, [&](const std::string &, Tensor &t) { mt.push_back(&t); });
    visit_params(state.v, [&](const std::string &, Tensor &t) { vt.push_back(&t); });
    for (size_t i = 0; i < pt.size(); i++) {
        if (frozen && (*frozen)[i]) continue;
        for (size_t k = 0; k < pt[i]->v.size(); k++) {
            double g = gt[i]->v[k];
            double &m1 = mt[i]->v[k], &m2 = vt[i]->v[k];
            m1 = state.beta1 * m1 + (1.0 - state.beta1) * g;
            m2 = state.beta2 * m2 + (1.0 - state.beta2) * g * g;
            double mhat = m1 / bc1, vhat = m2 / bc2;
            pt[i]->v[k] -= lr * mhat / (std::sqrt(vhat) + state.eps);
        }
    }
}

std::vector<bool> stage_freeze_mask(const ModelParams &like, int stage) {
    std::vector<bool> mask;
    visit_params(like, [&](const std::string &name, const Tensor &) {
        bool is_two = name.rfind("two.", 0) == 0;
        mask.push_back(stage == 1 ? is_two : !is_two);
    });
    return mask;
}

void TrainConfig::validate() const {
    require(learning_rate > 0, ErrorCode::invalid_argument, "learning_rate must be > 0");
    require(aux_weight >= 0, ErrorCode::invalid_argument, "aux_weight must be >= 0");
    require(stage == 1 || stage == 2, ErrorCode::invalid_argument, "stage must be 1 or 2");
    require(!depths.empty(), ErrorCode::invalid_argument, "depths must be non-empty");
    require(batch_size >= 1 && num_batches >= 1, ErrorCode::invalid_argument,
            "batch_size and num_batches must be >= 1");
    require(!checkpoint_out.empty(), ErrorCode::invalid_argument, "checkpoint_out required");
    if (stage == 1)
        require(circuit_type == MirrorType::I, ErrorCode::invalid_argument,
                "stage 1 trains on Type I circuits");
    if (stage == 2) {
        require(circuit_type == MirrorType::II, ErrorCode::invalid_argument,
                "stage 2 trains on Type II circuits");
        require(!checkpoint_in.empty(), ErrorCode::invalid_argument,
                "stage 2 requires a stage-1 checkpoint");
    }
}

SyndromeTrajectory generate_trajectory(const CodeLayout &layout, const NoiseModel &noise,
                                       MirrorType type, int num_qubits, int depth,
                                       uint64_t seed, uint64_t index,
                                       LogicalCircuit *circuit_out) {
    Rng crng(derive_seed(seed, stream_tag::circuit, index));
    LogicalCircuit circuit = sample_mirror(type, num_qubits, depth, crng);
    PhysicalCircuit phys = compile(circuit, layout, noise);
    DetectorMap dmap = build_detector_map(circuit, layout, phys);
    Rng srng(derive_seed(seed, stream_tag::shot, index));
    ShotRecord shot = frame_sample(phys, srng);
    SyndromeTrajectory traj = build_trajectory(shot, dmap, circuit);
    if (circuit_out) *circuit_out = std::move(circuit);
    return traj;
}

namespace {

// Per-trajectory data source: on-the-fly generation, or sampling from
// preloaded dataset files.
struct DataSource {
    const TrainConfig &cfg;
    CodeLayout layout;
    NoiseModel noise = NoiseModel::standard();
    std::vector<SyndromeTrajectory> pool;

    explicit DataSource(const TrainConfig &c) : cfg(c), layout(build_layout(c.distance)) {
        for (const auto &path : cfg.data_files) {
            int d = 0;
            auto recs = read_dataset(path, &d);
            require(d == cfg.distance, ErrorCode::mismatch,
                    "dataset distance does not match config: " + path);
            for (auto &r : recs) {
                for (int q = 0; q < r.num_qubits; q++)
                    for (int t = 0; t < r.depth; t++) {
                        bool cnot = r.tag(q, t) == GateTag::CnotControl ||
                                    r.tag(q, t) == GateTag::CnotTarget;
                        require(cnot == (cfg.circuit_type == MirrorType::II) || !cnot,
                                ErrorCode::mismatch, "dataset circuit type mismatch");
                        if (cfg.stage == 1)
                            require(!cnot, ErrorCode::mismatch,
                                    "stage 1 rejects datasets containing CNOT layers");
                    }
                pool.push_back(std::move(r));
            }
        }
        require(cfg.data_files.empty() || !pool.empty(), ErrorCode::invalid_argument,
                "dataset-file mode with empty files");
    }

    SyndromeTrajectory get(uint64_t index) {
        if (!pool.empty()) {
            Rng rng(derive_seed(cfg.seed, stream_tag::shot, index));
            return pool[size_t(rng.next_index(pool.size()))];
        }
        Rng rng(derive_seed(cfg.seed, stream_tag::circuit, ~index));
        int depth = cfg.depths[size_t(rng.next_index(cfg.depths.size()))];
        return generate_trajectory(layout, noise, cfg.circuit_type, cfg.num_logical_qubits,
                                   depth, cfg.seed, index);
    }
};

TrainResult train_run(const TrainConfig &cfg, ModelParams model) {
    DataSource source(cfg);
    AdamState adam(model);
    std::vector<bool> frozen = stage_freeze_mask(model, cfg.stage);
    ModelParams grads = make_model(model.distance, model.hidden);

    std::ofstream log;
    if (!cfg.log_path.empty()) {
        log.open(cfg.log_path);
        require(log.good(), ErrorCode::io, "cannot open training log: " + cfg.log_path);
    }

    TrainResult res{std::move(model), 0.0, 0.0, cfg.num_batches};
    for (int64_t b = 0; b < cfg.num_batches; b++) {
        std::vector<SyndromeTrajectory> batch;
        batch.reserve(static_cast<size_t>(cfg.batch_size));
        for (int i = 0; i < cfg.batch_size; i++)
            batch.push_back(source.get(uint64_t(b) * uint64_t(cfg.batch_size) + uint64_t(i)));
        auto [lm, la] = backward(res.model, batch, cfg.aux_weight, grads);
        double total = lm + cfg.aux_weight * la;
        if (b == 0) res.first_loss = total;
        res.last_loss = total;
        adam_step(res.model, grads, adam, cfg.learning_rate, &frozen);
        if (log.is_open()) {
            char line[128];
            std::snprintf(line, sizeof line, "%lld,%.9f,%.9f,%.9f\n", (long long)b, lm, la,
                          total);
            log << line;
        }
    }
    if (!cfg.checkpoint_out.empty()) save_checkpoint(cfg.checkpoint_out, res.model);
    return res;
}

}  // namespace

TrainResult train_stage1(const TrainConfig &cfg) {
    require(cfg.stage == 1, ErrorCode::invalid_argument, "train_stage1 needs stage=1");
    cfg.validate();
    ModelParams model = cfg.checkpoint_in.empty()
                            ? init_model(cfg.distance, cfg.seed, cfg.hidden)
                            : load_checkpoint(cfg.checkpoint_in);
    return train_run(cfg, std::move(model));
}

TrainResult train_stage2(const TrainConfig &cfg) {
    require(cfg.stage == 2, ErrorCode::invalid_argument, "train_stage2 needs stage=2");
    cfg.validate();
    ModelParams model = load_checkpoint(cfg.checkpoint_in);
    require(model.distance == cfg.distance, ErrorCode::mismatch,
            "checkpoint distance does not match config");
    return train_run(cfg, std::move(model));
}

std::vector<SyndromeTrajectory> gradcheck_batch(uint64_t seed) {
    CodeLayout layout = build_layout(3);
    NoiseModel noise = NoiseModel::standard();
    // Boost the rates so syndromes and labels are dense enough to light up
    // every gradient path.
    noise.p1q = {0.02, 0.02, 0.02};
    noise.p_reset = 0.05;
    noise.p_meas = 0.05;
    for (auto &p : noise.p2q) p *= 20.0;

    auto one = [&](const LogicalCircuit &circuit, uint64_t index) {
        PhysicalCircuit phys = compile(circuit, layout, noise);
        DetectorMap dmap = build_detector_map(circuit, layout, phys);
        Rng rng(derive_seed(seed, stream_tag::shot, index));
        return build_trajectory(frame_sample(phys, rng), dmap, circuit);
    };

    auto oneq = [](GateKind a, GateKind b) {
        LogicalCircuit c;
        c.num_qubits = 1;
        c.layers = {{{a, 0, -1}}, {{b, 0, -1}}};
        return c;
    };
    LogicalCircuit two;
    two.num_qubits = 2;
    two.layers = {{{GateKind::H, 0, -1}, {GateKind::I, 1, -1}}, {{GateKind::CNOT, 0, 1}}};

    std::vector<SyndromeTrajectory> batch;
    batch.push_back(one(oneq(GateKind::X, GateKind::H), 1));
    batch.push_back(one(oneq(GateKind::Y, GateKind::Z), 2));
    batch.push_back(one(oneq(GateKind::I, GateKind::I), 3));
    batch.push_back(one(two, 4));
    return batch;
}

double grad_check(const ModelParams &model, const std::vector<SyndromeTrajectory> &batch,
                  double eps, double aux_weight) {
    ModelParams grads = make_model(model.distance, model.hidden);
    backward(model, batch, aux_weight, grads);

    ModelParams probe = model;
    std::vector<Tensor *> pt;
    std::vector<const Tensor *> gt;
    visit_params(probe, [&](const std::string &, Tensor &t) { pt.push_back(&t); });
    visit_params(grads, [&](const std::string &, const Tensor &t) { gt.push_back(&t); });

    double worst = 0.0;
    for (size_t i = 0; i < pt.size(); i++) {
        for (size_t k = 0; k < pt[i]->v.size(); k++) {
            double keep = pt[i]->v[k];
            pt[i]->v[k] = keep + eps;
            auto [lp_m, lp_a] = batch_loss(probe, batch, aux_weight);
            pt[i]->v[k] = keep - eps;
            auto [lm_m, lm_a] = batch_loss(probe, batch, aux_weight);
            pt[i]->v[k] = keep;
            double fd = ((lp_m + aux_weight * lp_a) - (lm_m + aux_weight * lm_a)) / (2 * eps);
            double g = gt[i]->v[k];
            double rel = std::abs(g - fd) / std::max({1.0, std::abs(g), std::abs(fd)});
            worst = std::max(worst, rel);
        }
    }
    return worst;
}

}  // namespace mccd
