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

#include "mccd/mccd.h"

#include <cstring>
#include <string>

#include "bench.hpp"
#include "dataset.hpp"
#include "dem.hpp"
#include "train.hpp"

using namespace mccd;

namespace {

thread_local std::string g_last_error;

template <class F>
mccd_status guarded(F &&fn) {
    try {
        fn();
        return MCCD_OK;
    } catch (const Error &e) {
        g_last_error = e.what();
        return mccd_status(e.code);
    } catch (const std::exception &e) {
        g_last_error = e.what();
        return MCCD_ERR_INTERNAL;
    }
}

char *dup_string(const std::string &s) {
    char *out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

MirrorType parse_type(const char *t) {
    require(t != nullptr, ErrorCode::invalid_argument, "circuit type is null");
    std::string s(t);
    require(s == "I" || s == "II", ErrorCode::invalid_argument, "circuit type must be I or II");
    return s == "I" ? MirrorType::I : MirrorType::II;
}

MirrorType parse_type_char(char t) {
    require(t == 'I' || t == '2', ErrorCode::invalid_argument,
            "circuit_type must be 'I' or '2'");
    return t == 'I' ? MirrorType::I : MirrorType::II;
}

void fill_row(mccd_report_row *dst, const BenchRow &src) {
    std::snprintf(dst->decoder, sizeof dst->decoder, "%s", src.decoder.c_str());
    dst->distance = src.distance;
    dst->circuit_type = src.circuit_type == MirrorType::I ? 'I' : '2';
    dst->depth = src.depth;
    dst->shots = src.shots;
    dst->accuracy = src.accuracy;
    dst->stderr_ = src.stderr_;
    dst->mean_walltime_s = src.mean_walltime_s;
    dst->majority_rate = src.majority_rate;
}

BenchReport rows_to_report(const mccd_report_row *rows, int32_t n) {
    BenchReport rep;
    for (int32_t i = 0; i < n; i++) {
        BenchRow r;
        r.decoder = rows[i].decoder;
        r.distance = rows[i].distance;
        r.circuit_type = rows[i].circuit_type == 'I' ? MirrorType::I : MirrorType::II;
        r.depth = rows[i].depth;
        r.shots = rows[i].shots;
        r.accuracy = rows[i].accuracy;
        r.stderr_ = rows[i].stderr_;
        r.mean_walltime_s = rows[i].mean_walltime_s;
        rep.rows.push_back(std::move(r));
    }
    return rep;
}

EvalConfig convert_eval(const mccd_eval_config *c) {
    require(c != nullptr, ErrorCode::invalid_argument, "config is null");
    require(c->depths != nullptr && c->num_depths > 0, ErrorCode::invalid_argument,
            "depths required");
    EvalConfig e;
    e.distance = c->distance;
    e.circuit_type = parse_type_char(c->circuit_type);
    e.num_logical_qubits = c->num_logical_qubits;
    e.depths.assign(c->depths, c->depths + c->num_depths);
    e.shots_per_depth = c->shots_per_depth;
    e.seed = c->seed;
    e.decoder = c->decoder ? c->decoder : "mccd";
    e.checkpoint = c->checkpoint ? c->checkpoint : "";
    e.mle_max_weight = c->mle_max_weight > 0 ? c->mle_max_weight : 2;
    return e;
}

}  // namespace

struct mccd_layout_t {
    CodeLayout layout;
};
struct mccd_circuit_t {
    LogicalCircuit circuit;
};

extern "C" {

uint32_t mccd_version(void) { return 10000; /* 1.0.0 */ }

const char *mccd_status_name(mccd_status status) {
    switch (status) {
        case MCCD_OK: return "ok";
        case MCCD_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case MCCD_ERR_IO: return "io";
        case MCCD_ERR_FORMAT: return "format";
        case MCCD_ERR_MISMATCH: return "mismatch";
        case MCCD_ERR_UNSUPPORTED: return "unsupported";
        case MCCD_ERR_TOO_LARGE: return "too_large";
        case MCCD_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char *mccd_last_error(void) { return g_last_error.c_str(); }

void mccd_string_free(char *s) { delete[] s; }

mccd_status mccd_layout_create(int32_t distance, mccd_layout_t **out) {
    return guarded([&] {
        require(out != nullptr, ErrorCode::invalid_argument, "out is null");
        *out = new mccd_layout_t{build_layout(distance)};
    });
}

void mccd_layout_destroy(mccd_layout_t *layout) { delete layout; }

int32_t mccd_layout_num_data_qubits(const mccd_layout_t *layout) {
    return layout ? layout->layout.num_data() : 0;
}

int32_t mccd_layout_num_stabilizers(const mccd_layout_t *layout) {
    return layout ? layout->layout.num_stabilizers() : 0;
}

int32_t mccd_layout_check(const mccd_layout_t *layout) {
    return layout && check_commutation(layout->layout) ? 1 : 0;
}

mccd_status mccd_circuit_sample(const char *circuit_type, int32_t num_logical_qubits,
                                int32_t depth, uint64_t seed, mccd_circuit_t **out) {
    return guarded([&] {
        require(out != nullptr, ErrorCode::invalid_argument, "out is null");
        Rng rng(derive_seed(seed, stream_tag::circuit, 0));
        *out = new mccd_circuit_t{
            sample_mirror(parse_type(circuit_type), num_logical_qubits, depth, rng)};
    });
}

mccd_status mccd_circuit_from_text(const char *text, mccd_circuit_t **out) {
    return guarded([&] {
        require(text != nullptr && out != nullptr, ErrorCode::invalid_argument, "null argument");
        *out = new mccd_circuit_t{circuit_from_text(text)};
    });
}

mccd_status mccd_circuit_to_text(const mccd_circuit_t *circuit, char **out_text) {
    return guarded([&] {
        require(circuit != nullptr && out_text != nullptr, ErrorCode::invalid_argument,
                "null argument");
        *out_text = dup_string(circuit_to_text(circuit->circuit));
    });
}

void mccd_circuit_destroy(mccd_circuit_t *circuit) { delete circuit; }

int32_t mccd_circuit_num_qubits(const mccd_circuit_t *c) {
    return c ? c->circuit.num_qubits : 0;
}

int32_t mccd_circuit_depth(const mccd_circuit_t *c) { return c ? c->circuit.depth() : 0; }

mccd_status mccd_generate_dataset(const mccd_gen_config *config, uint64_t count,
                                  const char *out_path) {
    return guarded([&] {
        require(config != nullptr && out_path != nullptr, ErrorCode::invalid_argument,
                "null argument");
        CodeLayout layout = build_layout(config->distance);
        NoiseModel noise = NoiseModel::standard();
        MirrorType type = parse_type_char(config->circuit_type);
        std::vector<SyndromeTrajectory> trajs;
        trajs.reserve(count);
        for (uint64_t i = 0; i < count; i++)
            trajs.push_back(generate_trajectory(layout, noise, type,
                                                config->num_logical_qubits, config->depth,
                                                config->seed, i));
        write_dataset(out_path, trajs, config->distance);
    });
}

mccd_status mccd_dataset_info(const char *path, int32_t *distance, int32_t *num_qubits,
                              int32_t *depth, uint64_t *count) {
    return guarded([&] {
        require(path != nullptr, ErrorCode::invalid_argument, "path is null");
        int d = 0, q = 0, dd = 0;
        uint64_t n = 0;
        dataset_info(path, &d, &q, &dd, &n);
        if (distance) *distance = d;
        if (num_qubits) *num_qubits = q;
        if (depth) *depth = dd;
        if (count) *count = n;
    });
}

mccd_status mccd_train(const mccd_train_config *config, mccd_train_stats *stats) {
    return guarded([&] {
        require(config != nullptr, ErrorCode::invalid_argument, "config is null");
        TrainConfig cfg;
        cfg.distance = config->distance;
        cfg.circuit_type = parse_type_char(config->circuit_type);
        cfg.num_logical_qubits = config->num_logical_qubits;
        require(config->depths != nullptr && config->num_depths > 0,
                ErrorCode::invalid_argument, "depths required");
        cfg.depths.assign(config->depths, config->depths + config->num_depths);
        cfg.batch_size = config->batch_size;
        cfg.learning_rate = config->learning_rate;
        cfg.aux_weight = config->aux_weight;
        cfg.num_batches = config->num_batches;
        cfg.stage = config->stage;
        cfg.seed = config->seed;
        cfg.checkpoint_in = config->checkpoint_in ? config->checkpoint_in : "";
        cfg.checkpoint_out = config->checkpoint_out ? config->checkpoint_out : "";
        cfg.log_path = config->log_path ? config->log_path : "";
        for (int32_t i = 0; i < config->num_data_files; i++)
            cfg.data_files.emplace_back(config->data_files[i]);
        cfg.hidden = config->hidden;
        TrainResult res = (cfg.stage == 1) ? train_stage1(cfg) : train_stage2(cfg);
        if (stats) {
            stats->first_loss = res.first_loss;
            stats->last_loss = res.last_loss;
            stats->batches = res.batches;
        }
    });
}

mccd_status mccd_evaluate(const mccd_eval_config *config, mccd_report_row *rows) {
    return guarded([&] {
        require(rows != nullptr, ErrorCode::invalid_argument, "rows is null");
        BenchReport rep = evaluate_accuracy(convert_eval(config));
        for (size_t i = 0; i < rep.rows.size(); i++) fill_row(&rows[i], rep.rows[i]);
    });
}

mccd_status mccd_benchmark(const mccd_eval_config *config, mccd_report_row *rows, double *slope,
                           double *intercept, double *r2) {
    return guarded([&] {
        require(rows != nullptr, ErrorCode::invalid_argument, "rows is null");
        BenchReport rep = benchmark_walltime(convert_eval(config));
        for (size_t i = 0; i < rep.rows.size(); i++) fill_row(&rows[i], rep.rows[i]);
        if (slope) *slope = rep.slope;
        if (intercept) *intercept = rep.intercept;
        if (r2) *r2 = rep.r2;
    });
}

mccd_status mccd_report_csv(const mccd_report_row *rows, int32_t num_rows, char **out_text) {
    return guarded([&] {
        require(rows != nullptr && out_text != nullptr, ErrorCode::invalid_argument,
                "null argument");
        *out_text = dup_string(report_to_csv(rows_to_report(rows, num_rows)));
    });
}

mccd_status mccd_report_table(const mccd_report_row *rows, int32_t num_rows, char **out_text) {
    return guarded([&] {
        require(rows != nullptr && out_text != nullptr, ErrorCode::invalid_argument,
                "null argument");
        *out_text = dup_string(report_to_table(rows_to_report(rows, num_rows)));
    });
}

mccd_status mccd_dem_text(const char *circuit_text, int32_t distance, char **out_text) {
    return guarded([&] {
        require(circuit_text != nullptr && out_text != nullptr, ErrorCode::invalid_argument,
                "null argument");
        LogicalCircuit circuit = circuit_from_text(circuit_text);
        CodeLayout layout = build_layout(distance);
        NoiseModel noise = NoiseModel::standard();
        PhysicalCircuit phys = compile(circuit, layout, noise);
        DetectorMap dmap = build_detector_map(circuit, layout, phys);
        *out_text = dup_string(dem_to_text(extract_dem(phys, dmap)));
    });
}

mccd_status mccd_mle_decode_dataset(const char *dataset_path, int32_t max_weight, int64_t limit,
                                    mccd_report_row *row) {
    return guarded([&] {
        require(dataset_path != nullptr && row != nullptr, ErrorCode::invalid_argument,
                "null argument");
        fill_row(row, mle_decode_dataset(dataset_path, max_weight, limit));
    });
}

mccd_status mccd_grad_check(uint64_t seed, double eps, double *max_rel_err) {
    return guarded([&] {
        require(max_rel_err != nullptr, ErrorCode::invalid_argument, "max_rel_err is null");
        ModelParams tiny = init_model(3, seed, 8);
        *max_rel_err = grad_check(tiny, gradcheck_batch(seed), eps > 0 ? eps : 1e-5);
    });
}

}  // extern "C"
