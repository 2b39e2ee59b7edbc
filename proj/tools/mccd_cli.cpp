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

// Command-line front end. Everything goes through the C API in mccd/mccd.h;
// this translation unit never touches library internals.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mccd/mccd.h"

namespace {

using nlohmann::json;

struct Config {
    int32_t distance = 3;
    std::string circuit_type = "I";
    int32_t num_logical_qubits = 1;
    std::vector<int32_t> depths = {2};
    int32_t batch_size = 1024;
    double learning_rate = 0.001;
    double aux_weight = 0.5;
    int64_t num_batches = 1;
    int32_t stage = 1;
    uint64_t seed = 0;
    std::string checkpoint_in;
    std::string checkpoint_out;
    std::vector<std::string> data_files;
    int32_t hidden = 0;
};

Config load_config(const std::string &path) {
    std::ifstream f(path);
    if (!f.good()) throw std::runtime_error("cannot open config: " + path);
    json j = json::parse(f);
    Config c;
    if (j.contains("distance")) c.distance = j["distance"].get<int32_t>();
    if (j.contains("circuit_type")) c.circuit_type = j["circuit_type"].get<std::string>();
    if (j.contains("num_logical_qubits"))
        c.num_logical_qubits = j["num_logical_qubits"].get<int32_t>();
    if (j.contains("depths")) c.depths = j["depths"].get<std::vector<int32_t>>();
    if (j.contains("batch_size")) c.batch_size = j["batch_size"].get<int32_t>();
    if (j.contains("learning_rate")) c.learning_rate = j["learning_rate"].get<double>();
    if (j.contains("aux_weight")) c.aux_weight = j["aux_weight"].get<double>();
    if (j.contains("num_batches")) c.num_batches = j["num_batches"].get<int64_t>();
    if (j.contains("stage")) c.stage = j["stage"].get<int32_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<uint64_t>();
    if (j.contains("checkpoint_in")) c.checkpoint_in = j["checkpoint_in"].get<std::string>();
    if (j.contains("checkpoint_out")) c.checkpoint_out = j["checkpoint_out"].get<std::string>();
    if (j.contains("data_files")) c.data_files = j["data_files"].get<std::vector<std::string>>();
    if (j.contains("hidden")) c.hidden = j["hidden"].get<int32_t>();
    return c;
}

char type_char(const std::string &t) {
    if (t == "I") return 'I';
    if (t == "II") return '2';
    throw std::runtime_error("circuit_type must be \"I\" or \"II\"");
}

[[noreturn]] void die(mccd_status st, const std::string &what) {
    std::cerr << "error (" << mccd_status_name(st) << ") in " << what << ": "
              << mccd_last_error() << "\n";
    std::exit(1);
}

void check(mccd_status st, const std::string &what) {
    if (st != MCCD_OK) die(st, what);
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream f(path);
    if (!f.good()) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
}

std::string read_file(const std::string &path) {
    std::ifstream f(path);
    if (!f.good()) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void print_rows(const std::vector<mccd_report_row> &rows, const std::string &out_path) {
    char *table = nullptr;
    check(mccd_report_table(rows.data(), int32_t(rows.size()), &table), "report_table");
    std::cout << table;
    mccd_string_free(table);
    if (!out_path.empty()) {
        char *csv = nullptr;
        check(mccd_report_csv(rows.data(), int32_t(rows.size()), &csv), "report_csv");
        write_file(out_path, csv);
        mccd_string_free(csv);
        std::cout << "wrote " << out_path << "\n";
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Surface-code logical-circuit lab: simulate, train, decode, benchmark"};
    app.require_subcommand(1);

    std::string config_path, out_path, circuit_path, data_path, ckpt_path, decoder = "mccd";
    uint64_t seed = 0;
    bool seed_set = false;
    int64_t count = 10000, shots = 10000, limit = -1;
    int32_t max_weight = 2;
    double eps = 1e-5;

    auto add_common = [&](CLI::App *cmd, bool needs_config) {
        auto *opt = cmd->add_option("--config", config_path, "JSON config file");
        if (needs_config) opt->required();
        cmd->add_option("--seed", seed, "override the config seed")->each([&](std::string) {
            seed_set = true;
        });
        cmd->add_option("--out", out_path, "output path");
    };

    auto *gen = app.add_subcommand("gen", "sample circuits + shots into a dataset file");
    add_common(gen, true);
    gen->add_option("--count", count, "trajectories per depth");

    auto *train = app.add_subcommand("train", "train stage 1 or stage 2 per config");
    add_common(train, true);
    train->add_option("--data", data_path, "comma-separated dataset files (file mode)");

    auto *eval = app.add_subcommand("eval", "logical accuracy vs depth");
    add_common(eval, true);
    eval->add_option("--ckpt", ckpt_path, "decoder checkpoint (mccd)");
    eval->add_option("--decoder", decoder, "mccd|mle");
    eval->add_option("--shots", shots, "shots per depth");
    eval->add_option("--max-weight", max_weight, "MLE enumeration weight");

    auto *bench = app.add_subcommand("bench", "decode-only wall time vs depth");
    add_common(bench, true);
    bench->add_option("--ckpt", ckpt_path, "decoder checkpoint (mccd)");
    bench->add_option("--decoder", decoder, "mccd|mle");
    bench->add_option("--shots", shots, "shots per depth");
    bench->add_option("--max-weight", max_weight, "MLE enumeration weight");

    auto *dem = app.add_subcommand("dem", "dump a detector error model");
    add_common(dem, false);
    dem->add_option("--circuit", circuit_path, "circuit text file (else sampled from config)");

    auto *mle = app.add_subcommand("mle", "decode a dataset with the MLE baseline");
    mle->add_option("--data", data_path, "dataset file")->required();
    mle->add_option("--max-weight", max_weight, "enumeration weight");
    mle->add_option("--limit", limit, "decode at most this many records");
    mle->add_option("--out", out_path, "CSV output path");

    auto *gc = app.add_subcommand("gradcheck", "finite-difference gradient audit");
    gc->add_option("--seed", seed, "seed");
    gc->add_option("--eps", eps, "finite-difference step");

    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (seed_set) cfg.seed = seed;

        if (gen->parsed()) {
            if (out_path.empty()) throw std::runtime_error("gen requires --out");
            for (size_t i = 0; i < cfg.depths.size(); i++) {
                mccd_gen_config g{cfg.distance, type_char(cfg.circuit_type),
                                  cfg.num_logical_qubits, cfg.depths[i], cfg.seed};
                std::string path = out_path;
                if (cfg.depths.size() > 1)
                    path += "_D" + std::to_string(cfg.depths[i]);
                check(mccd_generate_dataset(&g, uint64_t(count), path.c_str()), "gen");
                int32_t d = 0, q = 0, dd = 0;
                uint64_t n = 0;
                check(mccd_dataset_info(path.c_str(), &d, &q, &dd, &n), "dataset_info");
                std::cout << "wrote " << path << ": d=" << d << " Q=" << q << " D=" << dd
                          << " records=" << n << "\n";
            }
        } else if (train->parsed()) {
            std::vector<std::string> files = cfg.data_files;
            if (!data_path.empty()) {
                files.clear();
                std::stringstream ss(data_path);
                std::string tok;
                while (std::getline(ss, tok, ',')) files.push_back(tok);
            }
            std::vector<const char *> file_ptrs;
            for (const auto &f : files) file_ptrs.push_back(f.c_str());
            mccd_train_config t{};
            t.distance = cfg.distance;
            t.circuit_type = type_char(cfg.circuit_type);
            t.num_logical_qubits = cfg.num_logical_qubits;
            t.depths = cfg.depths.data();
            t.num_depths = int32_t(cfg.depths.size());
            t.batch_size = cfg.batch_size;
            t.learning_rate = cfg.learning_rate;
            t.aux_weight = cfg.aux_weight;
            t.num_batches = cfg.num_batches;
            t.stage = cfg.stage;
            t.seed = cfg.seed;
            t.checkpoint_in = cfg.checkpoint_in.empty() ? nullptr : cfg.checkpoint_in.c_str();
            t.checkpoint_out = cfg.checkpoint_out.empty() ? nullptr : cfg.checkpoint_out.c_str();
            std::string log_path =
                cfg.checkpoint_out.empty() ? std::string() : cfg.checkpoint_out + ".trainlog";
            t.log_path = log_path.empty() ? nullptr : log_path.c_str();
            t.data_files = file_ptrs.empty() ? nullptr : file_ptrs.data();
            t.num_data_files = int32_t(file_ptrs.size());
            t.hidden = cfg.hidden;
            mccd_train_stats stats{};
            check(mccd_train(&t, &stats), "train");
            std::cout << "stage " << cfg.stage << " done: " << stats.batches
                      << " batches, loss " << stats.first_loss << " -> " << stats.last_loss
                      << "\nwrote " << cfg.checkpoint_out << " (log: " << log_path << ")\n";
        } else if (eval->parsed() || bench->parsed()) {
            mccd_eval_config e{};
            e.distance = cfg.distance;
            e.circuit_type = type_char(cfg.circuit_type);
            e.num_logical_qubits = cfg.num_logical_qubits;
            e.depths = cfg.depths.data();
            e.num_depths = int32_t(cfg.depths.size());
            e.shots_per_depth = shots;
            e.seed = cfg.seed;
            e.decoder = decoder.c_str();
            std::string ck = ckpt_path.empty() ? cfg.checkpoint_in : ckpt_path;
            e.checkpoint = ck.empty() ? nullptr : ck.c_str();
            e.mle_max_weight = max_weight;
            std::vector<mccd_report_row> rows(cfg.depths.size());
            if (eval->parsed()) {
                check(mccd_evaluate(&e, rows.data()), "eval");
                print_rows(rows, out_path);
            } else {
                double slope = 0, intercept = 0, r2 = 0;
                check(mccd_benchmark(&e, rows.data(), &slope, &intercept, &r2), "bench");
                print_rows(rows, out_path);
                std::printf("fit: walltime = %.3e * D + %.3e   (R^2 = %.6f)\n", slope,
                            intercept, r2);
            }
        } else if (dem->parsed()) {
            std::string text;
            if (!circuit_path.empty()) {
                text = read_file(circuit_path);
            } else {
                mccd_circuit_t *c = nullptr;
                check(mccd_circuit_sample(cfg.circuit_type.c_str(), cfg.num_logical_qubits,
                                          cfg.depths.at(0), cfg.seed, &c),
                      "circuit_sample");
                char *s = nullptr;
                check(mccd_circuit_to_text(c, &s), "circuit_to_text");
                text = s;
                mccd_string_free(s);
                mccd_circuit_destroy(c);
            }
            char *dump = nullptr;
            check(mccd_dem_text(text.c_str(), cfg.distance, &dump), "dem");
            if (out_path.empty())
                std::cout << dump;
            else {
                write_file(out_path, dump);
                std::cout << "wrote " << out_path << "\n";
            }
            mccd_string_free(dump);
        } else if (mle->parsed()) {
            mccd_report_row row{};
            check(mccd_mle_decode_dataset(data_path.c_str(), max_weight, limit, &row), "mle");
            std::vector<mccd_report_row> rows{row};
            print_rows(rows, out_path);
        } else if (gc->parsed()) {
            double err = 0;
            check(mccd_grad_check(seed, eps, &err), "gradcheck");
            std::printf("max relative gradient error: %.3e  (eps = %.1e)  [%s]\n", err, eps,
                        err < 1e-5 ? "OK" : "TOO LARGE");
            if (err >= 1e-5) return 1;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
