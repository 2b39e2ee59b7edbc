// Black-box exercise of the shared-library C interface. Links only libmccd
// and includes only the public header.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <string>

#include "doctest.h"
#include "mccd/mccd.h"

TEST_CASE("version and status names") {
    CHECK(mccd_version() >= 10000);
    CHECK(std::string(mccd_status_name(MCCD_OK)) == "ok");
    CHECK(std::string(mccd_status_name(MCCD_ERR_FORMAT)) == "format");
}

TEST_CASE("layout handle lifecycle and error reporting") {
    mccd_layout_t *lay = nullptr;
    CHECK(mccd_layout_create(3, &lay) == MCCD_OK);
    REQUIRE(lay != nullptr);
    CHECK(mccd_layout_num_data_qubits(lay) == 9);
    CHECK(mccd_layout_num_stabilizers(lay) == 8);
    CHECK(mccd_layout_check(lay) == 1);
    mccd_layout_destroy(lay);

    mccd_layout_t *bad = nullptr;
    mccd_status st = mccd_layout_create(4, &bad);
    CHECK(st == MCCD_ERR_INVALID_ARGUMENT);
    CHECK(bad == nullptr);
    CHECK(std::string(mccd_last_error()).find("odd") != std::string::npos);
}

TEST_CASE("circuit sample/text round trip through the C surface") {
    mccd_circuit_t *c = nullptr;
    REQUIRE(mccd_circuit_sample("II", 4, 8, 7, &c) == MCCD_OK);
    CHECK(mccd_circuit_num_qubits(c) == 4);
    CHECK(mccd_circuit_depth(c) == 8);
    char *text = nullptr;
    REQUIRE(mccd_circuit_to_text(c, &text) == MCCD_OK);
    mccd_circuit_t *back = nullptr;
    REQUIRE(mccd_circuit_from_text(text, &back) == MCCD_OK);
    char *text2 = nullptr;
    REQUIRE(mccd_circuit_to_text(back, &text2) == MCCD_OK);
    CHECK(std::string(text) == std::string(text2));
    mccd_string_free(text);
    mccd_string_free(text2);
    mccd_circuit_destroy(c);
    mccd_circuit_destroy(back);

    mccd_circuit_t *nope = nullptr;
    CHECK(mccd_circuit_sample("III", 1, 2, 0, &nope) == MCCD_ERR_INVALID_ARGUMENT);
    CHECK(mccd_circuit_from_text("garbage", &nope) == MCCD_ERR_FORMAT);
}

TEST_CASE("dataset generation and probing") {
    mccd_gen_config g{3, 'I', 1, 2, 42};
    const char *path = "capi_test_data.bin";
    REQUIRE(mccd_generate_dataset(&g, 25, path) == MCCD_OK);
    int32_t d = 0, q = 0, depth = 0;
    uint64_t count = 0;
    REQUIRE(mccd_dataset_info(path, &d, &q, &depth, &count) == MCCD_OK);
    CHECK(d == 3);
    CHECK(q == 1);
    CHECK(depth == 2);
    CHECK(count == 25);
    CHECK(mccd_dataset_info("missing_file.bin", &d, &q, &depth, &count) == MCCD_ERR_IO);
    std::remove(path);
}

TEST_CASE("train, evaluate and report through the C surface") {
    const int32_t depths[1] = {2};
    mccd_train_config t{};
    t.distance = 3;
    t.circuit_type = 'I';
    t.num_logical_qubits = 1;
    t.depths = depths;
    t.num_depths = 1;
    t.batch_size = 8;
    t.learning_rate = 0.001;
    t.aux_weight = 0.5;
    t.num_batches = 2;
    t.stage = 1;
    t.seed = 5;
    t.checkpoint_out = "capi_test_model.ckpt";
    t.hidden = 8;
    mccd_train_stats stats{};
    REQUIRE(mccd_train(&t, &stats) == MCCD_OK);
    CHECK(stats.batches == 2);

    mccd_eval_config e{};
    e.distance = 3;
    e.circuit_type = 'I';
    e.num_logical_qubits = 1;
    e.depths = depths;
    e.num_depths = 1;
    e.shots_per_depth = 50;
    e.seed = 11;
    e.decoder = "mccd";
    e.checkpoint = "capi_test_model.ckpt";
    mccd_report_row row{};
    REQUIRE(mccd_evaluate(&e, &row) == MCCD_OK);
    CHECK(row.shots == 50);
    CHECK(row.accuracy >= 0.0);
    CHECK(row.accuracy <= 1.0);

    char *csv = nullptr;
    REQUIRE(mccd_report_csv(&row, 1, &csv) == MCCD_OK);
    CHECK(std::string(csv).rfind("decoder,d,type,depth,shots,accuracy,stderr,mean_walltime_s",
                                 0) == 0);
    mccd_string_free(csv);
    std::remove("capi_test_model.ckpt");
}

TEST_CASE("dem dump and gradient audit through the C surface") {
    mccd_circuit_t *c = nullptr;
    REQUIRE(mccd_circuit_sample("I", 1, 2, 3, &c) == MCCD_OK);
    char *text = nullptr;
    REQUIRE(mccd_circuit_to_text(c, &text) == MCCD_OK);
    char *dump = nullptr;
    REQUIRE(mccd_dem_text(text, 3, &dump) == MCCD_OK);
    CHECK(std::string(dump).rfind("MCCDDEM1", 0) == 0);
    mccd_string_free(dump);
    mccd_string_free(text);
    mccd_circuit_destroy(c);

    double err = 1.0;
    REQUIRE(mccd_grad_check(1, 1e-5, &err) == MCCD_OK);
    CHECK(err < 1e-5);
}
