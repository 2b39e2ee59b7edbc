#include <cmath>
#include <cstdio>

#include "doctest.h"
#include "train.hpp"

using namespace mccd;

TEST_CASE("loss values at canonical points") {
    double zero[2] = {0, 0};
    CHECK(sample_loss(zero, zero, 0, 0.5) == doctest::Approx(1.5 * std::log(2.0)).epsilon(1e-12));
    CHECK(sample_loss(zero, zero, 1, 0.5) == doctest::Approx(1.5 * std::log(2.0)).epsilon(1e-12));
    double sat[2] = {20, -20};
    CHECK(sample_loss(sat, zero, 0, 0.5) == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-8));
    // aux_weight = 0 reduces to the main cross entropy.
    double some[2] = {0.3, -1.2};
    double m = std::max(some[0], some[1]);
    double ce = -(some[0] - m - std::log(std::exp(some[0] - m) + std::exp(some[1] - m)));
    CHECK(sample_loss(some, sat, 0, 0.0) == doctest::Approx(ce).epsilon(1e-12));
}

TEST_CASE("adam: first-step magnitude equals lr, scale invariance, zero grads") {
    ModelParams p = make_model(3, 8);
    ModelParams g = make_model(3, 8);
    g.gate[0].l1.w_x.v[0] = 1e-3;
    g.gate[0].l1.w_x.v[1] = 1.0;  // 1000x larger gradient
    AdamState st(p);
    adam_step(p, g, st, 0.001);
    double d0 = std::abs(p.gate[0].l1.w_x.v[0]);
    double d1 = std::abs(p.gate[0].l1.w_x.v[1]);
    CHECK(d0 == doctest::Approx(0.001).epsilon(1e-4));
    CHECK(d1 == doctest::Approx(0.001).epsilon(1e-6));
    CHECK(p.gate[0].l1.w_x.v[2] == 0.0);  // untouched coordinate

    ModelParams q = make_model(3, 8);
    ModelParams zg = make_model(3, 8);
    AdamState st2(q);
    for (int i = 0; i < 5; i++) adam_step(q, zg, st2, 0.1);
    bool all_zero = true;
    visit_params(q, [&](const std::string &, const Tensor &t) {
        for (double v : t.v) all_zero &= (v == 0.0);
    });
    CHECK(all_zero);
}

TEST_CASE("no gradient flows into the LSTMs when the readouts are cut") {
    ModelParams m = init_model(3, 2, 8);
    // Zero both readout heads and use aux weight 0: no path to the loss.
    m.main1.w.zero();
    m.main1.b.zero();
    m.main2.w.zero();
    m.main2.b.zero();
    auto batch = gradcheck_batch(5);
    ModelParams g = make_model(3, 8);
    backward(m, batch, 0.0, g);
    for (int k = 0; k < kNumGateModules; k++) {
        for (const Tensor *t : {&g.gate[k].l1.w_x, &g.gate[k].l1.w_h, &g.gate[k].l2.w_x})
            for (double v : t->v) CHECK(v == 0.0);
    }
    for (double v : g.two.l1.w_x.v) CHECK(v == 0.0);
}

TEST_CASE("backward matches central finite differences on a tiny model") {
    ModelParams m = init_model(3, 11, 8);
    auto batch = gradcheck_batch(11);
    double err = grad_check(m, batch, 1e-5);
    CHECK(err < 1e-5);
    // Sanity that the harness is live: a coarse step degrades the agreement.
    double coarse = grad_check(m, batch, 1e-2);
    CHECK(coarse > err);
}

TEST_CASE("duplicated samples leave the mean gradient unchanged") {
    ModelParams m = init_model(3, 13, 8);
    auto batch = gradcheck_batch(13);
    std::vector<SyndromeTrajectory> single{batch[0]};
    std::vector<SyndromeTrajectory> twice{batch[0], batch[0]};
    ModelParams g1 = make_model(3, 8), g2 = make_model(3, 8);
    backward(m, single, 0.5, g1);
    backward(m, twice, 0.5, g2);
    double worst = 0;
    std::vector<const Tensor *> a, b;
    visit_params(g1, [&](const std::string &, const Tensor &t) { a.push_back(&t); });
    visit_params(g2, [&](const std::string &, const Tensor &t) { b.push_back(&t); });
    for (size_t i = 0; i < a.size(); i++)
        for (size_t k = 0; k < a[i]->v.size(); k++)
            worst = std::max(worst, std::abs(a[i]->v[k] - b[i]->v[k]));
    CHECK(worst < 1e-12);
}

TEST_CASE("stage freeze masks cover exactly the right tensors") {
    ModelParams m = make_model(3, 8);
    auto m1 = stage_freeze_mask(m, 1);
    auto m2 = stage_freeze_mask(m, 2);
    size_t i = 0;
    visit_params(m, [&](const std::string &name, const Tensor &) {
        bool is_two = name.rfind("two.", 0) == 0;
        CHECK(m1[i] == is_two);
        CHECK(m2[i] == !is_two);
        i++;
    });
}

TEST_CASE("config validation rejects mismatched stage/type combinations") {
    TrainConfig c;
    c.depths = {2};
    c.num_batches = 1;
    c.batch_size = 1;
    c.checkpoint_out = "x.ckpt";
    c.stage = 1;
    c.circuit_type = MirrorType::II;
    CHECK_THROWS_AS(c.validate(), Error);
    c.circuit_type = MirrorType::I;
    c.validate();
    c.stage = 2;
    CHECK_THROWS_AS(c.validate(), Error);  // stage 2 on Type I
    c.circuit_type = MirrorType::II;
    CHECK_THROWS_AS(c.validate(), Error);  // missing checkpoint_in
    c.checkpoint_in = "in.ckpt";
    c.validate();
    c.learning_rate = 0;
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("tiny training runs are bit-reproducible for one seed") {
    auto run = [](const char *out) {
        TrainConfig c;
        c.distance = 3;
        c.circuit_type = MirrorType::I;
        c.num_logical_qubits = 1;
        c.depths = {2};
        c.batch_size = 8;
        c.num_batches = 3;
        c.learning_rate = 0.001;
        c.stage = 1;
        c.seed = 321;
        c.hidden = 8;
        c.checkpoint_out = out;
        return train_stage1(c);
    };
    run("mccd_test_repro_a.ckpt");
    run("mccd_test_repro_b.ckpt");
    ModelParams a = load_checkpoint("mccd_test_repro_a.ckpt");
    ModelParams b = load_checkpoint("mccd_test_repro_b.ckpt");
    bool equal = true;
    std::vector<const Tensor *> ta, tb;
    visit_params(a, [&](const std::string &, const Tensor &t) { ta.push_back(&t); });
    visit_params(b, [&](const std::string &, const Tensor &t) { tb.push_back(&t); });
    for (size_t i = 0; i < ta.size(); i++) equal &= (ta[i]->v == tb[i]->v);
    CHECK(equal);
    std::remove("mccd_test_repro_a.ckpt");
    std::remove("mccd_test_repro_b.ckpt");
}

TEST_CASE("stage 2 changes only the two-qubit module") {
    TrainConfig c1;
    c1.distance = 3;
    c1.circuit_type = MirrorType::I;
    c1.num_logical_qubits = 1;
    c1.depths = {2};
    c1.batch_size = 8;
    c1.num_batches = 2;
    c1.stage = 1;
    c1.seed = 9;
    c1.hidden = 8;
    c1.checkpoint_out = "mccd_test_s1.ckpt";
    train_stage1(c1);

    TrainConfig c2 = c1;
    c2.stage = 2;
    c2.circuit_type = MirrorType::II;
    c2.num_logical_qubits = 2;
    c2.depths = {4};
    c2.checkpoint_in = "mccd_test_s1.ckpt";
    c2.checkpoint_out = "mccd_test_s2.ckpt";
    train_stage2(c2);

    ModelParams a = load_checkpoint("mccd_test_s1.ckpt");
    ModelParams b = load_checkpoint("mccd_test_s2.ckpt");
    std::vector<std::pair<std::string, const Tensor *>> ta, tb;
    visit_params(a, [&](const std::string &n, const Tensor &t) { ta.emplace_back(n, &t); });
    visit_params(b, [&](const std::string &n, const Tensor &t) { tb.emplace_back(n, &t); });
    bool two_changed = false;
    for (size_t i = 0; i < ta.size(); i++) {
        bool is_two = ta[i].first.rfind("two.", 0) == 0;
        if (is_two)
            two_changed |= (ta[i].second->v != tb[i].second->v);
        else
            CHECK(ta[i].second->v == tb[i].second->v);  // frozen parameters, bitwise
    }
    CHECK(two_changed);
    std::remove("mccd_test_s1.ckpt");
    std::remove("mccd_test_s2.ckpt");
}

TEST_CASE("zero model sits exactly at the (1+w) ln 2 loss plateau") {
    ModelParams zero = make_model(3, 8);
    auto batch = gradcheck_batch(3);
    auto [lm, la] = batch_loss(zero, batch, 0.5);
    CHECK(lm == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(la == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(lm + 0.5 * la == doctest::Approx(1.5 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("short training runs reduce the loss (both stages)") {
    TrainConfig c1;
    c1.distance = 3;
    c1.circuit_type = MirrorType::I;
    c1.num_logical_qubits = 1;
    c1.depths = {2, 4};
    c1.batch_size = 32;
    c1.num_batches = 60;
    c1.learning_rate = 0.001;
    c1.stage = 1;
    c1.seed = 515;
    c1.hidden = 32;
    c1.checkpoint_out = "mccd_test_smoke1.ckpt";
    TrainResult r1 = train_stage1(c1);
    CHECK(r1.last_loss < r1.first_loss);

    TrainConfig c2 = c1;
    c2.stage = 2;
    c2.circuit_type = MirrorType::II;
    c2.num_logical_qubits = 2;
    c2.depths = {4, 8};
    c2.batch_size = 16;
    c2.num_batches = 40;
    c2.checkpoint_in = c1.checkpoint_out;
    c2.checkpoint_out = "mccd_test_smoke2.ckpt";
    TrainResult r2 = train_stage2(c2);
    CHECK(r2.last_loss < r2.first_loss);
    std::remove("mccd_test_smoke1.ckpt");
    std::remove("mccd_test_smoke2.ckpt");
}
