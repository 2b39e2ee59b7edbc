#include <cmath>

#include "compiler.hpp"
#include "doctest.h"
#include "frame_sim.hpp"
#include "tableau_sim.hpp"

using namespace mccd;

namespace {

// Hand-built circuit helper for the low-level simulator tests.
struct Builder {
    PhysicalCircuit c;
    explicit Builder(int n) { c.num_qubits = n; }
    Builder &reset(std::vector<int32_t> qs, double p = 0.0) {
        PhysInstruction i;
        i.op = PhysOp::Reset;
        i.qubits = std::move(qs);
        i.probs = {p};
        c.instructions.push_back(i);
        return *this;
    }
    Builder &g1(Phys1 g, std::vector<int32_t> qs) {
        PhysInstruction i;
        i.op = PhysOp::Gate1;
        i.g1 = g;
        i.qubits = std::move(qs);
        c.instructions.push_back(i);
        return *this;
    }
    Builder &g2(Phys2 g, std::vector<int32_t> pairs) {
        PhysInstruction i;
        i.op = PhysOp::Gate2;
        i.g2 = g;
        i.qubits = std::move(pairs);
        c.instructions.push_back(i);
        return *this;
    }
    Builder &meas(std::vector<int32_t> qs, double p = 0.0) {
        PhysInstruction i;
        i.op = PhysOp::Measure;
        i.qubits = std::move(qs);
        i.probs = {p};
        i.meas_base = c.num_meas;
        c.num_meas += int32_t(i.qubits.size());
        c.instructions.push_back(i);
        return *this;
    }
};

}  // namespace

TEST_CASE("frame conjugation rules") {
    PauliFrame f(2);
    f.xor_pauli(0, true, false);  // X on control
    propagate_gate2(f, Phys2::CNOT, 0, 1);
    CHECK(f.x.get(0));
    CHECK(f.x.get(1));  // X_c -> X_c X_t
    CHECK_FALSE(f.z.any());

    f = PauliFrame(2);
    f.xor_pauli(1, false, true);  // Z on target
    propagate_gate2(f, Phys2::CNOT, 0, 1);
    CHECK(f.z.get(0));
    CHECK(f.z.get(1));  // Z_t -> Z_c Z_t

    f = PauliFrame(1);
    f.xor_pauli(0, true, false);
    propagate_gate1(f, Phys1::H, 0);
    CHECK_FALSE(f.x.get(0));
    CHECK(f.z.get(0));  // HXH = Z

    f = PauliFrame(2);
    f.xor_pauli(0, true, false);
    propagate_gate2(f, Phys2::CZ, 0, 1);
    CHECK(f.x.get(0));
    CHECK(f.z.get(1));  // X_a -> X_a Z_b
}

TEST_CASE("gate conjugation involutions (random frames)") {
    Rng rng(5);
    for (int rep = 0; rep < 200; rep++) {
        PauliFrame f(4);
        for (int q = 0; q < 4; q++) f.xor_pauli(q, rng.next_bool(), rng.next_bool());
        PauliFrame g = f;
        propagate_gate1(g, Phys1::H, 2);
        propagate_gate1(g, Phys1::H, 2);
        CHECK((g.x == f.x && g.z == f.z));
        propagate_gate2(g, Phys2::CNOT, 1, 3);
        propagate_gate2(g, Phys2::CNOT, 1, 3);
        CHECK((g.x == f.x && g.z == f.z));
        propagate_gate2(g, Phys2::CZ, 0, 2);
        propagate_gate2(g, Phys2::CZ, 0, 2);
        CHECK((g.x == f.x && g.z == f.z));
    }
}

TEST_CASE("pauli channel arity and degenerate cases") {
    Rng rng(1);
    PauliFrame f(2);
    apply_pauli_channel(f, {0}, {0.0, 0.0, 0.0}, rng);
    CHECK_FALSE(f.x.any());
    CHECK_FALSE(f.z.any());
    apply_pauli_channel(f, {0}, {1.0, 0.0, 0.0}, rng);
    CHECK(f.x.get(0));  // X always injected
    CHECK_FALSE(f.z.get(0));
    CHECK_THROWS_AS(apply_pauli_channel(f, {0}, {0.1, 0.1}, rng), Error);
    CHECK_THROWS_AS(apply_pauli_channel(f, {0, 1}, {0.1, 0.1, 0.1}, rng), Error);
}

TEST_CASE("one-qubit channel statistics at 1e-4 (5 sigma, 1e7 samples)") {
    Rng rng(42);
    const int N = 10000000;
    const double p = 1e-4;
    int nx = 0, ny = 0, nz = 0;
    double probs[3] = {p, p, p};
    for (int i = 0; i < N; i++) {
        int k = sample_channel_component(probs, 3, rng);
        if (k == 0) nx++;
        if (k == 1) ny++;
        if (k == 2) nz++;
    }
    double sigma = std::sqrt(p * (1 - p) / N);
    CHECK(std::abs(double(nx) / N - p) < 5 * sigma);
    CHECK(std::abs(double(ny) / N - p) < 5 * sigma);
    CHECK(std::abs(double(nz) / N - p) < 5 * sigma);
}

TEST_CASE("tableau: plus state measurement is seed-dependent") {
    auto run = [](uint64_t seed) {
        Builder b(1);
        b.reset({0}).g1(Phys1::H, {0}).meas({0});
        return tableau_run(b.c, seed).outcomes.get(0);
    };
    bool saw0 = false, saw1 = false;
    for (uint64_t s = 0; s < 32; s++) (run(s) ? saw1 : saw0) = true;
    CHECK(saw0);
    CHECK(saw1);
}

TEST_CASE("tableau: d=3 memory, Z ancillas deterministic, X ancillas repeat") {
    CodeLayout lay = build_layout(3);
    LogicalCircuit mem;
    mem.num_qubits = 1;
    mem.layers = {{{GateKind::I, 0, -1}}, {{GateKind::I, 0, -1}}};
    PhysicalCircuit phys = compile(mem, lay, NoiseModel::zero());
    for (uint64_t seed : {1ull, 2ull, 3ull}) {
        TableauRecord rec = tableau_run(phys, seed);
        for (int t = 1; t <= 2; t++)
            for (int s = 0; s < lay.num_z; s++) {
                CHECK_FALSE(rec.outcomes.get(size_t(phys.anc(0, t, s))));
                CHECK_FALSE(rec.was_random.get(size_t(phys.anc(0, t, s))));
            }
        for (int s = lay.num_z; s < lay.num_stabilizers(); s++) {
            CHECK(rec.outcomes.get(size_t(phys.anc(0, 1, s))) ==
                  rec.outcomes.get(size_t(phys.anc(0, 2, s))));
            CHECK(rec.was_random.get(size_t(phys.anc(0, 1, s))));
            CHECK_FALSE(rec.was_random.get(size_t(phys.anc(0, 2, s))));
        }
    }
}

TEST_CASE("zero noise gives the all-zero shot record") {
    CodeLayout lay = build_layout(3);
    Rng crng(17);
    LogicalCircuit c = sample_mirror(MirrorType::I, 1, 4, crng);
    PhysicalCircuit phys = compile(c, lay, NoiseModel::zero());
    Rng rng(5);
    ShotRecord rec = frame_sample(phys, rng);
    CHECK_FALSE(rec.meas_flips.any());
}

TEST_CASE("reset flip rate 0.002 over 1e6 shots (5 sigma)") {
    Builder b(1);
    b.reset({0}, 0.002).meas({0}, 0.0);
    const int N = 1000000;
    Rng rng(9);
    int flips = 0;
    for (int i = 0; i < N; i++) {
        ShotRecord rec = frame_sample(b.c, rng);
        flips += rec.meas_flips.get(0);
    }
    double p = 0.002, sigma = std::sqrt(p * (1 - p) / N);
    CHECK(std::abs(double(flips) / N - p) < 5 * sigma);
}

TEST_CASE("measurement flip does not persist in the frame") {
    // Two consecutive measurements of the same qubit: a record flip on the
    // first leaves the second untouched.
    Builder b(1);
    b.reset({0}).meas({0}, 0.0).meas({0}, 0.0);
    NoiseRealization n;
    n.meas_flips = {0};
    ShotRecord rec = run_frame(b.c, n);
    CHECK(rec.meas_flips.get(0));
    CHECK_FALSE(rec.meas_flips.get(1));
}

TEST_CASE("single X before round 1 flips exactly the adjacent Z ancillas") {
    CodeLayout lay = build_layout(3);
    LogicalCircuit mem;
    mem.num_qubits = 1;
    mem.layers = {{{GateKind::I, 0, -1}}};
    PhysicalCircuit phys = compile(mem, lay, NoiseModel::zero());

    int bulk = lay.data_index(1, 1);
    NoiseRealization inj;
    inj.paulis.push_back({-1, bulk, true, false});
    ShotRecord rec = run_frame(phys, inj);

    // Oracle: noisy-vs-noiseless tableau records with an explicit X gate.
    PhysicalCircuit with_x = phys;
    PhysInstruction xg;
    xg.op = PhysOp::Gate1;
    xg.g1 = Phys1::X;
    xg.qubits = {bulk};
    with_x.instructions.insert(with_x.instructions.begin(), xg);
    TableauRecord noisy = tableau_run(with_x, 33);
    TableauRecord ref = tableau_run(phys, 33);

    int z_flips = 0;
    for (int s = 0; s < lay.num_stabilizers(); s++) {
        bool frame_flip = rec.meas_flips.get(size_t(phys.anc(0, 1, s)));
        bool tab_flip = noisy.outcomes.get(size_t(phys.anc(0, 1, s))) !=
                        ref.outcomes.get(size_t(phys.anc(0, 1, s)));
        bool adjacent = false;
        if (lay.stabilizers[size_t(s)].basis == StabBasis::Z)
            for (int q : lay.stabilizers[size_t(s)].support) adjacent |= (q == bulk);
        CHECK(frame_flip == adjacent);
        if (!ref.was_random.get(size_t(phys.anc(0, 1, s)))) CHECK(tab_flip == frame_flip);
        z_flips += frame_flip;
    }
    CHECK(z_flips == 2);  // bulk qubit touches exactly two Z plaquettes
}

TEST_CASE("frame linearity: two faults XOR to the sum of singles") {
    CodeLayout lay = build_layout(3);
    Rng crng(23);
    LogicalCircuit c = sample_mirror(MirrorType::I, 1, 4, crng);
    PhysicalCircuit phys = compile(c, lay, NoiseModel::zero());
    PauliInjection a{5, 2, true, false}, b{11, 7, false, true};
    NoiseRealization na, nb, nab;
    na.paulis = {a};
    nb.paulis = {b};
    nab.paulis = {a, b};
    BitVec ra = run_frame(phys, na).meas_flips;
    BitVec rb = run_frame(phys, nb).meas_flips;
    BitVec rab = run_frame(phys, nab).meas_flips;
    ra ^= rb;
    CHECK(ra == rab);
}

TEST_CASE("frame flips match the Heisenberg oracle on random injections") {
    CodeLayout lay = build_layout(3);
    Rng crng(31);
    LogicalCircuit c = sample_mirror(MirrorType::II, 2, 4, crng);
    PhysicalCircuit phys = compile(c, lay, NoiseModel::zero());
    Rng rng(77);
    for (int rep = 0; rep < 100; rep++) {
        PauliInjection inj;
        inj.after_instr = int32_t(rng.next_index(phys.instructions.size())) - 1;
        inj.qubit = int32_t(rng.next_index(uint64_t(phys.num_qubits)));
        inj.px = rng.next_bool();
        inj.pz = !inj.px || rng.next_bool();
        NoiseRealization n;
        n.paulis = {inj};
        CHECK(run_frame(phys, n).meas_flips == heisenberg_flips(phys, inj));
    }
}

TEST_CASE("tableau stays a valid symplectic basis through a noisy round") {
    CodeLayout lay = build_layout(3);
    LogicalCircuit mem;
    mem.num_qubits = 1;
    mem.layers = {{{GateKind::H, 0, -1}}, {{GateKind::H, 0, -1}}};
    PhysicalCircuit phys = compile(mem, lay, NoiseModel::zero());
    CliffordTableau tab(phys.num_qubits);
    Rng tape(3);
    for (const auto &ins : phys.instructions) {
        switch (ins.op) {
            case PhysOp::Gate1:
                if (ins.g1 == Phys1::H)
                    for (int32_t q : ins.qubits) tab.apply_h(q);
                break;
            case PhysOp::Gate2:
                for (size_t p = 0; p < ins.num_pairs(); p++)
                    if (ins.g2 == Phys2::CNOT)
                        tab.apply_cnot(ins.qubits[2 * p], ins.qubits[2 * p + 1]);
                    else
                        tab.apply_cz(ins.qubits[2 * p], ins.qubits[2 * p + 1]);
                break;
            case PhysOp::Reset:
                for (int32_t q : ins.qubits) tab.reset(q, tape);
                break;
            case PhysOp::Measure:
                for (int32_t q : ins.qubits) tab.measure(q, tape, nullptr);
                break;
            case PhysOp::Relabel:
                tab.apply_relabel(ins.qubits);
                break;
            default:
                break;
        }
    }
    CHECK(tab.is_valid_basis());
}

TEST_CASE("tableau CZ equals H-conjugated CNOT") {
    // Apply CZ(0,1) vs H(1) CNOT(0,1) H(1) to random product stabilizers and
    // compare measurement statistics run by run.
    for (uint64_t seed = 0; seed < 16; seed++) {
        Builder a(2), b(2);
        a.reset({0, 1}).g1(Phys1::H, {0}).g2(Phys2::CZ, {0, 1}).g1(Phys1::H, {0}).meas({0, 1});
        b.reset({0, 1}).g1(Phys1::H, {0}).g1(Phys1::H, {1}).g2(Phys2::CNOT, {0, 1})
            .g1(Phys1::H, {1}).g1(Phys1::H, {0}).meas({0, 1});
        TableauRecord ra = tableau_run(a.c, seed);
        TableauRecord rb = tableau_run(b.c, seed);
        CHECK(ra.outcomes.get(0) == rb.outcomes.get(0));
        CHECK(ra.outcomes.get(1) == rb.outcomes.get(1));
    }
}

TEST_CASE("reset clears both frame components") {
    Builder b(2);
    b.reset({0});
    NoiseRealization n;
    n.paulis = {{-1, 0, true, true}, {-1, 1, true, false}};
    b.meas({0, 1});
    ShotRecord rec = run_frame(b.c, n);
    CHECK_FALSE(rec.meas_flips.get(0));  // reset swallowed the fault
    CHECK(rec.meas_flips.get(1));        // untouched qubit keeps its flip
}
