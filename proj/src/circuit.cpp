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

#include "circuit.hpp"

#include <algorithm>
#include <sstream>

namespace mccd {

const char *gate_name(GateKind k) {
    switch (k) {
        case GateKind::I: return "I";
        case GateKind::X: return "X";
        case GateKind::Y: return "Y";
        case GateKind::Z: return "Z";
        case GateKind::H: return "H";
        case GateKind::CNOT: return "CNOT";
    }
    return "?";
}

const LogicalGate &LogicalCircuit::gate_on(int t, int q) const {
    for (const auto &g : layers.at(static_cast<size_t>(t))) {
        if (g.q0 == q || (g.kind == GateKind::CNOT && g.q1 == q)) return g;
    }
    fail(ErrorCode::invalid_argument,
         "no gate on logical qubit " + std::to_string(q) + " in layer " + std::to_string(t));
}

void LogicalCircuit::validate() const {
    require(num_qubits >= 1, ErrorCode::invalid_argument, "circuit needs >= 1 logical qubit");
    for (const auto &layer : layers) {
        std::vector<int> seen(size_t(num_qubits), 0);
        for (const auto &g : layer) {
            require(g.q0 >= 0 && g.q0 < num_qubits, ErrorCode::invalid_argument,
                    "gate operand out of range");
            seen[size_t(g.q0)]++;
            if (g.kind == GateKind::CNOT) {
                require(g.q1 >= 0 && g.q1 < num_qubits, ErrorCode::invalid_argument,
                        "CNOT target out of range");
                require(g.q1 != g.q0, ErrorCode::invalid_argument,
                        "CNOT between a qubit and itself");
                seen[size_t(g.q1)]++;
            } else {
                require(g.q1 == -1, ErrorCode::invalid_argument, "1q gate with two operands");
            }
        }
        for (int q = 0; q < num_qubits; q++)
            require(seen[size_t(q)] == 1, ErrorCode::invalid_argument,
                    "logical qubit " + std::to_string(q) + " must appear exactly once per layer");
    }
}

LogicalCircuit sample_mirror(MirrorType type, int num_qubits, int depth, Rng &rng) {
    require(depth >= 2 && depth % 2 == 0, ErrorCode::invalid_argument,
            "mirror depth must be even and >= 2");
    if (type == MirrorType::II) {
        require(depth % 4 == 0, ErrorCode::invalid_argument,
                "Type II depth must be divisible by 4");
        require(num_qubits >= 2 && num_qubits % 2 == 0, ErrorCode::invalid_argument,
                "Type II needs an even number (>= 2) of logical qubits");
    } else {
        require(num_qubits >= 1, ErrorCode::invalid_argument, "need >= 1 logical qubit");
    }

    LogicalCircuit c;
    c.num_qubits = num_qubits;
    c.type = type;
    const GateKind kOneQ[5] = {GateKind::I, GateKind::X, GateKind::Y, GateKind::Z, GateKind::H};

    auto sample_1q_layer = [&] {
        std::vector<LogicalGate> layer;
        for (int q = 0; q < num_qubits; q++)
            layer.push_back({kOneQ[rng.next_index(5)], q, -1});
        return layer;
    };
    auto sample_2q_layer = [&] {
        std::vector<int> qs(static_cast<size_t>(num_qubits));
        for (int q = 0; q < num_qubits; q++) qs[size_t(q)] = q;
        for (int i = num_qubits - 1; i > 0; i--)
            std::swap(qs[size_t(i)], qs[rng.next_index(uint64_t(i) + 1)]);
        std::vector<LogicalGate> layer;
        for (int i = 0; i + 1 < num_qubits; i += 2) {
            int a = qs[size_t(i)], b = qs[size_t(i) + 1];
            if (rng.next_bool()) std::swap(a, b);
            layer.push_back({GateKind::CNOT, a, b});
        }
        std::sort(layer.begin(), layer.end(), [](const LogicalGate &x, const LogicalGate &y) {
            return std::min(x.q0, x.q1) < std::min(y.q0, y.q1);
        });
        return layer;
    };

    for (int t = 0; t < depth / 2; t++) {
        bool two_q = (type == MirrorType::II) && (t % 2 == 1);
        c.layers.push_back(two_q ? sample_2q_layer() : sample_1q_layer());
    }
    for (int t = depth / 2 - 1; t >= 0; t--) c.layers.push_back(c.layers[size_t(t)]);
    c.validate();
    return c;
}

std::string circuit_to_text(const LogicalCircuit &c) {
    std::ostringstream os;
    os << "Q=" << c.num_qubits << " D=" << c.depth() << " TYPE="
       << (c.type == MirrorType::I ? "I" : "II") << "\n";
    for (const auto &layer : c.layers) {
        for (size_t i = 0; i < layer.size(); i++) {
            const auto &g = layer[i];
            if (i) os << ' ';
            os << gate_name(g.kind) << '@' << g.q0;
            if (g.kind == GateKind::CNOT) os << ',' << g.q1;
        }
        os << "\n";
    }
    return os.str();
}

LogicalCircuit circuit_from_text(const std::string &text) {
    std::istringstream is(text);
    std::string line;
    require(bool(std::getline(is, line)), ErrorCode::format, "empty circuit text");
    LogicalCircuit c;
    int depth = -1;
    {
        std::istringstream hs(line);
        std::string tok;
        bool have_q = false, have_d = false, have_t = false;
        while (hs >> tok) {
            if (tok.rfind("Q=", 0) == 0) {
                c.num_qubits = std::stoi(tok.substr(2));
                have_q = true;
            } else if (tok.rfind("D=", 0) == 0) {
                depth = std::stoi(tok.substr(2));
                have_d = true;
            } else if (tok.rfind("TYPE=", 0) == 0) {
                std::string t = tok.substr(5);
                require(t == "I" || t == "II", ErrorCode::format, "TYPE must be I or II");
                c.type = (t == "I") ? MirrorType::I : MirrorType::II;
                have_t = true;
            } else {
                fail(ErrorCode::format, "unexpected header token: " + tok);
            }
        }
        require(have_q && have_d && have_t, ErrorCode::format, "incomplete circuit header");
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        std::vector<LogicalGate> layer;
        while (ls >> tok) {
            auto at = tok.find('@');
            require(at != std::string::npos, ErrorCode::format, "bad gate token: " + tok);
            std::string name = tok.substr(0, at), ops = tok.substr(at + 1);
            LogicalGate g{GateKind::I, -1, -1};
            if (name == "I") g.kind = GateKind::I;
            else if (name == "X") g.kind = GateKind::X;
            else if (name == "Y") g.kind = GateKind::Y;
            else if (name == "Z") g.kind = GateKind::Z;
            else if (name == "H") g.kind = GateKind::H;
            else if (name == "CNOT") g.kind = GateKind::CNOT;
            else fail(ErrorCode::format, "unknown gate: " + name);
            auto comma = ops.find(',');
            if (g.kind == GateKind::CNOT) {
                require(comma != std::string::npos, ErrorCode::format, "CNOT needs two operands");
                g.q0 = std::stoi(ops.substr(0, comma));
                g.q1 = std::stoi(ops.substr(comma + 1));
            } else {
                require(comma == std::string::npos, ErrorCode::format, "1q gate takes one operand");
                g.q0 = std::stoi(ops);
            }
            layer.push_back(g);
        }
        c.layers.push_back(std::move(layer));
    }
    require(c.depth() == depth, ErrorCode::format, "layer count does not match D header");
    c.validate();
    return c;
}

void NoiseModel::validate() const {
    auto chk = [](double p) {
        require(p >= 0.0 && p <= 1.0, ErrorCode::invalid_argument,
                "channel probability outside [0,1]");
    };
    double s2 = 0, s1 = 0, sm = 0;
    for (double p : p2q) chk(p), s2 += p;
    for (double p : p1q) chk(p), s1 += p;
    for (double p : p_move) chk(p), sm += p;
    chk(p_reset);
    chk(p_meas);
    require(s2 <= 1.0 && s1 <= 1.0 && sm <= 1.0, ErrorCode::invalid_argument,
            "channel probabilities must sum to <= 1");
}

NoiseModel NoiseModel::standard() {
    NoiseModel n;
    n.p2q = {0.0005, 0.00175, 0.000625, 0.0005, 0, 0, 0, 0.00175, 0, 0, 0, 0.000625, 0, 0, 0.00125};
    n.p1q = {0.0001, 0.0001, 0.0001};
    n.p_move = {4e-7, 4e-7, 1.6e-6};
    n.p_reset = 0.002;
    n.p_meas = 0.002;
    return n;
}

}  // namespace mccd
