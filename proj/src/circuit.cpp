// Copyright 2026 The qconv Authors
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

#include "qconv/circuit.hpp"

#include <cmath>
#include <numbers>

#include "qconv/error.hpp"

namespace qconv {

std::string_view to_string(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::H: return "H";
    case GateKind::T: return "T";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::Ry: return "Ry";
    case GateKind::CNOT: return "CNOT";
    }
    return "?";
}

GateKind parse_gate_kind(std::string_view name) {
    for (GateKind k : {GateKind::H, GateKind::T, GateKind::X, GateKind::Y,
                       GateKind::Z, GateKind::Ry, GateKind::CNOT}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    fail(ErrorKind::InvalidParameter, "unknown gate kind '" + std::string(name) + "'");
}

Mat2 single_qubit_matrix(const Gate &gate) {
    using namespace std::complex_literals;
    const double r = std::numbers::sqrt2 / 2.0;
    switch (gate.kind) {
    case GateKind::H: return {r, r, r, -r};
    case GateKind::T: return {1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 4.0)};
    case GateKind::X: return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Y: return {0.0, -1i, 1i, 0.0};
    case GateKind::Z: return {1.0, 0.0, 0.0, -1.0};
    case GateKind::Ry: {
        const double c = std::cos(gate.angle / 2.0);
        const double s = std::sin(gate.angle / 2.0);
        return {c, -s, s, c};
    }
    case GateKind::CNOT: break;
    }
    fail(ErrorKind::InvalidParameter, "CNOT has no single-qubit matrix");
}

Circuit::Circuit(int qubits) : qubits_(qubits) {
    require(qubits >= 1, "circuit needs at least one qubit");
}

Circuit::Circuit(int qubits, std::vector<Gate> gates) : Circuit(qubits) {
    gates_.reserve(gates.size());
    for (const Gate &g : gates) {
        add(g);
    }
}

Circuit &Circuit::add(const Gate &gate) {
    require(gate.target >= 0 && gate.target < qubits_,
            "gate target " + std::to_string(gate.target) + " out of range");
    if (gate.kind == GateKind::CNOT) {
        require(gate.control >= 0 && gate.control < qubits_,
                "CNOT control " + std::to_string(gate.control) + " out of range");
        require(gate.control != gate.target, "CNOT control equals target");
    }
    if (gate.kind == GateKind::Ry) {
        require(std::isfinite(gate.angle), "Ry angle must be finite");
    }
    gates_.push_back(gate);
    return *this;
}

Circuit &Circuit::append(const Circuit &other) {
    require(other.qubits() == qubits_, "cannot append circuits of different width");
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    return *this;
}

Circuit inverse(const Circuit &circuit) {
    Circuit out(circuit.qubits());
    for (auto it = circuit.gates().rbegin(); it != circuit.gates().rend(); ++it) {
        if (it->kind == GateKind::T) {
            for (int k = 0; k < 7; ++k) {
                out.add(*it);
            }
        } else if (it->kind == GateKind::Ry) {
            out.add(Gate::ry(it->target, -it->angle));
        } else {
            out.add(*it);
        }
    }
    return out;
}

nlohmann::json to_json(const Circuit &circuit) {
    nlohmann::json gates = nlohmann::json::array();
    for (const Gate &g : circuit.gates()) {
        nlohmann::json j;
        j["kind"] = std::string(to_string(g.kind));
        if (g.kind == GateKind::CNOT) {
            j["c"] = g.control;
            j["t"] = g.target;
        } else {
            j["q"] = g.target;
        }
        if (g.kind == GateKind::Ry) {
            j["theta"] = g.angle;
        }
        gates.push_back(std::move(j));
    }
    return {{"qubits", circuit.qubits()}, {"gates", std::move(gates)}};
}

Circuit circuit_from_json(const nlohmann::json &doc) {
    try {
        Circuit circuit(doc.at("qubits").get<int>());
        for (const auto &j : doc.at("gates")) {
            const GateKind kind = parse_gate_kind(j.at("kind").get<std::string>());
            Gate g{kind, 0};
            if (kind == GateKind::CNOT) {
                g.control = j.at("c").get<int>();
                g.target = j.at("t").get<int>();
            } else {
                g.target = j.at("q").get<int>();
            }
            if (kind == GateKind::Ry) {
                g.angle = j.at("theta").get<double>();
            }
            circuit.add(g);
        }
        return circuit;
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorKind::InvalidParameter, std::string("malformed circuit JSON: ") + e.what());
    }
}

} // namespace qconv
