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

#pragma once

/**
 * @file
 * Gates and circuits over q qubits.
 *
 * Qubit 0 is the least-significant bit of a basis-state index. In FRQI
 * circuits the color qubit is the most significant one.
 */

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace qconv {

using cplx = std::complex<double>;
/// Row-major 2x2 matrix {m00, m01, m10, m11}.
using Mat2 = std::array<cplx, 4>;

enum class GateKind { H, T, X, Y, Z, Ry, CNOT };

std::string_view to_string(GateKind kind) noexcept;
GateKind parse_gate_kind(std::string_view name);

struct Gate {
    GateKind kind = GateKind::H;
    int target = 0;
    /// Only meaningful for CNOT.
    int control = -1;
    /// Radians, only meaningful for Ry.
    double angle = 0.0;

    static Gate h(int q) { return {GateKind::H, q}; }
    static Gate t(int q) { return {GateKind::T, q}; }
    static Gate x(int q) { return {GateKind::X, q}; }
    static Gate y(int q) { return {GateKind::Y, q}; }
    static Gate z(int q) { return {GateKind::Z, q}; }
    static Gate ry(int q, double theta) { return {GateKind::Ry, q, -1, theta}; }
    static Gate cnot(int c, int t) { return {GateKind::CNOT, t, c}; }

    bool is_two_qubit() const noexcept { return kind == GateKind::CNOT; }

    friend bool operator==(const Gate &, const Gate &) = default;
};

/// 2x2 matrix of a single-qubit gate. CNOT is not a single-qubit gate and
/// throws.
Mat2 single_qubit_matrix(const Gate &gate);

class Circuit {
public:
    Circuit() = default;
    explicit Circuit(int qubits);
    Circuit(int qubits, std::vector<Gate> gates);

    int qubits() const noexcept { return qubits_; }
    const std::vector<Gate> &gates() const noexcept { return gates_; }
    std::size_t size() const noexcept { return gates_.size(); }
    bool empty() const noexcept { return gates_.empty(); }

    /// Appends after checking indices and angle. Returns *this for chaining.
    Circuit &add(const Gate &gate);
    Circuit &append(const Circuit &other);

    friend bool operator==(const Circuit &, const Circuit &) = default;

private:
    int qubits_ = 1;
    std::vector<Gate> gates_;
};

/// Reversed circuit of inverse gates: T^-1 is emitted as seven T gates and
/// Ry(theta) as Ry(-theta); the rest are self-inverse.
Circuit inverse(const Circuit &circuit);

/// {"qubits": q, "gates": [{"kind":"H","q":0}, {"kind":"CNOT","c":1,"t":3},
///  {"kind":"Ry","q":2,"theta":1.5708}]}
nlohmann::json to_json(const Circuit &circuit);
Circuit circuit_from_json(const nlohmann::json &doc);

} // namespace qconv
