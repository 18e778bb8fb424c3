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

#include "qconv/frqi.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "qconv/error.hpp"

namespace qconv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

} // namespace

AngleBlock AngleBlock::from_angles(std::vector<double> angles, std::size_t side) {
    require(!angles.empty(), "angle block is empty");
    if (side != 0) {
        require(angles.size() == side * side * side, "angle count must be n^3");
    }
    for (double a : angles) {
        require(std::isfinite(a) && a >= 0.0 && a < kTwoPi,
                "angle " + std::to_string(a) + " outside [0, 2pi)");
    }
    return AngleBlock{side, std::move(angles)};
}

AngleBlock normalize_block(std::span<const double> values, double global_min,
                           double global_max, std::size_t side) {
    require(global_min <= global_max, "global_min exceeds global_max");
    std::vector<double> angles(values.size(), 0.0);
    const double range = global_max - global_min;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        require(v >= global_min && v <= global_max,
                "value " + std::to_string(v) + " outside the global range");
        if (range > 0.0) {
            angles[i] = kTwoPi * (v - global_min) / (range + kNormalizeEpsilon);
        }
    }
    return AngleBlock::from_angles(std::move(angles), side);
}

int frqi_position_qubits(std::size_t angle_count) {
    require(angle_count >= 1, "angle block is empty");
    return static_cast<int>(std::bit_width(angle_count - 1));
}

int frqi_qubits(std::size_t angle_count) {
    return frqi_position_qubits(angle_count) + 1;
}

QuantumState frqi_state(const AngleBlock &block) {
    const int k = frqi_position_qubits(block.angles.size());
    const std::size_t positions = std::size_t{1} << k;
    const double scale = 1.0 / std::sqrt(static_cast<double>(positions));
    std::vector<cplx> amps(2 * positions, 0.0);
    for (std::size_t i = 0; i < positions; ++i) {
        const double theta = i < block.angles.size() ? block.angles[i] : 0.0;
        amps[i] = scale * std::cos(theta);
        amps[positions + i] = scale * std::sin(theta);
    }
    return QuantumState::pure(std::move(amps));
}

void append_pattern_controlled_ry(Circuit &circuit, std::span<const int> controls,
                                  int target, std::size_t pattern, double angle) {
    const std::size_t k = controls.size();
    if (k == 0) {
        circuit.add(Gate::ry(target, angle));
        return;
    }
    // Rotation m sits after CNOTs that have toggled the Gray code g_m into the
    // target's X frame, so control value j sees sign (-1)^{|j & g_m|}. Signs
    // (-1)^{|pattern & g_m|} on angle/2^k sum to `angle` for j == pattern and
    // cancel otherwise.
    const std::size_t steps = std::size_t{1} << k;
    const double step_angle = angle / static_cast<double>(steps);
    for (std::size_t m = 0; m < steps; ++m) {
        const std::size_t gray = m ^ (m >> 1);
        const bool negative = std::popcount(pattern & gray) % 2 == 1;
        circuit.add(Gate::ry(target, negative ? -step_angle : step_angle));
        const std::size_t flip =
            m + 1 < steps ? static_cast<std::size_t>(std::countr_zero(m + 1)) : k - 1;
        circuit.add(Gate::cnot(controls[flip], target));
    }
}

Circuit frqi_circuit(const AngleBlock &block) {
    const int k = frqi_position_qubits(block.angles.size());
    Circuit circuit(k + 1);
    std::vector<int> controls(static_cast<std::size_t>(k));
    std::iota(controls.begin(), controls.end(), 0);
    for (int q = 0; q < k; ++q) {
        circuit.add(Gate::h(q));
    }
    for (std::size_t i = 0; i < block.angles.size(); ++i) {
        if (block.angles[i] != 0.0) {
            append_pattern_controlled_ry(circuit, controls, k, i, 2.0 * block.angles[i]);
        }
    }
    return circuit;
}

FrqiResources frqi_resources(const AngleBlock &block) {
    return {frqi_qubits(block.angles.size()), frqi_circuit(block).size()};
}

} // namespace qconv
