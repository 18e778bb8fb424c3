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
 * FRQI encoding of voxel blocks.
 *
 * A block of L values becomes the state over k = ceil(log2 L) position
 * qubits (0..k-1) and one color qubit (k):
 *
 *     |B> = 2^{-k/2} sum_i (cos t_i |0> + sin t_i |1>) (x) |i>
 *
 * Blocks whose size is not a power of two are zero-padded to 2^k angles.
 */

#include <cstddef>
#include <span>
#include <vector>

#include "qconv/circuit.hpp"
#include "qconv/state.hpp"

namespace qconv {

/// Block angles in [0, 2 pi), position i = (x * n + y) * n + z.
struct AngleBlock {
    /// Block side n, or 0 when the angles do not come from a cube.
    std::size_t side = 0;
    std::vector<double> angles;

    /// Checks the [0, 2 pi) range and non-emptiness.
    static AngleBlock from_angles(std::vector<double> angles, std::size_t side = 0);
};

struct FrqiResources {
    int qubits = 0;
    std::size_t gates = 0;
};

/// Offset added to the value range so the top value maps strictly below 2 pi.
inline constexpr double kNormalizeEpsilon = 1e-12;

/// theta_i = 2 pi (v_i - lo) / (hi - lo + eps); all zero when lo == hi.
AngleBlock normalize_block(std::span<const double> values, double global_min,
                           double global_max, std::size_t side = 0);

/// Number of position qubits k = ceil(log2 L).
int frqi_position_qubits(std::size_t angle_count);

/// ceil(log2 L) + 1.
int frqi_qubits(std::size_t angle_count);

QuantumState frqi_state(const AngleBlock &block);

/// H on every position qubit, then for each nonzero angle a position-
/// controlled Ry(2 theta_i) on the color qubit, decomposed into 2^k
/// Ry/CNOT pairs along a Gray-code walk of the controls. Zero angles emit
/// nothing. The result reproduces frqi_state exactly (no global phase).
Circuit frqi_circuit(const AngleBlock &block);

/// Appends the Gray-code decomposition of "Ry(angle) on `target` iff the
/// qubits in `controls` read `pattern`" (controls[b] is bit b of pattern).
void append_pattern_controlled_ry(Circuit &circuit, std::span<const int> controls,
                                  int target, std::size_t pattern, double angle);

FrqiResources frqi_resources(const AngleBlock &block);

} // namespace qconv
