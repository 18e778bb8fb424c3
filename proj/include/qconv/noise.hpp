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
 * Single-qubit Kraus channels and noisy density-matrix execution.
 *
 * Noise model: after every gate, the channel acts once on every qubit the
 * gate touches (one for H/T/X/Y/Z/Ry, two for CNOT).
 */

#include <functional>
#include <string_view>
#include <vector>

#include "qconv/circuit.hpp"
#include "qconv/state.hpp"

namespace qconv {

enum class Channel { Depolarizing, AmplitudeDamping, PhaseDamping };

/// Accepts "depolarizing", "amplitude-damping", "phase-damping" (or with
/// underscores).
Channel parse_channel(std::string_view name);
std::string_view to_string(Channel channel) noexcept;

/// Depolarizing: each of X, Y, Z fires with probability p * this share, so p
/// is the total error probability.
inline constexpr double kDepolarizingPauliShare = 1.0 / 3.0;

struct NoiseSpec {
    Channel channel = Channel::Depolarizing;
    double p = 0.0;

    /// Throws invalid-parameter unless 0 <= p <= 1.
    void validate() const;
};

/// Kraus operators; a single identity when p == 0.
std::vector<Mat2> kraus_ops(const NoiseSpec &spec);

/// sum_k K (x) conj(K), acting on (row bit, column bit) of a density entry.
Mat4 channel_superoperator(const NoiseSpec &spec);

/// U (x) conj(U) in the same (row bit, column bit) layout.
Mat4 conjugation_superoperator(const Mat2 &u);

/// Matrix product `after * before`.
Mat4 compose(const Mat4 &after, const Mat4 &before);

/// rho <- sum_k K_k rho K_k^dagger on `qubit`. Throws invalid-representation
/// for pure states.
void apply_channel(QuantumState &rho, int qubit, const NoiseSpec &spec);

/// Called after each gate and its noise, with the 0-based gate index.
using StepObserver = std::function<void(std::size_t, const QuantumState &)>;

/// Density-matrix execution from `initial` (pure inputs are converted).
/// Limited to 10 qubits.
QuantumState run_noisy_state(const Circuit &circuit, const NoiseSpec &spec,
                             const QuantumState &initial,
                             const StepObserver &observer = {});

CountsVector run_noisy(const Circuit &circuit, const NoiseSpec &spec,
                       const QuantumState &initial);

} // namespace qconv
