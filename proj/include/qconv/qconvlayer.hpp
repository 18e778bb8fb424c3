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
 * Quantum convolutional layer: grid -> n^3 blocks -> FRQI -> reservoir ->
 * computational-basis probabilities -> feature map.
 *
 * One reservoir acts as one filter and is shared by every block. Input
 * channel c and basis state s map to output channel c * 2^q + s at the
 * block's spatial position, so the feature map has C * 2^q channels and side
 * N / n.
 */

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "qconv/noise.hpp"
#include "qconv/reservoir.hpp"
#include "qconv/voxelgrid.hpp"

namespace qconv {

using FeatureMap = VoxelGrid;

struct QConvConfig {
    std::size_t n = 4;
    /// Reservoir family. Its seed field is ignored: the filter is drawn from
    /// master_seed so that one seed names one filter.
    std::variant<G3Spec, IsingSpec> reservoir = G3Spec{7, 300, 0};
    std::optional<NoiseSpec> noise;
    /// 0 = exact probabilities, otherwise sampled frequencies.
    std::uint64_t shots = 0;
    std::uint64_t master_seed = 0;
};

/// Qubits needed for blocks of side n: ceil(log2 n^3) + 1.
int qconv_qubits(std::size_t n);

/// Reservoir with its seed replaced by master_seed. Throws when the width
/// does not match the block size or noise is paired with a dense unitary.
Reservoir build_reservoir(const QConvConfig &config);

/// Feature probabilities for one block (exact or sampled).
CountsVector block_features(std::span<const double> values, double global_min,
                            double global_max, const Reservoir &reservoir,
                            const QConvConfig &config, std::size_t block_index);

FeatureMap qconv_forward(const VoxelGrid &grid, const QConvConfig &config,
                         int jobs = 1);

/// The 2^q feature values of one block, read back from a feature map.
CountsVector feature_slice(const FeatureMap &map, int qubits,
                           std::size_t channel, std::size_t bx, std::size_t by,
                           std::size_t bz);

/// Mean over blocks of the number of basis states with probability >= threshold.
double mean_support(const FeatureMap &map, int qubits, double threshold = 1e-6);

/// qconv_forward for each gate count with the same master seed (G3 only).
std::vector<FeatureMap> reservoir_sweep(const VoxelGrid &grid,
                                        std::span<const std::size_t> gate_counts,
                                        const QConvConfig &base, int jobs = 1);

struct Readout {
    Eigen::VectorXd weights;
    Eigen::VectorXd feature_mean;
    double intercept = 0.0;
    std::size_t train_samples = 0;
    double train_mse = 0.0;
    double validation_mse = 0.0;
    /// MSE of predicting the training mean on the validation targets.
    double baseline_mse = 0.0;

    double predict(std::span<const double> features) const;
};

/// Centered ridge regression from flattened feature maps to scalar targets.
/// The first round(train_fraction * N) samples train (at least one on each
/// side); the rest validate. Throws insufficient-data with fewer than two
/// samples.
Readout readout_fit(std::span<const FeatureMap> features,
                    std::span<const double> targets, double alpha,
                    double train_fraction = 0.7);

nlohmann::json to_json(const QConvConfig &config);

} // namespace qconv
