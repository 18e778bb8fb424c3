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

#include "qconv/qconvlayer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qconv/error.hpp"
#include "qconv/frqi.hpp"
#include "qconv/parallel.hpp"
#include "qconv/ridge.hpp"
#include "qconv/rng.hpp"

namespace qconv {

int qconv_qubits(std::size_t n) {
    require(n >= 1, "block side must be >= 1");
    return frqi_qubits(n * n * n);
}

Reservoir build_reservoir(const QConvConfig &config) {
    const int q = qconv_qubits(config.n);
    if (const auto *g3 = std::get_if<G3Spec>(&config.reservoir)) {
        require(g3->qubits == q, "reservoir has " + std::to_string(g3->qubits) +
                                     " qubits but blocks of side " +
                                     std::to_string(config.n) + " need " + std::to_string(q));
        G3Spec spec = *g3;
        spec.seed = config.master_seed;
        return sample_g3(spec);
    }
    const auto &ising = std::get<IsingSpec>(config.reservoir);
    require(ising.qubits == q, "reservoir has " + std::to_string(ising.qubits) +
                                   " qubits but blocks of side " +
                                   std::to_string(config.n) + " need " + std::to_string(q));
    require(!config.noise, "noisy execution needs a gate-based (G3) reservoir");
    IsingSpec spec = ising;
    spec.seed = config.master_seed;
    return ising_unitary(spec);
}

CountsVector block_features(std::span<const double> values, double global_min,
                            double global_max, const Reservoir &reservoir,
                            const QConvConfig &config, std::size_t block_index) {
    const AngleBlock block = normalize_block(values, global_min, global_max, config.n);
    QuantumState state = frqi_state(block);
    CountsVector probs;
    if (config.noise) {
        probs = run_noisy(std::get<Circuit>(reservoir), *config.noise, state);
    } else {
        apply_reservoir(state, reservoir);
        probs = measure_probs(state);
    }
    if (config.shots > 0) {
        const ShotCounts counts =
            sample_counts(probs, config.shots, derive_seed(config.master_seed, block_index + 1));
        for (std::size_t i = 0; i < probs.size(); ++i) {
            probs[i] = static_cast<double>(counts[i]) / static_cast<double>(config.shots);
        }
    }
    return probs;
}

FeatureMap qconv_forward(const VoxelGrid &grid, const QConvConfig &config, int jobs) {
    const std::size_t blocks = block_count(grid.channels(), grid.side(), config.n);
    const Reservoir reservoir = build_reservoir(config);
    const int q = qconv_qubits(config.n);
    const std::size_t width = std::size_t{1} << q;
    const auto [lo, hi] = std::minmax_element(grid.data().begin(), grid.data().end());
    const double global_min = *lo;
    const double global_max = *hi;

    FeatureMap out(grid.channels() * width, grid.side() / config.n);
    parallel_for(blocks, jobs, [&](std::size_t i) {
        const Block block = extract_block(grid, config.n, i);
        const CountsVector probs =
            block_features(block.values, global_min, global_max, reservoir, config, i);
        const auto &[c, bx, by, bz] = block.index;
        for (std::size_t s = 0; s < width; ++s) {
            out.at(c * width + s, bx, by, bz) = probs[s];
        }
    });
    return out;
}

CountsVector feature_slice(const FeatureMap &map, int qubits, std::size_t channel,
                           std::size_t bx, std::size_t by, std::size_t bz) {
    const std::size_t width = std::size_t{1} << qubits;
    require((channel + 1) * width <= map.channels(), "feature channel out of range");
    CountsVector out(width);
    for (std::size_t s = 0; s < width; ++s) {
        out[s] = map.at(channel * width + s, bx, by, bz);
    }
    return out;
}

double mean_support(const FeatureMap &map, int qubits, double threshold) {
    const std::size_t width = std::size_t{1} << qubits;
    require(map.channels() % width == 0, "feature map width is not a multiple of 2^q");
    const std::size_t in_channels = map.channels() / width;
    const std::size_t side = map.side();
    std::size_t total = 0;
    for (std::size_t c = 0; c < in_channels; ++c) {
        for (std::size_t x = 0; x < side; ++x) {
            for (std::size_t y = 0; y < side; ++y) {
                for (std::size_t z = 0; z < side; ++z) {
                    for (std::size_t s = 0; s < width; ++s) {
                        total += map.at(c * width + s, x, y, z) >= threshold ? 1 : 0;
                    }
                }
            }
        }
    }
    return static_cast<double>(total) /
           static_cast<double>(in_channels * side * side * side);
}

std::vector<FeatureMap> reservoir_sweep(const VoxelGrid &grid,
                                        std::span<const std::size_t> gate_counts,
                                        const QConvConfig &base, int jobs) {
    require(std::holds_alternative<G3Spec>(base.reservoir),
            "gate-count sweeps need a G3 reservoir");
    std::vector<FeatureMap> maps;
    maps.reserve(gate_counts.size());
    for (std::size_t gates : gate_counts) {
        QConvConfig config = base;
        std::get<G3Spec>(config.reservoir).gate_count = gates;
        maps.push_back(qconv_forward(grid, config, jobs));
    }
    return maps;
}

double Readout::predict(std::span<const double> features) const {
    require(static_cast<Eigen::Index>(features.size()) == weights.size(),
            "feature length does not match the readout");
    const Eigen::Map<const Eigen::VectorXd> x(features.data(), weights.size());
    return intercept + weights.dot(x - feature_mean);
}

Readout readout_fit(std::span<const FeatureMap> features,
                    std::span<const double> targets, double alpha,
                    double train_fraction) {
    if (features.size() < 2) {
        fail(ErrorKind::InsufficientData, "readout needs at least two samples");
    }
    require(features.size() == targets.size(), "feature and target counts differ");
    require(train_fraction > 0.0 && train_fraction < 1.0, "train fraction must be in (0, 1)");
    const std::size_t n = features.size();
    const auto d = static_cast<Eigen::Index>(features.front().data().size());
    for (const FeatureMap &f : features) {
        require(static_cast<Eigen::Index>(f.data().size()) == d,
                "feature maps differ in size");
    }
    const std::size_t n_train = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::lround(train_fraction * static_cast<double>(n))), 1,
        n - 1);

    Eigen::MatrixXd x(static_cast<Eigen::Index>(n_train), d);
    Eigen::VectorXd y(static_cast<Eigen::Index>(n_train));
    for (std::size_t i = 0; i < n_train; ++i) {
        const auto row = features[i].data();
        x.row(static_cast<Eigen::Index>(i)) =
            Eigen::Map<const Eigen::RowVectorXd>(row.data(), d);
        y(static_cast<Eigen::Index>(i)) = targets[i];
    }

    Readout r;
    r.train_samples = n_train;
    r.feature_mean = x.colwise().mean().transpose();
    r.intercept = y.mean();
    const Eigen::MatrixXd xc = x.rowwise() - r.feature_mean.transpose();
    const Eigen::VectorXd yc = y.array() - r.intercept;
    r.weights = solve_ridge(xc, yc, alpha).col(0);

    double train_sq = 0.0;
    for (std::size_t i = 0; i < n_train; ++i) {
        const double e = r.predict(features[i].data()) - targets[i];
        train_sq += e * e;
    }
    r.train_mse = train_sq / static_cast<double>(n_train);

    double val_sq = 0.0;
    double base_sq = 0.0;
    for (std::size_t i = n_train; i < n; ++i) {
        const double e = r.predict(features[i].data()) - targets[i];
        const double b = r.intercept - targets[i];
        val_sq += e * e;
        base_sq += b * b;
    }
    const auto n_val = static_cast<double>(n - n_train);
    r.validation_mse = val_sq / n_val;
    r.baseline_mse = base_sq / n_val;
    return r;
}

nlohmann::json to_json(const QConvConfig &config) {
    nlohmann::json j;
    j["n"] = config.n;
    j["qubits"] = qconv_qubits(config.n);
    if (const auto *g3 = std::get_if<G3Spec>(&config.reservoir)) {
        j["reservoir"] = {{"family", "g3"},
                          {"qubits", g3->qubits},
                          {"gate_count", g3->gate_count},
                          {"seed", config.master_seed}};
    } else {
        IsingSpec spec = std::get<IsingSpec>(config.reservoir);
        spec.seed = config.master_seed;
        j["reservoir"] = to_json(spec);
        j["reservoir"]["family"] = "ising";
    }
    if (config.noise) {
        j["noise"] = {{"channel", std::string(to_string(config.noise->channel))},
                      {"p", config.noise->p}};
    } else {
        j["noise"] = nullptr;
    }
    j["shots"] = config.shots == 0 ? nlohmann::json("exact") : nlohmann::json(config.shots);
    j["master_seed"] = config.master_seed;
    return j;
}

} // namespace qconv
