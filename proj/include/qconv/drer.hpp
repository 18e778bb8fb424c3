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
 * Data-regression error mitigation.
 *
 * A linear map W (no intercept) is fit on pairs (noisy X_i, noiseless y_i)
 * of output distributions of random G3 circuits, minimizing
 * (1/N) sum ||W X_i - y_i||^2 + alpha ||W||^2, and then applied to new noisy
 * outputs.
 */

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "qconv/noise.hpp"
#include "qconv/state.hpp"

namespace qconv {

struct DrerConfig {
    std::size_t samples = 200;
    int qubits = 7;
    std::size_t gate_count = 300;
    NoiseSpec noise;
    /// 0 means exact probabilities; otherwise both sides are sampled with this
    /// many shots and stored as frequencies.
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
};

struct DrerDataset {
    DrerConfig config;
    std::vector<CountsVector> noisy;
    std::vector<CountsVector> noiseless;

    std::size_t size() const noexcept { return noisy.size(); }
    std::size_t dim() const noexcept {
        return noisy.empty() ? 0 : noisy.front().size();
    }
};

struct RidgeModel {
    Eigen::MatrixXd weights; // d x d, mitigated = weights * noisy
    double alpha = 0.0;
};

struct DrerScore {
    double mse_noisy = 0.0;
    double mse_mitigated = 0.0;
    double tendency_accuracy = 0.0;
};

/// Circuit i uses the G3 seed derive_seed(config.seed, i) and starts in |0..0>.
DrerDataset gen_dataset(const DrerConfig &config, int jobs = 1);

RidgeModel fit_ridge(const DrerDataset &dataset, double alpha);

/// Raw W x, which may have negative entries.
CountsVector mitigate(const RidgeModel &model, std::span<const double> noisy);

/// Negative entries clipped to zero, for display only; scores use raw values.
CountsVector clip_for_report(CountsVector values);

/// Mean squared deviation from the noiseless values over all (sample,
/// component) positions, and the fraction of positions where
/// |mitigated - noiseless| < |noisy - noiseless| strictly.
DrerScore score(const RidgeModel &model, const DrerDataset &test);

/// Tendency accuracy over flat, equally sized arrays.
double tendency_accuracy(std::span<const double> mitigated,
                         std::span<const double> noisy,
                         std::span<const double> noiseless);

inline const std::vector<double> kDefaultAlphaGrid = {0.1, 0.01, 1e-4, 1e-5, 1e-6};

struct AlphaSweep {
    double best_alpha = 0.0;
    RidgeModel best_model;
    std::vector<std::pair<double, DrerScore>> scores; // validation scores
};

/// Fits every alpha, keeps the lowest validation mse_mitigated; ties go to the
/// larger alpha.
AlphaSweep alpha_sweep(const DrerDataset &train, const DrerDataset &validation,
                       std::span<const double> grid);

struct DrerTableConfig {
    std::vector<Channel> channels = {Channel::Depolarizing, Channel::AmplitudeDamping,
                                     Channel::PhaseDamping};
    std::vector<double> probabilities = {0.03, 0.01, 0.008, 0.005, 0.003, 0.001};
    std::vector<double> alpha_grid = kDefaultAlphaGrid;
    std::size_t train = 200;
    std::size_t validation = 100;
    std::size_t test = 100;
    int qubits = 7;
    std::size_t gate_count = 300;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
};

struct DrerTableRow {
    Channel channel = Channel::Depolarizing;
    double p = 0.0;
    double alpha = 0.0;
    DrerScore score;
};

/// One row per (channel, p). Train, validation and test circuits come from
/// streams 0, 1, 2 of `seed` and are shared across rows.
std::vector<DrerTableRow> drer_table(const DrerTableConfig &config, int jobs = 1);

std::string score_csv_header();
std::string score_csv_row(Channel channel, double p, double alpha,
                          const DrerScore &score);

/// JSON-lines: a {"meta": {...}} header, then one {"x":[...],"y":[...]} per pair.
void write_dataset(const DrerDataset &dataset, std::ostream &out);
DrerDataset read_dataset(std::istream &in);
void write_dataset(const DrerDataset &dataset, const std::filesystem::path &path);
DrerDataset read_dataset(const std::filesystem::path &path);

nlohmann::json to_json(const RidgeModel &model);
RidgeModel ridge_model_from_json(const nlohmann::json &doc);

} // namespace qconv
