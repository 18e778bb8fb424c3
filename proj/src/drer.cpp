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

#include "qconv/drer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "qconv/error.hpp"
#include "qconv/parallel.hpp"
#include "qconv/reservoir.hpp"
#include "qconv/ridge.hpp"
#include "qconv/rng.hpp"

namespace qconv {

namespace {

Eigen::MatrixXd rows_to_matrix(const std::vector<CountsVector> &rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto d = static_cast<Eigen::Index>(rows.front().size());
    Eigen::MatrixXd m(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return m;
}

CountsVector to_frequencies(const ShotCounts &counts, std::uint64_t shots) {
    CountsVector out(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        out[i] = static_cast<double>(counts[i]) / static_cast<double>(shots);
    }
    return out;
}

std::string format_double(const char *fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

nlohmann::json meta_to_json(const DrerConfig &c) {
    return {{"samples", c.samples},
            {"qubits", c.qubits},
            {"gate_count", c.gate_count},
            {"channel", std::string(to_string(c.noise.channel))},
            {"p", c.noise.p},
            {"shots", c.shots},
            {"seed", c.seed}};
}

DrerConfig meta_from_json(const nlohmann::json &j) {
    DrerConfig c;
    c.samples = j.at("samples").get<std::size_t>();
    c.qubits = j.at("qubits").get<int>();
    c.gate_count = j.at("gate_count").get<std::size_t>();
    c.noise.channel = parse_channel(j.at("channel").get<std::string>());
    c.noise.p = j.at("p").get<double>();
    c.shots = j.at("shots").get<std::uint64_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

} // namespace

DrerDataset gen_dataset(const DrerConfig &config, int jobs) {
    config.noise.validate();
    if (config.qubits > 10) {
        fail(ErrorKind::ResourceLimit, "DRER datasets limited to 10 qubits");
    }
    require(config.qubits >= 2, "DRER circuits need at least two qubits");
    DrerDataset data;
    data.config = config;
    data.noisy.resize(config.samples);
    data.noiseless.resize(config.samples);
    parallel_for(config.samples, jobs, [&](std::size_t i) {
        const std::uint64_t circuit_seed = derive_seed(config.seed, i);
        const Circuit circuit = sample_g3({config.qubits, config.gate_count, circuit_seed});
        QuantumState psi = QuantumState::basis(config.qubits, Representation::Pure);
        apply_circuit(psi, circuit);
        CountsVector clean = measure_probs(psi);
        CountsVector noisy = run_noisy(
            circuit, config.noise, QuantumState::basis(config.qubits, Representation::Density));
        if (config.shots > 0) {
            clean = to_frequencies(
                sample_counts(clean, config.shots, derive_seed(circuit_seed, 1)), config.shots);
            noisy = to_frequencies(
                sample_counts(noisy, config.shots, derive_seed(circuit_seed, 2)), config.shots);
        }
        data.noiseless[i] = std::move(clean);
        data.noisy[i] = std::move(noisy);
    });
    return data;
}

RidgeModel fit_ridge(const DrerDataset &dataset, double alpha) {
    require(dataset.size() >= 1, "cannot fit on an empty dataset");
    const Eigen::MatrixXd x = rows_to_matrix(dataset.noisy);
    const Eigen::MatrixXd y = rows_to_matrix(dataset.noiseless);
    return {solve_ridge(x, y, alpha).transpose(), alpha};
}

CountsVector mitigate(const RidgeModel &model, std::span<const double> noisy) {
    require(static_cast<Eigen::Index>(noisy.size()) == model.weights.cols(),
            "noisy vector does not match model dimension");
    const Eigen::Map<const Eigen::VectorXd> x(noisy.data(),
                                              static_cast<Eigen::Index>(noisy.size()));
    const Eigen::VectorXd out = model.weights * x;
    return CountsVector(out.data(), out.data() + out.size());
}

CountsVector clip_for_report(CountsVector values) {
    for (double &v : values) {
        v = std::max(v, 0.0);
    }
    return values;
}

double tendency_accuracy(std::span<const double> mitigated,
                         std::span<const double> noisy,
                         std::span<const double> noiseless) {
    require(mitigated.size() == noisy.size() && noisy.size() == noiseless.size(),
            "tendency inputs differ in length");
    require(!noisy.empty(), "tendency accuracy of an empty set");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < noisy.size(); ++i) {
        if (std::abs(mitigated[i] - noiseless[i]) < std::abs(noisy[i] - noiseless[i])) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(noisy.size());
}

DrerScore score(const RidgeModel &model, const DrerDataset &test) {
    require(test.size() >= 1, "cannot score an empty test set");
    double sq_noisy = 0.0;
    double sq_mitigated = 0.0;
    std::size_t hits = 0;
    std::size_t positions = 0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        const CountsVector m = mitigate(model, test.noisy[i]);
        const CountsVector &x = test.noisy[i];
        const CountsVector &y = test.noiseless[i];
        for (std::size_t j = 0; j < y.size(); ++j) {
            const double dn = x[j] - y[j];
            const double dm = m[j] - y[j];
            sq_noisy += dn * dn;
            sq_mitigated += dm * dm;
            hits += std::abs(dm) < std::abs(dn) ? 1 : 0;
            ++positions;
        }
    }
    const auto total = static_cast<double>(positions);
    return {sq_noisy / total, sq_mitigated / total, static_cast<double>(hits) / total};
}

AlphaSweep alpha_sweep(const DrerDataset &train, const DrerDataset &validation,
                       std::span<const double> grid) {
    require(!grid.empty(), "alpha grid is empty");
    AlphaSweep sweep;
    bool have_best = false;
    double best_mse = 0.0;
    for (double alpha : grid) {
        RidgeModel model = fit_ridge(train, alpha);
        const DrerScore s = score(model, validation);
        sweep.scores.emplace_back(alpha, s);
        const bool better = !have_best || s.mse_mitigated < best_mse ||
                            (s.mse_mitigated == best_mse && alpha > sweep.best_alpha);
        if (better) {
            have_best = true;
            best_mse = s.mse_mitigated;
            sweep.best_alpha = alpha;
            sweep.best_model = std::move(model);
        }
    }
    return sweep;
}

std::vector<DrerTableRow> drer_table(const DrerTableConfig &config, int jobs) {
    std::vector<DrerTableRow> rows;
    for (Channel channel : config.channels) {
        for (double p : config.probabilities) {
            auto make = [&](std::size_t samples, std::uint64_t stream) {
                DrerConfig c;
                c.samples = samples;
                c.qubits = config.qubits;
                c.gate_count = config.gate_count;
                c.noise = {channel, p};
                c.shots = config.shots;
                c.seed = derive_seed(config.seed, stream);
                return gen_dataset(c, jobs);
            };
            const DrerDataset train = make(config.train, 0);
            const DrerDataset validation = make(config.validation, 1);
            const DrerDataset test = make(config.test, 2);
            const AlphaSweep sweep = alpha_sweep(train, validation, config.alpha_grid);
            rows.push_back({channel, p, sweep.best_alpha, score(sweep.best_model, test)});
        }
    }
    return rows;
}

std::string score_csv_header() {
    return "channel,p,alpha,mse_noisy,mse_mitigated,tendency_accuracy";
}

std::string score_csv_row(Channel channel, double p, double alpha,
                          const DrerScore &s) {
    return std::string(to_string(channel)) + "," + format_double("%g", p) + "," +
           format_double("%g", alpha) + "," + format_double("%.6e", s.mse_noisy) + "," +
           format_double("%.6e", s.mse_mitigated) + "," +
           format_double("%.6f", s.tendency_accuracy);
}

void write_dataset(const DrerDataset &dataset, std::ostream &out) {
    out << nlohmann::json{{"meta", meta_to_json(dataset.config)}}.dump() << '\n';
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        out << nlohmann::json{{"x", dataset.noisy[i]}, {"y", dataset.noiseless[i]}}.dump()
            << '\n';
    }
}

DrerDataset read_dataset(std::istream &in) {
    DrerDataset data;
    std::string line;
    std::size_t line_no = 0;
    try {
        if (!std::getline(in, line)) {
            fail(ErrorKind::InvalidParameter, "dataset file is empty");
        }
        ++line_no;
        data.config = meta_from_json(nlohmann::json::parse(line).at("meta"));
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) {
                continue;
            }
            const auto j = nlohmann::json::parse(line);
            data.noisy.push_back(j.at("x").get<CountsVector>());
            data.noiseless.push_back(j.at("y").get<CountsVector>());
            require(data.noisy.back().size() == data.noiseless.back().size() &&
                        data.noisy.back().size() == data.noisy.front().size(),
                    "dataset line " + std::to_string(line_no) + " has a mismatched dimension");
        }
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorKind::InvalidParameter,
             "malformed dataset line " + std::to_string(line_no) + ": " + e.what());
    }
    return data;
}

void write_dataset(const DrerDataset &dataset, const std::filesystem::path &path) {
    std::ofstream out(path);
    write_dataset(dataset, out);
    if (!out) {
        fail(ErrorKind::InvalidParameter, "cannot write " + path.string());
    }
}

DrerDataset read_dataset(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::InvalidParameter, "cannot open " + path.string());
    }
    return read_dataset(in);
}

nlohmann::json to_json(const RidgeModel &model) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < model.weights.rows(); ++r) {
        std::vector<double> row(static_cast<std::size_t>(model.weights.cols()));
        for (Eigen::Index c = 0; c < model.weights.cols(); ++c) {
            row[static_cast<std::size_t>(c)] = model.weights(r, c);
        }
        rows.push_back(std::move(row));
    }
    return {{"alpha", model.alpha}, {"dim", model.weights.rows()}, {"W", std::move(rows)}};
}

RidgeModel ridge_model_from_json(const nlohmann::json &doc) {
    try {
        RidgeModel model;
        model.alpha = doc.at("alpha").get<double>();
        const auto d = doc.at("dim").get<Eigen::Index>();
        const auto &rows = doc.at("W");
        require(static_cast<Eigen::Index>(rows.size()) == d, "model W has wrong row count");
        model.weights.resize(d, d);
        for (Eigen::Index r = 0; r < d; ++r) {
            const auto row = rows[static_cast<std::size_t>(r)].get<std::vector<double>>();
            require(static_cast<Eigen::Index>(row.size()) == d, "model W is not square");
            for (Eigen::Index c = 0; c < d; ++c) {
                model.weights(r, c) = row[static_cast<std::size_t>(c)];
            }
        }
        return model;
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorKind::InvalidParameter, std::string("malformed model JSON: ") + e.what());
    }
}

} // namespace qconv
