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

// qconv command-line front end.
//
//   qconv [--seed S] [--jobs J] [--out DIR] <group> <command> [options]
//
// Every command writes its outputs into DIR together with a run manifest
// (<output>.manifest.json). `qconv replay <manifest>` re-runs a manifest and
// checks that the outputs are byte-identical.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "manifest.hpp"
#include "qconv/drer.hpp"
#include "qconv/error.hpp"
#include "qconv/frqi.hpp"
#include "qconv/noise.hpp"
#include "qconv/qconvlayer.hpp"
#include "qconv/reservoir.hpp"
#include "qconv/rng.hpp"
#include "qconv/voxelgrid.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qconv;
using namespace qconv::cli;

namespace {

constexpr int kExitError = 2;
constexpr int kExitCheck = 3;
constexpr int kExitInternal = 4;

struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(bool ok, const std::string &what) {
    if (!ok) {
        throw InvariantViolation(what);
    }
}

struct Context {
    std::vector<std::string> args;
    std::uint64_t seed = 0;
    CLI::Option *seed_opt = nullptr;
    int jobs = 1;
    std::string out = ".";
    RunManifest manifest;
    std::vector<std::string> written;
    std::vector<std::shared_ptr<void>> storage;

    /// Option storage that lives as long as this run.
    template <class T, class... A> T &keep(A &&...init) {
        auto p = std::make_shared<T>(std::forward<A>(init)...);
        storage.push_back(p);
        return *p;
    }

    std::uint64_t require_seed() {
        if (seed_opt->count() == 0) {
            fail(ErrorKind::InvalidParameter,
                 "--seed is required for '" + manifest.subcommand + "'");
        }
        manifest.seeds["master"] = seed;
        return seed;
    }

    fs::path output(const std::string &name) {
        fs::create_directories(out);
        written.push_back(name);
        return fs::path(out) / name;
    }

    void finish() {
        if (written.empty()) {
            return;
        }
        manifest.argv = strip_out_flag(args);
        manifest.version = QCONV_VERSION;
        manifest.params["jobs"] = jobs;
        for (const auto &name : written) {
            manifest.outputs.push_back(record_output(out, name));
        }
        const std::string stem = fs::path(written.front()).stem().string();
        write_manifest(manifest, fs::path(out) / (stem + ".manifest.json"));
    }
};

void write_text(const fs::path &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) {
        fail(ErrorKind::InvalidParameter, "cannot write " + path.string());
    }
}

json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::InvalidParameter, "cannot read " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw Error(ErrorKind::FormatError, path + ": " + e.what());
    }
}

std::string fmt(const char *format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::vector<Channel> parse_channels(const std::vector<std::string> &names) {
    std::vector<Channel> out;
    for (const auto &name : names) {
        if (name == "all") {
            out = {Channel::Depolarizing, Channel::AmplitudeDamping, Channel::PhaseDamping};
        } else {
            out.push_back(parse_channel(name));
        }
    }
    return out;
}

// ---------------------------------------------------------------- voxel

void add_voxel(CLI::App &app, Context &ctx) {
    auto *voxel = app.add_subcommand("voxel", "Synthetic grids, blur and header dump");
    voxel->require_subcommand(1);

    struct Gen {
        std::size_t channels = 4, side = 16;
        std::string kind = "sparse-atoms";
        double blur = 0.0;
        std::string output = "grid.voxg";
    };
    auto &gen = ctx.keep<Gen>();
    auto *g = voxel->add_subcommand("gen", "Generate a seeded synthetic grid");
    g->add_option("--channels,-C", gen.channels)->capture_default_str();
    g->add_option("--side,-N", gen.side)->capture_default_str();
    g->add_option("--kind", gen.kind, "sparse-atoms | uniform-noise | zeros")
        ->capture_default_str();
    g->add_option("--blur", gen.blur, "Gaussian sigma applied after generation (0 = none)");
    g->add_option("--output,-o", gen.output)->capture_default_str();
    g->callback([&] {
        const SynthKind kind = parse_synth_kind(gen.kind);
        const std::uint64_t seed = ctx.require_seed();
        VoxelGrid grid = synth_grid(gen.channels, gen.side, seed, kind);
        if (gen.blur > 0.0) {
            grid = gaussian_blur(grid, gen.blur, ctx.jobs);
        }
        write_grid(grid, ctx.output(gen.output));
        ctx.manifest.params.update({{"channels", gen.channels},
                                    {"side", gen.side},
                                    {"kind", gen.kind},
                                    {"blur", gen.blur}});
    });

    struct Blur {
        std::string input, output = "blurred.voxg";
        double sigma = 1.0;
    };
    auto &blur = ctx.keep<Blur>();
    auto *b = voxel->add_subcommand("blur", "Separable Gaussian blur of a VOXG file");
    b->add_option("--input,-i", blur.input)->required();
    b->add_option("--sigma", blur.sigma)->capture_default_str();
    b->add_option("--output,-o", blur.output)->capture_default_str();
    b->callback([&] {
        const VoxelGrid grid = read_grid(blur.input);
        write_grid(gaussian_blur(grid, blur.sigma, ctx.jobs), ctx.output(blur.output));
        ctx.manifest.params.update({{"input", blur.input}, {"sigma", blur.sigma}});
    });

    auto &info_input = ctx.keep<std::string>();
    auto *i = voxel->add_subcommand("info", "Print header and value statistics");
    i->add_option("--input,-i", info_input)->required();
    i->callback([&] {
        const VoxelGrid grid = read_grid(info_input);
        const auto data = grid.data();
        const auto [lo, hi] = std::minmax_element(data.begin(), data.end());
        double sum = 0.0;
        for (double v : data) {
            sum += v;
        }
        const json doc = {{"channels", grid.channels()},
                          {"side", grid.side()},
                          {"voxels", data.size()},
                          {"min", *lo},
                          {"max", *hi},
                          {"mean", sum / static_cast<double>(data.size())}};
        std::cout << doc.dump() << '\n';
    });
}

// ---------------------------------------------------------------- frqi

AngleBlock distinct_angle_block(std::size_t n) {
    const std::size_t count = n * n * n;
    std::vector<double> angles(count);
    for (std::size_t i = 0; i < count; ++i) {
        angles[i] = std::numbers::pi / 2.0 * static_cast<double>(i + 1) /
                    static_cast<double>(count + 1);
    }
    return AngleBlock::from_angles(std::move(angles), n);
}

void add_frqi(CLI::App &app, Context &ctx) {
    auto *frqi = app.add_subcommand("frqi", "FRQI block encoding");
    frqi->require_subcommand(1);

    struct Encode {
        std::string input, grid, output = "amplitudes.json";
        std::size_t n = 4, block = 0;
    };
    auto &enc = ctx.keep<Encode>();
    auto *e = frqi->add_subcommand(
        "encode", "Amplitudes for a JSON block ({\"angles\":[..]} or {\"values\":[..]}) "
                  "or for one block of a VOXG grid");
    e->add_option("--input,-i", enc.input, "JSON block file");
    e->add_option("--grid", enc.grid, "VOXG grid; encodes block --block of side --n");
    e->add_option("--n", enc.n)->capture_default_str();
    e->add_option("--block", enc.block)->capture_default_str();
    e->add_option("--output,-o", enc.output)->capture_default_str();
    e->callback([&] {
        AngleBlock block;
        if (!enc.grid.empty()) {
            const VoxelGrid grid = read_grid(enc.grid);
            const auto [lo, hi] = std::minmax_element(grid.data().begin(), grid.data().end());
            block = normalize_block(extract_block(grid, enc.n, enc.block).values, *lo, *hi,
                                    enc.n);
            ctx.manifest.params.update(
                {{"grid", enc.grid}, {"n", enc.n}, {"block", enc.block}});
        } else {
            require(!enc.input.empty(), "frqi encode needs --input or --grid");
            const json doc = read_json_file(enc.input);
            if (doc.contains("angles")) {
                block = AngleBlock::from_angles(doc["angles"].get<std::vector<double>>());
            } else {
                const auto values = doc.at("values").get<std::vector<double>>();
                require(!values.empty(), "block has no values");
                const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
                block = normalize_block(values, doc.value("min", *lo), doc.value("max", *hi));
            }
            ctx.manifest.params["input"] = enc.input;
        }
        const QuantumState state = frqi_state(block);
        json amps = json::array();
        double norm = 0.0;
        for (std::size_t i = 0; i < state.dim(); ++i) {
            const cplx a = state.amplitude(i);
            amps.push_back({a.real(), a.imag()});
            norm += std::norm(a);
        }
        check(std::abs(norm - 1.0) <= 1e-10, "FRQI state is not normalized");
        const json doc = {{"qubits", state.qubits()},
                          {"position_qubits", state.qubits() - 1},
                          {"angles", block.angles},
                          {"amplitudes", amps}};
        write_text(ctx.output(enc.output), doc.dump(2) + "\n");
    });

    struct Resources {
        std::vector<std::size_t> sides = {2, 4, 8};
        std::string output = "resources.csv";
    };
    auto &res = ctx.keep<Resources>();
    auto *r = frqi->add_subcommand("resources",
                                   "Qubit and gate counts for blocks with distinct angles");
    r->add_option("--n", res.sides, "Block sides")->delimiter(',')->capture_default_str();
    r->add_option("--output,-o", res.output)->capture_default_str();
    r->callback([&] {
        std::string csv = "n,angles,qubits,gates\n";
        for (std::size_t n : res.sides) {
            require(n >= 1, "block side must be >= 1");
            const FrqiResources fr = frqi_resources(distinct_angle_block(n));
            csv += std::to_string(n) + "," + std::to_string(n * n * n) + "," +
                   std::to_string(fr.qubits) + "," + std::to_string(fr.gates) + "\n";
        }
        write_text(ctx.output(res.output), csv);
        ctx.manifest.params["n"] = res.sides;
    });
}

// ---------------------------------------------------------------- reservoir

void add_reservoir(CLI::App &app, Context &ctx) {
    auto *reservoir = app.add_subcommand("reservoir", "Reservoir sampling");
    reservoir->require_subcommand(1);

    struct G3 {
        int qubits = 7;
        std::size_t gates = 300;
        std::string output = "reservoir.json";
    };
    auto &g3 = ctx.keep<G3>();
    auto *g = reservoir->add_subcommand("sample-g3", "Random {CNOT, H, T} circuit as JSON");
    g->add_option("--qubits", g3.qubits)->capture_default_str();
    g->add_option("--gates", g3.gates)->capture_default_str();
    g->add_option("--output,-o", g3.output)->capture_default_str();
    g->callback([&] {
        const Circuit c = sample_g3({g3.qubits, g3.gates, ctx.require_seed()});
        write_text(ctx.output(g3.output), to_json(c).dump() + "\n");
        ctx.manifest.params.update({{"qubits", g3.qubits}, {"gates", g3.gates}});
    });

    auto &ising = ctx.keep<IsingSpec>(IsingSpec{7, 1.0, 0.1, 10.0, 0});
    auto &ising_output = ctx.keep<std::string>("ising.json");
    auto *i = reservoir->add_subcommand("ising", "Transverse-field Ising evolution diagnostics");
    i->add_option("--qubits", ising.qubits)->capture_default_str();
    i->add_option("--Js", ising.Js)->capture_default_str();
    i->add_option("--field", ising.h, "Transverse field h")->capture_default_str();
    i->add_option("--T", ising.T)->capture_default_str();
    i->add_option("--output,-o", ising_output)->capture_default_str();
    i->callback([&] {
        IsingSpec spec = ising;
        spec.seed = ctx.require_seed();
        const Eigen::MatrixXcd u = ising_unitary(spec);
        const double unitarity =
            (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols()))
                .cwiseAbs()
                .maxCoeff();
        check(unitarity <= 1e-9, "Ising propagator is not unitary");
        json doc = to_json(spec);
        doc["couplings"] = ising_couplings(spec);
        doc["dim"] = u.rows();
        doc["unitarity_error"] = unitarity;
        write_text(ctx.output(ising_output), doc.dump(2) + "\n");
        ctx.manifest.params = to_json(spec);
    });
}

// ---------------------------------------------------------------- qconv

struct LayerOptions {
    std::size_t n = 4;
    std::string family = "g3";
    std::size_t gates = 300;
    double Js = 1.0, h = 0.1, T = 10.0;
    std::string channel;
    double p = 0.0;
    std::uint64_t shots = 0;

    void add(CLI::App *cmd) {
        cmd->add_option("--n", n, "Block side")->capture_default_str();
        cmd->add_option("--reservoir", family, "g3 | ising")->capture_default_str();
        cmd->add_option("--gates", gates, "G3 gate count")->capture_default_str();
        cmd->add_option("--Js", Js)->capture_default_str();
        cmd->add_option("--field", h, "Transverse field h")->capture_default_str();
        cmd->add_option("--T", T)->capture_default_str();
        cmd->add_option("--channel", channel, "Noise channel (default: noiseless)");
        cmd->add_option("--p", p, "Noise probability")->capture_default_str();
        cmd->add_option("--shots", shots, "0 = exact probabilities")->capture_default_str();
    }

    QConvConfig config(std::uint64_t seed) const {
        QConvConfig c;
        c.n = n;
        const int q = qconv_qubits(n);
        if (family == "g3") {
            c.reservoir = G3Spec{q, gates, seed};
        } else if (family == "ising") {
            c.reservoir = IsingSpec{q, Js, h, T, seed};
        } else {
            fail(ErrorKind::InvalidParameter, "unknown reservoir family '" + family + "'");
        }
        if (!channel.empty()) {
            c.noise = NoiseSpec{parse_channel(channel), p};
        }
        c.shots = shots;
        c.master_seed = seed;
        return c;
    }
};

void check_slices(const FeatureMap &map, int qubits, bool exact) {
    if (!exact) {
        return;
    }
    const std::size_t width = std::size_t{1} << qubits;
    const std::size_t side = map.side();
    for (std::size_t c = 0; c < map.channels() / width; ++c) {
        for (std::size_t x = 0; x < side; ++x) {
            for (std::size_t y = 0; y < side; ++y) {
                for (std::size_t z = 0; z < side; ++z) {
                    double sum = 0.0;
                    for (double v : feature_slice(map, qubits, c, x, y, z)) {
                        check(v >= -1e-12, "negative feature probability");
                        sum += v;
                    }
                    check(std::abs(sum - 1.0) <= 1e-6, "feature slice does not sum to 1");
                }
            }
        }
    }
}

void add_qconv(CLI::App &app, Context &ctx) {
    auto *qconv = app.add_subcommand("qconv", "Quantum convolutional layer");
    qconv->require_subcommand(1);

    auto &run_layer = ctx.keep<LayerOptions>();
    auto &run_input = ctx.keep<std::string>();
    auto &run_output = ctx.keep<std::string>("features.voxg");
    auto *r = qconv->add_subcommand("run", "Feature map of a VOXG grid (+ JSON sidecar)");
    r->add_option("--input,-i", run_input)->required();
    r->add_option("--output,-o", run_output)->capture_default_str();
    run_layer.add(r);
    r->callback([&] {
        const QConvConfig cfg = run_layer.config(ctx.require_seed());
        const VoxelGrid grid = read_grid(run_input);
        const FeatureMap out = qconv_forward(grid, cfg, ctx.jobs);
        check_slices(out, qconv_qubits(cfg.n), cfg.shots == 0);
        write_grid(out, ctx.output(run_output));
        json sidecar = to_json(cfg);
        sidecar["input"] = run_input;
        write_text(ctx.output(fs::path(run_output).stem().string() + ".json"),
                   sidecar.dump(2) + "\n");
        ctx.manifest.params = sidecar;
    });

    auto &sweep_layer = ctx.keep<LayerOptions>();
    auto &sweep_input = ctx.keep<std::string>();
    auto &sweep_output = ctx.keep<std::string>("sweep.csv");
    auto &sweep_gates = ctx.keep<std::vector<std::size_t>>(
        std::vector<std::size_t>{20, 50, 100, 200, 300, 400, 500, 600});
    auto &sweep_maps = ctx.keep<bool>(false);
    auto *s = qconv->add_subcommand("sweep", "Feature support over G3 gate counts");
    s->add_option("--input,-i", sweep_input)->required();
    s->add_option("--gate-counts", sweep_gates)->delimiter(',')->capture_default_str();
    s->add_flag("--save-maps", sweep_maps, "Also write one feature map per gate count");
    s->add_option("--output,-o", sweep_output)->capture_default_str();
    sweep_layer.add(s);
    s->callback([&] {
        const QConvConfig cfg = sweep_layer.config(ctx.require_seed());
        const VoxelGrid grid = read_grid(sweep_input);
        const auto maps = reservoir_sweep(grid, sweep_gates, cfg, ctx.jobs);
        const int q = qconv_qubits(cfg.n);
        std::string csv = "gates,mean_support\n";
        for (std::size_t k = 0; k < maps.size(); ++k) {
            check_slices(maps[k], q, cfg.shots == 0);
            csv += std::to_string(sweep_gates[k]) + "," + fmt("%.6f", mean_support(maps[k], q)) +
                   "\n";
        }
        const fs::path csv_path = ctx.output(sweep_output);
        if (sweep_maps) {
            for (std::size_t k = 0; k < maps.size(); ++k) {
                write_grid(maps[k],
                           ctx.output("features_g" + std::to_string(sweep_gates[k]) + ".voxg"));
            }
        }
        write_text(csv_path, csv);
        ctx.manifest.params = to_json(cfg);
        ctx.manifest.params["input"] = sweep_input;
        ctx.manifest.params["gate_counts"] = sweep_gates;
    });

    struct ReadoutOptions {
        std::size_t samples = 50, channels = 1, side = 16;
        std::string kind = "sparse-atoms";
        double blur = 1.0, alpha = 1e-4, train_fraction = 0.7;
        std::string output = "readout.json";
    };
    auto &ro = ctx.keep<ReadoutOptions>();
    auto &ro_layer = ctx.keep<LayerOptions>();
    auto *d = qconv->add_subcommand(
        "readout", "Ridge readout of quantum features on synthetic grids (target = grid mean)");
    d->add_option("--samples", ro.samples)->capture_default_str();
    d->add_option("--channels,-C", ro.channels)->capture_default_str();
    d->add_option("--side,-N", ro.side)->capture_default_str();
    d->add_option("--kind", ro.kind)->capture_default_str();
    d->add_option("--blur", ro.blur)->capture_default_str();
    d->add_option("--alpha", ro.alpha)->capture_default_str();
    d->add_option("--train-fraction", ro.train_fraction)->capture_default_str();
    d->add_option("--output,-o", ro.output)->capture_default_str();
    ro_layer.add(d);
    d->callback([&] {
        const std::uint64_t seed = ctx.require_seed();
        const QConvConfig cfg = ro_layer.config(seed);
        const SynthKind kind = parse_synth_kind(ro.kind);
        std::vector<FeatureMap> features;
        std::vector<double> targets;
        for (std::size_t i = 0; i < ro.samples; ++i) {
            VoxelGrid grid = synth_grid(ro.channels, ro.side, derive_seed(seed, i + 1), kind);
            if (ro.blur > 0.0) {
                grid = gaussian_blur(grid, ro.blur, ctx.jobs);
            }
            double sum = 0.0;
            for (double v : grid.data()) {
                sum += v;
            }
            targets.push_back(sum / static_cast<double>(grid.data().size()));
            features.push_back(qconv_forward(grid, cfg, ctx.jobs));
        }
        const Readout r = readout_fit(features, targets, ro.alpha, ro.train_fraction);
        json preds = json::array();
        for (std::size_t i = 0; i < features.size(); ++i) {
            preds.push_back({{"target", targets[i]},
                             {"prediction", r.predict(features[i].data())},
                             {"split", i < r.train_samples ? "train" : "validation"}});
        }
        const json doc = {{"samples", ro.samples},
                          {"train_samples", r.train_samples},
                          {"alpha", ro.alpha},
                          {"train_mse", r.train_mse},
                          {"validation_mse", r.validation_mse},
                          {"baseline_mse", r.baseline_mse},
                          {"beats_baseline", r.validation_mse < r.baseline_mse},
                          {"predictions", preds}};
        write_text(ctx.output(ro.output), doc.dump(2) + "\n");
        ctx.manifest.params = to_json(cfg);
        ctx.manifest.params.update({{"samples", ro.samples},
                                    {"channels", ro.channels},
                                    {"side", ro.side},
                                    {"kind", ro.kind},
                                    {"blur", ro.blur},
                                    {"alpha", ro.alpha},
                                    {"train_fraction", ro.train_fraction}});
        ctx.manifest.seeds["grid_stream"] = "derive_seed(master, sample + 1)";
    });
}

// ---------------------------------------------------------------- noise

void add_noise(CLI::App &app, Context &ctx) {
    auto *noise = app.add_subcommand("noise", "Noisy execution of one G3 circuit");
    noise->require_subcommand(1);

    struct Run {
        int qubits = 7;
        std::size_t gates = 300;
        std::vector<std::string> channels = {"all"};
        std::vector<double> ps = {0.001, 0.005, 0.01, 0.03};
        std::uint64_t shots = 0;
        std::string output = "noise.csv";
    };
    auto &run = ctx.keep<Run>();
    auto *r = noise->add_subcommand(
        "run", "Per-state noiseless vs noisy probabilities (or counts) for each channel and p");
    r->add_option("--qubits", run.qubits)->capture_default_str();
    r->add_option("--gates", run.gates)->capture_default_str();
    r->add_option("--channel", run.channels, "Channel list or 'all'")
        ->delimiter(',')
        ->capture_default_str();
    r->add_option("--p", run.ps)->delimiter(',')->capture_default_str();
    r->add_option("--shots", run.shots, "0 = exact probabilities")->capture_default_str();
    r->add_option("--output,-o", run.output)->capture_default_str();
    r->callback([&] {
        const std::uint64_t seed = ctx.require_seed();
        const Circuit circuit = sample_g3({run.qubits, run.gates, seed});
        const QuantumState zero = QuantumState::basis(run.qubits, Representation::Pure);
        CountsVector clean = measure_probs(apply_circuit(zero, circuit));
        const double clean_max = *std::max_element(clean.begin(), clean.end());
        if (run.shots > 0) {
            const ShotCounts counts = sample_counts(clean, run.shots, derive_seed(seed, 0));
            clean.assign(counts.begin(), counts.end());
        }
        std::string csv = "channel,p,state,noiseless,noisy\n";
        std::string summary = "channel,p,l1,max_noisy,max_noiseless\n";
        std::uint64_t stream = 1;
        for (Channel ch : parse_channels(run.channels)) {
            for (double p : run.ps) {
                CountsVector probs = run_noisy(circuit, {ch, p}, zero);
                double l1 = 0.0;
                double noisy_max = 0.0;
                for (std::size_t s = 0; s < probs.size(); ++s) {
                    noisy_max = std::max(noisy_max, probs[s]);
                }
                if (run.shots > 0) {
                    const ShotCounts counts =
                        sample_counts(probs, run.shots, derive_seed(seed, stream));
                    probs.assign(counts.begin(), counts.end());
                }
                ++stream;
                const std::string prefix =
                    std::string(to_string(ch)) + "," + fmt("%g", p) + ",";
                for (std::size_t s = 0; s < probs.size(); ++s) {
                    l1 += std::abs(probs[s] - clean[s]);
                    csv += prefix + std::to_string(s) + "," + fmt("%.10g", clean[s]) + "," +
                           fmt("%.10g", probs[s]) + "\n";
                }
                summary += prefix + fmt("%.10g", l1) + "," + fmt("%.10g", noisy_max) + "," +
                           fmt("%.10g", clean_max) + "\n";
            }
        }
        write_text(ctx.output(run.output), csv);
        write_text(ctx.output(fs::path(run.output).stem().string() + "_summary.csv"), summary);
        ctx.manifest.params.update({{"qubits", run.qubits},
                                    {"gates", run.gates},
                                    {"channels", run.channels},
                                    {"p", run.ps},
                                    {"shots", run.shots}});
    });
}

// ---------------------------------------------------------------- drer

void add_drer(CLI::App &app, Context &ctx) {
    auto *drer = app.add_subcommand("drer", "Data-regression error mitigation");
    drer->require_subcommand(1);

    struct Gen {
        DrerConfig cfg;
        std::string channel = "depolarizing";
        std::string output = "dataset.jsonl";
    };
    auto &gen = ctx.keep<Gen>();
    auto *g = drer->add_subcommand("gen", "Noisy/noiseless pairs from random G3 circuits");
    g->add_option("--samples", gen.cfg.samples)->capture_default_str();
    g->add_option("--qubits", gen.cfg.qubits)->capture_default_str();
    g->add_option("--gates", gen.cfg.gate_count)->capture_default_str();
    g->add_option("--channel", gen.channel)->capture_default_str();
    g->add_option("--p", gen.cfg.noise.p)->required();
    g->add_option("--shots", gen.cfg.shots, "0 = exact probabilities")->capture_default_str();
    g->add_option("--output,-o", gen.output)->capture_default_str();
    g->callback([&] {
        DrerConfig cfg = gen.cfg;
        cfg.noise.channel = parse_channel(gen.channel);
        cfg.seed = ctx.require_seed();
        const DrerDataset d = gen_dataset(cfg, ctx.jobs);
        for (std::size_t i = 0; i < d.size(); ++i) {
            double sx = 0.0, sy = 0.0;
            for (std::size_t j = 0; j < d.dim(); ++j) {
                sx += d.noisy[i][j];
                sy += d.noiseless[i][j];
            }
            check(std::abs(sx - 1.0) <= 1e-9 && std::abs(sy - 1.0) <= 1e-9,
                  "dataset row is not a probability vector");
        }
        write_dataset(d, ctx.output(gen.output));
        ctx.manifest.params.update({{"samples", cfg.samples},
                                    {"qubits", cfg.qubits},
                                    {"gates", cfg.gate_count},
                                    {"channel", gen.channel},
                                    {"p", cfg.noise.p},
                                    {"shots", cfg.shots}});
        ctx.manifest.seeds["circuit_stream"] = "derive_seed(master, sample)";
    });

    struct Fit {
        std::string train, validation, output = "model.json";
        std::optional<double> alpha;
        std::vector<double> grid = kDefaultAlphaGrid;
    };
    auto &fit = ctx.keep<Fit>();
    auto *f = drer->add_subcommand(
        "fit", "Fit the ridge map; with --validation, sweep --alpha-grid and keep the best");
    f->add_option("--train", fit.train)->required();
    f->add_option("--validation", fit.validation);
    f->add_option("--alpha", fit.alpha);
    f->add_option("--alpha-grid", fit.grid)->delimiter(',')->capture_default_str();
    f->add_option("--output,-o", fit.output)->capture_default_str();
    f->callback([&] {
        const DrerDataset train = read_dataset(fs::path(fit.train));
        RidgeModel model;
        std::string sweep_csv;
        if (fit.alpha) {
            model = fit_ridge(train, *fit.alpha);
        } else {
            require(!fit.validation.empty(), "drer fit needs --alpha or --validation");
            const DrerDataset validation = read_dataset(fs::path(fit.validation));
            const AlphaSweep sweep = alpha_sweep(train, validation, fit.grid);
            model = sweep.best_model;
            sweep_csv = score_csv_header() + "\n";
            for (const auto &[alpha, s] : sweep.scores) {
                sweep_csv += score_csv_row(train.config.noise.channel, train.config.noise.p,
                                           alpha, s) +
                             "\n";
            }
        }
        write_text(ctx.output(fit.output), to_json(model).dump() + "\n");
        if (!sweep_csv.empty()) {
            write_text(ctx.output(fs::path(fit.output).stem().string() + "_sweep.csv"),
                       sweep_csv);
        }
        ctx.manifest.params.update({{"train", fit.train},
                                    {"validation", fit.validation},
                                    {"alpha", fit.alpha ? json(*fit.alpha) : json(nullptr)},
                                    {"alpha_grid", fit.grid}});
    });

    auto &eval_test = ctx.keep<std::string>();
    auto &eval_model = ctx.keep<std::string>();
    auto &eval_output = ctx.keep<std::string>("score.csv");
    auto *e = drer->add_subcommand("eval", "Score a model (identity if --model is omitted)");
    e->add_option("--test", eval_test)->required();
    e->add_option("--model", eval_model);
    e->add_option("--output,-o", eval_output)->capture_default_str();
    e->callback([&] {
        const DrerDataset test = read_dataset(fs::path(eval_test));
        RidgeModel model;
        if (eval_model.empty()) {
            model.weights = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(test.dim()),
                                                      static_cast<Eigen::Index>(test.dim()));
        } else {
            model = ridge_model_from_json(read_json_file(eval_model));
        }
        const DrerScore s = score(model, test);
        write_text(ctx.output(eval_output),
                   score_csv_header() + "\n" +
                       score_csv_row(test.config.noise.channel, test.config.noise.p,
                                     model.alpha, s) +
                       "\n");
        ctx.manifest.params.update({{"test", eval_test}, {"model", eval_model}});
    });

    struct Table {
        DrerTableConfig cfg;
        std::vector<std::string> channels = {"all"};
        std::string output = "table.csv";
    };
    auto &table = ctx.keep<Table>();
    auto *t = drer->add_subcommand("table", "Full channel x p grid with alpha selection");
    t->add_option("--channels", table.channels)->delimiter(',')->capture_default_str();
    t->add_option("--p", table.cfg.probabilities)->delimiter(',')->capture_default_str();
    t->add_option("--alpha-grid", table.cfg.alpha_grid)->delimiter(',')->capture_default_str();
    t->add_option("--train", table.cfg.train)->capture_default_str();
    t->add_option("--validation", table.cfg.validation)->capture_default_str();
    t->add_option("--test", table.cfg.test)->capture_default_str();
    t->add_option("--qubits", table.cfg.qubits)->capture_default_str();
    t->add_option("--gates", table.cfg.gate_count)->capture_default_str();
    t->add_option("--shots", table.cfg.shots, "0 = exact probabilities")->capture_default_str();
    t->add_option("--output,-o", table.output)->capture_default_str();
    t->callback([&] {
        DrerTableConfig cfg = table.cfg;
        cfg.channels = parse_channels(table.channels);
        cfg.seed = ctx.require_seed();
        std::string csv = score_csv_header() + "\n";
        for (const DrerTableRow &row : drer_table(cfg, ctx.jobs)) {
            check(row.score.tendency_accuracy >= 0.0 && row.score.tendency_accuracy <= 1.0,
                  "tendency accuracy outside [0, 1]");
            csv += score_csv_row(row.channel, row.p, row.alpha, row.score) + "\n";
        }
        write_text(ctx.output(table.output), csv);
        ctx.manifest.params.update({{"channels", table.channels},
                                    {"p", cfg.probabilities},
                                    {"alpha_grid", cfg.alpha_grid},
                                    {"train", cfg.train},
                                    {"validation", cfg.validation},
                                    {"test", cfg.test},
                                    {"qubits", cfg.qubits},
                                    {"gates", cfg.gate_count},
                                    {"shots", cfg.shots}});
        ctx.manifest.seeds["streams"] = {{"train", "derive_seed(master, 0)"},
                                         {"validation", "derive_seed(master, 1)"},
                                         {"test", "derive_seed(master, 2)"}};
    });
}

// ---------------------------------------------------------------- replay

int run(const std::vector<std::string> &args);

int replay(const std::string &manifest_path, const std::string &out_dir, bool out_given) {
    const RunManifest m = read_manifest(manifest_path);
    fs::path dir = out_given ? fs::path(out_dir)
                             : fs::temp_directory_path() /
                                   ("qconv-replay-" + std::to_string(::getpid()));
    std::vector<std::string> args = m.argv;
    args.insert(args.begin(), {"--out", dir.string()});
    const int code = run(args);
    if (code != 0) {
        return code;
    }
    json report = {{"manifest", manifest_path}, {"out", dir.string()}};
    bool all_match = true;
    for (const OutputRecord &o : m.outputs) {
        const fs::path p = dir / o.path;
        const bool match = fs::exists(p) && fnv1a64_file(p) == o.fnv1a64 &&
                           fs::file_size(p) == o.bytes;
        all_match = all_match && match;
        report["outputs"].push_back({{"path", o.path}, {"match", match}});
    }
    report["identical"] = all_match;
    std::cout << report.dump() << '\n';
    if (!out_given) {
        fs::remove_all(dir);
    }
    return all_match ? 0 : kExitCheck;
}

void print_error(std::string_view tag, const std::string &message,
                 std::optional<std::size_t> offset = std::nullopt) {
    json doc = {{"error", tag}, {"message", message}};
    if (offset) {
        doc["offset"] = *offset;
    }
    std::cerr << doc.dump() << '\n';
}

int run(const std::vector<std::string> &args) {
    Context ctx;
    ctx.args = args;
    CLI::App app{"qconv: quantum convolutional features, noise models and error mitigation"};
    app.set_version_flag("--version", QCONV_VERSION);
    app.fallthrough();
    app.require_subcommand(1);
    ctx.seed_opt = app.add_option("--seed", ctx.seed, "Master seed (required when sampling)");
    app.add_option("--jobs,-j", ctx.jobs, "Worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    auto *out_opt = app.add_option("--out", ctx.out, "Output directory")->capture_default_str();

    add_voxel(app, ctx);
    add_frqi(app, ctx);
    add_reservoir(app, ctx);
    add_qconv(app, ctx);
    add_noise(app, ctx);
    add_drer(app, ctx);

    auto &replay_manifest = ctx.keep<std::string>();
    auto *rp = app.add_subcommand("replay", "Re-run a manifest and compare outputs");
    rp->add_option("manifest", replay_manifest)->required();

    // Record the leaf subcommand path before any callback runs.
    app.parse_complete_callback([&] {
        std::string path;
        for (CLI::App *a = &app; !a->get_subcommands().empty();) {
            a = a->get_subcommands().front();
            path += (path.empty() ? "" : " ") + a->get_name();
        }
        ctx.manifest.subcommand = path;
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
        if (rp->parsed()) {
            return replay(replay_manifest, ctx.out, out_opt->count() > 0);
        }
        ctx.finish();
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);
        }
        print_error("usage", e.what());
        return static_cast<int>(CLI::ExitCodes::BaseClass) + 1;
    } catch (const FormatError &e) {
        print_error(error_tag(e.kind()), e.what(), e.offset());
        return kExitError;
    } catch (const Error &e) {
        print_error(error_tag(e.kind()), e.what());
        return kExitError;
    } catch (const InvariantViolation &e) {
        print_error("invariant-violation", e.what());
        return kExitCheck;
    } catch (const std::exception &e) {
        print_error("internal", e.what());
        return kExitInternal;
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    return run(std::vector<std::string>(argv + 1, argv + argc));
}
