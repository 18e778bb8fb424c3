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

#include "qconv/noise.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "gtest/gtest.h"
#include "qconv/error.hpp"
#include "qconv/reservoir.hpp"
#include "test_util.hpp"

using namespace qconv;
using qconv::testing::max_abs_diff;
using qconv::testing::random_circuit;
using qconv::testing::random_pure_state;

namespace {

const Channel kChannels[] = {Channel::Depolarizing, Channel::AmplitudeDamping,
                             Channel::PhaseDamping};

Eigen::Matrix2cd to_eigen(const Mat2 &m) {
    Eigen::Matrix2cd e;
    e << m[0], m[1], m[2], m[3];
    return e;
}

// Reference: sum_k (I (x) .. K_k .. (x) I) rho (...)^dagger with dense matrices.
Eigen::MatrixXcd kraus_reference(const Eigen::MatrixXcd &rho, int qubits, int target,
                                 const NoiseSpec &spec) {
    const auto dim = Eigen::Index{1} << qubits;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (const Mat2 &k : kraus_ops(spec)) {
        Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(dim, dim);
        for (Eigen::Index col = 0; col < dim; ++col) {
            const int bit = static_cast<int>((col >> target) & 1);
            const Eigen::Index base = col & ~(Eigen::Index{1} << target);
            full(base, col) = k[static_cast<std::size_t>(bit)];
            full(base | (Eigen::Index{1} << target), col) = k[static_cast<std::size_t>(2 + bit)];
        }
        out += full * rho * full.adjoint();
    }
    return out;
}

Eigen::MatrixXcd as_matrix(const QuantumState &rho) {
    const auto n = static_cast<Eigen::Index>(rho.dim());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            m(r, c) = rho.element(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        }
    }
    return m;
}

double l1(const CountsVector &a, const CountsVector &b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::abs(a[i] - b[i]);
    }
    return s;
}

} // namespace

TEST(Kraus, completeness) {
    for (Channel ch : kChannels) {
        for (double p : {0.0, 0.001, 0.03, 0.5, 0.75, 1.0}) {
            Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
            for (const Mat2 &k : kraus_ops({ch, p})) {
                sum += to_eigen(k).adjoint() * to_eigen(k);
            }
            EXPECT_LE((sum - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-12)
                << to_string(ch) << " p=" << p;
        }
    }
}

TEST(Kraus, zero_probability_is_identity) {
    for (Channel ch : kChannels) {
        const auto ops = kraus_ops({ch, 0.0});
        ASSERT_EQ(ops.size(), 1u);
        EXPECT_EQ(ops[0], (Mat2{1.0, 0.0, 0.0, 1.0}));
    }
}

TEST(Kraus, rejects_invalid_probability) {
    EXPECT_THROW(kraus_ops({Channel::Depolarizing, -0.1}), Error);
    EXPECT_THROW(kraus_ops({Channel::PhaseDamping, 1.5}), Error);
    EXPECT_THROW(parse_channel("bit-flip"), Error);
    EXPECT_EQ(parse_channel("amplitude_damping"), Channel::AmplitudeDamping);
}

TEST(ApplyChannel, full_amplitude_damping_decays_to_ground) {
    QuantumState rho = QuantumState::basis(1, Representation::Density, 1);
    apply_channel(rho, 0, {Channel::AmplitudeDamping, 1.0});
    EXPECT_LE(max_abs_diff(rho.data(), std::vector<cplx>{1.0, 0.0, 0.0, 0.0}), 1e-15);
}

TEST(ApplyChannel, depolarizing_three_quarters_is_maximally_mixed) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        QuantumState rho = random_pure_state(1, seed).to_density();
        apply_channel(rho, 0, {Channel::Depolarizing, 0.75});
        EXPECT_LE(max_abs_diff(rho.data(), std::vector<cplx>{0.5, 0.0, 0.0, 0.5}), 1e-12);
    }
}

TEST(ApplyChannel, matches_dense_kraus_sum) {
    for (Channel ch : kChannels) {
        for (int target = 0; target < 3; ++target) {
            const QuantumState psi = random_pure_state(3, 10 + static_cast<std::uint64_t>(target));
            QuantumState rho = apply_circuit(psi, random_circuit(3, 20, 4)).to_density();
            const Eigen::MatrixXcd expected =
                kraus_reference(as_matrix(rho), 3, target, {ch, 0.2});
            apply_channel(rho, target, {ch, 0.2});
            EXPECT_LE((as_matrix(rho) - expected).cwiseAbs().maxCoeff(), 1e-14);
        }
    }
}

TEST(ApplyChannel, rejects_pure_state) {
    QuantumState psi = QuantumState::basis(2, Representation::Pure);
    try {
        apply_channel(psi, 0, {Channel::Depolarizing, 0.1});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidRepresentation);
    }
}

TEST(ApplyChannel, phase_damping_keeps_populations) {
    QuantumState rho = random_pure_state(4, 2).to_density();
    const CountsVector before = measure_probs(rho);
    for (int q = 0; q < 4; ++q) {
        apply_channel(rho, q, {Channel::PhaseDamping, 0.3});
    }
    EXPECT_LE(max_abs_diff(measure_probs(rho), before), 1e-12);
}

TEST(RunNoisy, fused_path_matches_gate_then_channel) {
    const Circuit c = random_circuit(4, 120, 5);
    const QuantumState start = random_pure_state(4, 5);
    for (Channel ch : kChannels) {
        const NoiseSpec spec{ch, 0.02};
        QuantumState reference = start.to_density();
        for (const Gate &g : c.gates()) {
            reference.apply(g);
            apply_channel(reference, g.target, spec);
            if (g.is_two_qubit()) {
                apply_channel(reference, g.control, spec);
            }
        }
        const QuantumState fused = run_noisy_state(c, spec, start);
        EXPECT_LE(max_abs_diff(fused.data(), reference.data()), 1e-12) << to_string(ch);
    }
}

TEST(RunNoisy, zero_noise_matches_pure_simulation) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const Circuit c = sample_g3({6, 300, seed});
        const CountsVector clean =
            measure_probs(apply_circuit(QuantumState::basis(6, Representation::Pure), c));
        for (Channel ch : kChannels) {
            const CountsVector noisy =
                run_noisy(c, {ch, 0.0}, QuantumState::basis(6, Representation::Density));
            EXPECT_LE(max_abs_diff(noisy, clean), 1e-10);
        }
    }
}

TEST(RunNoisy, density_invariants_hold_through_run) {
    const Circuit c = sample_g3({5, 300, 77});
    for (Channel ch : kChannels) {
        double worst_trace = 0.0;
        double worst_herm = 0.0;
        double min_diag = 0.0;
        run_noisy_state(c, {ch, 0.03}, QuantumState::basis(5, Representation::Pure),
                        [&](std::size_t, const QuantumState &rho) {
                            worst_trace = std::max(worst_trace, std::abs(rho.trace() - 1.0));
                            for (std::size_t r = 0; r < rho.dim(); ++r) {
                                min_diag = std::min(min_diag, rho.element(r, r).real());
                                for (std::size_t col = r; col < rho.dim(); ++col) {
                                    worst_herm = std::max(
                                        worst_herm, std::abs(rho.element(r, col) -
                                                             std::conj(rho.element(col, r))));
                                }
                            }
                        });
        EXPECT_LE(worst_trace, 1e-9);
        EXPECT_LE(worst_herm, 1e-9);
        EXPECT_GE(min_diag, -1e-9);
        const DensityReport final_report = check_density(
            run_noisy_state(c, {ch, 0.03}, QuantumState::basis(5, Representation::Pure)));
        EXPECT_GE(final_report.min_eigenvalue, -1e-8);
    }
}

TEST(RunNoisy, strong_noise_suppresses_peak) {
    const Circuit c = sample_g3({7, 300, 2024});
    const CountsVector clean =
        measure_probs(apply_circuit(QuantumState::basis(7, Representation::Pure), c));
    const double clean_max = *std::max_element(clean.begin(), clean.end());
    for (Channel ch : kChannels) {
        const CountsVector noisy =
            run_noisy(c, {ch, 0.03}, QuantumState::basis(7, Representation::Pure));
        EXPECT_LT(*std::max_element(noisy.begin(), noisy.end()), clean_max) << to_string(ch);
    }
}

TEST(RunNoisy, depolarizing_distance_shrinks_with_p) {
    const Circuit c = sample_g3({6, 300, 31});
    const QuantumState zero = QuantumState::basis(6, Representation::Pure);
    const CountsVector clean = measure_probs(apply_circuit(zero, c));
    double previous = INFINITY;
    for (double p : {0.03, 0.01, 0.005, 0.001}) {
        const double d = l1(run_noisy(c, {Channel::Depolarizing, p}, zero), clean);
        EXPECT_LE(d, previous) << "p=" << p;
        previous = d;
    }
}

TEST(RunNoisy, size_limit) {
    try {
        run_noisy(Circuit(11), {Channel::Depolarizing, 0.1},
                  QuantumState::basis(11, Representation::Pure));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::ResourceLimit);
    }
}
