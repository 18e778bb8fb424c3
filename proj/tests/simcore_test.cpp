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

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "gtest/gtest.h"
#include "qconv/error.hpp"
#include "qconv/reservoir.hpp"
#include "qconv/state.hpp"
#include "test_util.hpp"

using namespace qconv;
using qconv::testing::max_abs_diff;
using qconv::testing::random_circuit;
using qconv::testing::random_pure_state;

TEST(Gates, every_kind_is_unitary) {
    for (const Gate &g : {Gate::h(0), Gate::t(0), Gate::x(0), Gate::y(0), Gate::z(0),
                          Gate::ry(0, 0.37), Gate::ry(0, -5.0)}) {
        const Mat2 m = single_qubit_matrix(g);
        Eigen::Matrix2cd u;
        u << m[0], m[1], m[2], m[3];
        EXPECT_LE((u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(),
                  1e-12)
            << to_string(g.kind);
    }
    Circuit cnot(2);
    cnot.add(Gate::cnot(1, 0));
    const Eigen::MatrixXcd u = circuit_unitary(cnot);
    EXPECT_LE((u.adjoint() * u - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff(),
              1e-12);
}

TEST(Circuit, validates_gates) {
    Circuit c(3);
    EXPECT_THROW(c.add(Gate::h(3)), Error);
    EXPECT_THROW(c.add(Gate::cnot(1, 1)), Error);
    EXPECT_THROW(c.add(Gate::cnot(5, 1)), Error);
    EXPECT_THROW(c.add(Gate::ry(0, INFINITY)), Error);
    EXPECT_THROW(Circuit(0), Error);
    EXPECT_NO_THROW(c.add(Gate::cnot(2, 0)));
}

TEST(Circuit, json_format) {
    const auto doc = nlohmann::json::parse(
        R"({"qubits": 4, "gates": [{"kind":"H","q":0}, {"kind":"CNOT","c":1,"t":3},
            {"kind":"Ry","q":2,"theta":1.5708}]})");
    const Circuit c = circuit_from_json(doc);
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c.gates()[0], Gate::h(0));
    EXPECT_EQ(c.gates()[1], Gate::cnot(1, 3));
    EXPECT_EQ(c.gates()[2], Gate::ry(2, 1.5708));

    const Circuit r = random_circuit(5, 200, 3);
    EXPECT_EQ(circuit_from_json(nlohmann::json::parse(to_json(r).dump())), r);

    EXPECT_THROW(circuit_from_json(nlohmann::json::parse(R"({"qubits":2,"gates":[{"kind":"Q","q":0}]})")),
                 Error);
    EXPECT_THROW(circuit_from_json(nlohmann::json::parse(R"({"gates":[]})")), Error);
}

TEST(ApplyCircuit, hadamard_on_zero) {
    QuantumState s = QuantumState::basis(1, Representation::Pure);
    apply_circuit(s, Circuit(1).add(Gate::h(0)));
    EXPECT_NEAR(s.amplitude(0).real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(s.amplitude(1).real(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(ApplyCircuit, bell_state) {
    Circuit c(2);
    c.add(Gate::h(0)).add(Gate::cnot(0, 1));
    const QuantumState s = apply_circuit(QuantumState::basis(2, Representation::Pure), c);
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_LE(max_abs_diff(s.data(), std::vector<cplx>{r, 0.0, 0.0, r}), 1e-15);
    const CountsVector p = measure_probs(s);
    EXPECT_LE(max_abs_diff(p, std::vector<double>{0.5, 0.0, 0.0, 0.5}), 1e-15);
}

TEST(ApplyCircuit, dimension_mismatch) {
    QuantumState s = QuantumState::basis(3, Representation::Pure);
    EXPECT_THROW(apply_circuit(s, Circuit(2)), Error);
}

TEST(ApplyCircuit, random_g3_preserves_norm) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Circuit c = sample_g3({7, 300, seed});
        const QuantumState s = apply_circuit(QuantumState::basis(7, Representation::Pure), c);
        EXPECT_NEAR(s.trace(), 1.0, 1e-9);
    }
}

TEST(ApplyCircuit, density_matches_pure) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int q = 1 + static_cast<int>(seed % 5);
        const Circuit c = random_circuit(q, 60, seed);
        const QuantumState psi = random_pure_state(q, seed + 100);
        const QuantumState a = apply_circuit(psi, c).to_density();
        const QuantumState b = apply_circuit(psi.to_density(), c);
        EXPECT_LE(max_abs_diff(a.data(), b.data()), 1e-9) << "seed " << seed;
        EXPECT_NEAR(b.trace(), 1.0, 1e-9);
    }
}

TEST(ApplyCircuit, inverse_restores_state) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Circuit c = random_circuit(4, 150, seed);
        const QuantumState psi = random_pure_state(4, seed);
        const QuantumState back = apply_circuit(apply_circuit(psi, c), inverse(c));
        EXPECT_LE(max_abs_diff(back.data(), psi.data()), 1e-8);
    }
}

TEST(ApplyCircuit, matches_unitary_oracle) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Circuit c = random_circuit(4, 80, seed);
        const Eigen::MatrixXcd u = circuit_unitary(c);
        // Independent product of dense gate matrices (Kronecker-embedded).
        Eigen::MatrixXcd oracle = Eigen::MatrixXcd::Identity(16, 16);
        for (const Gate &g : c.gates()) {
            Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(16, 16);
            for (int col = 0; col < 16; ++col) {
                if (g.kind == GateKind::CNOT) {
                    const int row = ((col >> g.control) & 1) ? col ^ (1 << g.target) : col;
                    m(row, col) = 1.0;
                    continue;
                }
                const Mat2 g2 = single_qubit_matrix(g);
                const int bit = (col >> g.target) & 1;
                const int base = col & ~(1 << g.target);
                m(base, col) = g2[0 * 2 + bit];
                m(base | (1 << g.target), col) = g2[1 * 2 + bit];
            }
            oracle = m * oracle;
        }
        EXPECT_LE((u - oracle).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_LE((u.adjoint() * u - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff(),
                  1e-8);
    }
}

TEST(CircuitUnitary, limited_to_six_qubits) {
    try {
        circuit_unitary(Circuit(7));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::ResourceLimit);
    }
}

TEST(Kernels, two_qubit_kernel_matches_dense_embedding) {
    Rng rng(9);
    Mat4 m;
    for (cplx &e : m) {
        e = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    }
    const QuantumState psi = random_pure_state(4, 3);
    std::vector<cplx> out(psi.data().begin(), psi.data().end());
    kernels::apply_2q(out, 3, 1, m);
    for (std::size_t i = 0; i < 16; ++i) {
        const int local_row = static_cast<int>(((i >> 3) & 1) << 1 | ((i >> 1) & 1));
        cplx expected = 0.0;
        for (int local_col = 0; local_col < 4; ++local_col) {
            std::size_t j = i & ~std::size_t{0b1010};
            j |= static_cast<std::size_t>((local_col >> 1) & 1) << 3;
            j |= static_cast<std::size_t>(local_col & 1) << 1;
            expected += m[4 * local_row + local_col] * psi.data()[j];
        }
        EXPECT_LE(std::abs(out[i] - expected), 1e-14);
    }
}

TEST(MeasureProbs, basis_and_normalization) {
    const CountsVector p0 = measure_probs(QuantumState::basis(3, Representation::Pure));
    EXPECT_EQ(p0[0], 1.0);
    for (std::size_t i = 1; i < p0.size(); ++i) {
        EXPECT_EQ(p0[i], 0.0);
    }
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const QuantumState psi = random_pure_state(5, seed);
        for (const QuantumState &s : {psi, psi.to_density()}) {
            const CountsVector p = measure_probs(s);
            double total = 0.0;
            for (double v : p) {
                EXPECT_GE(v, 0.0);
                total += v;
            }
            EXPECT_NEAR(total, 1.0, 1e-9);
        }
    }
}

TEST(SampleCounts, degenerate_distribution) {
    std::vector<double> p(8, 0.0);
    p[0] = 1.0;
    const ShotCounts c = sample_counts(p, 1000, 5);
    EXPECT_EQ(c[0], 1000u);
    for (std::size_t i = 1; i < c.size(); ++i) {
        EXPECT_EQ(c[i], 0u);
    }
}

TEST(SampleCounts, bell_binomial_bound) {
    const std::vector<double> p = {0.5, 0.0, 0.0, 0.5};
    const ShotCounts c = sample_counts(p, 1000000, 17);
    // sigma = sqrt(n p (1-p)) = 500.
    EXPECT_LE(std::abs(static_cast<double>(c[0]) - 5e5), 5 * 500.0);
    EXPECT_LE(std::abs(static_cast<double>(c[3]) - 5e5), 5 * 500.0);
    EXPECT_EQ(c[1] + c[2], 0u);
    EXPECT_EQ(c[0] + c[3], 1000000u);
}

TEST(SampleCounts, deterministic_and_sums_to_shots) {
    const CountsVector p = measure_probs(random_pure_state(5, 2));
    const ShotCounts a = sample_counts(p, 4096, 42);
    EXPECT_EQ(a, sample_counts(p, 4096, 42));
    EXPECT_NE(a, sample_counts(p, 4096, 43));
    std::uint64_t total = 0;
    for (auto v : a) {
        total += v;
    }
    EXPECT_EQ(total, 4096u);
}

TEST(SampleCounts, rejects_bad_input) {
    EXPECT_THROW(sample_counts(std::vector<double>{0.5, 0.4}, 10, 1), Error);
    EXPECT_THROW(sample_counts(std::vector<double>{1.0, 0.0}, 0, 1), Error);
    EXPECT_THROW(sample_counts(std::vector<double>{1.5, -0.5}, 10, 1), Error);
}

TEST(QuantumState, pure_requires_normalization) {
    EXPECT_THROW(QuantumState::pure({1.0, 1.0}), Error);
    EXPECT_THROW(QuantumState::pure({1.0, 0.0, 0.0}), Error);
}
