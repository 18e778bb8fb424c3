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

#include "qconv/reservoir.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "qconv/error.hpp"
#include "qconv/rng.hpp"

namespace qconv {

Circuit sample_g3(const G3Spec &spec) {
    require(spec.qubits >= 2, "G3 circuits need at least two qubits");
    const auto q = static_cast<std::uint64_t>(spec.qubits);
    Rng rng(spec.seed);
    Circuit circuit(spec.qubits);
    for (std::size_t g = 0; g < spec.gate_count; ++g) {
        switch (rng.below(3)) {
        case 0: {
            const auto control = static_cast<int>(rng.below(q));
            auto target = static_cast<int>(rng.below(q - 1));
            if (target >= control) {
                ++target;
            }
            circuit.add(Gate::cnot(control, target));
            break;
        }
        case 1:
            circuit.add(Gate::h(static_cast<int>(rng.below(q))));
            break;
        default:
            circuit.add(Gate::t(static_cast<int>(rng.below(q))));
            break;
        }
    }
    return circuit;
}

std::vector<double> ising_couplings(const IsingSpec &spec) {
    require(spec.qubits >= 1, "Ising model needs at least one qubit");
    require(spec.Js > 0.0, "Ising coupling scale Js must be > 0");
    Rng rng(spec.seed);
    std::vector<double> couplings;
    for (int i = 0; i < spec.qubits; ++i) {
        for (int j = i + 1; j < spec.qubits; ++j) {
            couplings.push_back(rng.uniform(-spec.Js / 2.0, spec.Js / 2.0));
        }
    }
    return couplings;
}

Eigen::MatrixXd ising_hamiltonian(const IsingSpec &spec) {
    if (spec.qubits > 10) {
        fail(ErrorKind::ResourceLimit, "Ising reservoir limited to 10 qubits");
    }
    const std::vector<double> couplings = ising_couplings(spec);
    const auto dim = Eigen::Index{1} << spec.qubits;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index s = 0; s < dim; ++s) {
        double diag = 0.0;
        std::size_t pair = 0;
        for (int i = 0; i < spec.qubits; ++i) {
            for (int j = i + 1; j < spec.qubits; ++j) {
                const bool parity = ((s >> i) ^ (s >> j)) & 1;
                diag += parity ? -couplings[pair] : couplings[pair];
                ++pair;
            }
        }
        h(s, s) = diag;
        for (int i = 0; i < spec.qubits; ++i) {
            h(s ^ (Eigen::Index{1} << i), s) += spec.h;
        }
    }
    return h;
}

Eigen::MatrixXcd ising_unitary(const IsingSpec &spec) {
    using namespace std::complex_literals;
    const Eigen::MatrixXd h = ising_hamiltonian(spec);
    const Eigen::Index dim = h.rows();
    if (spec.T == 0.0) {
        return Eigen::MatrixXcd::Identity(dim, dim);
    }
    if (spec.h == 0.0) {
        Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
        for (Eigen::Index s = 0; s < dim; ++s) {
            u(s, s) = std::exp(-1i * h(s, s) * spec.T);
        }
        return u;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success) {
        fail(ErrorKind::IllConditioned, "Ising eigendecomposition failed");
    }
    const Eigen::MatrixXcd v = solver.eigenvectors().cast<cplx>();
    Eigen::VectorXcd phases(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        phases(k) = std::exp(-1i * solver.eigenvalues()(k) * spec.T);
    }
    return v * phases.asDiagonal() * v.adjoint();
}

int reservoir_qubits(const Reservoir &reservoir) {
    if (const auto *c = std::get_if<Circuit>(&reservoir)) {
        return c->qubits();
    }
    const auto &u = std::get<Eigen::MatrixXcd>(reservoir);
    return static_cast<int>(std::countr_zero(static_cast<std::uint64_t>(u.rows())));
}

void apply_reservoir(QuantumState &state, const Reservoir &reservoir) {
    if (const auto *c = std::get_if<Circuit>(&reservoir)) {
        apply_circuit(state, *c);
    } else {
        apply_unitary(state, std::get<Eigen::MatrixXcd>(reservoir));
    }
}

nlohmann::json to_json(const IsingSpec &spec) {
    return {{"qubits", spec.qubits}, {"Js", spec.Js}, {"h", spec.h},
            {"T", spec.T},           {"seed", spec.seed}};
}

IsingSpec ising_spec_from_json(const nlohmann::json &doc) {
    try {
        IsingSpec spec;
        spec.qubits = doc.at("qubits").get<int>();
        spec.Js = doc.at("Js").get<double>();
        spec.h = doc.at("h").get<double>();
        spec.T = doc.at("T").get<double>();
        spec.seed = doc.at("seed").get<std::uint64_t>();
        return spec;
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorKind::InvalidParameter, std::string("malformed Ising spec: ") + e.what());
    }
}

} // namespace qconv
