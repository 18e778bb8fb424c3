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

#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "qconv/circuit.hpp"
#include "qconv/state.hpp"

namespace qconv {

/// Random circuit over the gate family {CNOT, H, T}.
struct G3Spec {
    int qubits = 2;
    std::size_t gate_count = 0;
    std::uint64_t seed = 0;
};

/// H = sum_{i<j} J_ij Z_i Z_j + h sum_i X_i with J_ij ~ U(-Js/2, Js/2),
/// evolved for time T.
struct IsingSpec {
    int qubits = 2;
    double Js = 1.0;
    double h = 0.1;
    double T = 10.0;
    std::uint64_t seed = 0;
};

/// Each gate independently: kind uniform over {CNOT, H, T}; H/T target
/// uniform; CNOT (control, target) uniform over ordered distinct pairs.
Circuit sample_g3(const G3Spec &spec);

/// J_ij for i < j in lexicographic (i, j) order.
std::vector<double> ising_couplings(const IsingSpec &spec);

/// Dense real-symmetric Hamiltonian (qubits <= 10).
Eigen::MatrixXd ising_hamiltonian(const IsingSpec &spec);

/// exp(-i H T) by Hermitian eigendecomposition. T == 0 gives the identity and
/// a diagonal H (h == 0) is exponentiated elementwise.
Eigen::MatrixXcd ising_unitary(const IsingSpec &spec);

using Reservoir = std::variant<Circuit, Eigen::MatrixXcd>;

int reservoir_qubits(const Reservoir &reservoir);

/// |psi> <- U|psi> or rho <- U rho U^dagger. Throws on dimension mismatch.
void apply_reservoir(QuantumState &state, const Reservoir &reservoir);

nlohmann::json to_json(const IsingSpec &spec);
IsingSpec ising_spec_from_json(const nlohmann::json &doc);

} // namespace qconv
