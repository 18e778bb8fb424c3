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
 * Dense pure-state and density-matrix simulation.
 *
 * A density matrix over q qubits is stored row-major as a vector of 4^q
 * entries, element (r, c) at (r << q) | c. Conjugation rho -> U rho U^dagger
 * is then U acting on "virtual" qubit t + q and conj(U) on virtual qubit t
 * of that vector, so pure and density paths share the same kernels.
 */

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qconv/circuit.hpp"

namespace qconv {

/// Probabilities (or normalized frequencies) over the 2^q basis states.
using CountsVector = std::vector<double>;
/// Integer shot counts over the 2^q basis states.
using ShotCounts = std::vector<std::uint64_t>;

enum class Representation { Pure, Density };

/// Row-major 4x4 matrix acting on a pair of qubits; local index is
/// (bit of `high`) << 1 | (bit of `low`).
using Mat4 = std::array<cplx, 16>;

namespace kernels {

void apply_1q(std::span<cplx> amps, int target, const Mat2 &m);
void apply_x(std::span<cplx> amps, int target);
/// diag(1, phase) on target.
void apply_phase(std::span<cplx> amps, int target, cplx phase);
void apply_cnot(std::span<cplx> amps, int control, int target);
void apply_2q(std::span<cplx> amps, int high, int low, const Mat4 &m);

} // namespace kernels

class QuantumState {
public:
    /// Basis state |index> over `qubits` qubits.
    static QuantumState basis(int qubits, Representation rep,
                              std::size_t index = 0);
    /// Pure state from 2^q amplitudes; throws unless normalized within 1e-10.
    static QuantumState pure(std::vector<cplx> amplitudes);
    /// Density matrix from a row-major 2^q x 2^q matrix. Only the shape is
    /// checked; use check_density for the physical invariants.
    static QuantumState density(int qubits, std::vector<cplx> elements);

    int qubits() const noexcept { return qubits_; }
    std::size_t dim() const noexcept { return std::size_t{1} << qubits_; }
    Representation representation() const noexcept { return rep_; }
    bool is_pure() const noexcept { return rep_ == Representation::Pure; }

    /// Amplitudes (pure) or row-major matrix elements (density).
    std::span<const cplx> data() const noexcept { return data_; }
    std::span<cplx> data() noexcept { return data_; }

    cplx amplitude(std::size_t i) const;
    cplx element(std::size_t row, std::size_t col) const;

    /// |psi><psi| for a pure state, a copy for a density matrix.
    QuantumState to_density() const;

    void apply(const Gate &gate);

    /// Sum |a_i|^2 (pure) or Re tr(rho) (density).
    double trace() const;

    friend bool operator==(const QuantumState &, const QuantumState &) = default;

private:
    QuantumState(int qubits, Representation rep, std::vector<cplx> data)
        : qubits_(qubits), rep_(rep), data_(std::move(data)) {}

    int qubits_ = 0;
    Representation rep_ = Representation::Pure;
    std::vector<cplx> data_;
};

struct DensityReport {
    double trace_error = 0.0;       // |tr(rho) - 1|
    double hermitian_error = 0.0;   // max |rho - rho^dagger|
    double min_eigenvalue = 0.0;
};

/// Physical-invariant diagnostics for a density matrix (eigenvalues via Eigen).
DensityReport check_density(const QuantumState &rho);

/// Applies every gate in order, in place. Throws on qubit-count mismatch.
void apply_circuit(QuantumState &state, const Circuit &circuit);
QuantumState apply_circuit(const QuantumState &state, const Circuit &circuit);

/// Computational-basis probabilities. Density diagonals in [-1e-10, 0) are
/// clipped to zero.
CountsVector measure_probs(const QuantumState &state);

/// Multinomial draw of `shots` outcomes, by inverse CDF per shot.
ShotCounts sample_counts(std::span<const double> probs, std::uint64_t shots,
                         std::uint64_t seed);

/// Dense unitary of a circuit over at most 6 qubits (a test oracle).
Eigen::MatrixXcd circuit_unitary(const Circuit &circuit);

/// |psi> <- U |psi> or rho <- U rho U^dagger for a dense unitary.
void apply_unitary(QuantumState &state, const Eigen::MatrixXcd &unitary);

} // namespace qconv
