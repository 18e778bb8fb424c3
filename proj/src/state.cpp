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

#include "qconv/state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "qconv/error.hpp"
#include "qconv/rng.hpp"

namespace qconv {

namespace kernels {

void apply_1q(std::span<cplx> amps, int target, const Mat2 &m) {
    const std::size_t stride = std::size_t{1} << target;
    const std::size_t n = amps.size();
    for (std::size_t i0 = 0; i0 < n; i0 += 2 * stride) {
        for (std::size_t j = i0; j < i0 + stride; ++j) {
            const cplx a = amps[j];
            const cplx b = amps[j + stride];
            amps[j] = m[0] * a + m[1] * b;
            amps[j + stride] = m[2] * a + m[3] * b;
        }
    }
}

void apply_x(std::span<cplx> amps, int target) {
    const std::size_t stride = std::size_t{1} << target;
    const std::size_t n = amps.size();
    for (std::size_t i0 = 0; i0 < n; i0 += 2 * stride) {
        std::swap_ranges(amps.begin() + static_cast<std::ptrdiff_t>(i0),
                         amps.begin() + static_cast<std::ptrdiff_t>(i0 + stride),
                         amps.begin() + static_cast<std::ptrdiff_t>(i0 + stride));
    }
}

void apply_phase(std::span<cplx> amps, int target, cplx phase) {
    const std::size_t stride = std::size_t{1} << target;
    const std::size_t n = amps.size();
    for (std::size_t i0 = stride; i0 < n; i0 += 2 * stride) {
        for (std::size_t j = i0; j < i0 + stride; ++j) {
            amps[j] *= phase;
        }
    }
}

void apply_cnot(std::span<cplx> amps, int control, int target) {
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    const int low = std::min(control, target);
    const int high = std::max(control, target);
    const std::size_t lo_mask = (std::size_t{1} << low) - 1;
    const std::size_t mid_mask = (std::size_t{1} << high) - 1;
    const std::size_t quarter = amps.size() / 4;
    for (std::size_t k = 0; k < quarter; ++k) {
        std::size_t i = ((k & ~lo_mask) << 1) | (k & lo_mask);
        i = ((i & ~mid_mask) << 1) | (i & mid_mask);
        std::swap(amps[i | cbit], amps[i | cbit | tbit]);
    }
}

void apply_2q(std::span<cplx> amps, int high, int low, const Mat4 &m) {
    const std::size_t hbit = std::size_t{1} << high;
    const std::size_t lbit = std::size_t{1} << low;
    const std::size_t lo_mask = lbit - 1;
    const std::size_t mid_mask = hbit - 1;
    const std::size_t quarter = amps.size() / 4;
    double mr[16];
    double mi[16];
    for (int e = 0; e < 16; ++e) {
        mr[e] = m[e].real();
        mi[e] = m[e].imag();
    }
    for (std::size_t k = 0; k < quarter; ++k) {
        // Insert zero bits at positions `low` then `high`.
        std::size_t i = ((k & ~lo_mask) << 1) | (k & lo_mask);
        i = ((i & ~mid_mask) << 1) | (i & mid_mask);
        const std::size_t idx[4] = {i, i | lbit, i | hbit, i | hbit | lbit};
        double vr[4];
        double vi[4];
        for (int c = 0; c < 4; ++c) {
            vr[c] = amps[idx[c]].real();
            vi[c] = amps[idx[c]].imag();
        }
        for (int r = 0; r < 4; ++r) {
            double re = 0.0;
            double im = 0.0;
            for (int c = 0; c < 4; ++c) {
                re += mr[4 * r + c] * vr[c] - mi[4 * r + c] * vi[c];
                im += mr[4 * r + c] * vi[c] + mi[4 * r + c] * vr[c];
            }
            amps[idx[r]] = cplx(re, im);
        }
    }
}

} // namespace kernels

namespace {

void apply_single(std::span<cplx> amps, const Gate &gate, int virtual_target,
                  bool conjugate) {
    static const cplx t_phase = std::polar(1.0, std::numbers::pi / 4.0);
    switch (gate.kind) {
    case GateKind::X:
        kernels::apply_x(amps, virtual_target);
        return;
    case GateKind::Z:
        kernels::apply_phase(amps, virtual_target, -1.0);
        return;
    case GateKind::T:
        kernels::apply_phase(amps, virtual_target,
                             conjugate ? std::conj(t_phase) : t_phase);
        return;
    default: {
        Mat2 m = single_qubit_matrix(gate);
        if (conjugate) {
            for (cplx &e : m) {
                e = std::conj(e);
            }
        }
        kernels::apply_1q(amps, virtual_target, m);
        return;
    }
    }
}

using RowMajorMatrix =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

} // namespace

QuantumState QuantumState::basis(int qubits, Representation rep,
                                 std::size_t index) {
    require(qubits >= 1 && qubits <= 14, "qubit count out of supported range");
    const std::size_t dim = std::size_t{1} << qubits;
    require(index < dim, "basis index out of range");
    if (rep == Representation::Pure) {
        std::vector<cplx> amps(dim);
        amps[index] = 1.0;
        return {qubits, rep, std::move(amps)};
    }
    require(qubits <= 12, "density matrix limited to 12 qubits");
    std::vector<cplx> rho(dim * dim);
    rho[index * dim + index] = 1.0;
    return {qubits, rep, std::move(rho)};
}

QuantumState QuantumState::pure(std::vector<cplx> amplitudes) {
    const std::size_t n = amplitudes.size();
    require(n >= 2 && std::has_single_bit(n), "amplitude count must be a power of two >= 2");
    double norm = 0.0;
    for (const cplx &a : amplitudes) {
        norm += std::norm(a);
    }
    require(std::abs(norm - 1.0) <= 1e-10, "pure state is not normalized");
    return {std::countr_zero(n), Representation::Pure, std::move(amplitudes)};
}

QuantumState QuantumState::density(int qubits, std::vector<cplx> elements) {
    require(qubits >= 1 && qubits <= 12, "density matrix limited to 12 qubits");
    const std::size_t dim = std::size_t{1} << qubits;
    require(elements.size() == dim * dim, "density matrix has wrong size");
    return {qubits, Representation::Density, std::move(elements)};
}

cplx QuantumState::amplitude(std::size_t i) const {
    if (!is_pure()) {
        fail(ErrorKind::InvalidRepresentation, "amplitude() needs a pure state");
    }
    return data_.at(i);
}

cplx QuantumState::element(std::size_t row, std::size_t col) const {
    if (is_pure()) {
        return data_.at(row) * std::conj(data_.at(col));
    }
    require(row < dim() && col < dim(), "density index out of range");
    return data_[(row << qubits_) | col];
}

QuantumState QuantumState::to_density() const {
    if (!is_pure()) {
        return *this;
    }
    require(qubits_ <= 12, "density matrix limited to 12 qubits");
    const std::size_t n = dim();
    std::vector<cplx> rho(n * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            rho[r * n + c] = data_[r] * std::conj(data_[c]);
        }
    }
    return {qubits_, Representation::Density, std::move(rho)};
}

void QuantumState::apply(const Gate &gate) {
    require(gate.target < qubits_ && gate.control < qubits_,
            "gate acts outside the state");
    const int shift = is_pure() ? 0 : qubits_;
    if (gate.kind == GateKind::CNOT) {
        kernels::apply_cnot(data_, gate.control + shift, gate.target + shift);
        if (!is_pure()) {
            kernels::apply_cnot(data_, gate.control, gate.target);
        }
        return;
    }
    apply_single(data_, gate, gate.target + shift, false);
    if (!is_pure()) {
        apply_single(data_, gate, gate.target, true);
    }
}

double QuantumState::trace() const {
    double total = 0.0;
    if (is_pure()) {
        for (const cplx &a : data_) {
            total += std::norm(a);
        }
        return total;
    }
    for (std::size_t i = 0; i < dim(); ++i) {
        total += data_[(i << qubits_) | i].real();
    }
    return total;
}

DensityReport check_density(const QuantumState &rho) {
    if (rho.is_pure()) {
        fail(ErrorKind::InvalidRepresentation, "check_density needs a density matrix");
    }
    const auto n = static_cast<Eigen::Index>(rho.dim());
    Eigen::Map<const RowMajorMatrix> m(rho.data().data(), n, n);
    DensityReport report;
    report.trace_error = std::abs(m.trace().real() - 1.0);
    report.hermitian_error = (m - m.adjoint()).cwiseAbs().maxCoeff();
    const Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    report.min_eigenvalue = solver.eigenvalues().minCoeff();
    return report;
}

void apply_circuit(QuantumState &state, const Circuit &circuit) {
    if (circuit.qubits() != state.qubits()) {
        fail(ErrorKind::InvalidParameter,
             "circuit has " + std::to_string(circuit.qubits()) +
                 " qubits but state has " + std::to_string(state.qubits()));
    }
    for (const Gate &g : circuit.gates()) {
        state.apply(g);
    }
}

QuantumState apply_circuit(const QuantumState &state, const Circuit &circuit) {
    QuantumState out = state;
    apply_circuit(out, circuit);
    return out;
}

CountsVector measure_probs(const QuantumState &state) {
    CountsVector probs(state.dim());
    if (state.is_pure()) {
        for (std::size_t i = 0; i < probs.size(); ++i) {
            probs[i] = std::norm(state.data()[i]);
        }
        return probs;
    }
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double p = state.element(i, i).real();
        probs[i] = (p < 0.0 && p >= -1e-10) ? 0.0 : p;
    }
    return probs;
}

ShotCounts sample_counts(std::span<const double> probs, std::uint64_t shots,
                         std::uint64_t seed) {
    require(!probs.empty(), "empty probability vector");
    require(shots >= 1, "shots must be >= 1");
    std::vector<double> cdf(probs.size());
    double running = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        require(probs[i] >= 0.0 && std::isfinite(probs[i]),
                "probabilities must be finite and nonnegative");
        running += probs[i];
        cdf[i] = running;
    }
    require(std::abs(running - 1.0) <= 1e-9, "probabilities must sum to 1");

    ShotCounts counts(probs.size(), 0);
    Rng rng(seed);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform() * running;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        // Never land on a zero-probability tail entry.
        auto idx = static_cast<std::size_t>(std::distance(cdf.begin(), it));
        if (idx >= probs.size()) {
            idx = probs.size() - 1;
        }
        while (probs[idx] == 0.0 && idx > 0) {
            --idx;
        }
        ++counts[idx];
    }
    return counts;
}

Eigen::MatrixXcd circuit_unitary(const Circuit &circuit) {
    if (circuit.qubits() > 6) {
        fail(ErrorKind::ResourceLimit, "circuit_unitary is limited to 6 qubits");
    }
    const auto dim = std::size_t{1} << circuit.qubits();
    Eigen::MatrixXcd u(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        QuantumState s = QuantumState::basis(circuit.qubits(), Representation::Pure, col);
        apply_circuit(s, circuit);
        for (std::size_t row = 0; row < dim; ++row) {
            u(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = s.data()[row];
        }
    }
    return u;
}

void apply_unitary(QuantumState &state, const Eigen::MatrixXcd &unitary) {
    const auto n = static_cast<Eigen::Index>(state.dim());
    if (unitary.rows() != n || unitary.cols() != n) {
        fail(ErrorKind::InvalidParameter, "unitary dimension does not match state");
    }
    if (state.is_pure()) {
        Eigen::Map<Eigen::VectorXcd> psi(state.data().data(), n);
        const Eigen::VectorXcd out = unitary * psi;
        psi = out;
        return;
    }
    Eigen::Map<RowMajorMatrix> rho(state.data().data(), n, n);
    const RowMajorMatrix out = unitary * rho * unitary.adjoint();
    rho = out;
}

} // namespace qconv
