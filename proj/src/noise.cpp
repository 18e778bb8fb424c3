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
#include <string>

#include "qconv/error.hpp"

namespace qconv {

Channel parse_channel(std::string_view name) {
    if (name == "depolarizing") return Channel::Depolarizing;
    if (name == "amplitude-damping" || name == "amplitude_damping")
        return Channel::AmplitudeDamping;
    if (name == "phase-damping" || name == "phase_damping") return Channel::PhaseDamping;
    fail(ErrorKind::InvalidParameter, "unknown noise channel '" + std::string(name) + "'");
}

std::string_view to_string(Channel channel) noexcept {
    switch (channel) {
    case Channel::Depolarizing: return "depolarizing";
    case Channel::AmplitudeDamping: return "amplitude-damping";
    case Channel::PhaseDamping: return "phase-damping";
    }
    return "unknown";
}

void NoiseSpec::validate() const {
    require(std::isfinite(p) && p >= 0.0 && p <= 1.0,
            "noise probability must lie in [0, 1]");
}

std::vector<Mat2> kraus_ops(const NoiseSpec &spec) {
    using namespace std::complex_literals;
    spec.validate();
    const double p = spec.p;
    if (p == 0.0) {
        return {Mat2{1.0, 0.0, 0.0, 1.0}};
    }
    switch (spec.channel) {
    case Channel::Depolarizing: {
        const double a = std::sqrt(1.0 - 3.0 * kDepolarizingPauliShare * p);
        const double b = std::sqrt(kDepolarizingPauliShare * p);
        return {Mat2{a, 0.0, 0.0, a}, Mat2{0.0, b, b, 0.0},
                Mat2{0.0, -1i * b, 1i * b, 0.0}, Mat2{b, 0.0, 0.0, -b}};
    }
    case Channel::AmplitudeDamping:
        return {Mat2{1.0, 0.0, 0.0, std::sqrt(1.0 - p)},
                Mat2{0.0, std::sqrt(p), 0.0, 0.0}};
    case Channel::PhaseDamping:
        return {Mat2{1.0, 0.0, 0.0, std::sqrt(1.0 - p)},
                Mat2{0.0, 0.0, 0.0, std::sqrt(p)}};
    }
    fail(ErrorKind::InvalidParameter, "unknown noise channel");
}

Mat4 channel_superoperator(const NoiseSpec &spec) {
    Mat4 s{};
    for (const Mat2 &k : kraus_ops(spec)) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                for (int c = 0; c < 2; ++c) {
                    for (int d = 0; d < 2; ++d) {
                        s[4 * (2 * a + b) + (2 * c + d)] +=
                            k[2 * a + c] * std::conj(k[2 * b + d]);
                    }
                }
            }
        }
    }
    return s;
}

namespace {

void apply_superoperator(QuantumState &rho, int qubit, const Mat4 &s) {
    kernels::apply_2q(rho.data(), qubit + rho.qubits(), qubit, s);
}

} // namespace

Mat4 conjugation_superoperator(const Mat2 &u) {
    Mat4 s{};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            for (int c = 0; c < 2; ++c) {
                for (int d = 0; d < 2; ++d) {
                    s[4 * (2 * a + b) + (2 * c + d)] = u[2 * a + c] * std::conj(u[2 * b + d]);
                }
            }
        }
    }
    return s;
}

Mat4 compose(const Mat4 &after, const Mat4 &before) {
    Mat4 out{};
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            for (int k = 0; k < 4; ++k) {
                out[4 * r + c] += after[4 * r + k] * before[4 * k + c];
            }
        }
    }
    return out;
}

void apply_channel(QuantumState &rho, int qubit, const NoiseSpec &spec) {
    if (rho.is_pure()) {
        fail(ErrorKind::InvalidRepresentation, "noise channels need a density matrix");
    }
    require(qubit >= 0 && qubit < rho.qubits(), "channel qubit out of range");
    apply_superoperator(rho, qubit, channel_superoperator(spec));
}

QuantumState run_noisy_state(const Circuit &circuit, const NoiseSpec &spec,
                             const QuantumState &initial,
                             const StepObserver &observer) {
    if (circuit.qubits() > 10) {
        fail(ErrorKind::ResourceLimit, "noisy simulation limited to 10 qubits");
    }
    require(initial.qubits() == circuit.qubits(),
            "initial state does not match circuit width");
    const Mat4 noise = channel_superoperator(spec);
    const bool noiseless = spec.p == 0.0;
    const int q = circuit.qubits();
    QuantumState rho = initial.to_density();
    for (std::size_t step = 0; step < circuit.size(); ++step) {
        const Gate &g = circuit.gates()[step];
        if (noiseless) {
            rho.apply(g);
        } else if (g.is_two_qubit()) {
            rho.apply(g);
            apply_superoperator(rho, g.target, noise);
            apply_superoperator(rho, g.control, noise);
        } else {
            // Gate and channel fused into one pass over the (row, col) bit pair.
            const Mat4 fused =
                compose(noise, conjugation_superoperator(single_qubit_matrix(g)));
            kernels::apply_2q(rho.data(), g.target + q, g.target, fused);
        }
        if (observer) {
            observer(step, rho);
        }
    }
    return rho;
}

CountsVector run_noisy(const Circuit &circuit, const NoiseSpec &spec,
                       const QuantumState &initial) {
    return measure_probs(run_noisy_state(circuit, spec, initial));
}

} // namespace qconv
