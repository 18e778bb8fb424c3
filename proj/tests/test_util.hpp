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

#include <cmath>
#include <complex>
#include <numbers>
#include <span>

#include "qconv/circuit.hpp"
#include "qconv/rng.hpp"
#include "qconv/state.hpp"

namespace qconv::testing {

/// Random circuit over every supported gate kind.
inline Circuit random_circuit(int qubits, std::size_t gates, std::uint64_t seed) {
    Rng rng(seed);
    Circuit c(qubits);
    const auto q = static_cast<std::uint64_t>(qubits);
    for (std::size_t i = 0; i < gates; ++i) {
        const auto target = static_cast<int>(rng.below(q));
        switch (rng.below(qubits > 1 ? 7 : 6)) {
        case 0: c.add(Gate::h(target)); break;
        case 1: c.add(Gate::t(target)); break;
        case 2: c.add(Gate::x(target)); break;
        case 3: c.add(Gate::y(target)); break;
        case 4: c.add(Gate::z(target)); break;
        case 5: c.add(Gate::ry(target, rng.uniform(-4.0, 4.0))); break;
        default: {
            auto control = static_cast<int>(rng.below(q - 1));
            if (control >= target) {
                ++control;
            }
            c.add(Gate::cnot(control, target));
        }
        }
    }
    return c;
}

inline QuantumState random_pure_state(int qubits, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<cplx> amps(std::size_t{1} << qubits);
    double norm = 0.0;
    for (cplx &a : amps) {
        a = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        norm += std::norm(a);
    }
    for (cplx &a : amps) {
        a /= std::sqrt(norm);
    }
    return QuantumState::pure(std::move(amps));
}

inline double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

/// max_i |a_i - e^{i phi} b_i| with phi aligned on the largest entry of b.
inline double diff_up_to_phase(std::span<const cplx> a, std::span<const cplx> b) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < b.size(); ++i) {
        if (std::abs(b[i]) > std::abs(b[k])) {
            k = i;
        }
    }
    const cplx phase = std::abs(b[k]) > 0.0 ? a[k] / b[k] / std::abs(a[k] / b[k]) : 1.0;
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - phase * b[i]));
    }
    return m;
}

} // namespace qconv::testing
