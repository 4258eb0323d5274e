// Copyright 2026 The qiprune Authors
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

/**
 * @file gradients.hpp
 * Exact gradients of f(θ) = ⟨ψ|C(θ)† O C(θ)|ψ⟩ with respect to every Rot angle.
 *
 * Two routes: the parameter-shift rule (two extra circuit evaluations per
 * angle) and the adjoint sweep (one backward pass for all angles). Every angle
 * enters through exp(−iθG/2) with G ∈ {Y, Z}, so both are exact and agree to
 * rounding.
 */

#pragma once

#include <numbers>
#include <span>
#include <vector>

#include "qiprune/circuit.hpp"
#include "qiprune/linalg.hpp"

namespace qiprune {

struct ExpectationGradient {
    double value = 0.0;
    /// Indexed by gate id; zero for CNOTs.
    std::vector<Angles> per_gate;
};

enum class GradientMethod { adjoint, parameter_shift };

inline ExpectationGradient adjoint_gradient(const Circuit &c, const StateVector &input, const ComplexMatrix &observable) {
    require_dims(c, input);
    const std::size_t n = c.n_qubits;
    StateVector phi = run(c, input);
    StateVector lam = apply_full(phi, observable);
    ExpectationGradient out;
    out.value = phi.inner(lam).real();
    out.per_gate.assign(c.gates.size(), Angles{});

    const ComplexMatrix pauli[3] = {gates::Z(), gates::Y(), gates::Z()};
    for (std::size_t gi = c.gates.size(); gi-- > 0;) {
        const Gate &g = c.gates[gi];
        if (!g.is_rot()) {
            detail::apply_cnot_inplace(phi.amplitudes(), n, g.cnot().control, g.cnot().target);
            detail::apply_cnot_inplace(lam.amplitudes(), n, g.cnot().control, g.cnot().target);
            continue;
        }
        const Angles &a = g.rot().angles;
        const std::size_t w = g.rot().qubit;
        const ComplexMatrix elementary[3] = {gates::Rz(a[0]), gates::Ry(a[1]), gates::Rz(a[2])};
        for (int e = 2; e >= 0; --e) {
            // phi is the state right after elementary op e
            StateVector g_phi = apply_gate(phi, pauli[e], {w});
            out.per_gate[gi][static_cast<std::size_t>(e)] = lam.inner(g_phi).imag();
            const ComplexMatrix inv = elementary[e].adjoint();
            apply_1q_inplace(phi.amplitudes(), n, inv, w);
            apply_1q_inplace(lam.amplitudes(), n, inv, w);
        }
    }
    return out;
}

inline ExpectationGradient parameter_shift_gradient(const Circuit &c, const StateVector &input,
                                                    const ComplexMatrix &observable) {
    require_dims(c, input);
    ExpectationGradient out;
    out.value = expectation(run(c, input), observable);
    out.per_gate.assign(c.gates.size(), Angles{});
    Circuit shifted = c;
    constexpr double shift = std::numbers::pi / 2;
    for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
        if (!c.gates[gi].is_rot()) {
            continue;
        }
        for (std::size_t k = 0; k < 3; ++k) {
            double &angle = shifted.gates[gi].rot().angles[k];
            const double orig = angle;
            angle = orig + shift;
            const double plus = expectation(run(shifted, input), observable);
            angle = orig - shift;
            const double minus = expectation(run(shifted, input), observable);
            angle = orig;
            out.per_gate[gi][k] = 0.5 * (plus - minus);
        }
    }
    return out;
}

inline ExpectationGradient expectation_gradient(const Circuit &c, const StateVector &input,
                                                const ComplexMatrix &observable, GradientMethod method) {
    return method == GradientMethod::adjoint ? adjoint_gradient(c, input, observable)
                                             : parameter_shift_gradient(c, input, observable);
}

/// Sums per-gate gradients into one gradient per (layer, qubit) block center.
inline std::vector<Angles> block_gradients(const Circuit &c, std::span<const Angles> per_gate) {
    std::vector<Angles> out(c.n_qubits * c.depth, Angles{});
    for (const auto &g : c.gates) {
        if (!g.is_rot()) {
            continue;
        }
        auto &dst = out.at(block_index(g.layer, g.rot().qubit, c.n_qubits));
        for (std::size_t k = 0; k < 3; ++k) {
            dst[k] += per_gate[g.id][k];
        }
    }
    return out;
}

} // namespace qiprune
