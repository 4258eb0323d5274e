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
 * @file qalgebra.hpp
 * q-deformed SU(2) machinery in the spin-1/2 representation: q-numbers,
 * q-factorials, the λ → q map, λ-contracted generators, the q-exponential and
 * the simplified q-CNOT.
 *
 * None of the operators built here are executed inside circuits. U_q is not
 * unitary in general and the q-CNOT's unitarity is measured, not assumed;
 * circuits only run compiled native gates (see circuit.hpp).
 */

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qiprune/linalg.hpp"

namespace qiprune {

/// Below this |q − 1| the q-number switches to its classical limit.
inline constexpr double kQNumberLimitTol = 1e-8;

struct DeformationParams {
    double lambda = 1.0;
    double beta = 1.0;
    double q = 1.0;

    /// q = exp(β(1 − λ)).
    static DeformationParams from_lambda(double lambda, double beta) {
        if (!(lambda >= 0.0 && lambda <= 1.0)) {
            throw std::invalid_argument("DeformationParams: lambda must lie in [0, 1]");
        }
        if (!(beta > 0.0)) {
            throw std::invalid_argument("DeformationParams: beta must be positive");
        }
        return {lambda, beta, std::exp(beta * (1.0 - lambda))};
    }

    /// λ = 1 − γα, the hardware-calibrated contraction.
    static DeformationParams from_noise(double gamma, double alpha, double beta) {
        return from_lambda(1.0 - gamma * alpha, beta);
    }
};

/// [x]_q = (q^x − q^{−x}) / (q − q^{−1}); exactly x when |q − 1| < 1e−8.
inline double q_number(double x, double q) {
    if (!(q > 0.0)) {
        throw std::invalid_argument("q_number: q must be positive");
    }
    if (std::abs(q - 1.0) < kQNumberLimitTol) {
        return x;
    }
    // sinh form avoids the explicit (q - 1/q) cancellation for q near 1
    const double h = std::log(q);
    return std::sinh(x * h) / std::sinh(h);
}

inline double q_factorial(unsigned n, double q) {
    double out = 1.0;
    for (unsigned m = 1; m <= n; ++m) {
        out *= q_number(static_cast<double>(m), q);
    }
    return out;
}

struct SuqGenerators {
    ComplexMatrix t_plus;
    ComplexMatrix t_minus;
    ComplexMatrix t_3;
    bool lambda_scaled = false;

    /// T_3 = diag(1/2, −1/2), T_+ = |0><1|, T_− = |1><0|.
    static SuqGenerators spin_half() {
        return {ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}, ComplexMatrix{{0.0, 0.0}, {1.0, 0.0}},
                ComplexMatrix{{0.5, 0.0}, {0.0, -0.5}}, false};
    }

    /// T'_k = λ T_k.
    static SuqGenerators scaled(double lambda) {
        auto g = spin_half();
        g.t_plus *= lambda;
        g.t_minus *= lambda;
        g.t_3 *= lambda;
        g.lambda_scaled = true;
        return g;
    }

    [[nodiscard]] std::array<const ComplexMatrix *, 3> all() const { return {&t_plus, &t_minus, &t_3}; }
};

struct QExpResult {
    ComplexMatrix value;
    /// Index of the last series term added.
    unsigned order = 0;
};

inline constexpr unsigned kQExpMaxTerms = 200;

/// exp_q(x) = Σ x^n / [n]_q!, truncated once a term's max-entry modulus drops below `tol`.
inline QExpResult q_exp(const ComplexMatrix &x, double q, double tol = 1e-14) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("q_exp: tolerance must be positive");
    }
    if (!(q > 0.0)) {
        throw std::invalid_argument("q_exp: q must be positive");
    }
    ComplexMatrix sum = ComplexMatrix::identity(x.dim());
    ComplexMatrix term = ComplexMatrix::identity(x.dim());
    for (unsigned n = 1; n < kQExpMaxTerms; ++n) {
        term = term * x;
        term *= 1.0 / q_number(static_cast<double>(n), q);
        sum += term;
        if (term.max_abs() < tol) {
            return {std::move(sum), n};
        }
        if (!term.is_finite()) {
            break;
        }
    }
    throw std::runtime_error("q_exp: series did not reach tolerance within 200 terms");
}

struct DeformedOperator {
    ComplexMatrix matrix;
    double unitarity_deviation = 0.0;
    unsigned order = 0;
};

/// U_q(θ, λ) = exp_q(i Σ θ_k T'_k) with θ ordered (θ_+, θ_−, θ_3).
inline DeformedOperator build_Uq(const std::array<double, 3> &theta, const DeformationParams &params,
                                 double tol = 1e-14) {
    const auto gens = SuqGenerators::scaled(params.lambda);
    ComplexMatrix arg = gens.t_plus * cplx(0, theta[0]) + gens.t_minus * cplx(0, theta[1]) +
                        gens.t_3 * cplx(0, theta[2]);
    auto res = q_exp(arg, params.q, tol);
    const double dev = unitarity_deviation(res.value);
    return {std::move(res.value), dev, res.order};
}

/// max over pairs of ‖[λT_i, λT_j] − λ²[T_i, T_j]‖_max.
inline double commutator_contraction_check(const DeformationParams &params,
                                           const std::vector<std::pair<int, int>> &pairs) {
    const auto base = SuqGenerators::spin_half();
    const auto scaled = SuqGenerators::scaled(params.lambda);
    const auto b = base.all();
    const auto s = scaled.all();
    const double l2 = params.lambda * params.lambda;
    double residual = 0.0;
    for (const auto &[i, j] : pairs) {
        if (i < 0 || i > 2 || j < 0 || j > 2) {
            throw std::out_of_range("commutator_contraction_check: generator index must be 0..2");
        }
        const ComplexMatrix lhs = commutator(*s[i], *s[j]);
        const ComplexMatrix rhs = commutator(*b[i], *b[j]) * l2;
        residual = std::max(residual, (lhs - rhs).max_abs());
    }
    return residual;
}

/// All ordered pairs of the three generators.
inline std::vector<std::pair<int, int>> all_generator_pairs() {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            out.emplace_back(i, j);
        }
    }
    return out;
}

/// q^{c·T_3} for the spin-1/2 T_3.
inline ComplexMatrix q_power_t3(double q, double c) {
    return {{std::pow(q, 0.5 * c), 0.0}, {0.0, std::pow(q, -0.5 * c)}};
}

/// X_q = q^{T_3} T_+ + q^{−T_3} T_−; equals √q · X at spin 1/2.
inline ComplexMatrix x_q(double q) {
    const auto g = SuqGenerators::spin_half();
    return q_power_t3(q, 1.0) * g.t_plus + q_power_t3(q, -1.0) * g.t_minus;
}

/**
 * How P_00 / P_11 enter CNOT_q = I⊗I + (λ−1)P_00⊗I + (1−λ)P_11⊗X_q.
 *
 * two_qubit:    P_00 = |00><00|, P_11 = |11><11| as 4x4 projectors, with the
 *               tensor factor absorbed as (λ−1)P_00 + (1−λ)P_11·(I⊗X_q).
 * control_only: P_00 = |0><0|, P_11 = |1><1| on the control qubit.
 */
enum class ProjectorReading { two_qubit, control_only };

/// Measured, never asserted: neither reading is unitary for λ < 1 in general.
inline DeformedOperator build_cnot_q(const DeformationParams &params,
                                     ProjectorReading reading = ProjectorReading::two_qubit) {
    const double l = params.lambda;
    const ComplexMatrix xq = x_q(params.q);
    ComplexMatrix m = ComplexMatrix::identity(4);
    if (reading == ProjectorReading::two_qubit) {
        ComplexMatrix p00(4), p11(4);
        p00(0, 0) = 1.0;
        p11(3, 3) = 1.0;
        m += p00 * (l - 1.0);
        m += (p11 * kron(gates::I2(), xq)) * (1.0 - l);
    } else {
        const ComplexMatrix p0{{1.0, 0.0}, {0.0, 0.0}};
        const ComplexMatrix p1{{0.0, 0.0}, {0.0, 1.0}};
        m += kron(p0, gates::I2()) * (l - 1.0);
        m += kron(p1, xq) * (1.0 - l);
    }
    const double dev = unitarity_deviation(m);
    return {std::move(m), dev, 0};
}

} // namespace qiprune
