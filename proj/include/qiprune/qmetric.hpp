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
 * @file qmetric.hpp
 * Task-conditioned q-overlap geometry.
 *
 * The weight operator G_q is diagonal in the computational basis with
 * g_i ∝ q^{w(i) − n}, w(i) the Hamming weight of i, rescaled so that
 * M_q = max g_i = 1. At q = 1 it is the identity and every quantity below
 * reduces to the standard Hilbert-space one.
 *
 * d_q is a similarity measure, not a metric: with q ≠ 1 it is generally
 * asymmetric in (U, V) and violates the triangle inequality.
 */

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qiprune/linalg.hpp"
#include "qiprune/qalgebra.hpp"

namespace qiprune {

struct QGeometry {
    double q = 1.0;
    std::vector<double> g_diag;
    double m_q = 1.0;
    double M_q = 1.0;

    [[nodiscard]] std::size_t dim() const noexcept { return g_diag.size(); }
};

inline QGeometry build_geometry(std::size_t n_qubits, double q) {
    if (!(q > 0.0)) {
        throw std::invalid_argument("build_geometry: q must be positive");
    }
    if (n_qubits == 0 || n_qubits > 30) {
        throw std::invalid_argument("build_geometry: qubit count must be in [1, 30]");
    }
    QGeometry geo;
    geo.q = q;
    const std::size_t dim = std::size_t{1} << n_qubits;
    geo.g_diag.resize(dim);
    if (q == 1.0) {
        std::fill(geo.g_diag.begin(), geo.g_diag.end(), 1.0);
    } else {
        const double n = static_cast<double>(n_qubits);
        for (std::size_t i = 0; i < dim; ++i) {
            geo.g_diag[i] = std::pow(q, static_cast<double>(std::popcount(i)) - n);
        }
        const double top = *std::max_element(geo.g_diag.begin(), geo.g_diag.end());
        for (auto &g : geo.g_diag) {
            g /= top;
        }
    }
    const auto [lo, hi] = std::minmax_element(geo.g_diag.begin(), geo.g_diag.end());
    geo.m_q = *lo;
    geo.M_q = *hi;
    return geo;
}

/// ⟨φ|ψ⟩_q = Σ_i conj(φ_i) g_i ψ_i, accumulated in ascending index order.
inline cplx q_inner(std::span<const cplx> phi, std::span<const cplx> psi, const QGeometry &geo) {
    if (phi.size() != psi.size() || phi.size() != geo.dim()) {
        throw std::invalid_argument("q_inner: dimension mismatch");
    }
    cplx s{};
    for (std::size_t i = 0; i < phi.size(); ++i) {
        s += std::conj(phi[i]) * geo.g_diag[i] * psi[i];
    }
    return s;
}

inline cplx q_inner(const StateVector &phi, const StateVector &psi, const QGeometry &geo) {
    return q_inner(phi.amplitudes(), psi.amplitudes(), geo);
}

/// arccos(|⟨ψ|W ψ⟩_q| / ‖ψ‖_q²) with the ratio clamped to [0, 1].
inline double q_overlap_angle(const StateVector &psi, const StateVector &w_psi, const QGeometry &geo) {
    const double denom = q_inner(psi, psi, geo).real();
    const double ratio = std::clamp(std::abs(q_inner(psi, w_psi, geo)) / denom, 0.0, 1.0);
    return std::acos(ratio);
}

/**
 * Per-state angles arccos(|⟨ψ_k|U†V|ψ_k⟩_q| / ‖ψ_k‖_q²) for U, V acting on
 * `wires` (all qubits when `wires` is empty).
 */
inline std::vector<double> dq_per_state(const ComplexMatrix &u, const ComplexMatrix &v,
                                        std::span<const StateVector> ensemble, const QGeometry &geo,
                                        std::span<const std::size_t> wires = {}) {
    if (ensemble.empty()) {
        throw std::invalid_argument("d_q: empty ensemble");
    }
    if (u.dim() != v.dim()) {
        throw std::invalid_argument("d_q: U and V dimensions differ");
    }
    const ComplexMatrix w = u.adjoint() * v;
    std::vector<std::size_t> all;
    if (wires.empty()) {
        const std::size_t n = ensemble.front().n_qubits();
        for (std::size_t k = 0; k < n; ++k) {
            all.push_back(k);
        }
        wires = all;
    }
    std::vector<double> out;
    out.reserve(ensemble.size());
    for (const auto &psi : ensemble) {
        if (psi.dim() != geo.dim()) {
            throw std::invalid_argument("d_q: geometry and ensemble dimensions differ");
        }
        out.push_back(q_overlap_angle(psi, apply_gate(psi, w, wires), geo));
    }
    return out;
}

inline double mean(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) {
        s += x;
    }
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

/// Ensemble-mean q-overlap distance.
inline double d_q(const ComplexMatrix &u, const ComplexMatrix &v, std::span<const StateVector> ensemble,
                  const QGeometry &geo, std::span<const std::size_t> wires = {}) {
    const auto per = dq_per_state(u, v, ensemble, geo, wires);
    return mean(per);
}

enum class EpsilonRule { arcsin_rule, half_delta_rule };

inline std::string_view to_string(EpsilonRule r) {
    return r == EpsilonRule::arcsin_rule ? "arcsin" : "half_delta";
}

inline EpsilonRule epsilon_rule_from_string(std::string_view s) {
    if (s == "arcsin" || s == "arcsin_rule") {
        return EpsilonRule::arcsin_rule;
    }
    if (s == "half_delta" || s == "half_delta_rule") {
        return EpsilonRule::half_delta_rule;
    }
    throw std::invalid_argument("unknown epsilon rule '" + std::string(s) + "'");
}

struct Tolerance {
    double delta = 0.01;
    double epsilon_q = 0.005;
    EpsilonRule rule = EpsilonRule::half_delta_rule;
};

/// arcsin_rule: ε_q = arcsin(δ M_q / 2); half_delta_rule: ε_q = δ / 2.
inline Tolerance calibrate_epsilon(double delta, const QGeometry &geo, EpsilonRule rule) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("calibrate_epsilon: delta must lie in (0, 1)");
    }
    if (rule == EpsilonRule::half_delta_rule) {
        return {delta, delta / 2.0, rule};
    }
    const double arg = delta * geo.M_q / 2.0;
    if (arg > 1.0) {
        throw std::domain_error("calibrate_epsilon: arcsin rule requires delta * M_q <= 2");
    }
    return {delta, std::asin(arg), rule};
}

struct DriftBound {
    double raw = 0.0;
    double clipped = 0.0;
};

/// raw = ‖O‖_op · (2L / M_q) · sin(ε_q), clipped = min(1, raw).
inline DriftBound drift_rhs(std::size_t replaced, double epsilon_q, double M_q, double op_norm = 1.0) {
    const double raw = op_norm * (2.0 * static_cast<double>(replaced) / M_q) * std::sin(epsilon_q);
    return {raw, std::min(1.0, raw)};
}

/// 2√(max(0, 1 − cos²(ε)/M_q²)).
inline double statewise_deviation_bound(double epsilon, double M_q) {
    const double c = std::cos(epsilon) / M_q;
    return 2.0 * std::sqrt(std::max(0.0, 1.0 - c * c));
}

/// (Σ_t (θ_t^(i) − θ_t^(j))² [t]_q)^{1/2}, t = 1..d.
inline double q_weighted_param_norm(std::span<const double> theta_i, std::span<const double> theta_j, double q) {
    if (theta_i.size() != theta_j.size()) {
        throw std::invalid_argument("q_weighted_param_norm: length mismatch");
    }
    double s = 0.0;
    for (std::size_t t = 0; t < theta_i.size(); ++t) {
        const double d = theta_i[t] - theta_j[t];
        s += d * d * q_number(static_cast<double>(t + 1), q);
    }
    return std::sqrt(s);
}

} // namespace qiprune
