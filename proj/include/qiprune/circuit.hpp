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
 * @file circuit.hpp
 * Hardware-efficient ansatz, native-gate compilation and statevector execution.
 *
 * Layout of the benchmark ansatz, per layer: for each qubit a block of
 * `pool_size` (default 5) Rot gates sampled around the block's center, then a
 * CNOT ring (i → i+1 mod n). Rot(α, β, γ) compiles to R_z(γ)·R_y(β)·R_z(α).
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qiprune/linalg.hpp"

namespace qiprune {

using Angles = std::array<double, 3>;

struct Rot {
    Angles angles{};
    std::size_t qubit = 0;
    friend bool operator==(const Rot &, const Rot &) = default;
};

struct Cnot {
    std::size_t control = 0;
    std::size_t target = 1;
    friend bool operator==(const Cnot &, const Cnot &) = default;
};

struct Gate {
    std::size_t id = 0;
    std::variant<Rot, Cnot> op;
    std::size_t layer = 0;
    std::size_t slot = 0;

    [[nodiscard]] bool is_rot() const noexcept { return std::holds_alternative<Rot>(op); }
    [[nodiscard]] const Rot &rot() const { return std::get<Rot>(op); }
    [[nodiscard]] Rot &rot() { return std::get<Rot>(op); }
    [[nodiscard]] const Cnot &cnot() const { return std::get<Cnot>(op); }

    friend bool operator==(const Gate &, const Gate &) = default;
};

struct Circuit {
    std::size_t n_qubits = 1;
    std::size_t depth = 0;
    std::vector<Gate> gates;

    [[nodiscard]] std::size_t rot_count() const {
        return static_cast<std::size_t>(std::count_if(gates.begin(), gates.end(), [](const Gate &g) { return g.is_rot(); }));
    }

    /// Gate ids equal their index; qubits in range; angles finite.
    void validate() const {
        for (std::size_t i = 0; i < gates.size(); ++i) {
            const Gate &g = gates[i];
            if (g.id != i) {
                throw std::invalid_argument("Circuit: gate ids must be 0..N-1 in execution order");
            }
            if (g.is_rot()) {
                const Rot &r = g.rot();
                if (r.qubit >= n_qubits) {
                    throw std::out_of_range("Circuit: Rot qubit out of range");
                }
                for (double a : r.angles) {
                    if (!std::isfinite(a)) {
                        throw std::invalid_argument("Circuit: non-finite Rot angle");
                    }
                }
            } else {
                const Cnot &c = g.cnot();
                if (c.control >= n_qubits || c.target >= n_qubits || c.control == c.target) {
                    throw std::invalid_argument("Circuit: invalid CNOT wires");
                }
            }
        }
    }

    friend bool operator==(const Circuit &, const Circuit &) = default;
};

/// One center per (layer, qubit) block, indexed `layer * n_qubits + qubit`.
using Centers = std::vector<Angles>;

inline constexpr std::size_t kPoolSize = 5;

inline std::size_t block_index(std::size_t layer, std::size_t qubit, std::size_t n_qubits) {
    return layer * n_qubits + qubit;
}

/// Uniform draws from [−π, π]³.
inline Centers random_centers(std::size_t n_qubits, std::size_t depth, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(-std::numbers::pi, std::numbers::pi);
    Centers c(n_qubits * depth);
    for (auto &a : c) {
        for (double &x : a) {
            x = ud(rng);
        }
    }
    return c;
}

/**
 * Each Rot angle is center + σ·z with z ~ N(0, 1). The z draws depend only on
 * `seed`, so circuits built with the same seed and different σ differ by an
 * exact rescaling of their perturbations.
 */
inline Circuit build_ansatz(std::size_t n_qubits, std::size_t depth, const Centers &centers, double sigma,
                            std::uint64_t seed, std::size_t pool_size = kPoolSize) {
    if (n_qubits == 0 || depth == 0) {
        throw std::invalid_argument("build_ansatz: n_qubits and depth must be >= 1");
    }
    if (centers.size() != n_qubits * depth) {
        throw std::invalid_argument("build_ansatz: expected one center per (layer, qubit) block");
    }
    if (!(sigma >= 0.0) || pool_size == 0) {
        throw std::invalid_argument("build_ansatz: sigma must be >= 0 and pool_size >= 1");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    Circuit c;
    c.n_qubits = n_qubits;
    c.depth = depth;
    for (std::size_t layer = 0; layer < depth; ++layer) {
        for (std::size_t q = 0; q < n_qubits; ++q) {
            const Angles &center = centers[block_index(layer, q, n_qubits)];
            for (std::size_t s = 0; s < pool_size; ++s) {
                Rot r{center, q};
                for (double &a : r.angles) {
                    a += sigma * nd(rng);
                }
                c.gates.push_back({c.gates.size(), r, layer, s});
            }
        }
        if (n_qubits >= 2) {
            for (std::size_t q = 0; q < n_qubits; ++q) {
                c.gates.push_back({c.gates.size(), Cnot{q, (q + 1) % n_qubits}, layer, q});
            }
        }
    }
    return c;
}

inline ComplexMatrix compile_rot(const Angles &a) { return gates::Rz(a[2]) * gates::Ry(a[1]) * gates::Rz(a[0]); }

inline ComplexMatrix compile_gate(const Gate &g) {
    if (g.is_rot()) {
        return compile_rot(g.rot().angles);
    }
    return gates::CNOT();
}

/// A compiled gate ready to execute.
struct CompiledOp {
    ComplexMatrix matrix;
    std::vector<std::size_t> wires;
    std::size_t gate_id = 0;
};

inline std::vector<std::size_t> gate_wires(const Gate &g) {
    if (g.is_rot()) {
        return {g.rot().qubit};
    }
    return {g.cnot().control, g.cnot().target};
}

inline std::vector<CompiledOp> compile(const Circuit &c) {
    std::vector<CompiledOp> ops;
    ops.reserve(c.gates.size());
    for (const auto &g : c.gates) {
        ops.push_back({compile_gate(g), gate_wires(g), g.id});
    }
    return ops;
}

namespace detail {

inline void apply_cnot_inplace(std::span<cplx> amps, std::size_t n_qubits, std::size_t control, std::size_t target) {
    const std::size_t cm = std::size_t{1} << (n_qubits - 1 - control);
    const std::size_t tm = std::size_t{1} << (n_qubits - 1 - target);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & cm) && !(i & tm)) {
            std::swap(amps[i], amps[i | tm]);
        }
    }
}

inline void apply_op_inplace(std::span<cplx> amps, std::size_t n_qubits, const CompiledOp &op) {
    if (op.wires.size() == 1) {
        apply_1q_inplace(amps, n_qubits, op.matrix, op.wires[0]);
    } else {
        apply_gate_inplace(amps, n_qubits, op.matrix, op.wires);
    }
}

} // namespace detail

inline StateVector run_ops(std::span<const CompiledOp> ops, const StateVector &input) {
    std::vector<cplx> amps(input.amplitudes().begin(), input.amplitudes().end());
    for (const auto &op : ops) {
        detail::apply_op_inplace(amps, input.n_qubits(), op);
    }
    return StateVector::from_raw(input.n_qubits(), std::move(amps));
}

inline void require_dims(const Circuit &c, const StateVector &s) {
    if (s.n_qubits() != c.n_qubits) {
        throw std::invalid_argument("circuit and state qubit counts differ");
    }
}

inline StateVector run(const Circuit &c, const StateVector &input) {
    require_dims(c, input);
    std::vector<cplx> amps(input.amplitudes().begin(), input.amplitudes().end());
    for (const auto &g : c.gates) {
        if (g.is_rot()) {
            apply_1q_inplace(amps, c.n_qubits, compile_rot(g.rot().angles), g.rot().qubit);
        } else {
            detail::apply_cnot_inplace(amps, c.n_qubits, g.cnot().control, g.cnot().target);
        }
    }
    return StateVector::from_raw(c.n_qubits, std::move(amps));
}

/**
 * Propagates every ensemble state through the gates strictly before each of
 * `positions` (ascending gate ids; `gates.size()` means the full circuit).
 * Returns one snapshot of the ensemble per position.
 */
inline std::vector<std::vector<StateVector>> prefix_snapshots(const Circuit &c, std::span<const StateVector> ensemble,
                                                              std::span<const std::size_t> positions) {
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (positions[i] > c.gates.size()) {
            throw std::out_of_range("prefix_states: invalid gate position " + std::to_string(positions[i]));
        }
        if (i > 0 && positions[i] < positions[i - 1]) {
            throw std::invalid_argument("prefix_snapshots: positions must be ascending");
        }
    }
    std::vector<std::vector<StateVector>> out(positions.size());
    for (const auto &s : ensemble) {
        require_dims(c, s);
    }
    std::vector<StateVector> cur(ensemble.begin(), ensemble.end());
    std::size_t next_gate = 0;
    for (std::size_t p = 0; p < positions.size(); ++p) {
        for (; next_gate < positions[p]; ++next_gate) {
            const Gate &g = c.gates[next_gate];
            const ComplexMatrix m = g.is_rot() ? compile_rot(g.rot().angles) : ComplexMatrix{};
            for (auto &s : cur) {
                if (g.is_rot()) {
                    apply_1q_inplace(s.amplitudes(), c.n_qubits, m, g.rot().qubit);
                } else {
                    detail::apply_cnot_inplace(s.amplitudes(), c.n_qubits, g.cnot().control, g.cnot().target);
                }
            }
        }
        out[p] = cur;
    }
    return out;
}

inline std::vector<StateVector> prefix_states(const Circuit &c, std::span<const StateVector> ensemble,
                                              std::size_t position) {
    const std::size_t pos[] = {position};
    return std::move(prefix_snapshots(c, ensemble, pos).front());
}

/// Dense 2^n unitary of the whole circuit, built from Kronecker products.
inline ComplexMatrix full_unitary(const Circuit &c) {
    const std::size_t n = c.n_qubits;
    ComplexMatrix u = ComplexMatrix::identity(std::size_t{1} << n);
    for (const auto &g : c.gates) {
        ComplexMatrix layer;
        if (g.is_rot()) {
            layer = gates::embed(compile_rot(g.rot().angles), g.rot().qubit, n);
        } else {
            // P0(control) ⊗ I + P1(control) ⊗ X(target)
            const ComplexMatrix p0{{1.0, 0.0}, {0.0, 0.0}};
            const ComplexMatrix p1{{0.0, 0.0}, {0.0, 1.0}};
            ComplexMatrix a = ComplexMatrix::identity(1), b = ComplexMatrix::identity(1);
            for (std::size_t k = 0; k < n; ++k) {
                const bool is_c = k == g.cnot().control, is_t = k == g.cnot().target;
                a = kron(a, is_c ? p0 : gates::I2());
                b = kron(b, is_c ? p1 : (is_t ? gates::X() : gates::I2()));
            }
            layer = a + b;
        }
        u = layer * u;
    }
    return u;
}

} // namespace qiprune
