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
 * @file linalg.hpp
 * Dense complex kernel for statevectors of up to ~10 qubits.
 *
 * Bit order: qubit 0 is the most significant bit of the basis index, so on
 * n qubits the bit of qubit k inside index i is `(i >> (n - 1 - k)) & 1`.
 * X on qubit 0 of |00> therefore yields |10> = index 2.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qiprune {

using cplx = std::complex<double>;

/// Absolute tolerance used for unitarity and normalisation assertions.
inline constexpr double kUnitTol = 1e-10;

class ComplexMatrix {
  public:
    ComplexMatrix() = default;

    /// Zero matrix of the given dimension.
    explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

    /// Row-major construction; `rows` must be square.
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
        : dim_(rows.size()), data_() {
        data_.reserve(dim_ * dim_);
        for (const auto &row : rows) {
            if (row.size() != dim_) {
                throw std::invalid_argument("ComplexMatrix: rows must form a square matrix");
            }
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static ComplexMatrix identity(std::size_t dim) {
        ComplexMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    static ComplexMatrix diagonal(std::span<const cplx> diag) {
        ComplexMatrix m(diag.size());
        for (std::size_t i = 0; i < diag.size(); ++i) {
            m(i, i) = diag[i];
        }
        return m;
    }

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    cplx &operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    const cplx &operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

    [[nodiscard]] std::span<const cplx> data() const noexcept { return data_; }

    [[nodiscard]] ComplexMatrix adjoint() const {
        ComplexMatrix out(dim_);
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = 0; c < dim_; ++c) {
                out(c, r) = std::conj((*this)(r, c));
            }
        }
        return out;
    }

    ComplexMatrix &operator+=(const ComplexMatrix &o) {
        require_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) {
            data_[i] += o.data_[i];
        }
        return *this;
    }

    ComplexMatrix &operator-=(const ComplexMatrix &o) {
        require_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) {
            data_[i] -= o.data_[i];
        }
        return *this;
    }

    ComplexMatrix &operator*=(cplx s) {
        for (auto &v : data_) {
            v *= s;
        }
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
        a.require_same(b);
        const std::size_t n = a.dim_;
        ComplexMatrix out(n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t k = 0; k < n; ++k) {
                const cplx ark = a(r, k);
                if (ark == cplx{}) {
                    continue;
                }
                for (std::size_t c = 0; c < n; ++c) {
                    out(r, c) += ark * b(k, c);
                }
            }
        }
        return out;
    }

    /// Largest entry modulus, ‖M‖_max.
    [[nodiscard]] double max_abs() const {
        double m = 0.0;
        for (const auto &v : data_) {
            m = std::max(m, std::abs(v));
        }
        return m;
    }

    [[nodiscard]] bool is_finite() const {
        return std::all_of(data_.begin(), data_.end(), [](const cplx &v) {
            return std::isfinite(v.real()) && std::isfinite(v.imag());
        });
    }

    friend bool operator==(const ComplexMatrix &, const ComplexMatrix &) = default;

  private:
    void require_same(const ComplexMatrix &o) const {
        if (o.dim_ != dim_) {
            throw std::invalid_argument("ComplexMatrix: dimension mismatch (" + std::to_string(dim_) +
                                        " vs " + std::to_string(o.dim_) + ")");
        }
    }

    std::size_t dim_ = 0;
    std::vector<cplx> data_;
};

/// Kronecker product a ⊗ b; `a` acts on the more significant qubits.
inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    const std::size_t na = a.dim(), nb = b.dim();
    ComplexMatrix out(na * nb);
    for (std::size_t ar = 0; ar < na; ++ar) {
        for (std::size_t ac = 0; ac < na; ++ac) {
            const cplx s = a(ar, ac);
            if (s == cplx{}) {
                continue;
            }
            for (std::size_t br = 0; br < nb; ++br) {
                for (std::size_t bc = 0; bc < nb; ++bc) {
                    out(ar * nb + br, ac * nb + bc) = s * b(br, bc);
                }
            }
        }
    }
    return out;
}

inline ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b) { return a * b - b * a; }

/// ‖M·M† − I‖_max.
inline double unitarity_deviation(const ComplexMatrix &m) {
    return (m * m.adjoint() - ComplexMatrix::identity(m.dim())).max_abs();
}

/// ‖M − M†‖_max.
inline double hermiticity_deviation(const ComplexMatrix &m) { return (m - m.adjoint()).max_abs(); }

/**
 * Pure n-qubit state. Public factories enforce ‖ψ‖₂ = 1 within kUnitTol; the
 * gate kernel keeps whatever norm the applied operator produces.
 */
class StateVector {
  public:
    StateVector() = default;

    /// Computational basis state |index> on n qubits.
    static StateVector basis(std::size_t n_qubits, std::size_t index) {
        StateVector s(n_qubits);
        if (index >= s.amps_.size()) {
            throw std::out_of_range("StateVector::basis: index out of range");
        }
        s.amps_[index] = 1.0;
        return s;
    }

    /// Takes amplitudes that must already be unit norm.
    static StateVector from_amplitudes(std::size_t n_qubits, std::vector<cplx> amps) {
        StateVector s = from_raw(n_qubits, std::move(amps));
        if (std::abs(s.norm() - 1.0) > kUnitTol) {
            throw std::invalid_argument("StateVector: amplitudes are not unit norm");
        }
        return s;
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    static StateVector normalized(std::size_t n_qubits, std::vector<cplx> amps) {
        StateVector s = from_raw(n_qubits, std::move(amps));
        const double nrm = s.norm();
        if (!(nrm > 0.0) || !std::isfinite(nrm)) {
            throw std::invalid_argument("StateVector: cannot normalise a zero or non-finite vector");
        }
        for (auto &a : s.amps_) {
            a /= nrm;
        }
        return s;
    }

    /// Unchecked construction, used by kernels whose outputs need not be unit norm.
    static StateVector from_raw(std::size_t n_qubits, std::vector<cplx> amps) {
        if (n_qubits == 0 || n_qubits > 30) {
            throw std::invalid_argument("StateVector: qubit count must be in [1, 30]");
        }
        if (amps.size() != (std::size_t{1} << n_qubits)) {
            throw std::invalid_argument("StateVector: expected 2^n amplitudes");
        }
        StateVector s;
        s.n_qubits_ = n_qubits;
        s.amps_ = std::move(amps);
        return s;
    }

    /// Haar-like random state from normal samples.
    template <class Rng> static StateVector random(std::size_t n_qubits, Rng &rng) {
        std::normal_distribution<double> nd(0.0, 1.0);
        std::vector<cplx> amps(std::size_t{1} << n_qubits);
        for (auto &a : amps) {
            const double re = nd(rng);
            a = cplx(re, nd(rng));
        }
        return normalized(n_qubits, std::move(amps));
    }

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const noexcept { return amps_.size(); }
    [[nodiscard]] std::span<const cplx> amplitudes() const noexcept { return amps_; }
    [[nodiscard]] std::span<cplx> amplitudes() noexcept { return amps_; }
    const cplx &operator[](std::size_t i) const { return amps_[i]; }
    cplx &operator[](std::size_t i) { return amps_[i]; }

    [[nodiscard]] double norm() const {
        double s = 0.0;
        for (const auto &a : amps_) {
            s += std::norm(a);
        }
        return std::sqrt(s);
    }

    /// ⟨this|other⟩.
    [[nodiscard]] cplx inner(const StateVector &other) const {
        require_same(other);
        cplx s{};
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            s += std::conj(amps_[i]) * other.amps_[i];
        }
        return s;
    }

    void require_same(const StateVector &other) const {
        if (other.amps_.size() != amps_.size()) {
            throw std::invalid_argument("StateVector: dimension mismatch");
        }
    }

    friend bool operator==(const StateVector &, const StateVector &) = default;

  private:
    explicit StateVector(std::size_t n_qubits)
        : n_qubits_(n_qubits), amps_(std::size_t{1} << n_qubits) {}

    std::size_t n_qubits_ = 0;
    std::vector<cplx> amps_;
};

namespace detail {

inline void check_wires(std::size_t n_qubits, std::span<const std::size_t> wires, std::size_t gate_dim) {
    if (wires.empty() || wires.size() > n_qubits) {
        throw std::invalid_argument("apply_gate: invalid wire count");
    }
    if (gate_dim != (std::size_t{1} << wires.size())) {
        throw std::invalid_argument("apply_gate: gate dimension does not match 2^|wires|");
    }
    for (std::size_t i = 0; i < wires.size(); ++i) {
        if (wires[i] >= n_qubits) {
            throw std::out_of_range("apply_gate: wire index out of range");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (wires[i] == wires[j]) {
                throw std::invalid_argument("apply_gate: duplicate wire");
            }
        }
    }
}

} // namespace detail

/**
 * In-place tensor-index contraction of `gate` on `wires`. The first wire is the
 * most significant bit of the gate's local index.
 */
inline void apply_gate_inplace(std::span<cplx> amps, std::size_t n_qubits, const ComplexMatrix &gate,
                               std::span<const std::size_t> wires) {
    detail::check_wires(n_qubits, wires, gate.dim());
    const std::size_t k = wires.size();
    const std::size_t local = std::size_t{1} << k;
    std::vector<std::size_t> masks(k);
    std::size_t all = 0;
    for (std::size_t w = 0; w < k; ++w) {
        masks[w] = std::size_t{1} << (n_qubits - 1 - wires[w]);
        all |= masks[w];
    }
    // offsets[j] = global bit pattern of local index j
    std::vector<std::size_t> offsets(local, 0);
    for (std::size_t j = 0; j < local; ++j) {
        for (std::size_t w = 0; w < k; ++w) {
            if ((j >> (k - 1 - w)) & 1U) {
                offsets[j] |= masks[w];
            }
        }
    }
    std::vector<cplx> in(local), out(local);
    for (std::size_t base = 0; base < amps.size(); ++base) {
        if (base & all) {
            continue;
        }
        for (std::size_t j = 0; j < local; ++j) {
            in[j] = amps[base | offsets[j]];
        }
        for (std::size_t r = 0; r < local; ++r) {
            cplx acc{};
            for (std::size_t c = 0; c < local; ++c) {
                acc += gate(r, c) * in[c];
            }
            out[r] = acc;
        }
        for (std::size_t j = 0; j < local; ++j) {
            amps[base | offsets[j]] = out[j];
        }
    }
}

/// Single-qubit fast path.
inline void apply_1q_inplace(std::span<cplx> amps, std::size_t n_qubits, const ComplexMatrix &gate,
                             std::size_t wire) {
    if (gate.dim() != 2) {
        throw std::invalid_argument("apply_1q_inplace: expected a 2x2 gate");
    }
    if (wire >= n_qubits) {
        throw std::out_of_range("apply_1q_inplace: wire index out of range");
    }
    const std::size_t stride = std::size_t{1} << (n_qubits - 1 - wire);
    const cplx g00 = gate(0, 0), g01 = gate(0, 1), g10 = gate(1, 0), g11 = gate(1, 1);
    for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const cplx a0 = amps[i], a1 = amps[i + stride];
            amps[i] = g00 * a0 + g01 * a1;
            amps[i + stride] = g10 * a0 + g11 * a1;
        }
    }
}

inline StateVector apply_gate(const StateVector &state, const ComplexMatrix &gate,
                              std::span<const std::size_t> wires) {
    std::vector<cplx> amps(state.amplitudes().begin(), state.amplitudes().end());
    if (wires.size() == 1 && gate.dim() == 2) {
        apply_1q_inplace(amps, state.n_qubits(), gate, wires[0]);
    } else {
        apply_gate_inplace(amps, state.n_qubits(), gate, wires);
    }
    return StateVector::from_raw(state.n_qubits(), std::move(amps));
}

inline StateVector apply_gate(const StateVector &state, const ComplexMatrix &gate,
                              std::initializer_list<std::size_t> wires) {
    return apply_gate(state, gate, std::span<const std::size_t>(wires.begin(), wires.size()));
}

/// Dense matrix-vector product over the full register.
inline StateVector apply_full(const StateVector &state, const ComplexMatrix &m) {
    if (m.dim() != state.dim()) {
        throw std::invalid_argument("apply_full: dimension mismatch");
    }
    std::vector<cplx> out(state.dim());
    for (std::size_t r = 0; r < m.dim(); ++r) {
        cplx acc{};
        for (std::size_t c = 0; c < m.dim(); ++c) {
            acc += m(r, c) * state[c];
        }
        out[r] = acc;
    }
    return StateVector::from_raw(state.n_qubits(), std::move(out));
}

/// Re ⟨ψ|O|ψ⟩ for Hermitian O.
inline double expectation(const StateVector &state, const ComplexMatrix &observable) {
    return state.inner(apply_full(state, observable)).real();
}

/**
 * ‖|φ⟩⟨φ| − |ψ⟩⟨ψ|‖₁ = 2√(1 − |⟨φ|ψ⟩|²), in [0, 2]. For unit vectors
 * 1 − |⟨φ|ψ⟩|² is the squared norm of ψ − ⟨φ|ψ⟩φ, which keeps full relative
 * precision for nearly equal states where the closed form cancels.
 */
inline double pure_trace_distance(const StateVector &phi, const StateVector &psi) {
    if (phi.dim() != psi.dim()) {
        throw std::invalid_argument("pure_trace_distance: dimension mismatch");
    }
    const cplx ov = phi.inner(psi);
    double r2 = 0.0;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        r2 += std::norm(psi[i] - ov * phi[i]);
    }
    return std::min(2.0, 2.0 * std::sqrt(r2));
}

/**
 * Largest singular value via power iteration on O†O. The start vector is a
 * fixed pseudo-random draw so symmetric inputs cannot hide the top mode.
 */
inline double operator_norm(const ComplexMatrix &op, double rel_tol = 1e-10, int max_iter = 100000) {
    const std::size_t n = op.dim();
    if (n == 0) {
        throw std::invalid_argument("operator_norm: empty matrix");
    }
    const ComplexMatrix gram = op.adjoint() * op;
    std::mt19937_64 rng(0x5eedU);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<cplx> v(n), w(n);
    for (auto &x : v) {
        const double re = nd(rng);
        x = cplx(re, nd(rng));
    }
    auto normalize = [](std::vector<cplx> &x) {
        double s = 0.0;
        for (const auto &e : x) {
            s += std::norm(e);
        }
        s = std::sqrt(s);
        if (s > 0.0) {
            for (auto &e : x) {
                e /= s;
            }
        }
        return s;
    };
    normalize(v);
    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        for (std::size_t r = 0; r < n; ++r) {
            cplx acc{};
            for (std::size_t c = 0; c < n; ++c) {
                acc += gram(r, c) * v[c];
            }
            w[r] = acc;
        }
        const double next = normalize(w);
        if (next == 0.0) {
            return 0.0;
        }
        v.swap(w);
        const bool done = std::abs(next - lambda) <= rel_tol * next;
        lambda = next;
        if (done) {
            break;
        }
    }
    return std::sqrt(lambda);
}

/// Pauli matrices and a few fixed gates.
namespace gates {

inline ComplexMatrix I2() { return ComplexMatrix::identity(2); }
inline ComplexMatrix X() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix Y() { return {{0.0, cplx(0, -1)}, {cplx(0, 1), 0.0}}; }
inline ComplexMatrix Z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
inline ComplexMatrix H() {
    const double s = 1.0 / std::sqrt(2.0);
    return {{s, s}, {s, -s}};
}

inline ComplexMatrix Rz(double t) {
    return {{std::polar(1.0, -t / 2), 0.0}, {0.0, std::polar(1.0, t / 2)}};
}

inline ComplexMatrix Ry(double t) {
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    return {{c, -s}, {s, c}};
}

inline ComplexMatrix Rx(double t) {
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    return {{c, cplx(0, -s)}, {cplx(0, -s), c}};
}

/// Control is the more significant of the two wires.
inline ComplexMatrix CNOT() {
    ComplexMatrix m(4);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    m(2, 3) = 1.0;
    m(3, 2) = 1.0;
    return m;
}

/// Single-qubit operator `op` on `wire` of an n-qubit register, as a dense 2^n matrix.
inline ComplexMatrix embed(const ComplexMatrix &op, std::size_t wire, std::size_t n_qubits) {
    ComplexMatrix out = ComplexMatrix::identity(1);
    for (std::size_t k = 0; k < n_qubits; ++k) {
        out = kron(out, k == wire ? op : I2());
    }
    return out;
}

} // namespace gates

} // namespace qiprune
