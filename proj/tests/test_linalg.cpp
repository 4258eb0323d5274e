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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "qiprune/linalg.hpp"
#include "support/oracles.hpp"

namespace qiprune {
namespace {

using testing::max_abs_diff;

TEST(StateVector, BasisAndNormalisation) {
    const auto s = StateVector::basis(2, 2);
    EXPECT_EQ(s.dim(), 4u);
    EXPECT_EQ(s[2], cplx(1.0));
    EXPECT_THROW(StateVector::basis(2, 4), std::out_of_range);
    EXPECT_THROW(StateVector::from_amplitudes(1, {1.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(StateVector::from_amplitudes(2, {1.0, 0.0}), std::invalid_argument);
    const auto u = StateVector::normalized(2, {1.0, 1.0, 1.0, 1.0});
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(u[i].real(), 0.5, 1e-15);
    }
    EXPECT_THROW(StateVector::normalized(1, {0.0, 0.0}), std::invalid_argument);
}

TEST(ApplyGate, IdentityLeavesStateUnchanged) {
    std::mt19937_64 rng(1);
    const auto psi = StateVector::random(3, rng);
    for (std::size_t w = 0; w < 3; ++w) {
        EXPECT_EQ(max_abs_diff(apply_gate(psi, gates::I2(), {w}), psi), 0.0);
    }
}

TEST(ApplyGate, QubitZeroIsMostSignificant) {
    const auto out = apply_gate(StateVector::basis(2, 0), gates::X(), {0});
    EXPECT_EQ(max_abs_diff(out, StateVector::basis(2, 0b10)), 0.0);
}

TEST(ApplyGate, HadamardMakesPlusState) {
    const auto out = apply_gate(StateVector::basis(1, 0), gates::H(), {0});
    EXPECT_NEAR(out[0].real(), 1.0 / std::numbers::sqrt2, 1e-15);
    EXPECT_NEAR(out[1].real(), 1.0 / std::numbers::sqrt2, 1e-15);
    EXPECT_NEAR(out.norm(), 1.0, 1e-15);
}

TEST(ApplyGate, CnotTruthTable) {
    const auto out = apply_gate(StateVector::basis(2, 0b10), gates::CNOT(), {0, 1});
    EXPECT_EQ(max_abs_diff(out, StateVector::basis(2, 0b11)), 0.0);
    // reversed wires: qubit 1 controls qubit 0
    const auto rev = apply_gate(StateVector::basis(2, 0b01), gates::CNOT(), {1, 0});
    EXPECT_EQ(max_abs_diff(rev, StateVector::basis(2, 0b11)), 0.0);
}

TEST(ApplyGate, MatchesKroneckerEmbedding) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(t % 4);
        const auto psi = StateVector::random(n, rng);
        const ComplexMatrix g = testing::random_matrix(2, rng);
        const std::size_t w = static_cast<std::size_t>(t) % n;
        EXPECT_LT(max_abs_diff(apply_gate(psi, g, {w}), apply_full(psi, gates::embed(g, w, n))), 1e-12);
    }
}

TEST(ApplyGate, TwoQubitGateOnNonAdjacentWires) {
    std::mt19937_64 rng(3);
    const auto psi = StateVector::random(3, rng);
    const ComplexMatrix g = testing::random_matrix(4, rng);
    // g on (0, 2) equals SWAP(1,2)·(g ⊗ I)·SWAP(1,2)
    const ComplexMatrix swap12 = kron(gates::I2(), ComplexMatrix{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}});
    const ComplexMatrix full = swap12 * kron(g, gates::I2()) * swap12;
    EXPECT_LT(max_abs_diff(apply_gate(psi, g, {0, 2}), apply_full(psi, full)), 1e-12);
}

TEST(ApplyGate, RejectsBadWires) {
    const auto psi = StateVector::basis(2, 0);
    EXPECT_THROW(apply_gate(psi, gates::X(), {2}), std::out_of_range);
    EXPECT_THROW(apply_gate(psi, gates::CNOT(), {0, 0}), std::invalid_argument);
    EXPECT_THROW(apply_gate(psi, gates::CNOT(), {0}), std::invalid_argument);
}

TEST(TraceDistance, ClosedFormExamples) {
    const auto zero = StateVector::basis(1, 0), one = StateVector::basis(1, 1);
    const auto plus = StateVector::normalized(1, {1.0, 1.0});
    EXPECT_LT(pure_trace_distance(plus, plus), 1e-15);
    EXPECT_EQ(pure_trace_distance(zero, zero), 0.0);
    EXPECT_NEAR(pure_trace_distance(zero, one), 2.0, 1e-15);
    EXPECT_NEAR(pure_trace_distance(zero, plus), std::sqrt(2.0), 1e-15);
}

TEST(TraceDistance, MatchesSpectralOracle) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 30; ++t) {
        const auto a = StateVector::random(3, rng), b = StateVector::random(3, rng);
        EXPECT_NEAR(pure_trace_distance(a, b), testing::trace_norm_oracle(a, b), 1e-10);
    }
}

TEST(OperatorNorm, Examples) {
    EXPECT_NEAR(operator_norm(ComplexMatrix::identity(8)), 1.0, 1e-12);
    EXPECT_NEAR(operator_norm(ComplexMatrix{{3.0, 0.0}, {0.0, -1.0}}), 3.0, 1e-9);
    EXPECT_NEAR(operator_norm(kron(gates::Z(), gates::Z())), 1.0, 1e-12);
    EXPECT_EQ(operator_norm(ComplexMatrix(4)), 0.0);
}

TEST(OperatorNorm, MatchesSvdOracle) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        const ComplexMatrix m = testing::random_matrix(1u << (1 + t % 4), rng);
        const double ref = testing::opnorm_oracle(m);
        EXPECT_NEAR(operator_norm(m), ref, 1e-7 * ref);
    }
}

TEST(Matrix, AlgebraHelpers) {
    EXPECT_EQ(commutator(gates::X(), gates::X()).max_abs(), 0.0);
    // [X, Y] = 2iZ
    EXPECT_LT((commutator(gates::X(), gates::Y()) - gates::Z() * cplx(0, 2)).max_abs(), 1e-15);
    EXPECT_LT(unitarity_deviation(gates::H()), 1e-15);
    EXPECT_LT(unitarity_deviation(gates::Ry(0.3) * gates::Rz(1.1)), 1e-15);
    EXPECT_GT(unitarity_deviation(gates::X() * 2.0), 1.0);
    EXPECT_EQ(hermiticity_deviation(gates::Y()), 0.0);
    EXPECT_EQ(kron(gates::I2(), gates::I2()), ComplexMatrix::identity(4));
}

} // namespace
} // namespace qiprune
