// Copyright 2026 The wenduality Authors
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

#include <gtest/gtest.h>

#include <random>

#include "oracles/kron.hpp"
#include "wenduality/gf2.hpp"
#include "wenduality/pauli.hpp"
#include "wenduality/state_vector.hpp"

using namespace wenduality;

namespace {

oracle::Mat to_matrix(const PauliString& p, int n) {
    std::vector<std::pair<int, char>> f;
    for (const auto& x : p.factors()) f.emplace_back(x.site, axis_char(x.axis));
    return p.phase() * oracle::op(n, f);
}

PauliString random_string(std::mt19937& rng, int n) {
    std::uniform_int_distribution<int> axis(0, 3), phase(0, 3);
    std::vector<PauliFactor> f;
    for (int s = 0; s < n; ++s) f.push_back({s, static_cast<Axis>(axis(rng))});
    return PauliString(f, phase(rng));
}

}  // namespace

TEST(PauliString, SingleSiteProductsMatchMatrices) {
    const Axis axes[] = {Axis::I, Axis::X, Axis::Y, Axis::Z};
    for (Axis a : axes) {
        for (Axis b : axes) {
            const auto p = PauliString::single(0, a) * PauliString::single(0, b);
            const oracle::Mat expect = oracle::pauli(axis_char(a)) * oracle::pauli(axis_char(b));
            EXPECT_LT((to_matrix(p, 1) - expect).norm(), 1e-14) << axis_char(a) << axis_char(b);
        }
    }
}

TEST(PauliString, DuplicateFactorsMergeInOrder) {
    // X0 Y0 = i Z0
    PauliString p({{0, Axis::X}, {0, Axis::Y}});
    EXPECT_EQ(p, PauliString({{0, Axis::Z}}, 1));
    PauliString q({{2, Axis::Z}, {1, Axis::X}, {2, Axis::Z}});
    EXPECT_EQ(q, PauliString::single(1, Axis::X));
}

TEST(PauliString, RandomProductsAndCommutationAgreeWithOracle) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3;
        const auto a = random_string(rng, n);
        const auto b = random_string(rng, n);
        EXPECT_LT((to_matrix(a * b, n) - to_matrix(a, n) * to_matrix(b, n)).norm(), 1e-12);
        const oracle::Mat ab = to_matrix(a, n) * to_matrix(b, n);
        const oracle::Mat ba = to_matrix(b, n) * to_matrix(a, n);
        EXPECT_EQ(a.commutes_with(b), (ab - ba).norm() < 1e-12);
    }
}

TEST(PauliString, ActionOnBasisStates) {
    // sigma^x_0 |00> = |01> (site-0 bit flipped)
    auto v = StateVector::basis_state(2, 0b00);
    auto w = apply_pauli_string(PauliString::single(0, Axis::X), v);
    EXPECT_EQ(w[0b01], cplx(1, 0));
    EXPECT_EQ(w[0b00], cplx(0, 0));

    // sigma^y|0> = i|1>, sigma^y|1> = -i|0>
    auto y0 = apply_pauli_string(PauliString::single(0, Axis::Y), StateVector::basis_state(1, 0));
    EXPECT_EQ(y0[1], cplx(0, 1));
    auto y1 = apply_pauli_string(PauliString::single(0, Axis::Y), StateVector::basis_state(1, 1));
    EXPECT_EQ(y1[0], cplx(0, -1));

    // sigma^z: bit 1 is spin down
    auto z1 = apply_pauli_string(PauliString::single(0, Axis::Z), StateVector::basis_state(1, 1));
    EXPECT_EQ(z1[1], cplx(-1, 0));
}

TEST(PauliString, ApplicationMatchesKroneckerOracle) {
    std::mt19937 rng(11);
    const int n = 4;
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = random_string(rng, n);
        const auto v = StateVector::random(n, 100 + static_cast<std::uint64_t>(trial));
        const auto w = apply_pauli_string(p, v);
        Eigen::VectorXcd ev(1 << n);
        for (int i = 0; i < (1 << n); ++i) ev(i) = v[static_cast<std::size_t>(i)];
        const Eigen::VectorXcd ew = to_matrix(p, n) * ev;
        for (int i = 0; i < (1 << n); ++i) EXPECT_LT(std::abs(ew(i) - w[static_cast<std::size_t>(i)]), 1e-12);
    }
}

TEST(PauliString, TwiceGivesPhaseSquared) {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_string(rng, 5);
        const auto v = StateVector::random(5, static_cast<std::uint64_t>(trial));
        auto w = apply_pauli_string(p, apply_pauli_string(p, v));
        const cplx phase2 = p.phase() * p.phase();
        for (std::size_t i = 0; i < v.dimension(); ++i) EXPECT_LT(std::abs(w[i] - phase2 * v[i]), 1e-12);
    }
}

TEST(PauliString, OutOfRangeSiteThrows) {
    auto v = StateVector::basis_state(2, 0);
    EXPECT_THROW(apply_pauli_string(PauliString::single(5, Axis::X), v), SiteOutOfRange);
    EXPECT_THROW(PauliString::single(-1, Axis::X), SiteOutOfRange);
}

TEST(Gf2, KernelAndSolve) {
    using gf2::BitVector;
    std::vector<BitVector> rows(3, BitVector(4));
    rows[0].set(0); rows[0].set(1);
    rows[1].set(1); rows[1].set(2);
    rows[2].set(0); rows[2].set(2);  // rows[0] ^ rows[1]
    const auto ker = gf2::kernel(rows);
    ASSERT_EQ(ker.size(), 1u);
    EXPECT_EQ(ker[0].count(), 3u);
    EXPECT_EQ(gf2::rank(rows), 2u);

    BitVector t(4);
    t.set(0); t.set(2);
    const auto sol = gf2::solve(rows, t);
    ASSERT_TRUE(sol.has_value());
    BitVector acc(4);
    for (std::size_t i = 0; i < 3; ++i) if (sol->get(i)) acc ^= rows[i];
    EXPECT_EQ(acc, t);

    BitVector bad(4);
    bad.set(3);
    EXPECT_FALSE(gf2::solve(rows, bad).has_value());
}
