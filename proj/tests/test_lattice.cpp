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

#include <algorithm>
#include <numeric>
#include <set>

#include "wenduality/lattice.hpp"

using namespace wenduality;

namespace {

// Connected components of the graph "two plaquettes share a site whose
// sigma^x anticommutes with both", found by testing operator algebra directly.
std::vector<std::set<int>> brute_force_components(const LatticeSpec& spec) {
    const auto plaq = enumerate_plaquettes(spec);
    const int np = static_cast<int>(plaq.size());
    std::vector<int> parent(np);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int j = 0; j < spec.site_count(); ++j) {
        const auto x = PauliString::single(j, Axis::X);
        std::vector<int> hit;
        for (int p = 0; p < np; ++p) if (!x.commutes_with(plaq[p].op())) hit.push_back(p);
        for (std::size_t k = 1; k < hit.size(); ++k) parent[find(hit[k])] = find(hit[0]);
    }
    std::vector<std::set<int>> groups(np);
    for (int p = 0; p < np; ++p) groups[find(p)].insert(p);
    std::vector<std::set<int>> out;
    for (auto& g : groups) if (!g.empty()) out.push_back(g);
    return out;
}

}  // namespace

TEST(Lattice, ValidationRejectsSmallLattices) {
    EXPECT_THROW((LatticeSpec{1, 4, Boundary::Open}.validate()), InvalidSpec);
    EXPECT_THROW((LatticeSpec{2, 4, Boundary::Periodic}.validate()), DegenerateLattice);
    EXPECT_NO_THROW((LatticeSpec{2, 2, Boundary::Open}.validate()));
    EXPECT_NO_THROW((LatticeSpec{3, 3, Boundary::Periodic}.validate()));
}

TEST(Lattice, PlaquetteCountsAndCorners) {
    const LatticeSpec p44{4, 4, Boundary::Periodic};
    const auto plaq = enumerate_plaquettes(p44);
    ASSERT_EQ(plaq.size(), 16u);
    EXPECT_EQ(plaq[0].corners, (std::array<int, 4>{0, 1, 5, 4}));
    // Wrapped plaquette at (3, 3).
    EXPECT_EQ(plaq[15].corners, (std::array<int, 4>{15, 12, 0, 3}));
    EXPECT_EQ(enumerate_plaquettes(LatticeSpec{4, 5, Boundary::Open}).size(), 12u);
    EXPECT_EQ(enumerate_plaquettes(LatticeSpec{2, 2, Boundary::Open}).size(), 1u);
}

TEST(Lattice, PlaquettesCommuteAndSquareToOne) {
    for (auto b : {Boundary::Open, Boundary::Periodic}) {
        const auto plaq = enumerate_plaquettes(LatticeSpec{4, 5, b});
        for (const auto& p : plaq) {
            EXPECT_TRUE(p.op().is_hermitian());
            EXPECT_EQ(p.op() * p.op(), PauliString::identity());
            for (const auto& q : plaq) EXPECT_TRUE(p.op().commutes_with(q.op()));
        }
    }
}

TEST(Lattice, AdjacencyMatchesOperatorAlgebra) {
    for (auto spec : {LatticeSpec{4, 4, Boundary::Periodic}, LatticeSpec{3, 5, Boundary::Open},
                      LatticeSpec{5, 3, Boundary::Periodic}}) {
        const auto plaq = enumerate_plaquettes(spec);
        const auto adj = site_adjacency(spec, plaq);
        for (int j = 0; j < spec.site_count(); ++j) {
            std::set<int> expect;
            const auto x = PauliString::single(j, Axis::X);
            for (int p = 0; p < static_cast<int>(plaq.size()); ++p)
                if (!x.commutes_with(plaq[p].op())) expect.insert(p);
            const auto got = adj.anticommuting(j);
            EXPECT_EQ(std::set<int>(got.begin(), got.end()), expect) << spec.label() << " site " << j;
        }
    }
}

TEST(ChainDecomposition, PeriodicCountsAndLengths) {
    struct Case { int n, m, chains, length; };
    for (auto c : {Case{4, 4, 4, 4}, Case{3, 3, 3, 3}, Case{4, 6, 2, 12}, Case{3, 5, 1, 15}, Case{6, 4, 2, 12}}) {
        const auto d = chain_decompose(LatticeSpec{c.n, c.m, Boundary::Periodic});
        ASSERT_EQ(static_cast<int>(d.chains.size()), c.chains) << c.n << "x" << c.m;
        for (const auto& ch : d.chains) {
            EXPECT_EQ(ch.length(), c.length);
            EXPECT_EQ(ch.boundary, ChainBoundary::PeriodicChain);
            EXPECT_EQ(ch.links.size(), ch.plaquettes.size());
        }
    }
}

TEST(ChainDecomposition, OpenSquareHasTwoNMinusThreeChains) {
    for (int n = 2; n <= 7; ++n) {
        const auto d = chain_decompose(LatticeSpec{n, n, Boundary::Open});
        EXPECT_EQ(static_cast<int>(d.chains.size()), 2 * n - 3) << n;
        for (const auto& ch : d.chains) {
            EXPECT_EQ(ch.boundary, ChainBoundary::OpenChain);
            EXPECT_EQ(ch.links.size() + 1, ch.plaquettes.size());
        }
    }
}

TEST(ChainDecomposition, MatchesBruteForceComponents) {
    for (auto spec : {LatticeSpec{3, 3, Boundary::Open}, LatticeSpec{4, 6, Boundary::Open},
                      LatticeSpec{4, 4, Boundary::Periodic}, LatticeSpec{4, 6, Boundary::Periodic},
                      LatticeSpec{5, 3, Boundary::Periodic}}) {
        const auto d = chain_decompose(spec);
        std::set<std::set<int>> got;
        for (const auto& ch : d.chains) got.insert(std::set<int>(ch.plaquettes.begin(), ch.plaquettes.end()));
        const auto expect = brute_force_components(spec);
        EXPECT_EQ(got, std::set<std::set<int>>(expect.begin(), expect.end())) << spec.label();
    }
}

TEST(ChainDecomposition, IsAPartitionWithConsistentIndex) {
    const LatticeSpec spec{5, 4, Boundary::Periodic};
    const auto d = chain_decompose(spec);
    std::vector<int> seen(static_cast<std::size_t>(spec.plaquette_count()), 0);
    for (int c = 0; c < static_cast<int>(d.chains.size()); ++c) {
        for (int k = 0; k < d.chains[c].length(); ++k) {
            const int p = d.chains[c].plaquettes[k];
            ++seen[p];
            EXPECT_EQ(d.chain_of[p], c);
            EXPECT_EQ(d.position_of[p], k);
        }
    }
    for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(ChainDecomposition, LinksAnticommuteWithBothNeighbours) {
    for (auto spec : {LatticeSpec{4, 4, Boundary::Periodic}, LatticeSpec{4, 5, Boundary::Open}}) {
        const auto plaq = enumerate_plaquettes(spec);
        const auto d = chain_decompose(spec);
        for (const auto& ch : d.chains) {
            for (std::size_t k = 0; k < ch.links.size(); ++k) {
                const auto x = PauliString::single(ch.links[k], Axis::X);
                const int a = ch.plaquettes[k];
                const int b = ch.plaquettes[(k + 1) % ch.plaquettes.size()];
                EXPECT_FALSE(x.commutes_with(plaq[a].op()));
                EXPECT_FALSE(x.commutes_with(plaq[b].op()));
            }
        }
    }
}

TEST(ChainDecomposition, Deterministic) {
    const LatticeSpec spec{6, 4, Boundary::Periodic};
    EXPECT_EQ(chain_decompose(spec), chain_decompose(spec));
}
