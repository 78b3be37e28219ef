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
#include "wenduality/duality.hpp"

using namespace wenduality;

namespace {

struct Case {
    int rows, cols;
    Boundary boundary;
};

// Small enough for full Kronecker diagonalization.
const Case kSmall[] = {
    {2, 2, Boundary::Open}, {2, 3, Boundary::Open}, {3, 3, Boundary::Open},     {2, 4, Boundary::Open},
    {3, 2, Boundary::Open}, {2, 5, Boundary::Open}, {3, 3, Boundary::Periodic},
};

LatticeSpec lat(const Case& c) { return {c.rows, c.cols, c.boundary}; }

std::vector<std::pair<int, char>> factors_of(const PauliString& p) {
    std::vector<std::pair<int, char>> f;
    for (const auto& x : p.factors()) f.emplace_back(x.site, axis_char(x.axis));
    return f;
}

}  // namespace

TEST(MapHamiltonian, OneChainPerOrbitWithFieldAndBond) {
    const HamiltonianSpec hs{{4, 6, Boundary::Periodic}, 0.7, 1.3};
    const auto m = map_hamiltonian(hs);
    ASSERT_EQ(m.chains.size(), 2u);
    for (const auto& c : m.chains) {
        EXPECT_EQ(c.length, 12);
        EXPECT_TRUE(c.periodic());
        EXPECT_DOUBLE_EQ(c.field, 0.7);
        EXPECT_DOUBLE_EQ(c.bond, 1.3);
        EXPECT_NEAR(c.g_I(), 0.7 / 1.3, 1e-15);
    }
    EXPECT_FALSE(m.zero_field);
    EXPECT_TRUE(map_hamiltonian({{3, 3, Boundary::Open}, 1.0, 0.0}).zero_field);
}

TEST(MapHamiltonian, ReferenceChainCountsAgainstMeasured) {
    const LatticeSpec open{5, 5, Boundary::Open};
    const auto refs = reference_chain_counts(open);
    ASSERT_EQ(refs.size(), 1u);
    EXPECT_EQ(refs[0].first, "2N-1");
    EXPECT_EQ(refs[0].second, 9);
    EXPECT_EQ(chain_decompose(open).chains.size(), 7u);  // 2N - 3
    EXPECT_EQ(reference_chain_counts({4, 4, Boundary::Periodic})[0].second, 4);
    EXPECT_EQ(reference_chain_counts({3, 5, Boundary::Open})[0].first, "M+N-1");
}

TEST(DualStructure, EverySiteHasOneRole) {
    for (const auto& c : kSmall) {
        const auto d = dual_structure(lat(c));
        int links = 0, fields = 0;
        for (const auto& s : d.sites) {
            if (s.role == SiteRole::Link || s.role == SiteRole::WrapLink) ++links;
            if (s.role == SiteRole::HeadField || s.role == SiteRole::TailField) ++fields;
        }
        int expected_links = 0;
        for (const auto& ch : d.chains) expected_links += static_cast<int>(ch.chain.links.size());
        EXPECT_EQ(links, expected_links);
        EXPECT_EQ(links + fields + static_cast<int>(d.free_sites.size()), d.site_count());
        EXPECT_GE(d.multiplicity_log2(), 0);
    }
}

TEST(DualStructure, OpenChainsCarryBothEndFields) {
    const auto d = dual_structure({4, 4, Boundary::Open});
    for (const auto& c : d.chains) {
        EXPECT_GE(c.head_field, 0);
        EXPECT_GE(c.tail_field, 0);
        EXPECT_GE(c.loop_label, 0);
        EXPECT_LT(c.parity_label, 0);
        // The head field anticommutes with the first plaquette only.
        const auto head = PauliString::single(c.head_field, Axis::X);
        for (int p = 0; p < static_cast<int>(d.plaquettes.size()); ++p)
            EXPECT_EQ(head.commutes_with(d.plaquettes[static_cast<std::size_t>(p)].op()), p != c.chain.plaquettes.front());
    }
    EXPECT_EQ(d.free_sites.size(), 2u);  // the two corners touching no Y corner
    EXPECT_TRUE(d.relations.empty());
}

TEST(DualStructure, LabelsAreCentral) {
    for (const auto& c : kSmall) {
        const auto d = dual_structure(lat(c));
        for (const auto& l : d.labels) {
            for (const auto& p : d.plaquettes) EXPECT_TRUE(l.op.commutes_with(p.op())) << l.name();
            for (int j = 0; j < d.site_count(); ++j)
                EXPECT_TRUE(l.op.commutes_with(PauliString::single(j, Axis::X))) << l.name();
        }
    }
}

TEST(DualStructure, TorusParitiesTiedToNeighbouringLoops) {
    const auto d = dual_structure({3, 3, Boundary::Periodic});
    ASSERT_EQ(d.chains.size(), 3u);
    ASSERT_EQ(d.labels.size(), 6u);
    ASSERT_EQ(d.relations.size(), 3u);
    for (const auto& r : d.relations) {
        // Check the relation directly as an operator identity.
        PauliString prod;
        for (int l : r.labels) prod *= d.labels[static_cast<std::size_t>(l)].op;
        EXPECT_TRUE(prod.is_identity());
        EXPECT_EQ(prod.phase_power(), r.sign > 0 ? 0 : 2);
    }
    const SectorSpace space(d);
    for (std::size_t r = 0; r < space.pivots().size(); ++r) {
        const auto& pivot = d.labels[static_cast<std::size_t>(space.pivots()[r])];
        EXPECT_EQ(pivot.kind, LabelKind::Parity);
        const auto others = space.row_labels(r);
        ASSERT_EQ(others.size(), 2u);
        for (int l : others) {
            const auto& o = d.labels[static_cast<std::size_t>(l)];
            EXPECT_EQ(o.kind, LabelKind::Loop);
            EXPECT_NE(o.index, pivot.index);
        }
    }
}

TEST(DualStructure, SectorSpaceAssignmentsSatisfyRelations) {
    const auto d = dual_structure({4, 6, Boundary::Periodic});
    const SectorSpace space(d);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << space.free_count()); ++m) {
        const auto v = space.assignment(m);
        for (const auto& r : d.relations) {
            int x = 1;
            for (int l : r.labels) x *= v[static_cast<std::size_t>(l)];
            EXPECT_EQ(x, r.sign);
        }
        EXPECT_TRUE(space.consistent(v));
    }
}

TEST(SectorResolvedSpectrum, MatchesKroneckerEDLevelByLevel) {
    const std::pair<double, double> couplings[] = {{1.0, 1.0}, {0.4, 1.3}, {2.2, 0.6}};
    for (const auto& c : kSmall) {
        for (auto [g, h] : couplings) {
            const auto d = dual_structure(lat(c));
            const auto dual = sector_resolved_spectrum(d, g, h);
            const auto ed = oracle::eigenvalues(oracle::wen_hamiltonian(c.rows, c.cols, c.boundary == Boundary::Periodic, g, h));
            ASSERT_EQ(dual.size(), ed.size()) << lat(c).label();
            double worst = 0.0;
            for (std::size_t i = 0; i < ed.size(); ++i) worst = std::max(worst, std::abs(dual[i] - ed[i]));
            EXPECT_LT(worst, 1e-10) << lat(c).label() << " g=" << g << " h=" << h;
        }
    }
}

TEST(SectorResolvedSpectrum, ZeroFieldAndZeroPlaquetteLimits) {
    for (const auto& c : {Case{3, 3, Boundary::Periodic}, Case{3, 3, Boundary::Open}}) {
        for (auto [g, h] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}}) {
            const auto dual = sector_resolved_spectrum(dual_structure(lat(c)), g, h);
            const auto ed = oracle::eigenvalues(oracle::wen_hamiltonian(c.rows, c.cols, c.boundary == Boundary::Periodic, g, h));
            for (std::size_t i = 0; i < ed.size(); ++i) EXPECT_NEAR(dual[i], ed[i], 1e-10);
        }
    }
}

TEST(DualityReport, PlainTensorSumMissesLevelsOnTorus) {
    const auto r = duality_spectrum_check({{3, 3, Boundary::Periodic}, 1.0, 1.0});
    EXPECT_EQ(r.measured_chain_count, 3);
    EXPECT_FALSE(r.tensor_sum_match);
    EXPECT_GT(r.tensor_sum_mismatch, 1e-3);
    EXPECT_TRUE(r.sector_match);
    EXPECT_LT(r.sector_mismatch, 1e-10);
    EXPECT_EQ(r.distinct_sector, r.distinct_lattice);
    int total = 0;
    for (const auto& row : r.table) {
        total += row.lattice;
        EXPECT_EQ(row.lattice, row.sector_resolved) << row.energy;
    }
    EXPECT_EQ(total, 512);
}

TEST(DualityReport, RejectsLargeLattices) {
    EXPECT_THROW(duality_spectrum_check({{4, 4, Boundary::Periodic}, 1.0, 1.0}), TooLarge);
}

TEST(DualLowLevels, GroundAndGapMatchED) {
    const std::pair<double, double> couplings[] = {{1.0, 1.0}, {0.5, 1.0}, {1.0, 0.3}};
    for (const auto& c : kSmall) {
        for (auto [g, h] : couplings) {
            const auto ed = oracle::eigenvalues(oracle::wen_hamiltonian(c.rows, c.cols, c.boundary == Boundary::Periodic, g, h));
            const auto low = dual_low_levels(dual_structure(lat(c)), g, h);
            EXPECT_NEAR(low.ground_energy, ed.front(), 1e-9) << lat(c).label();
            EXPECT_NEAR(low.gap, gap_above_ground(ed), 1e-8) << lat(c).label() << " g=" << g << " h=" << h;
        }
    }
}

TEST(DualLowLevels, LargerToriMatchLanczos) {
    for (const LatticeSpec l : {LatticeSpec{3, 4, Boundary::Periodic}, LatticeSpec{4, 3, Boundary::Periodic}}) {
        for (auto [g, h] : {std::pair{1.0, 1.0}, std::pair{0.6, 1.0}}) {
            const HamiltonianSpec hs{l, g, h};
            const auto ed = ground_spectrum(hs, 2, false, SolverChoice::Lanczos);
            const auto low = dual_low_levels(hs);
            EXPECT_NEAR(low.ground_energy, ed.ground_energy, 1e-8) << l.label();
            EXPECT_NEAR(low.gap, ed.gap, 1e-7) << l.label();
        }
    }
}

TEST(DualLowLevels, CyclicTransferAgreesWithEnumeration) {
    for (int N : {3, 4, 5, 6}) {
        const auto d = dual_structure({N, N, Boundary::Periodic});
        for (auto [g, h] : {std::pair{1.0, 1.0}, std::pair{0.6, 1.0}, std::pair{1.0, 0.7}}) {
            const auto a = dual_low_levels(d, g, h);
            const auto b = dual_low_levels(d, g, h, kDegeneracyTolerance, true);
            EXPECT_EQ(a.method, "enumerate");
            EXPECT_EQ(b.method, "cyclic-dp");
            EXPECT_NEAR(a.ground_energy, b.ground_energy, 1e-10) << N;
            EXPECT_NEAR(a.gap, b.gap, 1e-10) << N;
        }
    }
}

TEST(DualLowLevels, LargeTorusUsesTransfer) {
    const auto low = dual_low_levels({{32, 32, Boundary::Periodic}, 1.0, 1.0});
    EXPECT_EQ(low.method, "cyclic-dp");
    EXPECT_GT(low.gap, 0.0);
    EXPECT_LT(low.gap, 1.0);
}

TEST(MapOperator, GeneratorImages) {
    const auto d = dual_structure({3, 3, Boundary::Periodic});
    const auto& p = d.plaquettes[4];
    const auto img = map_operator(d, p.op());
    ASSERT_EQ(img.tau.weight(), 1u);
    EXPECT_EQ(img.tau.factors()[0].axis, Axis::X);
    EXPECT_TRUE(img.labels.empty());
    for (int j = 0; j < d.site_count(); ++j) {
        const auto s = map_operator(d, PauliString::single(j, Axis::X));
        const auto& role = d.sites[static_cast<std::size_t>(j)];
        EXPECT_EQ(s.labels.size(), role.role == SiteRole::WrapLink ? 1u : 0u);
        // L = 3 rings: each link maps to two tau^z.
        EXPECT_EQ(s.tau.weight(), 2u);
    }
    EXPECT_THROW(map_operator(d, PauliString::single(0, Axis::Z)), NotMappable);
    EXPECT_THROW(map_operator(d, PauliString::single(9, Axis::X)), SiteOutOfRange);
}

TEST(MapOperator, PreservesCommutation) {
    std::mt19937 rng(5);
    for (const auto& c : kSmall) {
        const auto d = dual_structure(lat(c));
        const int n = d.site_count();
        const int np = static_cast<int>(d.plaquettes.size());
        std::uniform_int_distribution<int> pick(0, np + n - 1);
        auto random_op = [&] {
            PauliString op;
            for (int k = 0; k < 3; ++k) {
                const int x = pick(rng);
                op *= x < np ? d.plaquettes[static_cast<std::size_t>(x)].op() : PauliString::single(x - np, Axis::X);
            }
            return op;
        };
        for (int t = 0; t < 40; ++t) {
            const auto a = random_op(), b = random_op();
            EXPECT_EQ(a.commutes_with(b), map_operator(d, a).tau.commutes_with(map_operator(d, b).tau));
        }
    }
}

// Lattice ground state against the dual ground state in the same label sector.
TEST(DualExpectation, MatchesLatticeGroundStateInItsSector) {
    std::mt19937 rng(17);
    int evaluated = 0;
    for (const auto& c : kSmall) {
        for (auto [g, h] : {std::pair{0.7, 1.3}, std::pair{1.6, 0.9}}) {
            const auto d = dual_structure(lat(c));
            const auto H = oracle::wen_hamiltonian(c.rows, c.cols, c.boundary == Boundary::Periodic, g, h);
            const auto gs = oracle::ground_state(H);
            RealStateVector v(d.site_count());
            for (std::size_t i = 0; i < v.dimension(); ++i) v[i] = gs.psi(static_cast<Eigen::Index>(i)).real();
            const auto proj = project_to_sector(d, v);
            Eigen::VectorXcd psi(static_cast<Eigen::Index>(v.dimension()));
            for (std::size_t i = 0; i < v.dimension(); ++i) psi(static_cast<Eigen::Index>(i)) = proj.state[i];
            // Still a ground state after projection.
            EXPECT_NEAR(oracle::expect(psi, H), gs.energy, 1e-9);

            const auto dual = dual_ground_state(d, proj.labels, g, h);
            EXPECT_NEAR(dual.energy, gs.energy, 1e-9) << lat(c).label();

            const int n = d.site_count();
            const int np = static_cast<int>(d.plaquettes.size());
            std::uniform_int_distribution<int> pick(0, np + n - 1), count(1, 4);
            for (int t = 0; t < 60; ++t) {
                PauliString op;
                for (int k = count(rng); k > 0; --k) {
                    const int x = pick(rng);
                    op *= x < np ? d.plaquettes[static_cast<std::size_t>(x)].op() : PauliString::single(x - np, Axis::X);
                }
                double got;
                try {
                    got = dual_expectation(dual, op);
                } catch (const NotMappable&) {
                    continue;
                }
                const double want = (op.phase() * oracle::expect(psi, factors_of(op))).real();
                EXPECT_NEAR(got, want, 1e-9) << lat(c).label() << " " << op.to_string();
                ++evaluated;
            }
        }
    }
    EXPECT_GT(evaluated, 500);
}

TEST(ProjectToSector, FixesEveryLabel) {
    const auto d = dual_structure({3, 3, Boundary::Periodic});
    const auto v = RealStateVector::random(9, 3);
    const auto p = project_to_sector(d, v);
    EXPECT_EQ(p.projected.size(), d.labels.size() - d.relations.size());
    for (std::size_t l = 0; l < d.labels.size(); ++l)
        EXPECT_NEAR(expectation(p.state, d.labels[l].op).real(), p.labels[l], 1e-12);
    EXPECT_TRUE(SectorSpace(d).consistent(p.labels));
    EXPECT_GT(p.weight, 0.0);
    EXPECT_THROW(project_to_sector(d, RealStateVector::random(4, 1)), DimensionMismatch);
}

TEST(DualGroundState, RejectsInconsistentLabels) {
    const auto d = dual_structure({3, 3, Boundary::Periodic});
    auto v = SectorSpace(d).assignment(0);
    v[static_cast<std::size_t>(SectorSpace(d).pivots()[0])] *= -1;
    EXPECT_THROW(dual_ground_state(d, v, 1.0, 1.0), InvalidSpec);
    EXPECT_THROW(dual_ground_state(d, LabelValues(2, 1), 1.0, 1.0), DimensionMismatch);
}
