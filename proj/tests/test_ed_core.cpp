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
#include <cmath>

#include "oracles/kron.hpp"
#include "wenduality/wen_model.hpp"

using namespace wenduality;

TEST(Hamiltonian, DenseMatchesKroneckerOracle) {
    for (bool periodic : {false, true}) {
        const int n = periodic ? 3 : 2, m = 3;
        const HamiltonianSpec hs{{n, m, periodic ? Boundary::Periodic : Boundary::Open}, 0.7, 1.3};
        const auto ours = build_hamiltonian(hs).dense();
        const auto ref = oracle::wen_hamiltonian(n, m, periodic, 0.7, 1.3);
        EXPECT_LT((ours - ref).norm(), 1e-12);
    }
}

TEST(Hamiltonian, IsRealSymmetric) {
    const HamiltonianSpec hs{{3, 3, Boundary::Periodic}, 1.0, 0.4};
    const auto H = build_hamiltonian(hs);
    ASSERT_TRUE(H.is_real());
    const auto d = H.dense_real();
    EXPECT_LT((d - d.transpose()).norm(), 1e-12);
}

TEST(Hamiltonian, PlaquetteSquaresToOneOnLargeState) {
    const LatticeSpec spec{4, 4, Boundary::Periodic};
    const auto v = StateVector::random(16, 42);
    for (const auto& p : enumerate_plaquettes(spec)) {
        const auto w = apply_pauli_string(p.op(), apply_pauli_string(p.op(), v));
        double err = 0.0;
        for (std::size_t i = 0; i < v.dimension(); ++i) err = std::max(err, std::abs(w[i] - v[i]));
        EXPECT_LT(err, 1e-14);
    }
}

TEST(Hamiltonian, ApplyMatchesDenseProduct) {
    const HamiltonianSpec hs{{3, 4, Boundary::Open}, 0.9, 0.6};
    const auto v = RealStateVector::random(12, 5);
    const auto w = apply_hamiltonian(hs, v);
    const Eigen::MatrixXd d = build_hamiltonian(hs).dense_real();
    Eigen::VectorXd ev = Eigen::Map<const Eigen::VectorXd>(v.amplitudes().data(), v.dimension());
    const Eigen::VectorXd ew = d * ev;
    for (std::size_t i = 0; i < v.dimension(); ++i) EXPECT_NEAR(ew(static_cast<Eigen::Index>(i)), w[i], 1e-12);
    EXPECT_THROW(apply_hamiltonian(hs, RealStateVector(11)), DimensionMismatch);
}

TEST(Hamiltonian, ValidationErrors) {
    EXPECT_THROW(build_hamiltonian(HamiltonianSpec{{3, 3, Boundary::Periodic}, -1.0, 1.0}), InvalidSpec);
    EXPECT_THROW(build_hamiltonian(HamiltonianSpec{{3, 3, Boundary::Periodic}, 0.0, 0.0}), InvalidSpec);
    EXPECT_THROW(build_hamiltonian(HamiltonianSpec{{2, 3, Boundary::Periodic}, 1.0, 1.0}), DegenerateLattice);
    EXPECT_THROW(full_spectrum(HamiltonianSpec{{4, 4, Boundary::Periodic}, 1.0, 1.0}), TooLarge);
    EXPECT_THROW(ground_spectrum(HamiltonianSpec{{5, 5, Boundary::Periodic}, 1.0, 1.0}, 2, false), TooLarge);
}

TEST(Spectrum, ZeroPlaquetteCouplingIsBinomial) {
    const HamiltonianSpec hs{{3, 3, Boundary::Periodic}, 0.0, 1.0};
    const auto r = full_spectrum(hs);
    EXPECT_NEAR(r.ground_energy, -9.0, 1e-12);
    EXPECT_EQ(r.ground_degeneracy, 1);
    EXPECT_NEAR(r.gap, 2.0, 1e-12);
    // Level -9 + 2k has multiplicity C(9, k).
    int idx = 0;
    for (int k = 0; k <= 9; ++k) {
        const int mult = static_cast<int>(std::lround(std::tgamma(10.0) / (std::tgamma(k + 1.0) * std::tgamma(10.0 - k))));
        for (int t = 0; t < mult; ++t) EXPECT_NEAR(r.eigenvalues[idx++], -9.0 + 2.0 * k, 1e-10);
    }
}

TEST(Spectrum, UniformStateIsGroundStateAtZeroPlaquetteCoupling) {
    const HamiltonianSpec hs{{4, 4, Boundary::Periodic}, 0.0, 1.0};
    const auto u = RealStateVector::uniform(16);
    const auto w = apply_hamiltonian(hs, u);
    for (std::size_t i = 0; i < u.dimension(); ++i) EXPECT_NEAR(w[i], -16.0 * u[i], 1e-12);
}

TEST(Spectrum, SinglePlaquetteWithoutField) {
    const HamiltonianSpec hs{{2, 2, Boundary::Open}, 1.0, 0.0};
    const auto r = full_spectrum(hs);
    ASSERT_EQ(r.eigenvalues.size(), 16u);
    for (int i = 0; i < 8; ++i) EXPECT_NEAR(r.eigenvalues[i], -1.0, 1e-12);
    for (int i = 8; i < 16; ++i) EXPECT_NEAR(r.eigenvalues[i], 1.0, 1e-12);
    EXPECT_EQ(r.ground_degeneracy, 8);
    EXPECT_NEAR(r.gap, 2.0, 1e-12);
}

TEST(Spectrum, DenseMatchesKroneckerEigenvalues) {
    const HamiltonianSpec hs{{3, 3, Boundary::Open}, 1.2, 0.8};
    const auto ours = full_spectrum(hs).eigenvalues;
    const auto ref = oracle::eigenvalues(oracle::wen_hamiltonian(3, 3, false, 1.2, 0.8));
    ASSERT_EQ(ours.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(ours[i], ref[i], 1e-10);
}

TEST(Lanczos, AgreesWithDenseOnLowLevels) {
    for (double g : {0.3, 1.0, 2.5}) {
        const HamiltonianSpec hs{{3, 3, g < 1.0 ? Boundary::Open : Boundary::Periodic}, g, 1.0};
        const auto dense = ground_spectrum(hs, 6, false, SolverChoice::Dense);
        const auto lz = ground_spectrum(hs, 6, true, SolverChoice::Lanczos);
        ASSERT_GE(lz.eigenvalues.size(), 6u);
        for (int i = 0; i < 6; ++i) EXPECT_NEAR(lz.eigenvalues[i], dense.eigenvalues[i], 1e-8) << "g=" << g;
        EXPECT_NEAR(lz.gap, dense.gap, 1e-8);
        EXPECT_EQ(lz.ground_degeneracy, dense.ground_degeneracy);
        // Residual check on the returned vectors.
        const auto H = build_hamiltonian(hs);
        for (int i = 0; i < 6; ++i) {
            auto r = H.apply(lz.eigenvectors[i]);
            for (std::size_t t = 0; t < r.dimension(); ++t) r[t] -= lz.eigenvalues[i] * lz.eigenvectors[i][t];
            EXPECT_LT(r.norm(), 1e-8);
        }
    }
}

TEST(Lanczos, HandlesExactDegeneracyWithoutField) {
    const HamiltonianSpec hs{{3, 3, Boundary::Periodic}, 1.0, 0.0};
    const auto dense = ground_spectrum(hs, 4, false, SolverChoice::Dense);
    const auto lz = ground_spectrum(hs, 4, false, SolverChoice::Lanczos);
    EXPECT_NEAR(lz.ground_energy, dense.ground_energy, 1e-9);
    EXPECT_EQ(lz.ground_degeneracy, dense.ground_degeneracy);
    EXPECT_NEAR(lz.gap, dense.gap, 1e-9);
}

TEST(Lanczos, DeterministicAcrossRuns) {
    const HamiltonianSpec hs{{3, 4, Boundary::Open}, 1.0, 1.0};
    const auto a = ground_spectrum(hs, 3, false, SolverChoice::Lanczos);
    const auto b = ground_spectrum(hs, 3, false, SolverChoice::Lanczos);
    EXPECT_EQ(a.eigenvalues, b.eigenvalues);
}
