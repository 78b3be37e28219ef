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

#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "wenduality/eigensolver.hpp"
#include "wenduality/lattice.hpp"
#include "wenduality/pauli_sum.hpp"

namespace wenduality {

/// Sign convention used in every output: couplings are magnitudes and
/// H = -g sum_p F_p - h sum_j sigma^x_j, so g/h is the dimensionless ratio directly.
inline constexpr const char* kSignConvention = "H = -g*sum(F_p) - h*sum(sigma^x_j), g,h >= 0";

struct HamiltonianSpec {
    LatticeSpec lattice;
    double g = 1.0;  // plaquette coupling
    double h = 1.0;  // transverse field

    void validate() const {
        lattice.validate();
        if (!(g >= 0.0) || !(h >= 0.0)) throw InvalidSpec("couplings g and h must be nonnegative");
        if (!(g + h > 0.0)) throw InvalidSpec("g + h must be positive");
    }

    /// g/h; +inf when h = 0.
    double ratio() const { return h > 0.0 ? g / h : std::numeric_limits<double>::infinity(); }
};

/// Limits for the exact-diagonalization paths.
inline constexpr int kMaxLanczosSpins = 20;
inline constexpr int kMaxDenseSpins = 14;
inline constexpr int kDenseDefaultSpins = 10;

inline PauliSum build_hamiltonian(const HamiltonianSpec& hs) {
    hs.validate();
    const int n = hs.lattice.site_count();
    if (n > 63) throw TooLarge("lattice too large for a bit-mask Hamiltonian");
    PauliSum H(n);
    for (const auto& p : enumerate_plaquettes(hs.lattice)) H.add(-hs.g, p.op());
    for (int j = 0; j < n; ++j) H.add(-hs.h, PauliString::single(j, Axis::X));
    return H;
}

template <class Scalar>
BasicStateVector<Scalar> apply_hamiltonian(const HamiltonianSpec& hs, const BasicStateVector<Scalar>& v) {
    if (v.num_sites() != hs.lattice.site_count()) {
        throw DimensionMismatch("state has " + std::to_string(v.num_sites()) + " spins, lattice has " +
                                std::to_string(hs.lattice.site_count()));
    }
    return build_hamiltonian(hs).apply(v);
}

enum class SolverChoice { Auto, Dense, Lanczos };

/// k lowest levels (with multiplicity). Dense when the spin count is at most
/// 10 under Auto, Lanczos otherwise. The gap uses the 1e-8 degeneracy band;
/// Lanczos keeps extending past k until a level leaves the band.
inline SpectrumResult ground_spectrum(const HamiltonianSpec& hs, int k, bool want_vectors,
                                      SolverChoice solver = SolverChoice::Auto, LanczosOptions opts = {}) {
    hs.validate();
    if (k < 1) throw InvalidSpec("k must be at least 1");
    const int n = hs.lattice.site_count();
    const bool dense = solver == SolverChoice::Dense || (solver == SolverChoice::Auto && n <= kDenseDefaultSpins);
    if (dense) {
        if (n > kMaxDenseSpins) throw TooLarge("dense diagonalization limited to 14 spins");
        return dense_spectrum(build_hamiltonian(hs), want_vectors, k);
    }
    if (n > kMaxLanczosSpins) throw TooLarge("Lanczos limited to 20 spins");
    return lanczos_lowest(build_hamiltonian(hs), k, want_vectors, opts);
}

/// All 2^n levels, ascending.
inline SpectrumResult full_spectrum(const HamiltonianSpec& hs) {
    hs.validate();
    if (hs.lattice.site_count() > kMaxDenseSpins) throw TooLarge("full spectrum limited to 14 spins");
    return dense_spectrum(build_hamiltonian(hs), false);
}

}  // namespace wenduality
