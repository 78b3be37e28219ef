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

#include "wenduality/lattice.hpp"
#include "wenduality/pauli_sum.hpp"

namespace wenduality {

/// Transverse-field Ising chain
///
///   H = -field * sum_j tau^x_j - bond * sum_j tau^z_j tau^z_{j+1}
///       - bond * twist * tau^z_{L-1} tau^z_0          (PeriodicChain only)
///       - bond * (head * tau^z_0 + tail * tau^z_{L-1})  (boundary fields, usually 0)
///
/// With field = h * g_I and bond = h this is -h sum (g_I tau^x + tau^z tau^z).
/// Couplings are stored as the two absolute magnitudes so that h = 0 stays
/// representable; g_I() and scale() recover the ratio form.
struct TFIMChainSpec {
    int length = 1;
    ChainBoundary boundary = ChainBoundary::OpenChain;
    double field = 1.0;
    double bond = 1.0;
    double twist = 1.0;
    double head = 0.0;
    double tail = 0.0;

    static TFIMChainSpec from_ratio(int length, ChainBoundary boundary, double g_I, double h = 1.0) {
        TFIMChainSpec c;
        c.length = length;
        c.boundary = boundary;
        c.field = g_I * h;
        c.bond = h;
        return c;
    }

    /// field / bond; +inf when the bond vanishes.
    double g_I() const { return bond != 0.0 ? field / bond : std::numeric_limits<double>::infinity(); }
    double scale() const { return bond; }
    bool zero_bond() const { return bond == 0.0; }
    bool has_boundary_fields() const { return head != 0.0 || tail != 0.0; }
    bool periodic() const { return boundary == ChainBoundary::PeriodicChain; }

    void validate() const {
        if (length < 1) throw InvalidSpec("chain length must be positive");
        if (!(field >= 0.0) || !(bond >= 0.0)) throw InvalidSpec("chain couplings must be nonnegative");
        if (twist != 1.0 && twist != -1.0) throw InvalidSpec("twist must be +1 or -1");
        if (periodic() && has_boundary_fields()) throw InvalidSpec("boundary fields need an open chain");
    }

    std::string label() const {
        return "L=" + std::to_string(length) + (periodic() ? " periodic" : " open") +
               (twist < 0 ? " twisted" : "");
    }

    friend bool operator==(const TFIMChainSpec&, const TFIMChainSpec&) = default;
};

/// The chain Hamiltonian as a Pauli sum on `length` spins, for exact diagonalization.
inline PauliSum chain_hamiltonian(const TFIMChainSpec& c) {
    c.validate();
    const int L = c.length;
    PauliSum H(L);
    for (int j = 0; j < L; ++j) H.add(-c.field, PauliString::single(j, Axis::X));
    for (int j = 0; j + 1 < L; ++j) H.add(-c.bond, PauliString({{j, Axis::Z}, {j + 1, Axis::Z}}));
    if (c.periodic()) {
        if (L == 1) {
            H.add_constant(-c.bond * c.twist);
        } else {
            H.add(-c.bond * c.twist, PauliString({{L - 1, Axis::Z}, {0, Axis::Z}}));
        }
    }
    H.add(-c.bond * c.head, PauliString::single(0, Axis::Z));
    H.add(-c.bond * c.tail, PauliString::single(L - 1, Axis::Z));
    return H;
}

}  // namespace wenduality
