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

#include <array>
#include <string>
#include <vector>

#include "wenduality/errors.hpp"
#include "wenduality/pauli.hpp"

namespace wenduality {

enum class Boundary { Open, Periodic };

inline const char* to_string(Boundary b) { return b == Boundary::Open ? "open" : "periodic"; }

/// Square lattice of `rows` x `cols` spins. Sites are row-major,
/// site(r, c) = r * cols + c; e_x moves one column right, e_y one row down.
struct LatticeSpec {
    int rows = 0;
    int cols = 0;
    Boundary boundary = Boundary::Periodic;

    int site_count() const { return rows * cols; }

    void validate() const {
        if (rows < 2 || cols < 2) {
            throw InvalidSpec("lattice needs at least 2 rows and 2 columns, got " + std::to_string(rows) + "x" +
                              std::to_string(cols));
        }
        if (boundary == Boundary::Periodic && (rows < 3 || cols < 3)) {
            throw DegenerateLattice("periodic lattices need at least 3x3 so plaquette corners stay distinct");
        }
    }

    /// Site index of (r, c), wrapping on periodic lattices; -1 if it falls off an open lattice.
    int site(int r, int c) const {
        if (boundary == Boundary::Periodic) {
            r = ((r % rows) + rows) % rows;
            c = ((c % cols) + cols) % cols;
        } else if (r < 0 || r >= rows || c < 0 || c >= cols) {
            return -1;
        }
        return r * cols + c;
    }

    int row_of(int site) const { return site / cols; }
    int col_of(int site) const { return site % cols; }

    /// Number of plaquette columns / rows.
    int plaquette_cols() const { return boundary == Boundary::Periodic ? cols : cols - 1; }
    int plaquette_rows() const { return boundary == Boundary::Periodic ? rows : rows - 1; }
    int plaquette_count() const { return plaquette_rows() * plaquette_cols(); }

    /// Index of the plaquette whose base site is (r, c), or -1 if none.
    int plaquette_index(int r, int c) const {
        if (boundary == Boundary::Periodic) {
            r = ((r % rows) + rows) % rows;
            c = ((c % cols) + cols) % cols;
        } else if (r < 0 || r >= rows - 1 || c < 0 || c >= cols - 1) {
            return -1;
        }
        return r * plaquette_cols() + c;
    }

    std::string label() const {
        return std::to_string(rows) + "x" + std::to_string(cols) + (boundary == Boundary::Open ? "o" : "p");
    }

    friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;
};

/// Plaquette operator F = X(i) Y(i+e_x) X(i+e_x+e_y) Y(i+e_y).
struct Plaquette {
    int base_site = 0;
    std::array<int, 4> corners{};  // i, i+e_x, i+e_x+e_y, i+e_y
    static constexpr std::array<Axis, 4> axes{Axis::X, Axis::Y, Axis::X, Axis::Y};

    PauliString op() const {
        return PauliString({{corners[0], axes[0]}, {corners[1], axes[1]}, {corners[2], axes[2]}, {corners[3], axes[3]}});
    }
};

/// All plaquettes, ordered by base site.
inline std::vector<Plaquette> enumerate_plaquettes(const LatticeSpec& spec) {
    spec.validate();
    std::vector<Plaquette> out;
    out.reserve(static_cast<std::size_t>(spec.plaquette_count()));
    for (int r = 0; r < spec.plaquette_rows(); ++r) {
        for (int c = 0; c < spec.plaquette_cols(); ++c) {
            Plaquette p;
            p.base_site = spec.site(r, c);
            p.corners = {spec.site(r, c), spec.site(r, c + 1), spec.site(r + 1, c + 1), spec.site(r + 1, c)};
            out.push_back(p);
        }
    }
    return out;
}

/// For every site j, the plaquettes whose F anticommutes with sigma^x_j, read off
/// from the plaquette axes (a corner anticommutes with X unless its axis is X).
/// Entry order is [plaquette with j as its e_x corner, plaquette with j as its e_y corner].
struct SiteAdjacency {
    std::vector<int> as_ex_corner;  // -1 if absent
    std::vector<int> as_ey_corner;  // -1 if absent

    std::vector<int> anticommuting(int site) const {
        std::vector<int> out;
        if (as_ex_corner[site] >= 0) out.push_back(as_ex_corner[site]);
        if (as_ey_corner[site] >= 0) out.push_back(as_ey_corner[site]);
        return out;
    }
};

inline SiteAdjacency site_adjacency(const LatticeSpec& spec, const std::vector<Plaquette>& plaquettes) {
    SiteAdjacency adj;
    adj.as_ex_corner.assign(static_cast<std::size_t>(spec.site_count()), -1);
    adj.as_ey_corner.assign(static_cast<std::size_t>(spec.site_count()), -1);
    for (int p = 0; p < static_cast<int>(plaquettes.size()); ++p) {
        for (int k = 0; k < 4; ++k) {
            if (Plaquette::axes[k] == Axis::X) continue;
            auto& slot = (k == 1) ? adj.as_ex_corner : adj.as_ey_corner;
            slot[plaquettes[p].corners[k]] = p;
        }
    }
    return adj;
}

enum class ChainBoundary { OpenChain, PeriodicChain };

inline const char* to_string(ChainBoundary b) { return b == ChainBoundary::OpenChain ? "open" : "periodic"; }

/// One dual Ising chain: plaquettes ordered along e_x - e_y, and the sites
/// whose sigma^x links consecutive plaquettes. links[k] joins plaquettes[k]
/// and plaquettes[k+1]; a periodic chain has one extra link closing the loop.
struct Chain {
    std::vector<int> plaquettes;
    std::vector<int> links;
    ChainBoundary boundary = ChainBoundary::OpenChain;

    int length() const { return static_cast<int>(plaquettes.size()); }
};

struct ChainDecomposition {
    std::vector<Chain> chains;
    std::vector<int> chain_of;     // plaquette -> chain index
    std::vector<int> position_of;  // plaquette -> position within its chain
    int plaquette_count = 0;

    friend bool operator==(const ChainDecomposition& a, const ChainDecomposition& b) {
        if (a.chains.size() != b.chains.size() || a.chain_of != b.chain_of || a.position_of != b.position_of) {
            return false;
        }
        for (std::size_t i = 0; i < a.chains.size(); ++i) {
            if (a.chains[i].plaquettes != b.chains[i].plaquettes || a.chains[i].links != b.chains[i].links ||
                a.chains[i].boundary != b.chains[i].boundary) {
                return false;
            }
        }
        return true;
    }
};

/// Partition the plaquettes into dual chains. Two plaquettes are linked when a
/// single sigma^x anticommutes with both of them; the link runs from the
/// plaquette holding the site as its e_x corner to the one holding it as its
/// e_y corner, i.e. along e_x - e_y. Periodic orbits are found by walking the
/// links, so their lengths are whatever the geometry produces.
inline ChainDecomposition chain_decompose(const LatticeSpec& spec) {
    const auto plaquettes = enumerate_plaquettes(spec);
    const auto adj = site_adjacency(spec, plaquettes);
    const int np = static_cast<int>(plaquettes.size());

    std::vector<int> next(np, -1), prev(np, -1), next_link(np, -1);
    for (int j = 0; j < spec.site_count(); ++j) {
        const int p = adj.as_ex_corner[j];
        const int q = adj.as_ey_corner[j];
        if (p < 0 || q < 0) continue;
        if (next[p] >= 0 || prev[q] >= 0) throw NumericalFailure("plaquette linked twice in the same direction");
        next[p] = q;
        prev[q] = p;
        next_link[p] = j;
    }

    ChainDecomposition out;
    out.plaquette_count = np;
    out.chain_of.assign(np, -1);
    out.position_of.assign(np, -1);
    for (int start = 0; start < np; ++start) {
        if (out.chain_of[start] >= 0) continue;
        // Walk back to the head; a periodic orbit returns to `start`.
        int head = start;
        bool cyclic = false;
        while (prev[head] >= 0) {
            head = prev[head];
            if (head == start) {
                cyclic = true;
                break;
            }
        }
        Chain chain;
        chain.boundary = cyclic ? ChainBoundary::PeriodicChain : ChainBoundary::OpenChain;
        const int chain_index = static_cast<int>(out.chains.size());
        int p = head;
        do {
            out.chain_of[p] = chain_index;
            out.position_of[p] = chain.length();
            chain.plaquettes.push_back(p);
            if (next[p] >= 0) chain.links.push_back(next_link[p]);
            p = next[p];
        } while (p >= 0 && p != head);
        out.chains.push_back(std::move(chain));
    }
    return out;
}

}  // namespace wenduality
