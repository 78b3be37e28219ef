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
#include <string>
#include <vector>

#include "wenduality/errors.hpp"
#include "wenduality/lattice.hpp"
#include "wenduality/state_vector.hpp"
#include "wenduality/wen_model.hpp"

namespace wenduality {

inline constexpr double kImagTolerance = 1e-10;
inline constexpr double kBoundSlack = 1e-10;

enum class StringFlavor { OpenStringSigmaX, ClosedStringF };

inline const char* to_string(StringFlavor f) { return f == StringFlavor::OpenStringSigmaX ? "open" : "closed"; }

/// `length` sites (open string) or plaquettes (closed string) starting at
/// `anchor` and stepping by -e_x + e_y, i.e. (r, c) -> (r + 1, c - 1).
/// The dual of an open string of length n is tau^z tau^z at distance n; the
/// dual of a closed string is a product of n consecutive tau^x.
struct DiagonalSegment {
    int anchor = 0;
    int length = 1;
    StringFlavor flavor = StringFlavor::OpenStringSigmaX;
};

/// Site or plaquette indices covered by the segment. Periodic lattices wrap;
/// on open lattices every member must exist.
inline std::vector<int> segment_members(const LatticeSpec& spec, const DiagonalSegment& seg) {
    spec.validate();
    if (seg.length < 1) throw InvalidSpec("segment length must be at least 1");
    const bool sites = seg.flavor == StringFlavor::OpenStringSigmaX;
    const int rows = sites ? spec.rows : spec.plaquette_rows();
    const int cols = sites ? spec.cols : spec.plaquette_cols();
    const int count = rows * cols;
    if (seg.anchor < 0 || seg.anchor >= count) throw IndexOutOfRange("segment anchor out of range");
    const int r0 = seg.anchor / cols, c0 = seg.anchor % cols;
    std::vector<int> out;
    for (int n = 0; n < seg.length; ++n) {
        int r = r0 + n, c = c0 - n;
        if (spec.boundary == Boundary::Periodic) {
            r = ((r % rows) + rows) % rows;
            c = ((c % cols) + cols) % cols;
        } else if (r >= rows || c < 0) {
            throw IndexOutOfRange("segment leaves the open lattice");
        }
        const int idx = r * cols + c;
        for (int prev : out)
            if (prev == idx) throw InvalidSpec("segment longer than its diagonal");
        out.push_back(idx);
    }
    return out;
}

/// The string as a Pauli product; closed strings telescope through PauliString merging.
inline PauliString segment_operator(const LatticeSpec& spec, const DiagonalSegment& seg) {
    const auto members = segment_members(spec, seg);
    PauliString op;
    if (seg.flavor == StringFlavor::OpenStringSigmaX) {
        for (int j : members) op *= PauliString::single(j, Axis::X);
    } else {
        const auto plaquettes = enumerate_plaquettes(spec);
        for (int p : members) op *= plaquettes[static_cast<std::size_t>(p)].op();
    }
    return op;
}

/// All anchors whose segment of this length fits the lattice.
inline std::vector<int> segment_anchors(const LatticeSpec& spec, StringFlavor flavor, int length) {
    const bool sites = flavor == StringFlavor::OpenStringSigmaX;
    const int count = sites ? spec.site_count() : spec.plaquette_count();
    std::vector<int> out;
    for (int a = 0; a < count; ++a) {
        try {
            segment_members(spec, {a, length, flavor});
            out.push_back(a);
        } catch (const IndexOutOfRange&) {
        }
    }
    return out;
}

/// <v|op|v> for a normalized state. Throws NumericalFailure if a Hermitian
/// string comes out with an imaginary part above 1e-10.
template <class Scalar>
cplx expect_pauli_string(const BasicStateVector<Scalar>& v, const PauliString& op) {
    if (op.max_site() >= v.num_sites()) {
        throw SiteOutOfRange("operator site " + std::to_string(op.max_site()) + " outside " +
                             std::to_string(v.num_sites()) + " spins");
    }
    if (!v.is_normalized(1e-9)) throw InvalidSpec("state must be normalized");
    const cplx e = expectation(v, op);
    if (op.is_hermitian() && std::abs(e.imag()) > kImagTolerance)
        throw NumericalFailure("Hermitian string with imaginary expectation " + std::to_string(e.imag()));
    return e;
}

struct StringMeasurement {
    DiagonalSegment segment;
    double value = 0.0;
    double imag = 0.0;
    double g = 0.0;
    double h = 0.0;
    LatticeSpec lattice;
};

namespace detail {

template <class Scalar>
StringMeasurement measure_string(const BasicStateVector<Scalar>& v, const HamiltonianSpec& hs,
                                 const DiagonalSegment& seg) {
    const cplx e = expect_pauli_string(v, segment_operator(hs.lattice, seg));
    if (std::abs(e.real()) > 1.0 + kBoundSlack) throw NumericalFailure("string expectation outside [-1, 1]");
    return {seg, e.real(), e.imag(), hs.g, hs.h, hs.lattice};
}

}  // namespace detail

/// Open string: product of sigma^x over the segment's sites.
template <class Scalar>
StringMeasurement phi1(const BasicStateVector<Scalar>& v, const HamiltonianSpec& hs, DiagonalSegment seg) {
    if (seg.flavor != StringFlavor::OpenStringSigmaX) throw InvalidSpec("phi1 needs an open-string segment");
    return detail::measure_string(v, hs, seg);
}

/// Closed string: product of F over the segment's plaquettes.
template <class Scalar>
StringMeasurement phi2(const BasicStateVector<Scalar>& v, const HamiltonianSpec& hs, DiagonalSegment seg) {
    if (seg.flavor != StringFlavor::ClosedStringF) throw InvalidSpec("phi2 needs a closed-string segment");
    return detail::measure_string(v, hs, seg);
}

/// String expectation averaged over every anchor where the segment fits.
template <class Scalar>
double translation_averaged_string(const BasicStateVector<Scalar>& v, const HamiltonianSpec& hs,
                                   StringFlavor flavor, int length) {
    const auto anchors = segment_anchors(hs.lattice, flavor, length);
    if (anchors.empty()) throw IndexOutOfRange("no segment of this length fits the lattice");
    double s = 0.0;
    for (int a : anchors) s += detail::measure_string(v, hs, {a, length, flavor}).value;
    return s / static_cast<double>(anchors.size());
}

/// <F_i F_{i_n}> averaged over base plaquettes i whose partner n steps down
/// the diagonal exists.
template <class Scalar>
double FF_correlator(const BasicStateVector<Scalar>& v, const LatticeSpec& spec, int n) {
    if (n < 0) throw InvalidSpec("separation must be nonnegative");
    const auto plaquettes = enumerate_plaquettes(spec);
    double s = 0.0;
    int count = 0;
    for (int p = 0; p < static_cast<int>(plaquettes.size()); ++p) {
        std::vector<int> m;
        try {
            m = segment_members(spec, {p, n + 1, StringFlavor::ClosedStringF});
        } catch (const IndexOutOfRange&) {
            continue;
        }
        const auto op = plaquettes[static_cast<std::size_t>(p)].op() * plaquettes[static_cast<std::size_t>(m.back())].op();
        s += expect_pauli_string(v, op).real();
        ++count;
    }
    if (count == 0) throw IndexOutOfRange("separation does not fit the lattice");
    return s / count;
}

struct LocalExpectations {
    std::vector<double> sigma_x;  // per site
    std::vector<double> F;        // per plaquette
    double mean_sigma_x = 0.0;
    double mean_F = 0.0;
};

template <class Scalar>
LocalExpectations local_expectations(const BasicStateVector<Scalar>& v, const HamiltonianSpec& hs) {
    LocalExpectations out;
    for (int j = 0; j < hs.lattice.site_count(); ++j) {
        out.sigma_x.push_back(expect_pauli_string(v, PauliString::single(j, Axis::X)).real());
        out.mean_sigma_x += out.sigma_x.back();
    }
    for (const auto& p : enumerate_plaquettes(hs.lattice)) {
        out.F.push_back(expect_pauli_string(v, p.op()).real());
        out.mean_F += out.F.back();
    }
    out.mean_sigma_x /= static_cast<double>(out.sigma_x.size());
    if (!out.F.empty()) out.mean_F /= static_cast<double>(out.F.size());
    return out;
}

}  // namespace wenduality
