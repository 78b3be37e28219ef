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

#include <algorithm>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "wenduality/errors.hpp"

namespace wenduality {

/// Single-site Pauli axis. The numeric value packs the symplectic bits
/// (bit 0 = X component, bit 1 = Z component), so Y = X|Z.
enum class Axis : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline constexpr bool has_x(Axis a) { return (static_cast<unsigned>(a) & 1u) != 0; }
inline constexpr bool has_z(Axis a) { return (static_cast<unsigned>(a) & 2u) != 0; }

inline char axis_char(Axis a) {
    switch (a) {
        case Axis::I: return 'I';
        case Axis::X: return 'X';
        case Axis::Y: return 'Y';
        case Axis::Z: return 'Z';
    }
    return '?';
}

struct PauliFactor {
    int site;
    Axis axis;

    friend bool operator==(const PauliFactor&, const PauliFactor&) = default;
};

/// A product of single-site Pauli operators times a phase i^k.
///
/// Factors are kept sorted by site with at most one factor per site; any
/// duplicates passed to the constructor are multiplied out in the order given.
/// Internally a factor with bits (x, z) denotes i^{xz} X^x Z^z, which is the
/// usual Pauli matrix (Y = i X Z).
class PauliString {
public:
    PauliString() = default;

    PauliString(std::initializer_list<PauliFactor> factors, int phase_power = 0)
        : PauliString(std::span<const PauliFactor>(factors.begin(), factors.size()), phase_power) {}

    explicit PauliString(std::span<const PauliFactor> factors, int phase_power = 0)
        : phase_(mod4(phase_power)) {
        for (const auto& f : factors) {
            if (f.site < 0) throw SiteOutOfRange("negative site index in Pauli factor");
            *this = *this * PauliString::single(f.site, f.axis);
        }
    }

    static PauliString single(int site, Axis axis) {
        if (site < 0) throw SiteOutOfRange("negative site index in Pauli factor");
        PauliString p;
        if (axis != Axis::I) p.factors_.push_back({site, axis});
        return p;
    }

    static PauliString identity(int phase_power = 0) {
        PauliString p;
        p.phase_ = mod4(phase_power);
        return p;
    }

    const std::vector<PauliFactor>& factors() const { return factors_; }

    /// Phase as a power of i in [0, 4).
    int phase_power() const { return phase_; }

    std::complex<double> phase() const {
        static constexpr std::complex<double> kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return kPowers[phase_];
    }

    bool is_identity() const { return factors_.empty(); }
    bool is_hermitian() const { return phase_ % 2 == 0; }
    std::size_t weight() const { return factors_.size(); }

    int max_site() const { return factors_.empty() ? -1 : factors_.back().site; }

    Axis axis_at(int site) const {
        auto it = std::lower_bound(factors_.begin(), factors_.end(), site,
                                   [](const PauliFactor& f, int s) { return f.site < s; });
        return (it != factors_.end() && it->site == site) ? it->axis : Axis::I;
    }

    PauliString with_phase(int phase_power) const {
        PauliString p = *this;
        p.phase_ = mod4(phase_power);
        return p;
    }

    PauliString times_phase(int phase_power) const { return with_phase(phase_ + phase_power); }

    friend PauliString operator*(const PauliString& a, const PauliString& b) {
        PauliString out;
        int phase = a.phase_ + b.phase_;
        out.factors_.reserve(a.factors_.size() + b.factors_.size());
        auto ia = a.factors_.begin();
        auto ib = b.factors_.begin();
        while (ia != a.factors_.end() || ib != b.factors_.end()) {
            if (ib == b.factors_.end() || (ia != a.factors_.end() && ia->site < ib->site)) {
                out.factors_.push_back(*ia++);
            } else if (ia == a.factors_.end() || ib->site < ia->site) {
                out.factors_.push_back(*ib++);
            } else {
                Axis merged = Axis::I;
                phase += single_site_product(ia->axis, ib->axis, merged);
                if (merged != Axis::I) out.factors_.push_back({ia->site, merged});
                ++ia;
                ++ib;
            }
        }
        out.phase_ = mod4(phase);
        return out;
    }

    PauliString& operator*=(const PauliString& other) { return *this = *this * other; }

    /// True when the two strings commute (phases are irrelevant).
    bool commutes_with(const PauliString& other) const {
        int anti = 0;
        auto ia = factors_.begin();
        auto ib = other.factors_.begin();
        while (ia != factors_.end() && ib != other.factors_.end()) {
            if (ia->site < ib->site) {
                ++ia;
            } else if (ib->site < ia->site) {
                ++ib;
            } else {
                if (ia->axis != ib->axis) anti ^= 1;
                ++ia;
                ++ib;
            }
        }
        return anti == 0;
    }

    friend bool operator==(const PauliString&, const PauliString&) = default;

    std::string to_string() const {
        static const char* kPhase[4] = {"+", "+i", "-", "-i"};
        std::string s = kPhase[phase_];
        if (factors_.empty()) return s + "I";
        for (const auto& f : factors_) {
            s += axis_char(f.axis);
            s += std::to_string(f.site);
        }
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const PauliString& p) { return os << p.to_string(); }

private:
    static int mod4(int k) { return ((k % 4) + 4) % 4; }

    // P(x1,z1) P(x2,z2) = i^{x1 z1 + x2 z2 + 2 z1 x2 - x3 z3} P(x3,z3).
    static int single_site_product(Axis a, Axis b, Axis& out) {
        const int x1 = has_x(a), z1 = has_z(a), x2 = has_x(b), z2 = has_z(b);
        const int x3 = x1 ^ x2, z3 = z1 ^ z2;
        out = static_cast<Axis>(x3 | (z3 << 1));
        return x1 * z1 + x2 * z2 + 2 * z1 * x2 - x3 * z3;
    }

    std::vector<PauliFactor> factors_;
    int phase_ = 0;
};

/// Bit-mask form of a Pauli string on at most 63 sites:
/// P|b> = coeff * (-1)^{popcount(b & zmask)} |b ^ xmask>.
struct CompiledPauli {
    std::uint64_t xmask = 0;
    std::uint64_t zmask = 0;
    std::complex<double> coeff{1.0, 0.0};

    static CompiledPauli from(const PauliString& p, int num_sites) {
        if (num_sites > 63) throw TooLarge("bit-mask Pauli strings support at most 63 sites");
        CompiledPauli c;
        int ny = 0;
        for (const auto& f : p.factors()) {
            if (f.site >= num_sites) {
                throw SiteOutOfRange("Pauli factor on site " + std::to_string(f.site) +
                                     " outside a register of " + std::to_string(num_sites) + " sites");
            }
            if (has_x(f.axis)) c.xmask |= std::uint64_t{1} << f.site;
            if (has_z(f.axis)) c.zmask |= std::uint64_t{1} << f.site;
            if (f.axis == Axis::Y) ++ny;
        }
        c.coeff = p.times_phase(ny).phase();
        return c;
    }

    bool has_real_coeff() const { return coeff.imag() == 0.0; }

    static double parity_sign(std::uint64_t bits) {
        return (__builtin_popcountll(bits) & 1) ? -1.0 : 1.0;
    }
};

}  // namespace wenduality
