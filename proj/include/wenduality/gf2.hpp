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

#include <cstdint>
#include <optional>
#include <vector>

#include "wenduality/pauli.hpp"

namespace wenduality::gf2 {

/// Dense bit vector over GF(2).
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

    std::size_t size() const { return bits_; }
    bool get(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
    void set(std::size_t i, bool v = true) {
        const std::uint64_t m = std::uint64_t{1} << (i % 64);
        if (v) words_[i / 64] |= m; else words_[i / 64] &= ~m;
    }
    void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }

    BitVector& operator^=(const BitVector& o) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
        return *this;
    }

    bool any() const {
        for (auto w : words_) if (w) return true;
        return false;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }

    /// Lowest set bit, or size() when empty.
    std::size_t first_set() const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            if (words_[w]) return w * 64 + static_cast<std::size_t>(__builtin_ctzll(words_[w]));
        }
        return bits_;
    }

    friend bool operator==(const BitVector&, const BitVector&) = default;

private:
    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Symplectic (x | z) encoding of a Pauli string on `num_sites` sites.
inline BitVector symplectic(const PauliString& p, int num_sites) {
    BitVector v(2 * static_cast<std::size_t>(num_sites));
    for (const auto& f : p.factors()) {
        if (f.site >= num_sites) throw SiteOutOfRange("Pauli factor outside lattice");
        if (has_x(f.axis)) v.set(static_cast<std::size_t>(f.site));
        if (has_z(f.axis)) v.set(static_cast<std::size_t>(num_sites + f.site));
    }
    return v;
}

namespace detail {

struct Reduced {
    // rows[i] = combination[i] applied to the input vectors; rows with a pivot
    // come first, the remaining rows are zero and their combinations span the kernel.
    std::vector<BitVector> rows;
    std::vector<BitVector> combinations;
    std::vector<std::size_t> pivots;
};

inline Reduced reduce(const std::vector<BitVector>& vectors) {
    Reduced r;
    const std::size_t n = vectors.size();
    r.rows = vectors;
    r.combinations.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        BitVector c(n);
        c.set(i);
        r.combinations.push_back(std::move(c));
    }
    std::size_t rank = 0;
    const std::size_t width = n ? vectors.front().size() : 0;
    for (std::size_t col = 0; col < width && rank < n; ++col) {
        std::size_t pivot = rank;
        while (pivot < n && !r.rows[pivot].get(col)) ++pivot;
        if (pivot == n) continue;
        std::swap(r.rows[pivot], r.rows[rank]);
        std::swap(r.combinations[pivot], r.combinations[rank]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i != rank && r.rows[i].get(col)) {
                r.rows[i] ^= r.rows[rank];
                r.combinations[i] ^= r.combinations[rank];
            }
        }
        r.pivots.push_back(col);
        ++rank;
    }
    return r;
}

}  // namespace detail

/// Basis of the left kernel: combinations c with sum_k c_k vectors[k] = 0.
inline std::vector<BitVector> kernel(const std::vector<BitVector>& vectors) {
    auto r = detail::reduce(vectors);
    return {r.combinations.begin() + static_cast<std::ptrdiff_t>(r.pivots.size()), r.combinations.end()};
}

inline std::size_t rank(const std::vector<BitVector>& vectors) { return detail::reduce(vectors).pivots.size(); }

/// One combination c with sum_k c_k vectors[k] = target, if any.
inline std::optional<BitVector> solve(const std::vector<BitVector>& vectors, const BitVector& target) {
    auto r = detail::reduce(vectors);
    BitVector residual = target;
    BitVector combo(vectors.size());
    for (std::size_t i = 0; i < r.pivots.size(); ++i) {
        if (residual.get(r.pivots[i])) {
            residual ^= r.rows[i];
            combo ^= r.combinations[i];
        }
    }
    if (residual.any()) return std::nullopt;
    return combo;
}

}  // namespace wenduality::gf2
