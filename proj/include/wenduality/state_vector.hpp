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
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <type_traits>
#include <vector>

#include "wenduality/errors.hpp"
#include "wenduality/pauli.hpp"

namespace wenduality {

using cplx = std::complex<double>;

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

template <class Scalar>
inline double abs2(const Scalar& x) {
    if constexpr (is_complex<Scalar>::value) return std::norm(x);
    else return x * x;
}

template <class Scalar>
inline Scalar conj_if_complex(const Scalar& x) {
    if constexpr (is_complex<Scalar>::value) return std::conj(x);
    else return x;
}

/// Amplitudes over the sigma^z basis of `num_sites` spins. Bit k of the basis
/// index is site k; bit value 1 means spin down (sigma^z = -1).
template <class Scalar>
class BasicStateVector {
public:
    BasicStateVector() = default;

    explicit BasicStateVector(int num_sites) : num_sites_(num_sites) {
        if (num_sites < 0 || num_sites > 30) throw TooLarge("state vectors support 0..30 spins");
        amplitudes_.assign(std::size_t{1} << num_sites, Scalar{});
    }

    static BasicStateVector basis_state(int num_sites, std::uint64_t index) {
        BasicStateVector v(num_sites);
        if (index >= v.dimension()) throw IndexOutOfRange("basis index out of range");
        v.amplitudes_[index] = Scalar{1};
        return v;
    }

    /// Equal-weight superposition; the sigma^x = +1 product state.
    static BasicStateVector uniform(int num_sites) {
        BasicStateVector v(num_sites);
        const double a = 1.0 / std::sqrt(static_cast<double>(v.dimension()));
        for (auto& x : v.amplitudes_) x = Scalar{a};
        return v;
    }

    /// Normalized vector with i.i.d. uniform(-1, 1) components (both parts when complex).
    static BasicStateVector random(int num_sites, std::uint64_t seed) {
        BasicStateVector v(num_sites);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (auto& x : v.amplitudes_) {
            if constexpr (is_complex<Scalar>::value) {
                const double re = dist(rng);
                x = Scalar{re, dist(rng)};
            } else {
                x = dist(rng);
            }
        }
        v.normalize();
        return v;
    }

    int num_sites() const { return num_sites_; }
    std::size_t dimension() const { return amplitudes_.size(); }

    std::span<Scalar> amplitudes() { return amplitudes_; }
    std::span<const Scalar> amplitudes() const { return amplitudes_; }
    Scalar& operator[](std::size_t i) { return amplitudes_[i]; }
    const Scalar& operator[](std::size_t i) const { return amplitudes_[i]; }

    double norm() const {
        double s = 0.0;
        for (const auto& x : amplitudes_) s += abs2(x);
        return std::sqrt(s);
    }

    void normalize() {
        const double n = norm();
        if (n == 0.0) throw NumericalFailure("cannot normalize the zero vector");
        for (auto& x : amplitudes_) x /= n;
    }

    bool is_normalized(double tol = 1e-12) const { return std::abs(norm() - 1.0) <= tol; }

    BasicStateVector& operator+=(const BasicStateVector& o) {
        check_same(o);
        for (std::size_t i = 0; i < amplitudes_.size(); ++i) amplitudes_[i] += o.amplitudes_[i];
        return *this;
    }

    BasicStateVector& operator-=(const BasicStateVector& o) {
        check_same(o);
        for (std::size_t i = 0; i < amplitudes_.size(); ++i) amplitudes_[i] -= o.amplitudes_[i];
        return *this;
    }

    BasicStateVector& operator*=(Scalar s) {
        for (auto& x : amplitudes_) x *= s;
        return *this;
    }

    template <class Other>
    BasicStateVector<Other> cast() const {
        BasicStateVector<Other> out(num_sites_);
        for (std::size_t i = 0; i < amplitudes_.size(); ++i) out[i] = Other(amplitudes_[i]);
        return out;
    }

    void check_same(const BasicStateVector& o) const {
        if (o.num_sites_ != num_sites_) throw DimensionMismatch("state vectors on different numbers of spins");
    }

private:
    int num_sites_ = 0;
    std::vector<Scalar> amplitudes_;
};

using StateVector = BasicStateVector<cplx>;
using RealStateVector = BasicStateVector<double>;

/// <a|b>, conjugating a.
template <class Scalar>
Scalar inner(const BasicStateVector<Scalar>& a, const BasicStateVector<Scalar>& b) {
    a.check_same(b);
    Scalar s{};
    for (std::size_t i = 0; i < a.dimension(); ++i) s += conj_if_complex(a[i]) * b[i];
    return s;
}

/// out += scale * P in, with P in bit-mask form.
template <class Scalar>
void accumulate_pauli(const CompiledPauli& p, Scalar scale, std::span<const Scalar> in, std::span<Scalar> out) {
    Scalar c;
    if constexpr (is_complex<Scalar>::value) {
        c = scale * Scalar(p.coeff);
    } else {
        if (!p.has_real_coeff()) throw NumericalFailure("complex Pauli coefficient on a real state vector");
        c = scale * p.coeff.real();
    }
    const std::size_t dim = in.size();
    for (std::size_t b = 0; b < dim; ++b) {
        const double sign = CompiledPauli::parity_sign(b & p.zmask);
        out[b ^ p.xmask] += c * sign * in[b];
    }
}

/// Returns ps * v. The input is left untouched.
template <class Scalar>
BasicStateVector<Scalar> apply_pauli_string(const PauliString& ps, const BasicStateVector<Scalar>& v) {
    const auto compiled = CompiledPauli::from(ps, v.num_sites());
    BasicStateVector<Scalar> out(v.num_sites());
    accumulate_pauli<Scalar>(compiled, Scalar{1}, v.amplitudes(), out.amplitudes());
    return out;
}

/// <v|op|v>; always complex so the caller can inspect the imaginary part.
template <class Scalar>
cplx expectation(const BasicStateVector<Scalar>& v, const PauliString& op) {
    const auto p = CompiledPauli::from(op, v.num_sites());
    cplx s{0.0, 0.0};
    for (std::size_t b = 0; b < v.dimension(); ++b) {
        const double sign = CompiledPauli::parity_sign(b & p.zmask);
        s += std::conj(cplx(v[b ^ p.xmask])) * cplx(v[b]) * sign;
    }
    return s * p.coeff;
}

}  // namespace wenduality
