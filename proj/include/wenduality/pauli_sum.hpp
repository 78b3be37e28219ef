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

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "wenduality/pauli.hpp"
#include "wenduality/state_vector.hpp"

namespace wenduality {

struct PauliTerm {
    double coeff = 0.0;
    PauliString op;
};

/// Hermitian operator sum_k coeff_k P_k on a register of `num_sites` spins.
/// Terms are compiled to bit masks once; application costs one pass over the
/// basis per term and no allocation beyond the output vector.
class PauliSum {
public:
    PauliSum() = default;
    explicit PauliSum(int num_sites) : num_sites_(num_sites) {}

    void add(double coeff, const PauliString& op) {
        if (!op.is_hermitian()) throw NotMappable("Hamiltonian terms must be Hermitian Pauli strings");
        if (op.max_site() >= num_sites_) throw SiteOutOfRange("term acts outside the register");
        if (coeff == 0.0) return;
        terms_.push_back({coeff, op});
        compiled_.push_back(CompiledPauli::from(op, num_sites_));
    }

    void add_constant(double c) { constant_ += c; }

    int num_sites() const { return num_sites_; }
    std::size_t dimension() const { return std::size_t{1} << num_sites_; }
    double constant() const { return constant_; }
    const std::vector<PauliTerm>& terms() const { return terms_; }

    /// True when every compiled term has a real coefficient, i.e. the matrix is real symmetric.
    bool is_real() const {
        for (const auto& c : compiled_) if (!c.has_real_coeff()) return false;
        return true;
    }

    template <class Scalar>
    void apply(std::span<const Scalar> in, std::span<Scalar> out) const {
        if (in.size() != dimension() || out.size() != dimension()) {
            throw DimensionMismatch("operator on " + std::to_string(num_sites_) +
                                    " spins applied to a vector of length " + std::to_string(in.size()));
        }
        for (std::size_t b = 0; b < out.size(); ++b) out[b] = Scalar(constant_) * in[b];
        for (std::size_t k = 0; k < terms_.size(); ++k) {
            accumulate_pauli<Scalar>(compiled_[k], Scalar(terms_[k].coeff), in, out);
        }
    }

    template <class Scalar>
    BasicStateVector<Scalar> apply(const BasicStateVector<Scalar>& v) const {
        BasicStateVector<Scalar> out(v.num_sites());
        if (v.num_sites() != num_sites_) {
            throw DimensionMismatch("operator on " + std::to_string(num_sites_) + " spins applied to a " +
                                    std::to_string(v.num_sites()) + "-spin state");
        }
        apply<Scalar>(v.amplitudes(), out.amplitudes());
        return out;
    }

    Eigen::MatrixXd dense_real() const {
        if (!is_real()) throw NumericalFailure("operator has complex matrix elements");
        const auto dim = static_cast<Eigen::Index>(dimension());
        Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim, dim) * constant_;
        for (std::size_t k = 0; k < terms_.size(); ++k) {
            const auto& p = compiled_[k];
            const double c = terms_[k].coeff * p.coeff.real();
            for (std::uint64_t b = 0; b < dimension(); ++b) {
                m(static_cast<Eigen::Index>(b ^ p.xmask), static_cast<Eigen::Index>(b)) +=
                    c * CompiledPauli::parity_sign(b & p.zmask);
            }
        }
        return m;
    }

    Eigen::MatrixXcd dense() const {
        const auto dim = static_cast<Eigen::Index>(dimension());
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim) * constant_;
        for (std::size_t k = 0; k < terms_.size(); ++k) {
            const auto& p = compiled_[k];
            const cplx c = terms_[k].coeff * p.coeff;
            for (std::uint64_t b = 0; b < dimension(); ++b) {
                m(static_cast<Eigen::Index>(b ^ p.xmask), static_cast<Eigen::Index>(b)) +=
                    c * CompiledPauli::parity_sign(b & p.zmask);
            }
        }
        return m;
    }

private:
    int num_sites_ = 0;
    double constant_ = 0.0;
    std::vector<PauliTerm> terms_;
    std::vector<CompiledPauli> compiled_;
};

}  // namespace wenduality
