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
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "wenduality/errors.hpp"
#include "wenduality/pauli_sum.hpp"
#include "wenduality/state_vector.hpp"

namespace wenduality {

inline constexpr double kDegeneracyTolerance = 1e-8;

/// First level strictly above the ground band, minus E0. Levels within `tol`
/// of E0 count as ground space. Returns NaN when no level leaves the band.
inline double gap_above_ground(const std::vector<double>& ascending, double tol = kDegeneracyTolerance) {
    if (ascending.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double e0 = ascending.front();
    for (double e : ascending) {
        if (e - e0 > tol) return e - e0;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

inline int ground_multiplicity(const std::vector<double>& ascending, double tol = kDegeneracyTolerance) {
    int m = 0;
    for (double e : ascending) {
        if (e - ascending.front() > tol) break;
        ++m;
    }
    return m;
}

struct SpectrumResult {
    std::vector<double> eigenvalues;         // ascending
    std::vector<RealStateVector> eigenvectors;  // empty unless requested
    double ground_energy = 0.0;
    double gap = std::numeric_limits<double>::quiet_NaN();
    int ground_degeneracy = 0;
    int iterations = 0;  // Lanczos matrix-vector products (0 for dense)
    bool dense = false;

    void finalize(double tol = kDegeneracyTolerance) {
        ground_energy = eigenvalues.empty() ? 0.0 : eigenvalues.front();
        gap = gap_above_ground(eigenvalues, tol);
        ground_degeneracy = ground_multiplicity(eigenvalues, tol);
    }
};

struct LanczosOptions {
    int max_krylov = 160;          // basis size before an explicit restart
    int max_restarts = 60;
    double residual_tol = 1e-10;   // ||H x - theta x|| on the converged Ritz pair
    std::uint64_t seed = 0x5eed5eedULL;
};

namespace detail {

template <class Vec>
void orthogonalize(Vec& w, const std::vector<Vec>& basis) {
    // Two passes of classical Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : basis) {
            const auto c = inner(q, w);
            for (std::size_t i = 0; i < w.dimension(); ++i) w[i] -= c * q[i];
        }
    }
}

}  // namespace detail

/// Lowest eigenpairs of a real symmetric operator, one at a time with
/// deflation: each run works in the orthogonal complement of the pairs
/// already locked, so degenerate levels come out with their multiplicity.
/// Each run is a restarted Lanczos iteration with full reorthogonalization.
/// Start vectors are deterministic pseudo-random vectors, so runs repeat
/// bit-for-bit for a given floating-point environment.
class DeflatedLanczos {
public:
    DeflatedLanczos(const PauliSum& op, LanczosOptions opts = {}) : op_(op), opts_(opts) {
        if (!op.is_real()) throw NumericalFailure("Lanczos path expects a real symmetric operator");
    }

    /// Computes the next lowest eigenpair in the complement of those found so far.
    /// Returns false if the complement is empty.
    bool next() {
        const int n = op_.num_sites();
        if (locked_.size() >= op_.dimension()) return false;
        RealStateVector v = RealStateVector::random(n, opts_.seed + locked_.size());
        detail::orthogonalize(v, locked_);
        if (v.norm() < 1e-12) return false;
        v.normalize();

        double last_residual = std::numeric_limits<double>::infinity();
        for (int restart = 0; restart <= opts_.max_restarts; ++restart) {
            std::vector<RealStateVector> basis;
            std::vector<double> alpha, beta;
            basis.push_back(v);
            double theta = 0.0;
            Eigen::VectorXd ritz;
            bool converged = false;
            const int m_max = static_cast<int>(std::min<std::size_t>(opts_.max_krylov, op_.dimension() - locked_.size()));
            for (int j = 0; j < m_max; ++j) {
                RealStateVector w = op_.apply(basis[j]);
                ++matvecs_;
                detail::orthogonalize(w, locked_);
                const double a = inner(basis[j], w);
                alpha.push_back(a);
                detail::orthogonalize(w, basis);
                detail::orthogonalize(w, locked_);
                const double b = w.norm();

                Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
                Eigen::VectorXd sub = beta.empty() ? Eigen::VectorXd()
                                                   : Eigen::Map<Eigen::VectorXd>(beta.data(), static_cast<Eigen::Index>(beta.size()));
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
                tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
                theta = tri.eigenvalues()(0);
                ritz = tri.eigenvectors().col(0);
                last_residual = std::abs(b * ritz(ritz.size() - 1));
                const bool breakdown = b < 1e-12;
                if (last_residual < opts_.residual_tol || breakdown || j + 1 == m_max) {
                    converged = last_residual < opts_.residual_tol || breakdown;
                    if (converged || j + 1 == m_max) break;
                }
                beta.push_back(b);
                for (std::size_t i = 0; i < w.dimension(); ++i) w[i] /= b;
                basis.push_back(std::move(w));
            }
            RealStateVector x(n);
            for (Eigen::Index i = 0; i < ritz.size(); ++i) {
                const double c = ritz(i);
                const auto& q = basis[static_cast<std::size_t>(i)];
                for (std::size_t t = 0; t < x.dimension(); ++t) x[t] += c * q[t];
            }
            detail::orthogonalize(x, locked_);
            x.normalize();
            if (converged) {
                values_.push_back(theta);
                locked_.push_back(std::move(x));
                return true;
            }
            v = std::move(x);
        }
        throw NotConverged("Lanczos did not reach the residual tolerance", matvecs_, last_residual);
    }

    const std::vector<double>& values() const { return values_; }
    const std::vector<RealStateVector>& vectors() const { return locked_; }
    int matvecs() const { return matvecs_; }

private:
    const PauliSum& op_;
    LanczosOptions opts_;
    std::vector<double> values_;
    std::vector<RealStateVector> locked_;
    int matvecs_ = 0;
};

/// Sorted eigenpairs from the deflated runs (runs may lock levels slightly out of order).
inline SpectrumResult lanczos_lowest(const PauliSum& op, int k, bool want_vectors, LanczosOptions opts = {},
                                     bool extend_until_gap = true, double tol = kDegeneracyTolerance) {
    if (k < 1) throw InvalidSpec("need at least one eigenvalue");
    DeflatedLanczos solver(op, opts);
    while (static_cast<int>(solver.values().size()) < k && solver.next()) {}
    if (extend_until_gap) {
        // Keep going until some level leaves the ground band so the gap is defined.
        auto sorted = solver.values();
        std::sort(sorted.begin(), sorted.end());
        while (std::isnan(gap_above_ground(sorted, tol)) && solver.next()) {
            sorted = solver.values();
            std::sort(sorted.begin(), sorted.end());
        }
    }
    std::vector<std::size_t> order(solver.values().size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return solver.values()[a] < solver.values()[b]; });
    SpectrumResult r;
    for (auto i : order) {
        r.eigenvalues.push_back(solver.values()[i]);
        if (want_vectors) r.eigenvectors.push_back(solver.vectors()[i]);
    }
    r.iterations = solver.matvecs();
    r.finalize(tol);
    return r;
}

/// Dense diagonalization of a real symmetric operator; all 2^n levels.
inline SpectrumResult dense_spectrum(const PauliSum& op, bool want_vectors, int keep = -1,
                                     double tol = kDegeneracyTolerance) {
    const Eigen::MatrixXd m = op.dense_real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, want_vectors ? Eigen::ComputeEigenvectors
                                                                      : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalFailure("dense eigensolver failed");
    SpectrumResult r;
    r.dense = true;
    const auto count = keep < 0 ? es.eigenvalues().size() : std::min<Eigen::Index>(keep, es.eigenvalues().size());
    r.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    r.finalize(tol);
    r.eigenvalues.resize(static_cast<std::size_t>(count));
    if (want_vectors) {
        for (Eigen::Index c = 0; c < count; ++c) {
            RealStateVector v(op.num_sites());
            for (Eigen::Index i = 0; i < m.rows(); ++i) v[static_cast<std::size_t>(i)] = es.eigenvectors()(i, c);
            r.eigenvectors.push_back(std::move(v));
        }
    }
    return r;
}

}  // namespace wenduality
