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

// Jordan-Wigner solution of transverse-field Ising chains.
//
// Majorana operators a_j = (prod_{l<j} tau^x_l) tau^z_j and
// b_j = (prod_{l<j} tau^x_l) tau^y_j give
//
//   tau^x_j = i a_j b_j,   tau^z_j tau^z_{j+1} = i b_j a_{j+1},
//   tau^z_{n-1} tau^z_0 = -P i b_{n-1} a_0,   P = prod_j tau^x_j,
//
// so in a sector of fixed P every chain here is H = (i/2) sum_jl M_jl a_j b_l
// with a real n x n matrix M. With M = U diag(sigma) V^T the mode energies are
// the singular values, the quasiparticle vacuum has energy -sum(sigma)/2, and
// its correlation matrix is G_jl = <i a_j b_l> = -(U V^T)_jl.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <queue>
#include <vector>

#include "wenduality/chain.hpp"
#include "wenduality/eigensolver.hpp"
#include "wenduality/errors.hpp"

namespace wenduality {

/// E_k = 2h sqrt((g_I - cos(k a))^2 + sin^2(k a)).
inline double dispersion(double g_I, double h, double k, double a = 1.0) {
    const double c = std::cos(k * a);
    const double s = std::sin(k * a);
    return 2.0 * h * std::sqrt((g_I - c) * (g_I - c) + s * s);
}

struct ContinuumParams {
    double m = 0.0;  // Majorana mass, (g_I - 1) / (2 h a^2)
    double c = 0.0;  // velocity, 2 h a
    double a = 1.0;  // lattice spacing
};

inline ContinuumParams continuum_params(double g_I, double h, double a = 1.0) {
    if (!(h > 0.0) || !(a > 0.0)) throw InvalidSpec("continuum parameters need h > 0 and a > 0");
    return {(g_I - 1.0) / (2.0 * h * a * a), 2.0 * h * a, a};
}

namespace ff {

/// Quadratic chain after Jordan-Wigner: fields gamma_j on every site, bonds
/// J_j between j and j+1, and an optional bond on (n-1, 0).
///   H = -sum gamma_j tau^x_j - sum J_j tau^z_j tau^z_{j+1} - J_w tau^z_{n-1} tau^z_0
struct QuadraticChain {
    std::vector<double> field;
    std::vector<double> bond;  // size n - 1
    std::optional<double> wrap;

    int size() const { return static_cast<int>(field.size()); }

    /// Uniform fields and bonds with a wrap bond of the same magnitude.
    bool uniform_periodic() const {
        if (!wrap || field.empty()) return false;
        for (double f : field) if (f != field.front()) return false;
        const double J = std::abs(*wrap);
        for (double b : bond) if (b != J) return false;
        return true;
    }
};

/// Quadratic form of a TFIMChainSpec. Boundary fields on an open chain are
/// rewritten as bonds to one extra field-free ancilla spin (index L) that closes
/// the chain into a ring; the ancilla's tau^z is conserved and the P = +1 sector
/// of the ring holds exactly one copy of the original spectrum.
inline QuadraticChain quadratic_form(const TFIMChainSpec& c) {
    c.validate();
    QuadraticChain q;
    const int L = c.length;
    q.field.assign(static_cast<std::size_t>(L), c.field);
    q.bond.assign(static_cast<std::size_t>(std::max(L - 1, 0)), c.bond);
    if (c.periodic()) {
        q.wrap = c.bond * c.twist;
    } else if (c.has_boundary_fields()) {
        q.field.push_back(0.0);
        q.bond.push_back(c.bond * c.tail);
        q.wrap = c.bond * c.head;
    }
    return q;
}

/// Sectors a spec needs: both parities for a ring, P = +1 for the ancilla ring, none for an open chain.
inline std::vector<int> physical_parities(const TFIMChainSpec& c) {
    if (c.periodic()) return {+1, -1};
    return {+1};
}

inline Eigen::MatrixXd fermion_matrix(const QuadraticChain& q, int parity) {
    const int n = q.size();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) M(j, j) = -2.0 * q.field[static_cast<std::size_t>(j)];
    for (int j = 0; j + 1 < n; ++j) M(j + 1, j) = 2.0 * q.bond[static_cast<std::size_t>(j)];
    if (q.wrap) M(0, n - 1) += -2.0 * (*q.wrap) * parity;
    return M;
}

/// Fermion parity prod_j tau^x_j of the quasiparticle vacuum in sector `parity`;
/// sign(det M) (-1)^n, evaluated in closed form. Returns +1 when a zero mode makes it ambiguous.
inline int vacuum_parity(const QuadraticChain& q, int parity) {
    // det M (-1)^n = prod gamma_j + parity * J_w * prod J_j for the (possibly closed) bidiagonal.
    double log_a = 0.0, log_b = 0.0;
    int sign_a = 1, sign_b = 1;
    for (double g : q.field) {
        if (g == 0.0) { sign_a = 0; break; }
        log_a += std::log(std::abs(g));
        if (g < 0) sign_a = -sign_a;
    }
    if (!q.wrap || *q.wrap == 0.0) {
        sign_b = 0;
    } else {
        log_b = std::log(std::abs(*q.wrap));
        sign_b = (*q.wrap < 0 ? -1 : 1) * parity;
        for (double J : q.bond) {
            if (J == 0.0) { sign_b = 0; break; }
            log_b += std::log(std::abs(J));
            if (J < 0) sign_b = -sign_b;
        }
    }
    if (sign_a == 0 && sign_b == 0) return 1;
    if (sign_a == 0) return sign_b;
    if (sign_b == 0) return sign_a;
    if (sign_a == sign_b) return sign_a;
    if (std::abs(log_a - log_b) < 1e-14 * std::max(1.0, std::abs(log_a))) return 1;
    return log_a > log_b ? sign_a : sign_b;
}

namespace detail {

/// Singular values of a bidiagonal matrix given as the weights along its
/// alternating a-b path, from the zero-diagonal Golub-Kahan tridiagonal.
/// Eigenvalues only, so the cost is quadratic and edge modes keep absolute accuracy.
inline std::vector<double> path_singular_values(const std::vector<double>& weights) {
    const auto m = static_cast<Eigen::Index>(weights.size() + 1);
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd sub(m - 1);
    for (Eigen::Index i = 0; i + 1 < m; ++i) sub(i) = std::abs(weights[static_cast<std::size_t>(i)]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalFailure("tridiagonal eigensolver failed");
    const auto n = m / 2;
    std::vector<double> s(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = std::abs(es.eigenvalues()(m - n + i));
    std::sort(s.begin(), s.end());
    return s;
}

inline bool is_path(const QuadraticChain& q) {
    return !q.wrap || *q.wrap == 0.0 || q.field.back() == 0.0;
}

/// Weights along the a/b path: a_0 b_0 a_1 b_1 ... for an open chain; for a ring
/// whose last field vanishes the path starts at b_{n-1} through the wrap entry.
inline std::vector<double> path_weights(const QuadraticChain& q, int parity) {
    const int n = q.size();
    const bool closed = q.wrap && *q.wrap != 0.0;
    std::vector<double> w;
    // Closed case: b_{n-1} a_0 b_0 ... b_{n-2} a_{n-1}; the zero field on the last site ends the path.
    if (closed) w.push_back(2.0 * (*q.wrap) * parity);
    for (int j = 0; j < n; ++j) {
        if (closed && j == n - 1) break;
        w.push_back(2.0 * q.field[static_cast<std::size_t>(j)]);
        if (j + 1 < n) w.push_back(2.0 * q.bond[static_cast<std::size_t>(j)]);
    }
    return w;
}

/// Momenta of a uniform ring in a sector with fermion boundary sign s: e^{ikn} = s.
inline std::vector<double> ring_momenta(int n, int s) {
    std::vector<double> k(static_cast<std::size_t>(n));
    const double shift = s > 0 ? 0.0 : std::numbers::pi;
    for (int m = 0; m < n; ++m) k[static_cast<std::size_t>(m)] = (2.0 * std::numbers::pi * m + shift) / n;
    return k;
}

}  // namespace detail

/// Fermion boundary sign of a uniform ring in sector `parity`: M(0, n-1) = 2 J s.
inline int ring_fermion_sign(const QuadraticChain& q, int parity) {
    return (*q.wrap > 0 ? -1 : 1) * parity;
}

/// Mode energies (singular values of M), ascending.
inline std::vector<double> mode_energies(const QuadraticChain& q, int parity) {
    const int n = q.size();
    if (n == 0) return {};
    if (q.uniform_periodic() && n > 2) {
        const double G = q.field.front();
        const double J = std::abs(*q.wrap);
        std::vector<double> s;
        s.reserve(static_cast<std::size_t>(n));
        for (double k : detail::ring_momenta(n, ring_fermion_sign(q, parity))) {
            s.push_back(2.0 * std::sqrt(std::max(0.0, G * G - 2.0 * G * J * std::cos(k) + J * J)));
        }
        std::sort(s.begin(), s.end());
        return s;
    }
    if (detail::is_path(q)) return detail::path_singular_values(detail::path_weights(q, parity));
    if (n > 2048) throw TooLarge("dense singular value decomposition limited to 2048 modes");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(fermion_matrix(q, parity));
    std::vector<double> s(svd.singularValues().data(), svd.singularValues().data() + n);
    std::sort(s.begin(), s.end());
    return s;
}

/// Many-body levels of one parity sector: E_vac plus subset sums of the mode
/// energies, restricted to subsets of a fixed size parity.
struct SectorLevels {
    double vacuum_energy = 0.0;
    std::vector<double> modes;  // ascending
    int excitation_parity = 0;  // +1 even number of quasiparticles, -1 odd, 0 unrestricted

    /// The `count` lowest levels, ascending, with multiplicity.
    std::vector<double> lowest(std::size_t count) const {
        // Best-first enumeration of subsets in nondecreasing sum order: from a
        // subset whose largest index is i, either append i+1 or replace i by i+1.
        struct Node {
            double sum;
            int last;
            int size;
            bool operator>(const Node& o) const { return sum > o.sum; }
        };
        std::vector<double> out;
        const int n = static_cast<int>(modes.size());
        auto accept = [&](int size) { return excitation_parity == 0 || (size % 2 == 0) == (excitation_parity > 0); };
        if (accept(0)) out.push_back(vacuum_energy);
        std::priority_queue<Node, std::vector<Node>, std::greater<>> heap;
        if (n > 0) heap.push({modes[0], 0, 1});
        while (out.size() < count && !heap.empty()) {
            const Node t = heap.top();
            heap.pop();
            if (accept(t.size)) out.push_back(vacuum_energy + t.sum);
            if (t.last + 1 < n) {
                heap.push({t.sum + modes[static_cast<std::size_t>(t.last + 1)], t.last + 1, t.size + 1});
                heap.push({t.sum - modes[static_cast<std::size_t>(t.last)] + modes[static_cast<std::size_t>(t.last + 1)],
                           t.last + 1, t.size});
            }
        }
        return out;
    }

    /// Every level (2^n or 2^(n-1) of them), ascending.
    std::vector<double> all() const {
        const int n = static_cast<int>(modes.size());
        if (n > 24) throw TooLarge("full many-body spectrum limited to 24 modes");
        std::vector<double> out;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            const int size = __builtin_popcountll(mask);
            if (excitation_parity != 0 && (size % 2 == 0) != (excitation_parity > 0)) continue;
            double e = vacuum_energy;
            for (int k = 0; k < n; ++k) if ((mask >> k) & 1u) e += modes[static_cast<std::size_t>(k)];
            out.push_back(e);
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

inline SectorLevels sector_levels(const QuadraticChain& q, int parity) {
    SectorLevels s;
    s.modes = mode_energies(q, parity);
    double sum = 0.0;
    for (double e : s.modes) sum += e;
    s.vacuum_energy = -0.5 * sum;
    s.excitation_parity = q.wrap ? parity * vacuum_parity(q, parity) : 0;
    return s;
}

}  // namespace ff

/// Levels of a chain spec restricted to one tau^x-parity sector (PeriodicChain only).
inline ff::SectorLevels chain_sector_levels(const TFIMChainSpec& c, int parity) {
    if (!c.periodic()) throw InvalidSpec("parity sectors apply to periodic chains");
    return ff::sector_levels(ff::quadratic_form(c), parity);
}

/// All sectors needed to list the spectrum of a chain spec.
inline std::vector<ff::SectorLevels> chain_levels(const TFIMChainSpec& c) {
    const auto q = ff::quadratic_form(c);
    std::vector<ff::SectorLevels> out;
    for (int p : ff::physical_parities(c)) out.push_back(ff::sector_levels(q, p));
    return out;
}

/// Full many-body spectrum of a chain from its mode energies and parity rules.
inline std::vector<double> manybody_spectrum(const TFIMChainSpec& c) {
    std::vector<double> out;
    for (const auto& s : chain_levels(c)) {
        auto v = s.all();
        out.insert(out.end(), v.begin(), v.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// The `count` lowest many-body levels across all sectors, ascending.
inline std::vector<double> manybody_lowest(const TFIMChainSpec& c, std::size_t count) {
    std::vector<double> out;
    for (const auto& s : chain_levels(c)) {
        auto v = s.lowest(count);
        out.insert(out.end(), v.begin(), v.end());
    }
    std::sort(out.begin(), out.end());
    if (out.size() > count) out.resize(count);
    return out;
}

/// First level above the ground band minus the ground energy (degeneracy tolerance 1e-8).
inline double manybody_gap(const TFIMChainSpec& c, double tol = kDegeneracyTolerance) {
    // Enough levels to step over an exactly degenerate ground band.
    for (std::size_t count = 4;; count *= 4) {
        const auto levels = manybody_lowest(c, count);
        const double gap = gap_above_ground(levels, tol);
        if (!std::isnan(gap) || levels.size() < count) return gap;
    }
}

enum class ParitySector { Even, Odd, OpenNA };

inline const char* to_string(ParitySector p) {
    switch (p) {
        case ParitySector::Even: return "even";
        case ParitySector::Odd: return "odd";
        default: return "open";
    }
}

enum class BdGMethod { Auto, RealSpace, Momentum };

/// Ground state of one chain in free-fermion form. Sites are 0-based.
/// G(i, j) = <i a_i b_j>, so G(i, i) = <tau^x_i>. For open chains with boundary
/// fields, the matrix also covers the ancilla at index `length`.
struct BdGSolution {
    TFIMChainSpec chain;
    std::vector<double> energies;  // single-particle mode energies, ascending
    double ground_energy = 0.0;
    ParitySector sector = ParitySector::OpenNA;
    int parity = 0;  // tau^x-parity sector that holds the state (0 for open chains)

    double G(int i, int j) const {
        if (circulant_) {
            const int d = i - j;
            return toeplitz_[static_cast<std::size_t>(d + size_ - 1)];
        }
        return dense_(i, j);
    }

    /// Sub-block G[r0 .. r0+rows, c0 .. c0+cols).
    Eigen::MatrixXd block(int r0, int c0, int rows, int cols) const {
        if (!circulant_) return dense_.block(r0, c0, rows, cols);
        Eigen::MatrixXd m(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) m(r, c) = G(r0 + r, c0 + c);
        return m;
    }

    /// Number of Majorana pairs described by G (length, or length + 1 with an ancilla).
    int size() const { return size_; }
    bool momentum_space() const { return circulant_; }
    const Eigen::MatrixXd& dense() const { return dense_; }

    // Filled by bdg_solve.
    bool circulant_ = false;
    int size_ = 0;
    Eigen::MatrixXd dense_;
    std::vector<double> toeplitz_;  // G(d) for d = i - j in [-(n-1), n-1]
};

namespace ff {

/// G = -U D V^T with D = diag(+-1): the quasiparticle vacuum, or with the
/// softest mode occupied when the sector needs an odd number of quasiparticles.
inline Eigen::MatrixXd correlation_matrix(const QuadraticChain& q, int parity, bool occupy_softest) {
    const int n = q.size();
    if (n > 2048) throw TooLarge("real-space correlation matrix limited to 2048 sites");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(fermion_matrix(q, parity), Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success) throw NumericalFailure("singular value decomposition failed");
    Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
    if (occupy_softest) d(n - 1) = -1.0;  // singular values come out descending
    Eigen::MatrixXd G = -svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose();
    const double err = n > 512 ? 0.0 : (G * G.transpose() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (err > 1e-8) throw NumericalFailure("correlation matrix not orthogonal (deviation " + std::to_string(err) + ")");
    return G;
}

/// G(d), d = i - j in [-(n-1), n-1], of a uniform ring in momentum space.
inline std::vector<double> ring_toeplitz(const QuadraticChain& q, int parity, bool occupy_softest) {
    const int n = q.size();
    const double Gam = q.field.front();
    const double J = std::abs(*q.wrap);
    const int s = ring_fermion_sign(q, parity);
    const auto ks = detail::ring_momenta(n, s);
    std::vector<std::complex<double>> phi(ks.size());
    std::size_t soft = 0;
    double soft_e = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < ks.size(); ++m) {
        const std::complex<double> lam = 2.0 * J * std::exp(std::complex<double>(0.0, -ks[m])) - 2.0 * Gam;
        const double a = std::abs(lam);
        phi[m] = a > 0.0 ? lam / a : std::complex<double>(1.0, 0.0);
        if (a < soft_e - 1e-15) {
            soft_e = a;
            soft = m;
        }
    }
    if (occupy_softest) {
        // Only an unpaired momentum (0 or pi) can carry the single quasiparticle unambiguously.
        const double k = ks[soft];
        const bool unpaired = std::abs(std::sin(k)) < 1e-12;
        if (!unpaired) throw NumericalFailure("odd sector ground state is degenerate in momentum space");
        phi[soft] = -phi[soft];
    }
    // e^{i k_m d} = root[(m d) mod n] * e^{i pi d / n} (second factor only when s = -1).
    std::vector<std::complex<double>> root(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) root[static_cast<std::size_t>(j)] = std::polar(1.0, 2.0 * std::numbers::pi * j / n);
    std::vector<double> t(static_cast<std::size_t>(2 * n - 1));
    for (int d = 0; d < n; ++d) {
        const std::complex<double> shift = s > 0 ? 1.0 : std::polar(1.0, std::numbers::pi * d / n);
        std::complex<double> plus = 0.0, minus = 0.0;
        for (int m = 0; m < n; ++m) {
            const auto e = root[static_cast<std::size_t>((static_cast<long long>(m) * d) % n)] * shift;
            plus += phi[static_cast<std::size_t>(m)] * e;
            minus += phi[static_cast<std::size_t>(m)] * std::conj(e);
        }
        t[static_cast<std::size_t>(d + n - 1)] = -plus.real() / n;
        t[static_cast<std::size_t>(-d + n - 1)] = -minus.real() / n;
    }
    return t;
}

}  // namespace ff

/// Ground state of a chain in a given tau^x-parity sector (+1 or -1). Rings and
/// open chains with boundary fields use the sector of their ring form; a plain
/// open chain is restricted to that parity only when `restrict_open` is set.
inline BdGSolution bdg_solve_sector(const TFIMChainSpec& c, int parity, BdGMethod method = BdGMethod::Auto,
                                    bool restrict_open = false) {
    const auto q = ff::quadratic_form(c);
    BdGSolution sol;
    sol.chain = c;
    const int n = q.size();
    sol.size_ = n;
    const int matrix_parity = q.wrap ? parity : 1;
    auto levels = ff::sector_levels(q, matrix_parity);
    if (!q.wrap && restrict_open) levels.excitation_parity = parity * ff::vacuum_parity(q, 1);
    sol.energies = levels.modes;
    const bool occupy = levels.excitation_parity < 0;
    sol.ground_energy = levels.vacuum_energy + (occupy && n > 0 ? levels.modes.front() : 0.0);
    if (c.periodic() || restrict_open) {
        sol.parity = parity;
        sol.sector = parity > 0 ? ParitySector::Even : ParitySector::Odd;
    }
    const bool momentum = q.uniform_periodic() && n > 2 &&
                          (method == BdGMethod::Momentum || (method == BdGMethod::Auto && n > 256));
    if (method == BdGMethod::Momentum && !momentum) throw InvalidSpec("momentum-space solve needs a uniform ring");
    if (momentum) {
        sol.circulant_ = true;
        sol.toeplitz_ = ff::ring_toeplitz(q, matrix_parity, occupy);
    } else {
        sol.dense_ = ff::correlation_matrix(q, matrix_parity, occupy);
    }
    return sol;
}

/// Ground state of a chain. Periodic chains compare the lowest states of both
/// parity sectors and keep the lower one (even on an exact tie).
inline BdGSolution bdg_solve(const TFIMChainSpec& c, BdGMethod method = BdGMethod::Auto) {
    c.validate();
    if (!c.periodic()) return bdg_solve_sector(c, +1, method);
    const auto q = ff::quadratic_form(c);
    auto ground = [&](int p) {
        const auto s = ff::sector_levels(q, p);
        return s.vacuum_energy + (s.excitation_parity < 0 ? s.modes.front() : 0.0);
    };
    const double even = ground(+1);
    const double odd = ground(-1);
    return bdg_solve_sector(c, odd < even - 1e-12 * std::max(1.0, std::abs(even)) ? -1 : +1, method);
}

namespace detail {

inline void check_site(const BdGSolution& sol, int i) {
    if (i < 0 || i >= sol.chain.length) {
        throw IndexOutOfRange("site " + std::to_string(i) + " outside chain of length " +
                              std::to_string(sol.chain.length));
    }
}

inline double determinant(const Eigen::MatrixXd& m) {
    if (m.rows() == 0) return 1.0;
    return Eigen::PartialPivLU<Eigen::MatrixXd>(m).determinant();
}

}  // namespace detail

/// <tau^x_i>.
inline double magnetization_x(const BdGSolution& sol, int i) {
    detail::check_site(sol, i);
    return sol.G(i, i);
}

/// <tau^z_i tau^z_j>, i < j, as det Q with Q_lm = -G(m+1, l), l, m in [i, j).
/// The string i..j never uses the closing bond, so this is exact on rings too.
inline double zz_correlator(const BdGSolution& sol, int i, int j) {
    detail::check_site(sol, i);
    detail::check_site(sol, j);
    if (i == j) return 1.0;
    if (i > j) std::swap(i, j);
    const int r = j - i;
    return detail::determinant(-sol.block(i + 1, i, r, r).transpose());
}

/// <tau^x_i tau^x_j> by Wick's theorem.
inline double xx_correlator(const BdGSolution& sol, int i, int j) {
    detail::check_site(sol, i);
    detail::check_site(sol, j);
    if (i == j) return 1.0;
    return sol.G(i, i) * sol.G(j, j) - sol.G(i, j) * sol.G(j, i);
}

/// <prod_{j=start}^{start+r-1} tau^x_j> = det of the r x r block of G.
inline double disorder_parameter(const BdGSolution& sol, int r, int start = 0) {
    if (r < 0 || start < 0 || start + r > sol.chain.length) {
        throw IndexOutOfRange("segment [" + std::to_string(start) + ", " + std::to_string(start + r) +
                              ") outside chain of length " + std::to_string(sol.chain.length));
    }
    return detail::determinant(sol.block(start, start, r, r));
}

/// <prod_{t in sites} tau^z_t> for an even set of sites, indices into the full
/// ring form (an ancilla included). Sorted sites pair into intervals
/// [t1, t2), [t3, t4), ...; their bonds are distinct bilinears i b_l a_{l+1},
/// so Wick's theorem gives det Q with Q_lm = -G(m+1, l) over those bonds.
inline double z_string(const BdGSolution& sol, std::vector<int> sites) {
    std::sort(sites.begin(), sites.end());
    if (sites.size() % 2 != 0) throw NotMappable("odd tau^z strings have zero overlap with parity sectors");
    for (std::size_t k = 0; k + 1 < sites.size(); ++k) {
        if (sites[k] == sites[k + 1]) throw InvalidSpec("repeated site in tau^z string");
    }
    for (int t : sites) {
        if (t < 0 || t >= sol.size()) throw IndexOutOfRange("tau^z site outside the chain");
    }
    std::vector<int> bonds;
    for (std::size_t k = 0; k < sites.size(); k += 2)
        for (int l = sites[k]; l < sites[k + 1]; ++l) bonds.push_back(l);
    const auto n = static_cast<Eigen::Index>(bonds.size());
    Eigen::MatrixXd Q(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            Q(r, c) = -sol.G(bonds[static_cast<std::size_t>(c)] + 1, bonds[static_cast<std::size_t>(r)]);
    return detail::determinant(Q);
}

/// <prod_{j in sites} tau^x_j> for any set of distinct sites.
inline double x_string(const BdGSolution& sol, const std::vector<int>& sites) {
    const auto n = static_cast<Eigen::Index>(sites.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        detail::check_site(sol, sites[static_cast<std::size_t>(r)]);
        for (Eigen::Index c = 0; c < n; ++c) m(r, c) = sol.G(sites[static_cast<std::size_t>(r)], sites[static_cast<std::size_t>(c)]);
    }
    return detail::determinant(m);
}

}  // namespace wenduality
