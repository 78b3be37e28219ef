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

// Plaquette-to-chain duality.
//
// Each plaquette F_p becomes tau^x on its chain; a site shared by consecutive
// plaquettes becomes tau^z tau^z. The algebra generated by {F_p, sigma^x_j} has
// a center spanned by loop products W (sigma^x along a chain), chain parities P
// (product of a chain's F, when central) and isolated sigma^x. Fixing a value
// for each of these labels turns every chain into an ordinary TFIM chain:
// the closing generator of a chain carries the sign W, and P selects the
// tau^x-parity sector. The lattice spectrum is the union over consistent label
// values of the chain tensor sums, each repeated with one uniform multiplicity.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "wenduality/chain.hpp"
#include "wenduality/freefermion.hpp"
#include "wenduality/gf2.hpp"
#include "wenduality/lattice.hpp"
#include "wenduality/state_vector.hpp"
#include "wenduality/wen_model.hpp"

namespace wenduality {

/// The chains of a lattice as plain TFIM chains: field g on every plaquette,
/// bond h on every link. Loop signs and boundary fields are not included; see
/// DualStructure for the exact, sector-resolved form.
struct MappedHamiltonian {
    std::vector<TFIMChainSpec> chains;
    bool zero_field = false;  // h = 0: all chain bonds vanish
};

inline MappedHamiltonian map_hamiltonian(const HamiltonianSpec& hs) {
    hs.validate();
    MappedHamiltonian m;
    m.zero_field = hs.h == 0.0;
    for (const auto& ch : chain_decompose(hs.lattice).chains) {
        TFIMChainSpec c;
        c.length = ch.length();
        c.boundary = ch.boundary;
        c.field = hs.g;
        c.bond = hs.h;
        m.chains.push_back(c);
    }
    return m;
}

enum class SiteRole { Link, WrapLink, HeadField, TailField, Free };

struct DualSite {
    SiteRole role = SiteRole::Free;
    int chain = -1;
    int position = -1;  // Link: joins positions k and k+1
    int label = -1;     // Free: its label
};

struct DualChain {
    Chain chain;
    int head_field = -1;  // site anticommuting only with the first plaquette
    int tail_field = -1;  // site anticommuting only with the last plaquette
    int tau_offset = 0;   // first tau index of this chain in the dual register
    int loop_label = -1;
    int parity_label = -1;

    int length() const { return chain.length(); }
    bool has_ancilla() const { return head_field >= 0 || tail_field >= 0; }
    int ring_size() const { return length() + (has_ancilla() ? 1 : 0); }
    int ancilla() const { return tau_offset + length(); }

    /// log2 of the chain's Hilbert-space dimension inside one label sector.
    int sector_dim_log2() const {
        if (has_ancilla()) return length();
        return parity_label >= 0 ? length() - 1 : length();
    }
};

enum class LabelKind { Loop, Parity, FreeSite };

struct CentralLabel {
    LabelKind kind = LabelKind::Loop;
    int index = 0;  // chain for Loop/Parity, site for FreeSite
    PauliString op;

    std::string name() const {
        switch (kind) {
            case LabelKind::Loop: return "W" + std::to_string(index);
            case LabelKind::Parity: return "P" + std::to_string(index);
            case LabelKind::FreeSite: return "X" + std::to_string(index);
        }
        return "?";
    }
};

/// prod_{l in labels} value_l = sign on every state.
struct LabelRelation {
    std::vector<int> labels;
    int sign = 1;
};

/// Label values, +1 or -1, indexed like DualStructure::labels.
using LabelValues = std::vector<int>;

struct DualStructure {
    LatticeSpec lattice;
    std::vector<Plaquette> plaquettes;
    ChainDecomposition decomposition;
    std::vector<DualChain> chains;
    std::vector<DualSite> sites;
    std::vector<int> free_sites;
    std::vector<CentralLabel> labels;
    std::vector<LabelRelation> relations;
    int tau_sites = 0;

    int site_count() const { return lattice.site_count(); }
    int independent_labels() const { return static_cast<int>(labels.size() - relations.size()); }

    /// log2 of the number of copies of each label sector in the 2^n spin space.
    int multiplicity_log2() const {
        int dims = 0;
        for (const auto& c : chains) dims += c.sector_dim_log2();
        return site_count() - independent_labels() - dims;
    }

    int chain_at_tau(int t) const {
        int lo = 0, hi = static_cast<int>(chains.size()) - 1;
        while (lo < hi) {
            const int mid = (lo + hi + 1) / 2;
            if (chains[static_cast<std::size_t>(mid)].tau_offset <= t) lo = mid;
            else hi = mid - 1;
        }
        return lo;
    }
};

namespace detail {

inline PauliString sigma_x_product(const std::vector<int>& sites) {
    std::vector<PauliFactor> f;
    for (int j : sites) f.push_back({j, Axis::X});
    return PauliString(f);
}

}  // namespace detail

/// Chain roles of every site, the central labels and the relations among them.
inline DualStructure dual_structure(const LatticeSpec& spec) {
    spec.validate();
    DualStructure d;
    d.lattice = spec;
    d.plaquettes = enumerate_plaquettes(spec);
    d.decomposition = chain_decompose(spec);
    const auto adj = site_adjacency(spec, d.plaquettes);
    const int n = spec.site_count();
    d.sites.assign(static_cast<std::size_t>(n), {});

    for (std::size_t a = 0; a < d.decomposition.chains.size(); ++a) {
        DualChain dc;
        dc.chain = d.decomposition.chains[a];
        const int L = dc.length();
        for (int k = 0; k < static_cast<int>(dc.chain.links.size()); ++k) {
            const bool wrap = dc.chain.boundary == ChainBoundary::PeriodicChain && k == L - 1;
            d.sites[static_cast<std::size_t>(dc.chain.links[static_cast<std::size_t>(k)])] =
                {wrap ? SiteRole::WrapLink : SiteRole::Link, static_cast<int>(a), k, -1};
        }
        d.chains.push_back(std::move(dc));
    }
    for (int j = 0; j < n; ++j) {
        auto& s = d.sites[static_cast<std::size_t>(j)];
        if (s.chain >= 0) continue;
        const int ex = adj.as_ex_corner[static_cast<std::size_t>(j)];
        const int ey = adj.as_ey_corner[static_cast<std::size_t>(j)];
        if (ex >= 0) {
            const int a = d.decomposition.chain_of[static_cast<std::size_t>(ex)];
            auto& c = d.chains[static_cast<std::size_t>(a)];
            if (d.decomposition.position_of[static_cast<std::size_t>(ex)] != c.length() - 1 || c.tail_field >= 0)
                throw NumericalFailure("end field not at a chain tail");
            c.tail_field = j;
            s = {SiteRole::TailField, a, -1, -1};
        } else if (ey >= 0) {
            const int a = d.decomposition.chain_of[static_cast<std::size_t>(ey)];
            auto& c = d.chains[static_cast<std::size_t>(a)];
            if (d.decomposition.position_of[static_cast<std::size_t>(ey)] != 0 || c.head_field >= 0)
                throw NumericalFailure("end field not at a chain head");
            c.head_field = j;
            s = {SiteRole::HeadField, a, -1, -1};
        } else {
            d.free_sites.push_back(j);
        }
    }

    int offset = 0;
    for (auto& c : d.chains) {
        c.tau_offset = offset;
        offset += c.ring_size();
    }
    d.tau_sites = offset;

    // Central labels. A site touches only the plaquettes of its own chain, so
    // centrality is checked against those alone.
    for (std::size_t a = 0; a < d.chains.size(); ++a) {
        auto& c = d.chains[a];
        std::vector<int> loop_sites = c.chain.links;
        if (c.head_field >= 0) loop_sites.push_back(c.head_field);
        if (c.tail_field >= 0) loop_sites.push_back(c.tail_field);
        const PauliString W = detail::sigma_x_product(loop_sites);
        PauliString P;
        for (int p : c.chain.plaquettes) P *= d.plaquettes[static_cast<std::size_t>(p)].op();

        bool w_central = !W.is_identity();
        for (int p : c.chain.plaquettes)
            if (w_central && !W.commutes_with(d.plaquettes[static_cast<std::size_t>(p)].op())) w_central = false;
        bool p_central = true;
        for (const auto& f : P.factors())
            if (p_central && !P.commutes_with(PauliString::single(f.site, Axis::X))) p_central = false;

        if (w_central) {
            c.loop_label = static_cast<int>(d.labels.size());
            d.labels.push_back({LabelKind::Loop, static_cast<int>(a), W});
        }
        if (p_central) {
            c.parity_label = static_cast<int>(d.labels.size());
            d.labels.push_back({LabelKind::Parity, static_cast<int>(a), P});
        }
    }
    for (int j : d.free_sites) {
        d.sites[static_cast<std::size_t>(j)].label = static_cast<int>(d.labels.size());
        d.labels.push_back({LabelKind::FreeSite, j, PauliString::single(j, Axis::X)});
    }

    // Relations: products of labels proportional to the identity.
    std::vector<gf2::BitVector> vecs;
    for (const auto& l : d.labels) vecs.push_back(gf2::symplectic(l.op, n));
    for (const auto& k : gf2::kernel(vecs)) {
        LabelRelation r;
        PauliString prod;
        for (std::size_t i = 0; i < d.labels.size(); ++i) {
            if (!k.get(i)) continue;
            r.labels.push_back(static_cast<int>(i));
            prod *= d.labels[i].op;
        }
        if (!prod.is_identity() || prod.phase_power() % 2 != 0)
            throw NumericalFailure("label relation is not a real multiple of the identity");
        r.sign = prod.phase_power() == 0 ? 1 : -1;
        d.relations.push_back(std::move(r));
    }

    if (d.multiplicity_log2() < 0) throw NumericalFailure("label sectors overcount the Hilbert space");
    // Consistency: sum over sectors of dim^2 must equal the dimension of the
    // generated algebra, 2^rank of the generators.
    if (n <= 64) {
        std::vector<gf2::BitVector> gens;
        for (const auto& p : d.plaquettes) gens.push_back(gf2::symplectic(p.op(), n));
        for (int j = 0; j < n; ++j) gens.push_back(gf2::symplectic(PauliString::single(j, Axis::X), n));
        int dims = 0;
        for (const auto& c : d.chains) dims += c.sector_dim_log2();
        if (static_cast<int>(gf2::rank(gens)) != d.independent_labels() + 2 * dims)
            throw NumericalFailure("central labels do not span the center of the plaquette algebra");
    }
    return d;
}

/// Consistent label assignments, in reduced row-echelon form. Parity labels are
/// preferred as pivots so that, on tori, each relation fixes one P through loops.
class SectorSpace {
public:
    explicit SectorSpace(const DualStructure& d) : nlabels_(static_cast<int>(d.labels.size())) {
        std::vector<int> order;
        for (int pass = 0; pass < 3; ++pass) {
            const LabelKind kind = pass == 0 ? LabelKind::Parity : pass == 1 ? LabelKind::Loop : LabelKind::FreeSite;
            for (int i = 0; i < nlabels_; ++i)
                if (d.labels[static_cast<std::size_t>(i)].kind == kind) order.push_back(i);
        }
        for (const auto& r : d.relations) {
            gf2::BitVector v(static_cast<std::size_t>(nlabels_) + 1);
            for (int l : r.labels) v.set(static_cast<std::size_t>(l));
            if (r.sign < 0) v.set(static_cast<std::size_t>(nlabels_));
            rows_.push_back(v);
        }
        std::size_t rank = 0;
        std::vector<bool> is_pivot(static_cast<std::size_t>(nlabels_), false);
        for (int col : order) {
            std::size_t sel = rank;
            while (sel < rows_.size() && !rows_[sel].get(static_cast<std::size_t>(col))) ++sel;
            if (sel == rows_.size()) continue;
            std::swap(rows_[sel], rows_[rank]);
            for (std::size_t r = 0; r < rows_.size(); ++r)
                if (r != rank && rows_[r].get(static_cast<std::size_t>(col))) rows_[r] ^= rows_[rank];
            pivots_.push_back(col);
            is_pivot[static_cast<std::size_t>(col)] = true;
            ++rank;
        }
        for (std::size_t r = rank; r < rows_.size(); ++r) {
            if (rows_[r].any()) throw NumericalFailure("inconsistent label relations");
        }
        rows_.resize(rank);
        std::vector<bool> coupled(static_cast<std::size_t>(nlabels_), false);
        for (const auto& r : rows_)
            for (int i = 0; i < nlabels_; ++i)
                if (r.get(static_cast<std::size_t>(i))) coupled[static_cast<std::size_t>(i)] = true;
        for (int col : order) {
            if (is_pivot[static_cast<std::size_t>(col)]) continue;
            (coupled[static_cast<std::size_t>(col)] ? coupled_free_ : uncoupled_).push_back(col);
        }
    }

    int label_count() const { return nlabels_; }
    const std::vector<int>& pivots() const { return pivots_; }
    /// Free labels that appear in some relation.
    const std::vector<int>& coupled_free() const { return coupled_free_; }
    /// Labels in no relation at all.
    const std::vector<int>& uncoupled() const { return uncoupled_; }
    int free_count() const { return static_cast<int>(coupled_free_.size() + uncoupled_.size()); }

    /// Pivot labels in row order; row r fixes pivots()[r].
    std::vector<int> row_labels(std::size_t r) const {
        std::vector<int> out;
        for (int i = 0; i < nlabels_; ++i)
            if (rows_[r].get(static_cast<std::size_t>(i)) && i != pivots_[r]) out.push_back(i);
        return out;
    }
    int row_sign(std::size_t r) const { return rows_[r].get(static_cast<std::size_t>(nlabels_)) ? -1 : 1; }

    /// Fill in pivot labels from the free ones already set in `v`.
    void complete(LabelValues& v) const {
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            int x = row_sign(r);
            for (int i : row_labels(r)) x *= v[static_cast<std::size_t>(i)];
            v[static_cast<std::size_t>(pivots_[r])] = x;
        }
    }

    /// Assignment number `mask` over all free labels (bit k: free label k is -1).
    LabelValues assignment(std::uint64_t mask) const {
        LabelValues v(static_cast<std::size_t>(nlabels_), 1);
        std::size_t k = 0;
        for (const auto* list : {&coupled_free_, &uncoupled_})
            for (int i : *list) v[static_cast<std::size_t>(i)] = ((mask >> k++) & 1u) ? -1 : 1;
        complete(v);
        return v;
    }

    bool consistent(const LabelValues& v) const {
        LabelValues w = v;
        complete(w);
        return w == v;
    }

private:
    int nlabels_ = 0;
    std::vector<gf2::BitVector> rows_;
    std::vector<int> pivots_;
    std::vector<int> coupled_free_;
    std::vector<int> uncoupled_;
};

/// One chain inside a label sector: the TFIM chain it becomes and the parity
/// sector it is restricted to.
struct ChainSector {
    TFIMChainSpec spec;
    int parity = 1;
    bool restrict_open = false;
};

inline ChainSector chain_sector(const DualStructure& d, int a, const LabelValues& v, double g, double h) {
    const auto& c = d.chains[static_cast<std::size_t>(a)];
    ChainSector s;
    s.spec.length = c.length();
    s.spec.boundary = c.chain.boundary;
    s.spec.field = g;
    s.spec.bond = h;
    const int W = c.loop_label >= 0 ? v[static_cast<std::size_t>(c.loop_label)] : 1;
    const int P = c.parity_label >= 0 ? v[static_cast<std::size_t>(c.parity_label)] : 1;
    if (s.spec.periodic()) {
        s.spec.twist = W;
        s.parity = P;
    } else if (c.has_ancilla()) {
        // Gauge: every field +1 except the closing one, which carries W.
        s.spec.head = c.head_field >= 0 ? 1.0 : 0.0;
        s.spec.tail = c.tail_field >= 0 ? 1.0 : 0.0;
        if (c.loop_label >= 0) (c.tail_field >= 0 ? s.spec.tail : s.spec.head) = W;
    } else if (c.parity_label >= 0) {
        s.parity = P;
        s.restrict_open = true;
    }
    return s;
}

inline ff::SectorLevels chain_sector_levels(const ChainSector& s) {
    const auto q = ff::quadratic_form(s.spec);
    auto lv = ff::sector_levels(q, q.wrap ? s.parity : 1);
    if (!q.wrap && s.restrict_open) lv.excitation_parity = s.parity * ff::vacuum_parity(q, 1);
    return lv;
}

/// Constant from isolated sites: -h * value for each.
inline double free_site_energy(const DualStructure& d, const LabelValues& v, double h) {
    double e = 0.0;
    for (int j : d.free_sites) e -= h * v[static_cast<std::size_t>(d.sites[static_cast<std::size_t>(j)].label)];
    return e;
}

namespace detail {

inline std::vector<double> tensor_sum(const std::vector<std::vector<double>>& parts, double constant) {
    std::vector<double> acc{constant};
    for (const auto& p : parts) {
        std::vector<double> next;
        next.reserve(acc.size() * p.size());
        for (double a : acc)
            for (double b : p) next.push_back(a + b);
        acc = std::move(next);
    }
    std::sort(acc.begin(), acc.end());
    return acc;
}

}  // namespace detail

/// Full lattice spectrum from the dual chains, with multiplicity, ascending.
inline std::vector<double> sector_resolved_spectrum(const DualStructure& d, double g, double h) {
    const SectorSpace space(d);
    if (space.free_count() > 20) throw TooLarge("too many label sectors to enumerate");
    if (d.site_count() > 24) throw TooLarge("full spectrum limited to 24 spins");
    const std::uint64_t copies = std::uint64_t{1} << d.multiplicity_log2();
    std::vector<double> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << space.free_count()); ++mask) {
        const auto v = space.assignment(mask);
        std::vector<std::vector<double>> parts;
        for (int a = 0; a < static_cast<int>(d.chains.size()); ++a)
            parts.push_back(chain_sector_levels(chain_sector(d, a, v, g, h)).all());
        for (double e : detail::tensor_sum(parts, free_site_energy(d, v, h)))
            for (std::uint64_t c = 0; c < copies; ++c) out.push_back(e);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Tensor sum of the plain chains of map_hamiltonian, each taken with its full
/// spectrum, plus -h per isolated site.
inline std::vector<double> plain_tensor_sum(const HamiltonianSpec& hs) {
    const auto m = map_hamiltonian(hs);
    std::vector<std::vector<double>> parts;
    for (const auto& c : m.chains) parts.push_back(manybody_spectrum(c));
    const double constant = -hs.h * static_cast<double>(dual_structure(hs.lattice).free_sites.size());
    return detail::tensor_sum(parts, constant);
}

namespace detail {

/// Distinct values of an ascending list: a new value starts when the gap to
/// the previous element exceeds tol.
inline std::vector<double> distinct(const std::vector<double>& ascending, double tol) {
    std::vector<double> out;
    for (std::size_t i = 0; i < ascending.size(); ++i)
        if (i == 0 || ascending[i] - ascending[i - 1] > tol) out.push_back(ascending[i]);
    return out;
}

inline double nearest_distance(const std::vector<double>& sorted, double x) {
    if (sorted.empty()) return std::numeric_limits<double>::infinity();
    auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
    double best = std::numeric_limits<double>::infinity();
    if (it != sorted.end()) best = *it - x;
    if (it != sorted.begin()) best = std::min(best, x - *std::prev(it));
    return best;
}

/// Largest distance from a value of either set to the other set.
inline double hausdorff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (double x : a) m = std::max(m, nearest_distance(b, x));
    for (double x : b) m = std::max(m, nearest_distance(a, x));
    return m;
}

inline int count_near(const std::vector<double>& sorted, double x, double tol) {
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), x - tol);
    const auto hi = std::upper_bound(sorted.begin(), sorted.end(), x + tol);
    return static_cast<int>(hi - lo);
}

}  // namespace detail

struct MultiplicityRow {
    double energy = 0.0;
    int lattice = 0;
    int tensor_sum = 0;
    int sector_resolved = 0;
};

struct DualityReport {
    HamiltonianSpec spec;
    double tol = 1e-10;
    std::vector<TFIMChainSpec> chains;
    int measured_chain_count = 0;
    std::vector<std::pair<std::string, int>> reference_chain_counts;  // formula, value

    int distinct_lattice = 0;
    // Plain tensor sum of the mapped chains.
    int distinct_tensor_sum = 0;
    double tensor_sum_mismatch = 0.0;  // Hausdorff distance between distinct-value sets
    bool tensor_sum_match = false;
    // Sector-resolved union, compared level by level with multiplicity.
    int distinct_sector = 0;
    double sector_mismatch = 0.0;
    bool sector_match = false;

    int label_count = 0;
    int relation_count = 0;
    int multiplicity_log2 = 0;
    std::vector<MultiplicityRow> table;
};

/// Chain counts quoted for the lattice family, for comparison with the measured count.
inline std::vector<std::pair<std::string, int>> reference_chain_counts(const LatticeSpec& s) {
    if (s.boundary == Boundary::Periodic) {
        if (s.rows == s.cols) return {{"N", s.rows}};
        return {};
    }
    if (s.rows == s.cols) return {{"2N-1", 2 * s.rows - 1}};
    return {{"M+N-1", s.rows + s.cols - 1}};
}

/// Full spectrum of the lattice (dense ED) against the plain tensor sum and the
/// sector-resolved union. At most 14 spins.
inline DualityReport duality_spectrum_check(const HamiltonianSpec& hs, double tol = 1e-10) {
    hs.validate();
    if (hs.lattice.site_count() > kMaxDenseSpins) throw TooLarge("spectrum comparison limited to 14 spins");
    DualityReport r;
    r.spec = hs;
    r.tol = tol;
    r.chains = map_hamiltonian(hs).chains;
    r.measured_chain_count = static_cast<int>(r.chains.size());
    r.reference_chain_counts = reference_chain_counts(hs.lattice);

    const auto lattice = full_spectrum(hs).eigenvalues;
    const auto plain = plain_tensor_sum(hs);
    const auto d = dual_structure(hs.lattice);
    const auto sector = sector_resolved_spectrum(d, hs.g, hs.h);
    r.label_count = static_cast<int>(d.labels.size());
    r.relation_count = static_cast<int>(d.relations.size());
    r.multiplicity_log2 = d.multiplicity_log2();

    const auto dl = detail::distinct(lattice, tol);
    const auto dp = detail::distinct(plain, tol);
    const auto ds = detail::distinct(sector, tol);
    r.distinct_lattice = static_cast<int>(dl.size());
    r.distinct_tensor_sum = static_cast<int>(dp.size());
    r.distinct_sector = static_cast<int>(ds.size());
    r.tensor_sum_mismatch = detail::hausdorff(dl, dp);
    r.tensor_sum_match = r.tensor_sum_mismatch < tol;
    if (sector.size() == lattice.size()) {
        for (std::size_t i = 0; i < sector.size(); ++i)
            r.sector_mismatch = std::max(r.sector_mismatch, std::abs(sector[i] - lattice[i]));
    } else {
        r.sector_mismatch = std::numeric_limits<double>::infinity();
    }
    r.sector_match = r.sector_mismatch < tol;

    std::vector<double> rows = dl;
    for (double x : dp)
        if (detail::nearest_distance(dl, x) > tol) rows.push_back(x);
    std::sort(rows.begin(), rows.end());
    // Degenerate levels from dense ED spread by rounding; count within a wider band.
    const double band = std::max(tol, 1e-9);
    for (double e : rows) {
        r.table.push_back({e, detail::count_near(lattice, e, band), detail::count_near(plain, e, band),
                           detail::count_near(sector, e, band)});
    }
    return r;
}

// ---------------------------------------------------------------------------
// Lowest levels without the full spectrum.

namespace detail {

/// Two lowest distinct values.
struct Top2 {
    double v[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};

    void insert(double x, double tol) {
        if (std::abs(x - v[0]) <= tol || std::abs(x - v[1]) <= tol) {
            if (x < v[0] && std::abs(x - v[0]) <= tol) v[0] = x;
            return;
        }
        if (x < v[0]) {
            v[1] = v[0];
            v[0] = x;
        } else if (x < v[1]) {
            v[1] = x;
        }
    }

    static Top2 merge(const Top2& a, const Top2& b, double tol) {
        Top2 out = a;
        out.insert(b.v[0], tol);
        out.insert(b.v[1], tol);
        return out;
    }

    static Top2 sum(const Top2& a, const Top2& b, double tol) {
        Top2 out;
        for (double x : a.v)
            for (double y : b.v)
                if (std::isfinite(x) && std::isfinite(y)) out.insert(x + y, tol);
        return out;
    }
};

inline Top2 top2_of(const ff::SectorLevels& lv, double tol) {
    Top2 t;
    for (std::size_t count = 8;; count *= 4) {
        const auto low = lv.lowest(count);
        t = Top2{};
        for (double e : low) t.insert(e, tol);
        if (std::isfinite(t.v[1]) || low.size() < count) return t;
    }
}

}  // namespace detail

struct DualLowLevels {
    double ground_energy = 0.0;
    double gap = 0.0;  // to the next distinct level; +inf if there is none
    std::string method;  // "enumerate" or "cyclic-dp"
    int coupled_free_labels = 0;
};

/// Ground energy and gap of the lattice from the dual chains, any size.
/// Labels that appear in no relation are minimized chain by chain; coupled
/// ones are enumerated when there are at most 22 free choices, otherwise a
/// cyclic transfer over loop labels handles tori whose relations fix each
/// parity through neighbouring loops.
inline DualLowLevels dual_low_levels(const DualStructure& d, double g, double h,
                                     double tol = kDegeneracyTolerance, bool force_transfer = false) {
    using detail::Top2;
    const SectorSpace space(d);
    const double band = 0.1 * tol;
    std::map<std::tuple<int, int, double, double, double, int, bool>, Top2> cache;
    auto chain_top2 = [&](int a, const LabelValues& v) {
        const auto s = chain_sector(d, a, v, g, h);
        const auto key = std::make_tuple(s.spec.length, static_cast<int>(s.spec.boundary), s.spec.twist, s.spec.head,
                                         s.spec.tail, s.parity, s.restrict_open);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, detail::top2_of(chain_sector_levels(s), band)).first;
        return it->second;
    };
    std::vector<bool> uncoupled(d.labels.size(), false);
    for (int i : space.uncoupled()) uncoupled[static_cast<std::size_t>(i)] = true;

    // A chain's best levels with its uncoupled labels minimized over.
    auto chain_folded = [&](int a, LabelValues v) {
        const auto& c = d.chains[static_cast<std::size_t>(a)];
        std::vector<int> own;
        for (int l : {c.loop_label, c.parity_label})
            if (l >= 0 && uncoupled[static_cast<std::size_t>(l)]) own.push_back(l);
        Top2 best;
        for (int mask = 0; mask < (1 << own.size()); ++mask) {
            for (std::size_t k = 0; k < own.size(); ++k) v[static_cast<std::size_t>(own[k])] = ((mask >> k) & 1) ? -1 : 1;
            best = Top2::merge(best, chain_top2(a, v), band);
        }
        return best;
    };
    auto site_folded = [&](int j, const LabelValues& v) {
        const int l = d.sites[static_cast<std::size_t>(j)].label;
        Top2 t;
        if (uncoupled[static_cast<std::size_t>(l)]) {
            t.insert(-h, band);
            t.insert(h, band);
        } else {
            t.insert(-h * v[static_cast<std::size_t>(l)], band);
        }
        return t;
    };
    auto total = [&](const LabelValues& v) {
        Top2 acc;
        acc.insert(0.0, band);
        for (int a = 0; a < static_cast<int>(d.chains.size()); ++a) acc = Top2::sum(acc, chain_folded(a, v), band);
        for (int j : d.free_sites) acc = Top2::sum(acc, site_folded(j, v), band);
        return acc;
    };

    DualLowLevels out;
    const auto& cf = space.coupled_free();
    out.coupled_free_labels = static_cast<int>(cf.size());
    Top2 best;
    if (cf.size() <= 22 && !force_transfer) {
        out.method = "enumerate";
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cf.size()); ++mask) {
            LabelValues v(d.labels.size(), 1);
            for (std::size_t k = 0; k < cf.size(); ++k) v[static_cast<std::size_t>(cf[k])] = ((mask >> k) & 1u) ? -1 : 1;
            space.complete(v);
            best = Top2::merge(best, total(v), band);
        }
    } else {
        // Cyclic transfer: every chain periodic with loop and parity labels,
        // each parity fixed by loops of chains a-1, a, a+1.
        const int nc = static_cast<int>(d.chains.size());
        if (nc < 3 || !d.free_sites.empty()) throw TooLarge("label structure not supported by the cyclic transfer");
        std::vector<std::size_t> row_of_chain(static_cast<std::size_t>(nc), SIZE_MAX);
        for (std::size_t r = 0; r < space.pivots().size(); ++r) {
            const auto& lab = d.labels[static_cast<std::size_t>(space.pivots()[r])];
            if (lab.kind != LabelKind::Parity) throw TooLarge("relation without a parity pivot");
            for (int l : space.row_labels(r)) {
                const auto& other = d.labels[static_cast<std::size_t>(l)];
                const int dist = ((other.index - lab.index) % nc + nc) % nc;
                if (other.kind != LabelKind::Loop || (dist != 0 && dist != 1 && dist != nc - 1))
                    throw TooLarge("relation reaches beyond neighbouring chains");
            }
            row_of_chain[static_cast<std::size_t>(lab.index)] = r;
        }
        for (const auto& c : d.chains)
            if (c.loop_label < 0 || c.parity_label < 0) throw TooLarge("chain without loop and parity labels");
        // f_a(W_{a-1}, W_a, W_{a+1}) as a Top2, with W in {+1, -1} encoded by bit.
        auto f = [&](int a, int wm, int w0, int wp) {
            LabelValues v(d.labels.size(), 1);
            v[static_cast<std::size_t>(d.chains[static_cast<std::size_t>((a - 1 + nc) % nc)].loop_label)] = wm;
            v[static_cast<std::size_t>(d.chains[static_cast<std::size_t>(a)].loop_label)] = w0;
            v[static_cast<std::size_t>(d.chains[static_cast<std::size_t>((a + 1) % nc)].loop_label)] = wp;
            const auto r = row_of_chain[static_cast<std::size_t>(a)];
            if (r != SIZE_MAX) {
                int x = space.row_sign(r);
                for (int l : space.row_labels(r)) x *= v[static_cast<std::size_t>(l)];
                v[static_cast<std::size_t>(d.chains[static_cast<std::size_t>(a)].parity_label)] = x;
            }
            return chain_folded(a, v);
        };
        const int W[2] = {1, -1};
        out.method = "cyclic-dp";
        for (int x0 : W) {
            for (int x1 : W) {
                // state[(W_{k-1}, W_k)] after choosing W_k
                Top2 state[2][2];
                const int i0 = x0 < 0, i1 = x1 < 0;
                state[i0][i1].insert(0.0, band);
                for (int k = 2; k < nc; ++k) {
                    Top2 next[2][2];
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b)
                            for (int c = 0; c < 2; ++c) {
                                if (!std::isfinite(state[a][b].v[0])) continue;
                                next[b][c] = Top2::merge(next[b][c],
                                                         Top2::sum(state[a][b], f(k - 1, W[a], W[b], W[c]), band), band);
                            }
                    std::copy(&next[0][0], &next[0][0] + 4, &state[0][0]);
                }
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        if (!std::isfinite(state[a][b].v[0])) continue;
                        Top2 t = Top2::sum(state[a][b], f(nc - 1, W[a], W[b], x0), band);
                        t = Top2::sum(t, f(0, W[b], x0, x1), band);
                        best = Top2::merge(best, t, band);
                    }
            }
        }
    }
    out.ground_energy = best.v[0];
    out.gap = best.v[1] - best.v[0];
    return out;
}

inline DualLowLevels dual_low_levels(const HamiltonianSpec& hs, double tol = kDegeneracyTolerance) {
    hs.validate();
    return dual_low_levels(dual_structure(hs.lattice), hs.g, hs.h, tol);
}

// ---------------------------------------------------------------------------
// Operators and ground states.

/// Image of a lattice operator: a Pauli string on the dual register (chain a
/// occupies tau indices tau_offset .. tau_offset + ring_size - 1) times the
/// values of the listed labels.
struct DualOperator {
    PauliString tau;
    std::vector<int> labels;
    std::vector<int> plaquettes;  // decomposition into generators
    std::vector<int> sites;
};

/// Writes `op` as a product of plaquettes and sigma^x (fewest factors when the
/// ambiguity is small enough to search) and maps it to the chains. Throws
/// NotMappable if `op` is not in the algebra.
inline DualOperator map_operator(const DualStructure& d, const PauliString& op) {
    const int n = d.site_count();
    const int np = static_cast<int>(d.plaquettes.size());
    if (op.max_site() >= n) throw SiteOutOfRange("operator site outside the lattice");
    std::vector<gf2::BitVector> gens;
    for (const auto& p : d.plaquettes) gens.push_back(gf2::symplectic(p.op(), n));
    for (int j = 0; j < n; ++j) gens.push_back(gf2::symplectic(PauliString::single(j, Axis::X), n));
    auto sol = gf2::solve(gens, gf2::symplectic(op, n));
    if (!sol) throw NotMappable(op.to_string() + " is not generated by plaquettes and sigma^x");
    if (gens.size() <= 256) {
        const auto ker = gf2::kernel(gens);
        if (ker.size() <= 12) {
            auto best = *sol;
            for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << ker.size()); ++mask) {
                auto cand = *sol;
                for (std::size_t k = 0; k < ker.size(); ++k)
                    if ((mask >> k) & 1u) cand ^= ker[k];
                if (cand.count() < best.count()) best = cand;
            }
            sol = best;
        }
    }

    DualOperator out;
    PauliString prod;
    for (int p = 0; p < np; ++p) {
        if (!sol->get(static_cast<std::size_t>(p))) continue;
        out.plaquettes.push_back(p);
        prod *= d.plaquettes[static_cast<std::size_t>(p)].op();
    }
    for (int j = 0; j < n; ++j) {
        if (!sol->get(static_cast<std::size_t>(np + j))) continue;
        out.sites.push_back(j);
        prod *= PauliString::single(j, Axis::X);
    }
    if (prod.factors() != op.factors()) throw NumericalFailure("generator decomposition does not reproduce the operator");

    std::vector<int> label_parity(d.labels.size(), 0);
    PauliString tau = PauliString::identity(op.phase_power() - prod.phase_power());
    auto Z = [](int t) { return PauliString::single(t, Axis::Z); };
    for (int p : out.plaquettes) {
        const auto& c = d.chains[static_cast<std::size_t>(d.decomposition.chain_of[static_cast<std::size_t>(p)])];
        tau *= PauliString::single(c.tau_offset + d.decomposition.position_of[static_cast<std::size_t>(p)], Axis::X);
    }
    for (int j : out.sites) {
        const auto& s = d.sites[static_cast<std::size_t>(j)];
        if (s.role == SiteRole::Free) {
            label_parity[static_cast<std::size_t>(s.label)] ^= 1;
            continue;
        }
        const auto& c = d.chains[static_cast<std::size_t>(s.chain)];
        const int o = c.tau_offset, L = c.length();
        switch (s.role) {
            case SiteRole::Link: tau *= Z(o + s.position) * Z(o + s.position + 1); break;
            case SiteRole::WrapLink:
                tau *= Z(o + L - 1) * Z(o);
                label_parity[static_cast<std::size_t>(c.loop_label)] ^= 1;
                break;
            case SiteRole::HeadField:
                tau *= Z(c.ancilla()) * Z(o);
                if (c.loop_label >= 0 && c.tail_field < 0) label_parity[static_cast<std::size_t>(c.loop_label)] ^= 1;
                break;
            case SiteRole::TailField:
                tau *= Z(o + L - 1) * Z(c.ancilla());
                if (c.loop_label >= 0) label_parity[static_cast<std::size_t>(c.loop_label)] ^= 1;
                break;
            case SiteRole::Free: break;
        }
    }
    for (std::size_t l = 0; l < label_parity.size(); ++l)
        if (label_parity[l]) out.labels.push_back(static_cast<int>(l));
    out.tau = tau;
    return out;
}

/// Ground state of the dual chains inside one label sector.
struct DualState {
    DualStructure structure;
    LabelValues labels;
    double g = 0.0;
    double h = 0.0;
    std::vector<BdGSolution> chains;
    double energy = 0.0;
};

inline DualState dual_ground_state(DualStructure d, LabelValues v, double g, double h) {
    if (v.size() != d.labels.size()) throw DimensionMismatch("one value per label expected");
    for (int x : v)
        if (x != 1 && x != -1) throw InvalidSpec("label values must be +1 or -1");
    if (!SectorSpace(d).consistent(v)) throw InvalidSpec("label values violate a relation");
    DualState s;
    s.g = g;
    s.h = h;
    s.energy = free_site_energy(d, v, h);
    for (int a = 0; a < static_cast<int>(d.chains.size()); ++a) {
        const auto cs = chain_sector(d, a, v, g, h);
        s.chains.push_back(bdg_solve_sector(cs.spec, cs.parity, BdGMethod::Auto, cs.restrict_open));
        s.energy += s.chains.back().ground_energy;
    }
    s.structure = std::move(d);
    s.labels = std::move(v);
    return s;
}

/// <op> in a dual ground state. Per chain the image must be a tau^x string or
/// an even tau^z string; other shapes throw NotMappable.
inline double dual_expectation(const DualState& s, const PauliString& op) {
    const auto& d = s.structure;
    const auto m = map_operator(d, op);
    double value = 1.0;
    for (int l : m.labels) value *= s.labels[static_cast<std::size_t>(l)];
    std::vector<std::vector<int>> xs(d.chains.size()), zs(d.chains.size());
    for (const auto& f : m.tau.factors()) {
        const int a = d.chain_at_tau(f.site);
        const int local = f.site - d.chains[static_cast<std::size_t>(a)].tau_offset;
        if (f.axis == Axis::X) xs[static_cast<std::size_t>(a)].push_back(local);
        else if (f.axis == Axis::Z) zs[static_cast<std::size_t>(a)].push_back(local);
        else throw NotMappable("dual image has tau^y factors");
    }
    for (std::size_t a = 0; a < d.chains.size(); ++a) {
        if (!xs[a].empty() && !zs[a].empty()) throw NotMappable("dual image mixes tau^x and tau^z on one chain");
        if (!xs[a].empty()) value *= x_string(s.chains[a], xs[a]);
        if (!zs[a].empty()) value *= z_string(s.chains[a], zs[a]);
    }
    const auto ph = m.tau.phase();
    if (std::abs(ph.imag()) > 0.0 && value != 0.0) throw NumericalFailure("non-Hermitian dual image");
    return ph.real() * value;
}

/// A lattice state brought into a single label sector.
struct SectorProjection {
    RealStateVector state;
    LabelValues labels;
    std::vector<int> projected;  // labels that were not sharp and got projected
    double weight = 1.0;         // squared norm kept by the projection
};

/// Reads off every label; labels whose expectation is not +-1 within tol are
/// projected, one at a time, onto the eigenvalue with the larger weight (+1 on ties).
inline SectorProjection project_to_sector(const DualStructure& d, const RealStateVector& v, double tol = 1e-8) {
    if (v.num_sites() != d.site_count()) throw DimensionMismatch("state and lattice sizes differ");
    SectorProjection out;
    out.state = v;
    out.state.normalize();
    for (std::size_t l = 0; l < d.labels.size(); ++l) {
        const double e = expectation(out.state, d.labels[l].op).real();
        const int sign = e < 0.0 ? -1 : 1;
        out.labels.push_back(sign);
        if (std::abs(e) >= 1.0 - tol) continue;
        auto w = apply_pauli_string(d.labels[l].op, out.state);
        w *= static_cast<double>(sign);
        w += out.state;
        w *= 0.5;
        out.weight *= w.norm() * w.norm();
        w.normalize();
        out.state = std::move(w);
        out.projected.push_back(static_cast<int>(l));
    }
    return out;
}

}  // namespace wenduality
