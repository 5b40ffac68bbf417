#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "pspec/bands.hpp"
#include "pspec/cycles.hpp"
#include "pspec/graph.hpp"

namespace pspec {

/// Graph and potential constants that enter the bandwidth estimates.
struct StructuralConstants {
    int d = 1;
    int nu = 1;
    int kappa_minus = 0, kappa_plus = 0;
    double v_plus = 0.0;     // diam(V - kappa)
    double v_star = 0.0;     // kappa_+ + diam(V - kappa)
    double kappa_star = 0.0; // 2 kappa_+ - kappa_-
    int d_star = 0;          // d rounded up to even
    int beta = 0;
    int b = 0;               // bridges in the current embedding
    int b_min = 0;           // fewest bridges found by the gauge search
    int search_radius = 0;   // radius actually searched for b_min
    Gauge min_gauge;
    double gb = 0.0;         // sum_x (bridges starting at x) / kappa_x
    bool bipartite = false;

    /// Computable stand-in for the invariant I; always >= I.
    int invariant_upper() const { return std::min({b, b_min, beta}); }
};

inline constexpr int kDefaultGaugeRadius = 1;

inline StructuralConstants structural_constants(const FundamentalGraph& g, int radius = kDefaultGaugeRadius)
{
    StructuralConstants c;
    c.d = g.dim();
    c.nu = static_cast<int>(g.num_vertices());
    const auto deg = vertex_degrees(g);
    c.kappa_minus = *std::min_element(deg.begin(), deg.end());
    c.kappa_plus = *std::max_element(deg.begin(), deg.end());
    const auto w = loop_weights(g, PotentialShift::raw);
    c.v_plus = *std::max_element(w.begin(), w.end()) - *std::min_element(w.begin(), w.end());
    c.v_star = c.kappa_plus + c.v_plus;
    c.kappa_star = 2.0 * c.kappa_plus - c.kappa_minus;
    c.d_star = c.d % 2 == 0 ? c.d : c.d + 1;
    c.beta = betti_number(g);
    c.b = bridge_count(g);

    // fall back to smaller boxes if the requested one is over the cap
    for (int r = radius; r >= 0; --r) {
        try {
            auto m = minimize_bridges(g, r);
            c.b_min = m.count;
            c.min_gauge = std::move(m.gauge);
            c.search_radius = r;
            break;
        } catch (const CapExceeded&) {
            if (r == 0) throw;
        }
    }

    for (const auto& e : g.edges())
        if (!is_zero(e.index) && deg[e.from] > 0) c.gb += 1.0 / deg[e.from];
    c.bipartite = is_bipartite(g);
    return c;
}

struct BoundTerm {
    int n = 0;
    double B1 = 0.0, B2 = 0.0;
    double value = 0.0; // max(B1, B2) / (n * scale^(n-1)) or / n
};

struct BoundsReport {
    OperatorKind kind = OperatorKind::schrodinger;
    StructuralConstants constants;
    double lower_closed_form = 0.0;
    double lower_refined = 0.0;
    int refined_n = 0;           // n attaining lower_refined (0 if none positive)
    double lower = 0.0;          // max of the two lower bounds
    double upper_closed_form = 0.0;
    double upper = 0.0;          // best certified upper bound
    double measure_lower = 0.0;  // lower / nu, a bound on the spectrum measure
    std::vector<BoundTerm> witnesses;
};

namespace detail {

inline void finish(BoundsReport& r)
{
    r.lower_refined = 0.0;
    r.refined_n = 0;
    for (const auto& t : r.witnesses)
        if (t.value > r.lower_refined) {
            r.lower_refined = t.value;
            r.refined_n = t.n;
        }
    r.lower = std::max(r.lower_closed_form, r.lower_refined);
    r.measure_lower = r.lower / r.constants.nu;
}

} // namespace detail

/// Estimates for H = -Delta + V with the graph's potential:
///   closed form  2 d_* / v_*^(nu-1)   (4 d / v_*^(nu-1) on bipartite graphs)
///   refined      max_n max(B_n1, B_n2) / (n v_*^(n-1)), weights from the
///                modified graph with the normalized potential
///   upper        4 min(b, b_min, beta)
inline BoundsReport schrodinger_bounds(const FundamentalGraph& g, int n_max, int radius = kDefaultGaugeRadius,
                                       double cap = kDefaultWalkCap)
{
    if (n_max < 1) throw InputError("n_max must be at least 1");
    require_walk_budget(g, n_max, true, cap);
    BoundsReport r;
    r.kind = OperatorKind::schrodinger;
    r.constants = structural_constants(g, radius);
    const auto& c = r.constants;
    const double numer = c.bipartite ? 4.0 * c.d : 2.0 * c.d_star;
    r.lower_closed_form = numer / std::pow(c.v_star, c.nu - 1);
    for (int n = 1; n <= n_max; ++n) {
        const auto s = classify(weighted_walk_sums(g, n, PotentialShift::normalized, cap));
        BoundTerm t{n, s.Bn1, s.Bn2, 0.0};
        t.value = std::max(s.Bn1, s.Bn2) / (n * std::pow(c.v_star, n - 1));
        r.witnesses.push_back(t);
    }
    r.upper_closed_form = 4.0 * c.invariant_upper();
    r.upper = r.upper_closed_form;
    detail::finish(r);
    return r;
}

/// Estimates for the normalized Laplacian (equivalently the transition operator):
///   closed form  2 d_* / kappa_+^nu   (4 d / kappa_+^nu on bipartite graphs)
///   refined      max_n max(B_n1, B_n2) / n with weights 1 / (kappa_{x_1} ... kappa_{x_n})
///   upper        min(2 gb, 4 min(b_min, beta) / kappa_-)
inline BoundsReport normalized_bounds(const FundamentalGraph& g, int n_max, int radius = kDefaultGaugeRadius,
                                      double cap = kDefaultWalkCap)
{
    if (n_max < 1) throw InputError("n_max must be at least 1");
    require_walk_budget(g, n_max, false, cap);
    BoundsReport r;
    r.kind = OperatorKind::normalized_laplacian;
    r.constants = structural_constants(g, radius);
    const auto& c = r.constants;
    if (c.kappa_minus < 1) throw InputError("isolated vertex");
    const double numer = c.bipartite ? 4.0 * c.d : 2.0 * c.d_star;
    r.lower_closed_form = numer / std::pow(double(c.kappa_plus), c.nu);
    for (int n = 1; n <= n_max; ++n) {
        const auto s = classify(normalized_walk_sums(g, n, cap));
        r.witnesses.push_back({n, s.Bn1, s.Bn2, std::max(s.Bn1, s.Bn2) / n});
    }
    r.upper_closed_form = 4.0 * c.invariant_upper() / c.kappa_minus;
    r.upper = std::min(2.0 * c.gb, r.upper_closed_form);
    detail::finish(r);
    return r;
}

struct AdjacencyLower {
    double value = 0.0;
    int n = 0; // 0 when no n <= n_max gives information
};

/// max_n max(N_n^+, 2 N_n^odd) / (n kappa_+^(n-1)).
inline AdjacencyLower adjacency_lower(const FundamentalGraph& g, int n_max, double cap = kDefaultWalkCap)
{
    if (n_max < 1) throw InputError("n_max must be at least 1");
    const auto deg = vertex_degrees(g);
    const double kp = *std::max_element(deg.begin(), deg.end());
    AdjacencyLower best;
    for (int n = 1; n <= n_max; ++n) {
        const auto s = classify(count_walks(g, n, cap));
        const double v = std::max<double>(s.Nplus, 2.0 * s.Nodd) / (n * std::pow(kp, n - 1));
        if (v > best.value) best = {v, n};
    }
    return best;
}

/// The potential under which a kind is a Schrodinger operator up to sign:
/// 0 for the Laplacian, kappa for the adjacency operator, V otherwise.
inline FundamentalGraph with_kind_potential(const FundamentalGraph& g, OperatorKind kind)
{
    if (kind == OperatorKind::laplacian) return g.with_potential(std::vector<double>(g.num_vertices(), 0.0));
    if (kind == OperatorKind::adjacency) {
        const auto deg = vertex_degrees(g);
        return g.with_potential(std::vector<double>(deg.begin(), deg.end()));
    }
    return g;
}

/// Same graph with V shifted so that min_x (V_x - kappa_x) = 0; the Schrodinger
/// fiber operator is then A(k) + diag(v), v the normalized loop weights.
inline FundamentalGraph with_normalized_potential(const FundamentalGraph& g)
{
    const auto w = loop_weights(g, PotentialShift::raw);
    const double lo = *std::min_element(w.begin(), w.end());
    auto v = g.potential();
    for (auto& x : v) x -= lo;
    return g.with_potential(v);
}

/// Bounds for any operator kind. Laplacian uses V = 0; adjacency is the
/// Schrodinger operator with V = kappa (all loop weights vanish); the
/// transition operator shares the normalized Laplacian's bandwidth.
inline BoundsReport bounds_for(const FundamentalGraph& g, OperatorKind kind, int n_max,
                               int radius = kDefaultGaugeRadius, double cap = kDefaultWalkCap)
{
    auto r = is_normalized_kind(kind) ? normalized_bounds(g, n_max, radius, cap)
                                      : schrodinger_bounds(with_kind_potential(g, kind), n_max, radius, cap);
    r.kind = kind;
    return r;
}

/// Experimental: max_k Tr P^n(k) - min_k Tr P^n(k) over the grid also bounds
/// the bandwidth of P^n from below, P the operator with the normalized
/// potential (or the transition operator). Scaled like the refined bound.
/// Not used by bounds_for.
inline double scanned_lower_bound(const FundamentalGraph& g, OperatorKind kind, int n_max, const KGrid& grid)
{
    const bool normalized = is_normalized_kind(kind);
    const auto h = normalized ? g : with_normalized_potential(with_kind_potential(g, kind));
    const auto series = trace_series_upto(h, normalized ? OperatorKind::transition : OperatorKind::schrodinger, n_max);
    const double v_star = structural_constants(h, 0).v_star;
    double best = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        double hi = -std::numeric_limits<double>::infinity(), lo = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double t = series[n - 1].eval(grid.point(i)).real();
            hi = std::max(hi, t);
            lo = std::min(lo, t);
        }
        const double scale = normalized ? n : n * std::pow(v_star, n - 1);
        best = std::max(best, (hi - lo) / scale);
    }
    return best;
}

struct LftzReport {
    bool lattice_ok = false;
    std::vector<long long> invariant_factors;
    std::optional<std::vector<CycleRecord>> basis_subset; // d basis cycles with unimodular index matrix
    int d_star = 0;
    std::optional<int> witness_n;       // least n <= nu with N_n^odd >= n d_*
    long long witness_nodd = 0;
    bool bipartite = false;
    std::optional<int> bipartite_witness_n; // least n <= nu with N_n^odd >= 2 n d
    long long bipartite_witness_nodd = 0;
};

/// Checks the cycle-index lattice facts: indices generate Z^d, some d
/// spanning-tree cycles form a basis, and an odd-index witness length exists.
inline LftzReport verify_lftz(const FundamentalGraph& g, double cap = kDefaultWalkCap)
{
    LftzReport r;
    const int d = g.dim();
    const auto basis = cycle_basis(g);
    r.invariant_factors = smith_invariant_factors(basis.index_matrix);
    r.lattice_ok = r.invariant_factors.size() == static_cast<std::size_t>(d) &&
                   std::all_of(r.invariant_factors.begin(), r.invariant_factors.end(),
                               [](long long f) { return f == 1; });

    const std::size_t beta = basis.cycles.size();
    if (beta >= static_cast<std::size_t>(d)) {
        std::vector<std::size_t> pick(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) pick[i] = static_cast<std::size_t>(i);
        while (true) {
            IntMatrix sub(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i)
                for (int s = 0; s < d; ++s) sub(s, i) = basis.index_matrix(s, pick[i]);
            auto f = smith_invariant_factors(sub);
            if (f.size() == static_cast<std::size_t>(d) &&
                std::all_of(f.begin(), f.end(), [](long long x) { return x == 1; })) {
                std::vector<CycleRecord> chosen;
                for (auto i : pick) chosen.push_back(basis.cycles[i]);
                r.basis_subset = std::move(chosen);
                break;
            }
            int i = d - 1;
            while (i >= 0 && pick[i] == beta - static_cast<std::size_t>(d - i)) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < d; ++j) pick[j] = pick[j - 1] + 1;
        }
    }

    r.d_star = d % 2 == 0 ? d : d + 1;
    r.bipartite = is_bipartite(g);
    for (int n = 1; n <= static_cast<int>(g.num_vertices()); ++n) {
        const auto s = classify(count_walks(g, n, cap));
        if (!r.witness_n && s.Nodd >= static_cast<long long>(n) * r.d_star) {
            r.witness_n = n;
            r.witness_nodd = s.Nodd;
        }
        if (r.bipartite && !r.bipartite_witness_n && s.Nodd >= 2LL * n * d) {
            r.bipartite_witness_n = n;
            r.bipartite_witness_nodd = s.Nodd;
        }
    }
    return r;
}

} // namespace pspec
