#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string_view>
#include <vector>

#include "pspec/laurent.hpp"
#include "pspec/operators.hpp"
#include "pspec/parallel.hpp"

namespace pspec {

// Closed walks ("cycles" in the counting sense): length-n edge sequences that
// return to their base vertex. Base point and direction both count, so every
// cyclic shift and the reversal of a walk are tallied separately, and
// backtracking walks are included.

enum class WalkMode { unit, schrodinger_weights, normalized_weights };

inline std::string_view to_string(WalkMode m)
{
    switch (m) {
    case WalkMode::unit: return "unit";
    case WalkMode::schrodinger_weights: return "schrodinger";
    case WalkMode::normalized_weights: return "normalized";
    }
    return "?";
}

struct WalkClassCounts {
    int n = 0;
    int dim = 1;
    WalkMode mode = WalkMode::unit;
    std::map<IndexVec, double> by_index; // walk index -> count or weight sum

    double at(const IndexVec& m) const
    {
        auto it = by_index.find(m);
        return it == by_index.end() ? 0.0 : it->second;
    }
};

inline constexpr double kDefaultWalkCap = 1e8;

namespace detail {

struct WalkStep {
    std::size_t to;
    IndexVec index;
    double weight;
};

// Weights are accumulated in extended precision: with negative loop weights
// the sums cancel heavily.
using WalkSum = long double;

inline void walk_dfs(const std::vector<std::vector<WalkStep>>& steps, std::size_t start, std::size_t at,
                     int remaining, IndexVec& idx, WalkSum weight, std::map<IndexVec, WalkSum>& out)
{
    if (remaining == 0) {
        if (at == start) out[idx] += weight;
        return;
    }
    for (const auto& s : steps[at]) {
        if (remaining == 1 && s.to != start) continue;
        idx += s.index;
        walk_dfs(steps, start, s.to, remaining - 1, idx, weight * static_cast<WalkSum>(s.weight), out);
        for (std::size_t c = 0; c < idx.size(); ++c) idx[c] -= s.index[c];
    }
}

/// Depth-first enumeration of all closed walks of length n, one worker per
/// base vertex; per-vertex maps are merged in vertex order.
inline std::map<IndexVec, double> enumerate_closed_walks(const std::vector<std::vector<WalkStep>>& steps, int dim,
                                                         int n, double cap)
{
    if (n < 1) throw InputError("walk length must be at least 1");
    std::size_t branching = 1;
    for (const auto& s : steps) branching = std::max(branching, s.size());
    if (double(steps.size()) * std::pow(double(branching), double(n)) > cap)
        throw CapExceeded("closed-walk enumeration exceeds the step cap");

    std::vector<std::map<IndexVec, WalkSum>> partial(steps.size());
    parallel_chunks(steps.size(), [&](unsigned, std::size_t b, std::size_t e) {
        for (std::size_t x = b; x < e; ++x) {
            IndexVec idx = zero_index(dim);
            walk_dfs(steps, x, x, n, idx, 1.0L, partial[x]);
        }
    });
    std::map<IndexVec, WalkSum> merged;
    for (const auto& p : partial)
        for (const auto& [m, w] : p) merged[m] += w;
    std::map<IndexVec, double> out;
    for (const auto& [m, w] : merged) out.emplace(m, static_cast<double>(w));
    return out;
}

inline std::vector<std::vector<WalkStep>> graph_steps(const FundamentalGraph& g)
{
    std::vector<std::vector<WalkStep>> steps(g.num_vertices());
    for (std::size_t x = 0; x < g.num_vertices(); ++x)
        for (auto e : g.out_edges(x)) steps[x].push_back({g.edge(e).to, g.edge(e).index, 1.0});
    return steps;
}

} // namespace detail

/// Throws CapExceeded when enumerating length-n closed walks would exceed cap
/// steps; with_loops accounts for the loops of the modified graph.
inline void require_walk_budget(const FundamentalGraph& g, int n, bool with_loops, double cap = kDefaultWalkCap)
{
    std::size_t branching = 1;
    for (std::size_t x = 0; x < g.num_vertices(); ++x)
        branching = std::max(branching, g.out_edges(x).size() + (with_loops ? 1 : 0));
    if (double(g.num_vertices()) * std::pow(double(branching), double(n)) > cap)
        throw CapExceeded("closed-walk enumeration exceeds the step cap");
}

/// Unit-weight closed walks of length n, keyed by index.
inline WalkClassCounts count_walks(const FundamentalGraph& g, int n, double cap = kDefaultWalkCap)
{
    return {n, g.dim(), WalkMode::unit, detail::enumerate_closed_walks(detail::graph_steps(g), g.dim(), n, cap)};
}

enum class PotentialShift { normalized, raw };

/// Loop weights v_x = V_x - kappa_x of the modified fundamental graph; the
/// normalized variant subtracts min_x (V_x - kappa_x) so that all are >= 0.
inline std::vector<double> loop_weights(const FundamentalGraph& g, PotentialShift shift)
{
    const auto deg = vertex_degrees(g);
    std::vector<double> v(g.num_vertices());
    for (std::size_t x = 0; x < v.size(); ++x) v[x] = g.vertices()[x].potential - deg[x];
    if (shift == PotentialShift::normalized) {
        const double lo = *std::min_element(v.begin(), v.end());
        for (auto& w : v) w -= lo;
    }
    return v;
}

/// Closed walks on the modified graph (one index-0 loop per vertex, weight
/// v_x); a walk's weight is the product of its step weights.
inline WalkClassCounts weighted_walk_sums(const FundamentalGraph& g, int n,
                                          PotentialShift shift = PotentialShift::normalized,
                                          double cap = kDefaultWalkCap)
{
    auto steps = detail::graph_steps(g);
    const auto v = loop_weights(g, shift);
    for (std::size_t x = 0; x < steps.size(); ++x)
        if (v[x] != 0.0) steps[x].push_back({x, zero_index(g.dim()), v[x]});
    return {n, g.dim(), WalkMode::schrodinger_weights, detail::enumerate_closed_walks(steps, g.dim(), n, cap)};
}

/// Closed walks weighted by 1 / (kappa_{x_1} ... kappa_{x_n}) over tail vertices.
inline WalkClassCounts normalized_walk_sums(const FundamentalGraph& g, int n, double cap = kDefaultWalkCap)
{
    const auto deg = vertex_degrees(g);
    auto steps = detail::graph_steps(g);
    for (std::size_t x = 0; x < steps.size(); ++x) {
        if (deg[x] == 0) throw InputError("isolated vertex '" + g.vertices()[x].label + "'");
        for (auto& s : steps[x]) s.weight = 1.0 / deg[x];
    }
    return {n, g.dim(), WalkMode::normalized_weights, detail::enumerate_closed_walks(steps, g.dim(), n, cap)};
}

inline constexpr double kIntegerTol = 1e-6;

struct CycleClassSummary {
    int n = 0;
    long long N0 = 0, Nplus = 0, Nodd = 0; // unit-mode counts
    double Bn1 = 0.0, Bn2 = 0.0, Tn0 = 0.0; // weighted sums
};

namespace detail {

inline long long checked_round(double v)
{
    const double r = std::round(v);
    if (std::abs(v - r) > kIntegerTol) throw ConsistencyError("walk count is not an integer");
    return static_cast<long long>(r);
}

} // namespace detail

/// B_{n,1} = weight over nonzero indices, B_{n,2} = 2 x weight over odd
/// component sums, T_{n,0} = weight at index 0. The N fields are filled only
/// in unit mode (they are the same sums, as integers).
inline CycleClassSummary classify(const WalkClassCounts& w)
{
    CycleClassSummary s;
    s.n = w.n;
    double plus = 0.0, odd = 0.0, zero = 0.0;
    for (const auto& [m, v] : w.by_index) {
        if (is_zero(m)) zero += v;
        else plus += v;
        if (has_odd_component_sum(m)) odd += v;
    }
    s.Bn1 = plus;
    s.Bn2 = 2.0 * odd;
    s.Tn0 = zero;
    if (w.mode == WalkMode::unit) {
        s.N0 = detail::checked_round(zero);
        s.Nplus = detail::checked_round(plus);
        s.Nodd = detail::checked_round(odd);
    }
    return s;
}

/// Counts from the unit enumeration, B and T terms from the weighted one.
inline CycleClassSummary classify(const WalkClassCounts& unit, const WalkClassCounts& weighted)
{
    if (unit.mode != WalkMode::unit) throw InputError("first argument must be unit-mode counts");
    auto s = classify(weighted);
    const auto u = classify(unit);
    s.N0 = u.N0;
    s.Nplus = u.Nplus;
    s.Nodd = u.Nodd;
    return s;
}

/// Traces Tr M^1 ... Tr M^n_max of the symbolic operator, by repeated products.
inline std::vector<LaurentPoly> trace_series_upto(const FundamentalGraph& g, OperatorKind kind, int n_max)
{
    if (n_max < 1) throw InputError("power must be at least 1");
    const auto m = symbolic_operator(g, kind);
    std::vector<LaurentPoly> out;
    LaurentMatrix p = m;
    out.push_back(lmat_trace(p));
    for (int n = 2; n <= n_max; ++n) {
        p = p * m;
        out.push_back(lmat_trace(p));
    }
    return out;
}

/// Tr M^n(k) as a finite Fourier series (symbolic engine).
inline LaurentPoly trace_series(const FundamentalGraph& g, OperatorKind kind, int n)
{
    return trace_series_upto(g, kind, n).back();
}

namespace detail {

inline LaurentPoly series_from(const WalkClassCounts& w)
{
    LaurentPoly p(w.dim);
    for (const auto& [m, v] : w.by_index) p.add_term(m, v);
    p.prune();
    return p;
}

} // namespace detail

/// Tr M^n(k) assembled from closed-walk enumeration (walk engine):
///   adjacency             unit counts
///   schrodinger           modified-graph weights with the raw potential
///   laplacian             (-1)^n x modified-graph weights with V = 0
///   transition            normalized weights
///   normalized_laplacian  sum_j C(n, j) (-1)^j Tr T^j
inline LaurentPoly walk_trace_series(const FundamentalGraph& g, OperatorKind kind, int n,
                                     double cap = kDefaultWalkCap)
{
    switch (kind) {
    case OperatorKind::adjacency: return detail::series_from(count_walks(g, n, cap));
    case OperatorKind::schrodinger: return detail::series_from(weighted_walk_sums(g, n, PotentialShift::raw, cap));
    case OperatorKind::laplacian: {
        const std::vector<double> zero(g.num_vertices(), 0.0);
        auto p = detail::series_from(weighted_walk_sums(g.with_potential(zero), n, PotentialShift::raw, cap));
        return n % 2 ? p * Complex(-1.0) : p;
    }
    case OperatorKind::transition: return detail::series_from(normalized_walk_sums(g, n, cap));
    case OperatorKind::normalized_laplacian: {
        LaurentPoly total = LaurentPoly::constant(g.dim(), double(g.num_vertices()));
        double binom = 1.0;
        for (int j = 1; j <= n; ++j) {
            binom = binom * (n - j + 1) / j;
            const double sign = j % 2 ? -1.0 : 1.0;
            total += detail::series_from(normalized_walk_sums(g, j, cap)) * Complex(sign * binom);
        }
        return total;
    }
    }
    throw InputError("unsupported operator kind");
}

/// Unit counts recovered from a symbolic adjacency trace; every coefficient
/// must be real and within kIntegerTol of an integer.
inline WalkClassCounts counts_from_series(const LaurentPoly& p, int n)
{
    WalkClassCounts w{n, p.dim(), WalkMode::unit, {}};
    for (const auto& [m, c] : p.terms()) {
        if (std::abs(c.imag()) > kIntegerTol) throw ConsistencyError("trace coefficient is not real");
        w.by_index[m] = static_cast<double>(detail::checked_round(c.real()));
    }
    return w;
}

inline constexpr double kDualEngineTol = 1e-9;

/// Maximum coefficient difference between the symbolic and walk engines.
/// Throws ConsistencyError beyond tol.
inline double verify_trace_series(const FundamentalGraph& g, OperatorKind kind, int n, double tol = kDualEngineTol,
                                  double cap = kDefaultWalkCap)
{
    const double r = max_abs_diff(trace_series(g, kind, n), walk_trace_series(g, kind, n, cap));
    if (r > tol) throw ConsistencyError("symbolic and walk-sum traces disagree");
    return r;
}

} // namespace pspec
