#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "pspec/operators.hpp"
#include "pspec/parallel.hpp"

namespace pspec {

inline constexpr int kDefaultGridPoints = 64;

/// Uniform grid k = 2 pi (m_1, ..., m_d) / N on the torus. N is even so that
/// both k = 0 and k = (pi, ..., pi) are grid points.
class KGrid {
public:
    KGrid(int points_per_dim, int dim) : n_(points_per_dim), dim_(dim)
    {
        if (n_ <= 0 || n_ % 2 != 0) throw InputError("grid size must be a positive even integer");
        if (dim_ < 1) throw InputError("grid dimension must be at least 1");
        if (std::pow(double(n_), double(dim_)) > 1e9) throw CapExceeded("k-grid too large");
    }

    int points_per_dim() const { return n_; }
    int dim() const { return dim_; }

    std::size_t size() const
    {
        std::size_t s = 1;
        for (int i = 0; i < dim_; ++i) s *= static_cast<std::size_t>(n_);
        return s;
    }

    std::vector<double> point(std::size_t flat) const
    {
        std::vector<double> k(static_cast<std::size_t>(dim_));
        for (int i = 0; i < dim_; ++i) {
            k[i] = 2.0 * std::numbers::pi * static_cast<double>(flat % n_) / n_;
            flat /= n_;
        }
        return k;
    }

private:
    int n_;
    int dim_;
};

struct Band {
    double lo = 0.0;
    double hi = 0.0;
    bool flat = false;

    double width() const { return hi - lo; }
};

inline double default_flat_tol(double hi) { return 1e-8 * (1.0 + std::abs(hi)); }

/// An energy that is an eigenvalue of H(k) at every grid point.
struct FlatLevel {
    double value = 0.0;
    int multiplicity = 1;
};

struct BandTable {
    OperatorKind kind = OperatorKind::laplacian;
    int grid_n = kDefaultGridPoints;
    std::vector<Band> bands; // sorted labeling, ordered by j
    std::vector<FlatLevel> flat_levels;
    // Sorted labeling of what is left after removing the flat levels from
    // every fiber spectrum. A flat level crossing a dispersive band splits
    // it in `bands` but not here.
    std::vector<Band> dispersive_bands;
};

namespace detail {

struct MinMax {
    std::vector<double> lo, hi;
    explicit MinMax(std::size_t n)
        : lo(n, std::numeric_limits<double>::infinity()), hi(n, -std::numeric_limits<double>::infinity())
    {
    }
    void add(std::size_t j, double v)
    {
        lo[j] = std::min(lo[j], v);
        hi[j] = std::max(hi[j], v);
    }
    void fold(const MinMax& o)
    {
        for (std::size_t j = 0; j < lo.size(); ++j) {
            lo[j] = std::min(lo[j], o.lo[j]);
            hi[j] = std::max(hi[j], o.hi[j]);
        }
    }
};

inline int count_near(const std::vector<double>& ev, double c)
{
    int m = 0;
    for (double v : ev)
        if (std::abs(v - c) < default_flat_tol(c)) ++m;
    return m;
}

inline std::vector<Band> to_bands(const MinMax& mm)
{
    std::vector<Band> out;
    for (std::size_t j = 0; j < mm.lo.size(); ++j) {
        Band b{mm.lo[j], mm.hi[j], false};
        b.flat = b.width() < default_flat_tol(b.hi);
        out.push_back(b);
    }
    return out;
}

} // namespace detail

/// Band j is [min_k lambda_j(k)^power, max_k lambda_j(k)^power] over the grid,
/// with lambda_1(k) <= ... <= lambda_nu(k) the sorted fiber eigenvalues.
/// Flat levels are the eigenvalues at k = 0 that persist, with multiplicity,
/// at every grid point.
inline BandTable band_structure(const LaurentMatrix& op, OperatorKind kind, const KGrid& grid, int power = 1)
{
    if (grid.dim() != op.dim()) throw InputError("grid dimension differs from operator dimension");
    const std::size_t nu = op.size();
    const unsigned workers = worker_count();
    auto spectrum_at = [&](std::size_t i) {
        auto ev = eigenvalues(evaluate_fiber(op, grid.point(i))).values;
        if (power != 1) {
            for (auto& v : ev) v = std::pow(v, power);
            std::sort(ev.begin(), ev.end());
        }
        return ev;
    };

    // candidate flat levels: distinct values at k = 0 with their multiplicity
    std::vector<FlatLevel> cand;
    for (double v : spectrum_at(0)) {
        if (!cand.empty() && std::abs(v - cand.back().value) < default_flat_tol(cand.back().value))
            ++cand.back().multiplicity;
        else
            cand.push_back({v, 1});
    }

    std::vector<detail::MinMax> mm(workers, detail::MinMax(nu));
    std::vector<std::vector<int>> persist(workers);
    for (auto& p : persist)
        for (const auto& c : cand) p.push_back(c.multiplicity);

    parallel_chunks(
        grid.size(),
        [&](unsigned w, std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                const auto ev = spectrum_at(i);
                for (std::size_t j = 0; j < nu; ++j) mm[w].add(j, ev[j]);
                for (std::size_t c = 0; c < cand.size(); ++c)
                    persist[w][c] = std::min(persist[w][c], detail::count_near(ev, cand[c].value));
            }
        },
        workers);

    BandTable t;
    t.kind = kind;
    t.grid_n = grid.points_per_dim();
    for (unsigned w = 1; w < workers; ++w) mm[0].fold(mm[w]);
    t.bands = detail::to_bands(mm[0]);
    std::size_t flat_count = 0;
    for (std::size_t c = 0; c < cand.size(); ++c) {
        int m = persist[0][c];
        for (unsigned w = 1; w < workers; ++w) m = std::min(m, persist[w][c]);
        if (m > 0) {
            t.flat_levels.push_back({cand[c].value, m});
            flat_count += static_cast<std::size_t>(m);
        }
    }
    if (t.flat_levels.empty()) {
        t.dispersive_bands = t.bands;
        return t;
    }

    // second sweep with the flat levels taken out of each fiber spectrum
    const std::size_t rest = nu - flat_count;
    std::vector<detail::MinMax> dm(workers, detail::MinMax(rest));
    parallel_chunks(
        grid.size(),
        [&](unsigned w, std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                auto ev = spectrum_at(i);
                for (const auto& f : t.flat_levels)
                    for (int r = 0; r < f.multiplicity; ++r) {
                        auto it = std::min_element(ev.begin(), ev.end(), [&](double a, double c) {
                            return std::abs(a - f.value) < std::abs(c - f.value);
                        });
                        ev.erase(it);
                    }
                for (std::size_t j = 0; j < rest; ++j) dm[w].add(j, ev[j]);
            }
        },
        workers);
    for (unsigned w = 1; w < workers; ++w) dm[0].fold(dm[w]);
    t.dispersive_bands = detail::to_bands(dm[0]);
    return t;
}

inline BandTable band_structure(const FundamentalGraph& g, OperatorKind kind, const KGrid& grid)
{
    return band_structure(symbolic_operator(g, kind), kind, grid);
}

inline double total_bandwidth(const BandTable& t)
{
    double s = 0.0;
    for (const auto& b : t.bands) s += b.width();
    return s;
}

inline double max_band_width(const BandTable& t)
{
    double s = 0.0;
    for (const auto& b : t.bands) s = std::max(s, b.width());
    return s;
}

/// Lebesgue measure of the union of the band intervals.
inline double spectrum_measure(const BandTable& t)
{
    std::vector<std::pair<double, double>> iv;
    for (const auto& b : t.bands) iv.emplace_back(b.lo, b.hi);
    std::sort(iv.begin(), iv.end());
    double total = 0.0;
    std::size_t i = 0;
    while (i < iv.size()) {
        double a = iv[i].first, b = iv[i].second;
        ++i;
        while (i < iv.size() && iv[i].first <= b) b = std::max(b, iv[i++].second);
        total += b - a;
    }
    return total;
}

namespace detail {

template <class Tol>
std::vector<Band> collect_flat(const BandTable& t, std::vector<Band> out, Tol tol)
{
    for (const auto& f : t.flat_levels) {
        long covered = std::count_if(out.begin(), out.end(), [&](const Band& b) {
            return std::abs(0.5 * (b.lo + b.hi) - f.value) < tol(f.value);
        });
        for (long r = covered; r < f.multiplicity; ++r) out.push_back({f.value, f.value, true});
    }
    std::sort(out.begin(), out.end(), [](const Band& a, const Band& b) { return a.lo < b.lo; });
    return out;
}

} // namespace detail

/// Bands narrower than tol, plus flat levels that no such band already covers.
inline std::vector<Band> flat_bands(const BandTable& t, double tol)
{
    if (!(tol > 0)) throw InputError("flat-band tolerance must be positive");
    std::vector<Band> out;
    for (const auto& b : t.bands)
        if (b.width() < tol) out.push_back({b.lo, b.hi, true});
    return detail::collect_flat(t, std::move(out), [tol](double) { return tol; });
}

/// Same, under the per-band default tolerance.
inline std::vector<Band> flat_bands(const BandTable& t)
{
    std::vector<Band> out;
    for (const auto& b : t.bands)
        if (b.flat) out.push_back(b);
    return detail::collect_flat(t, std::move(out), default_flat_tol);
}

struct DispersionRow {
    std::vector<double> k;
    std::vector<double> eigenvalues;
};

/// Sorted eigenvalues at every grid point, in grid order.
inline std::vector<DispersionRow> dispersion(const LaurentMatrix& op, const KGrid& grid)
{
    std::vector<DispersionRow> rows(grid.size());
    parallel_chunks(grid.size(), [&](unsigned, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            rows[i].k = grid.point(i);
            rows[i].eigenvalues = eigenvalues(evaluate_fiber(op, rows[i].k)).values;
        }
    });
    return rows;
}

} // namespace pspec
