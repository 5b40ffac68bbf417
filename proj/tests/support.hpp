#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "pspec/pspec.hpp"

namespace testsupport {

using namespace pspec;

inline std::vector<FundamentalGraph> all_builtins()
{
    std::vector<FundamentalGraph> out;
    for (const auto& name : builtin_catalog()) out.push_back(builtin_graph(name));
    return out;
}

inline std::vector<double> random_k(std::mt19937_64& rng, int d)
{
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    std::vector<double> k(static_cast<std::size_t>(d));
    for (auto& x : k) x = u(rng);
    return k;
}

inline std::vector<double> random_potential(std::mt19937_64& rng, std::size_t nu, double lo = -1.0, double hi = 1.0)
{
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(nu);
    for (auto& x : v) x = u(rng);
    return v;
}

inline Gauge random_gauge(std::mt19937_64& rng, const FundamentalGraph& g, int radius = 2)
{
    std::uniform_int_distribution<int> u(-radius, radius);
    Gauge m = Gauge::identity(g);
    for (auto& s : m.shift)
        for (auto& c : s) c = u(rng);
    return m;
}

/// H(k) assembled straight from the edge list, independent of the symbolic engine.
inline Eigen::MatrixXcd direct_fiber(const FundamentalGraph& g, OperatorKind kind, const std::vector<double>& k)
{
    const auto nu = static_cast<Eigen::Index>(g.num_vertices());
    const auto deg = vertex_degrees(g);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(nu, nu);
    for (const auto& e : g.edges()) {
        double phase = 0.0;
        for (std::size_t s = 0; s < k.size(); ++s) phase += e.index[s] * k[s];
        std::complex<double> w = std::polar(1.0, phase);
        if (is_normalized_kind(kind)) w /= std::sqrt(double(deg[e.from]) * deg[e.to]);
        a(e.from, e.to) += w;
    }
    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(nu, nu);
    for (Eigen::Index x = 0; x < nu; ++x) {
        if (kind == OperatorKind::laplacian) diag(x, x) = double(deg[x]);
        if (kind == OperatorKind::schrodinger) diag(x, x) = g.vertices()[x].potential - deg[x];
        if (kind == OperatorKind::normalized_laplacian) diag(x, x) = 1.0;
    }
    const bool negate = kind == OperatorKind::laplacian || kind == OperatorKind::normalized_laplacian;
    Eigen::MatrixXcd h = negate ? Eigen::MatrixXcd(diag - a) : Eigen::MatrixXcd(diag + a);
    return h;
}

inline Eigen::MatrixXcd matrix_power(const Eigen::MatrixXcd& m, int n)
{
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    for (int i = 0; i < n; ++i) p = p * m;
    return p;
}

/// Fourier coefficients of Tr H(k)^n by exact quadrature on an N^d grid,
/// N larger than twice the largest frequency present.
inline std::map<IndexVec, std::complex<double>> fourier_trace(const FundamentalGraph& g, OperatorKind kind, int n)
{
    int maxf = 0;
    for (const auto& e : g.edges()) maxf = std::max(maxf, sup_norm(e.index));
    const int N = 2 * n * maxf + 2;
    const KGrid grid(N % 2 ? N + 1 : N, g.dim());
    const int M = n * maxf;
    std::vector<std::complex<double>> samples(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) samples[i] = matrix_power(direct_fiber(g, kind, grid.point(i)), n).trace();

    std::map<IndexVec, std::complex<double>> out;
    IndexVec m(static_cast<std::size_t>(g.dim()), -M);
    while (true) {
        std::complex<double> c = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto k = grid.point(i);
            double phase = 0.0;
            for (std::size_t s = 0; s < k.size(); ++s) phase -= m[s] * k[s];
            c += samples[i] * std::polar(1.0, phase);
        }
        c /= double(grid.size());
        if (std::abs(c) > 1e-9) out[m] = c;
        std::size_t s = 0;
        while (s < m.size() && m[s] == M) m[s++] = -M;
        if (s == m.size()) break;
        ++m[s];
    }
    return out;
}

/// Product of invariant factors d_1 ... d_i equals the gcd of all i x i minors.
inline long long det_ll(std::vector<std::vector<long long>> a)
{
    // fraction-free Bareiss elimination
    const std::size_t n = a.size();
    long long sign = 1, prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[p], a[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

inline void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out,
                    std::vector<std::size_t>& cur, std::size_t from = 0)
{
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = from; i < n; ++i) {
        cur.push_back(i);
        subsets(n, k, out, cur, i + 1);
        cur.pop_back();
    }
}

inline std::vector<long long> determinantal_divisors(const IntMatrix& a)
{
    std::vector<long long> out;
    for (std::size_t r = 1; r <= std::min(a.rows, a.cols); ++r) {
        std::vector<std::vector<std::size_t>> rs, cs;
        std::vector<std::size_t> cur;
        subsets(a.rows, r, rs, cur);
        subsets(a.cols, r, cs, cur);
        long long g = 0;
        for (const auto& ri : rs)
            for (const auto& ci : cs) {
                std::vector<std::vector<long long>> m(r, std::vector<long long>(r));
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < r; ++j) m[i][j] = a(ri[i], ci[j]);
                g = std::gcd(g, std::llabs(det_ll(m)));
            }
        if (g == 0) break;
        out.push_back(g);
    }
    return out;
}

} // namespace testsupport
