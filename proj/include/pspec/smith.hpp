#pragma once

#include <cstdlib>
#include <utility>
#include <vector>

namespace pspec {

/// Dense row-major integer matrix. Entries stay small for the graphs we handle.
struct IntMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<long long> data;

    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}

    long long& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    long long operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Invariant factors of the Smith normal form, d_1 | d_2 | ... | d_r, all positive.
/// r is the rank; zero diagonal entries are not reported.
inline std::vector<long long> smith_invariant_factors(IntMatrix a)
{
    std::vector<long long> factors;
    const std::size_t m = a.rows, n = a.cols;
    std::size_t t = 0;
    auto swap_rows = [&](std::size_t i, std::size_t j) {
        for (std::size_t c = 0; c < n; ++c) std::swap(a(i, c), a(j, c));
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        for (std::size_t r = 0; r < m; ++r) std::swap(a(r, i), a(r, j));
    };

    while (t < m && t < n) {
        // pivot: smallest nonzero magnitude in the trailing block
        std::size_t pi = m, pj = n;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (a(i, j) != 0 && (pi == m || std::llabs(a(i, j)) < std::llabs(a(pi, pj)))) {
                    pi = i;
                    pj = j;
                }
        if (pi == m) break;
        swap_rows(t, pi);
        swap_cols(t, pj);

        bool done = false;
        while (!done) {
            done = true;
            const long long p = a(t, t);
            for (std::size_t i = t + 1; i < m; ++i) {
                const long long q = a(i, t) / p;
                if (q != 0)
                    for (std::size_t c = t; c < n; ++c) a(i, c) -= q * a(t, c);
                if (a(i, t) != 0) done = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                const long long q = a(t, j) / p;
                if (q != 0)
                    for (std::size_t r = t; r < m; ++r) a(r, j) -= q * a(r, t);
                if (a(t, j) != 0) done = false;
            }
            if (!done) {
                // a remainder is smaller than the pivot; move it into place
                std::size_t bi = t, bj = t;
                for (std::size_t i = t + 1; i < m; ++i)
                    if (a(i, t) != 0 && std::llabs(a(i, t)) < std::llabs(a(bi, bj))) { bi = i; bj = t; }
                for (std::size_t j = t + 1; j < n; ++j)
                    if (a(t, j) != 0 && std::llabs(a(t, j)) < std::llabs(a(bi, bj))) { bi = t; bj = j; }
                swap_rows(t, bi);
                swap_cols(t, bj);
                continue;
            }
            // divisibility: pivot must divide the whole trailing block
            for (std::size_t i = t + 1; i < m && done; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (a(i, j) % p != 0) {
                        for (std::size_t c = t; c < n; ++c) a(t, c) += a(i, c);
                        done = false;
                        break;
                    }
        }
        factors.push_back(std::llabs(a(t, t)));
        ++t;
    }
    return factors;
}

} // namespace pspec
