#pragma once

#include <cstdlib>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "pspec/error.hpp"

namespace pspec {

/// Integer vector in Z^d: edge indices, cycle indices, Fourier frequencies.
using IndexVec = std::vector<int>;

inline IndexVec zero_index(int d) { return IndexVec(static_cast<std::size_t>(d), 0); }

inline bool is_zero(const IndexVec& m)
{
    for (int c : m)
        if (c != 0) return false;
    return true;
}

inline IndexVec operator+(const IndexVec& a, const IndexVec& b)
{
    if (a.size() != b.size()) throw InputError("index dimension mismatch");
    IndexVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline IndexVec operator-(const IndexVec& a, const IndexVec& b)
{
    if (a.size() != b.size()) throw InputError("index dimension mismatch");
    IndexVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline IndexVec operator-(const IndexVec& a)
{
    IndexVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

inline IndexVec& operator+=(IndexVec& a, const IndexVec& b)
{
    if (a.size() != b.size()) throw InputError("index dimension mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

/// <m, 1>, the sum of components.
inline long component_sum(const IndexVec& m) { return std::accumulate(m.begin(), m.end(), 0L); }

inline bool has_odd_component_sum(const IndexVec& m) { return (component_sum(m) % 2) != 0; }

/// max_s |m_s|
inline int sup_norm(const IndexVec& m)
{
    int r = 0;
    for (int c : m) r = std::max(r, std::abs(c));
    return r;
}

/// "m1,m2,...,md"
inline std::string to_key(const IndexVec& m)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i) os << ',';
        os << m[i];
    }
    return os.str();
}

} // namespace pspec
