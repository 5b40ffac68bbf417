#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "pspec/graph.hpp"

namespace pspec {

namespace detail {

inline FundamentalGraph make_graph(int d, const std::vector<std::string>& labels,
                                   const std::vector<std::tuple<int, int, IndexVec>>& edges)
{
    std::vector<Vertex> verts;
    for (const auto& l : labels) verts.push_back({l, 0.0});
    std::vector<EdgeSpec> specs;
    for (const auto& [a, b, idx] : edges)
        specs.push_back({static_cast<std::size_t>(a), static_cast<std::size_t>(b), idx});
    return {d, std::move(verts), std::move(specs)};
}

} // namespace detail

/// Z^d: one vertex, d loops with the unit indices.
inline FundamentalGraph zd_lattice(int d)
{
    if (d < 1) throw InputError("zd requires d >= 1");
    std::vector<std::tuple<int, int, IndexVec>> edges;
    for (int s = 0; s < d; ++s) {
        IndexVec e = zero_index(d);
        e[s] = 1;
        edges.emplace_back(0, 0, e);
    }
    return detail::make_graph(d, {"o"}, edges);
}

/// Z with a nu-periodic structure: cycle 1 -> 2 -> ... -> nu -> 1, only the
/// closing edge (nu, 1) carries index 1.
inline FundamentalGraph z_cycle(int nu)
{
    if (nu < 1) throw InputError("z_cycle requires nu >= 1");
    std::vector<std::string> labels;
    for (int i = 1; i <= nu; ++i) labels.push_back(std::to_string(i));
    std::vector<std::tuple<int, int, IndexVec>> edges;
    for (int i = 0; i + 1 < nu; ++i) edges.emplace_back(i, i + 1, IndexVec{0});
    edges.emplace_back(nu - 1, 0, IndexVec{1});
    return detail::make_graph(1, labels, edges);
}

/// Honeycomb lattice: e1 = (v2, v1), e2 = (v1, v2), e3 = (v1, v2).
inline FundamentalGraph hexagonal_lattice()
{
    return detail::make_graph(2, {"v1", "v2"},
                              {{1, 0, {0, 0}}, {0, 1, {1, 0}}, {0, 1, {0, 1}}});
}

inline FundamentalGraph kagome_lattice()
{
    return detail::make_graph(2, {"x1", "x2", "x3"},
                              {{0, 1, {0, 0}},
                               {1, 2, {0, 0}},
                               {2, 0, {0, 0}},
                               {1, 0, {0, 1}},
                               {2, 1, {1, -1}},
                               {0, 2, {-1, 0}}});
}

/// Z-periodic chain: triangle x1 x2 x4 and triangle x1 x4 x3 glued along
/// the bridge (x1, x4).
inline FundamentalGraph fig4_chain()
{
    return detail::make_graph(1, {"x1", "x2", "x3", "x4"},
                              {{0, 3, {1}}, {0, 1, {0}}, {1, 3, {0}}, {3, 2, {0}}, {2, 0, {0}}});
}

/// Square lattice of diamonds: a 4-cycle L-B-R-T per cell, R joined to the
/// next cell's L and T to the next cell's B.
inline FundamentalGraph square_diag()
{
    return detail::make_graph(2, {"L", "B", "R", "T"},
                              {{0, 1, {0, 0}},
                               {1, 2, {0, 0}},
                               {2, 3, {0, 0}},
                               {3, 0, {0, 0}},
                               {2, 0, {1, 0}},
                               {3, 1, {0, 1}}});
}

/// Named lattice library. Parameterized names take "name(p)" or "name:p".
inline FundamentalGraph builtin_graph(const std::string& spec)
{
    std::string name = spec, param;
    if (auto open = spec.find('('); open != std::string::npos) {
        if (spec.back() != ')') throw InputError("malformed builtin name '" + spec + "'");
        name = spec.substr(0, open);
        param = spec.substr(open + 1, spec.size() - open - 2);
    } else if (auto colon = spec.find(':'); colon != std::string::npos) {
        name = spec.substr(0, colon);
        param = spec.substr(colon + 1);
    }
    auto int_param = [&]() {
        if (param.empty()) throw InputError("builtin '" + name + "' requires a parameter");
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(param, &used);
        } catch (const std::exception&) {
            throw InputError("invalid parameter '" + param + "' for '" + name + "'");
        }
        if (used != param.size()) throw InputError("invalid parameter '" + param + "' for '" + name + "'");
        return v;
    };
    auto no_param = [&]() {
        if (!param.empty()) throw InputError("builtin '" + name + "' takes no parameter");
    };

    if (name == "zd") return zd_lattice(int_param());
    if (name == "z_cycle") return z_cycle(int_param());
    if (name == "hexagonal") return no_param(), hexagonal_lattice();
    if (name == "kagome") return no_param(), kagome_lattice();
    if (name == "fig4_chain") return no_param(), fig4_chain();
    if (name == "square_diag") return no_param(), square_diag();
    throw InputError("unknown builtin graph '" + spec + "'");
}

/// Names used by the test suites for "every builtin".
inline std::vector<std::string> builtin_catalog()
{
    return {"zd(1)", "zd(2)", "zd(3)", "z_cycle(3)", "z_cycle(4)",
            "hexagonal", "kagome", "fig4_chain", "square_diag"};
}

} // namespace pspec
