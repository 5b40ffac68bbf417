#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "pspec/bands.hpp"
#include "pspec/bounds.hpp"
#include "pspec/cycles.hpp"

namespace pspec {

using ojson = nlohmann::ordered_json;

/// 12 significant digits, the fixed machine-readable precision.
inline std::string fmt_g12(double x)
{
    if (x == 0.0) x = 0.0; // drops the sign of -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

/// Value rounded to 12 significant digits, so JSON output is stable.
inline double round12(double x)
{
    if (!std::isfinite(x)) return x;
    double r = std::stod(fmt_g12(x));
    return r == 0.0 ? 0.0 : r;
}

/// Human-readable, 4 decimals.
inline std::string fmt_fixed4(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    std::string s = buf;
    if (s == "-0.0000") s = "0.0000";
    return s;
}

inline ojson to_json(const BandTable& t)
{
    ojson j;
    j["kind"] = std::string(to_string(t.kind));
    j["grid_n"] = t.grid_n;
    ojson bands = ojson::array();
    for (std::size_t i = 0; i < t.bands.size(); ++i)
        bands.push_back({{"j", i + 1}, {"lo", round12(t.bands[i].lo)}, {"hi", round12(t.bands[i].hi)},
                         {"flat", t.bands[i].flat}});
    j["bands"] = std::move(bands);
    ojson flat = ojson::array();
    for (const auto& f : t.flat_levels) flat.push_back({{"value", round12(f.value)}, {"multiplicity", f.multiplicity}});
    j["flat_levels"] = std::move(flat);
    ojson disp = ojson::array();
    for (const auto& b : t.dispersive_bands) disp.push_back({round12(b.lo), round12(b.hi)});
    j["dispersive_bands"] = std::move(disp);
    return j;
}

inline std::string to_csv(const BandTable& t)
{
    std::ostringstream os;
    os << "j,lo,hi,flat\n";
    for (std::size_t i = 0; i < t.bands.size(); ++i)
        os << i + 1 << ',' << fmt_g12(t.bands[i].lo) << ',' << fmt_g12(t.bands[i].hi) << ','
           << (t.bands[i].flat ? "true" : "false") << '\n';
    return os.str();
}

inline std::string dispersion_csv(const std::vector<DispersionRow>& rows)
{
    std::ostringstream os;
    if (rows.empty()) return "";
    for (std::size_t i = 0; i < rows.front().k.size(); ++i) os << (i ? "," : "") << 'k' << i + 1;
    for (std::size_t j = 0; j < rows.front().eigenvalues.size(); ++j) os << ",lambda" << j + 1;
    os << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.k.size(); ++i) os << (i ? "," : "") << fmt_g12(r.k[i]);
        for (double v : r.eigenvalues) os << ',' << fmt_g12(v);
        os << '\n';
    }
    return os.str();
}

inline ojson to_json(const StructuralConstants& c)
{
    ojson j;
    j["d"] = c.d;
    j["nu"] = c.nu;
    j["kappa_minus"] = c.kappa_minus;
    j["kappa_plus"] = c.kappa_plus;
    j["v_plus"] = round12(c.v_plus);
    j["v_star"] = round12(c.v_star);
    j["kappa_star"] = round12(c.kappa_star);
    j["d_star"] = c.d_star;
    j["beta"] = c.beta;
    j["b"] = c.b;
    j["b_min"] = c.b_min;
    j["search_radius"] = c.search_radius;
    j["gb"] = round12(c.gb);
    j["bipartite"] = c.bipartite;
    return j;
}

inline ojson to_json(const BoundsReport& r)
{
    ojson j;
    j["kind"] = std::string(to_string(r.kind));
    j["constants"] = to_json(r.constants);
    ojson w = ojson::array();
    for (const auto& t : r.witnesses)
        w.push_back({{"n", t.n}, {"B1", round12(t.B1)}, {"B2", round12(t.B2)}, {"value", round12(t.value)}});
    j["witnesses"] = std::move(w);
    j["lower_closed_form"] = round12(r.lower_closed_form);
    j["lower_refined"] = round12(r.lower_refined);
    j["refined_n"] = r.refined_n;
    j["upper_closed_form"] = round12(r.upper_closed_form);
    j["lower"] = round12(r.lower);
    j["upper"] = round12(r.upper);
    j["bracket"] = {round12(r.lower), round12(r.upper)};
    j["measure_lower"] = round12(r.measure_lower);
    return j;
}

inline const char* kCycleCsvHeader = "n,N0,Nplus,Nodd,Bn1,Bn2,Tn0\n";

inline ojson to_json(const CycleClassSummary& s)
{
    return {{"n", s.n},          {"N0", s.N0},  {"Nplus", s.Nplus},          {"Nodd", s.Nodd},
            {"Bn1", round12(s.Bn1)}, {"Bn2", round12(s.Bn2)}, {"Tn0", round12(s.Tn0)}};
}

inline std::string to_csv_row(const CycleClassSummary& s)
{
    std::ostringstream os;
    os << s.n << ',' << s.N0 << ',' << s.Nplus << ',' << s.Nodd << ',' << fmt_g12(s.Bn1) << ',' << fmt_g12(s.Bn2)
       << ',' << fmt_g12(s.Tn0) << '\n';
    return os.str();
}

inline ojson to_json(const FundamentalGraph& g, const CycleRecord& c)
{
    ojson edges = ojson::array();
    for (auto e : c.edges)
        edges.push_back({{"from", g.vertices()[g.edge(e).from].label},
                         {"to", g.vertices()[g.edge(e).to].label},
                         {"index", g.edge(e).index}});
    return {{"length", c.length()}, {"index", c.index}, {"edges", std::move(edges)}};
}

inline ojson to_json(const FundamentalGraph& g, const LftzReport& r)
{
    ojson j;
    j["lattice_ok"] = r.lattice_ok;
    j["invariant_factors"] = r.invariant_factors;
    if (r.basis_subset) {
        ojson b = ojson::array();
        for (const auto& c : *r.basis_subset) b.push_back(to_json(g, c));
        j["basis_subset"] = std::move(b);
    } else {
        j["basis_subset"] = nullptr;
    }
    j["d_star"] = r.d_star;
    j["witness_n"] = r.witness_n ? ojson(*r.witness_n) : ojson(nullptr);
    j["witness_nodd"] = r.witness_nodd;
    j["bipartite"] = r.bipartite;
    j["bipartite_witness_n"] = r.bipartite_witness_n ? ojson(*r.bipartite_witness_n) : ojson(nullptr);
    j["bipartite_witness_nodd"] = r.bipartite_witness_nodd;
    return j;
}

} // namespace pspec
