#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pspec/bands.hpp"
#include "pspec/bounds.hpp"
#include "pspec/builtin.hpp"
#include "pspec/cycles.hpp"
#include "pspec/graph_io.hpp"
#include "pspec/io.hpp"

namespace pspec::cli {

enum class Format { text, json, csv };

struct Command {
    std::string verb;
    std::string builtin;
    std::string graph_file;
    OperatorKind kind = OperatorKind::laplacian;
    int grid = kDefaultGridPoints;
    std::optional<int> n_max; // defaults to nu
    int radius = kDefaultGaugeRadius;
    Format format = Format::text;
    std::string out;
    std::optional<double> flat_tol;
    std::vector<double> potential; // overrides vertex potentials when nonempty
    std::string dispersion;        // bands: also write dispersion CSV here
    bool scan_k = false;           // bounds: experimental k-scan lower bound
};

inline const std::vector<std::string> kVerbs{"info", "bands", "bandwidth", "bounds",
                                             "cycles", "traces", "embed", "verify"};

inline void configure(CLI::App& app, Command& c)
{
    app.add_option("verb", c.verb, "info | bands | bandwidth | bounds | cycles | traces | embed | verify")
        ->required()
        ->check(CLI::IsMember(kVerbs));
    auto* b = app.add_option("--builtin", c.builtin, "builtin graph: zd(d), z_cycle(nu), hexagonal, kagome, "
                                                     "fig4_chain, square_diag");
    auto* g = app.add_option("--graph", c.graph_file, "graph file (JSON)");
    b->excludes(g);
    g->excludes(b);
    app.add_option_function<std::string>(
        "--operator", [&c](const std::string& s) { c.kind = parse_operator_kind(s); },
        "adjacency | laplacian | schrodinger | normalized_laplacian | transition (default laplacian)");
    app.add_option("--grid", c.grid, "k-points per dimension, even (default 64)");
    app.add_option("--n-max", c.n_max, "largest walk length (default: vertex count)");
    app.add_option("--radius", c.radius, "gauge search radius (default 1)");
    app.add_option_function<std::string>(
           "--format",
           [&c](const std::string& s) { c.format = s == "json" ? Format::json : s == "csv" ? Format::csv : Format::text; },
           "text | json | csv (default text)")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--out", c.out, "write the artifact here instead of stdout");
    app.add_option("--flat-tol", c.flat_tol, "flat-band width tolerance");
    app.add_option("--potential", c.potential, "comma-separated vertex potentials")->delimiter(',');
    app.add_option("--dispersion", c.dispersion, "bands: write the dispersion CSV to this path");
    app.add_flag("--scan-k", c.scan_k, "bounds: add the experimental k-scan lower bound");
}

inline FundamentalGraph load_graph(const Command& c)
{
    if (c.builtin.empty() == c.graph_file.empty()) throw InputError("exactly one of --builtin or --graph is required");
    FundamentalGraph g = [&] {
        if (!c.builtin.empty()) return builtin_graph(c.builtin);
        std::ifstream in(c.graph_file);
        if (!in) throw InputError("cannot read graph file '" + c.graph_file + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_graph(ss.str());
    }();
    if (!c.potential.empty()) g = g.with_potential(c.potential);
    return g;
}

namespace detail {

inline std::string join_fixed4(const std::vector<double>& v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt_fixed4(v[i]);
    return s + "]";
}

inline std::string label_list(const FundamentalGraph& g, const std::vector<int>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + g.vertices()[i].label + "=" + std::to_string(v[i]);
    return s;
}

inline std::string info(const FundamentalGraph& g, const Command& c)
{
    const auto sc = structural_constants(g, c.radius);
    const bool lattice = index_lattice_check(g);
    const auto deg = vertex_degrees(g);
    if (c.format == Format::json) {
        ojson j;
        j["dimension"] = g.dim();
        j["vertices"] = g.num_vertices();
        j["edges"] = g.num_unoriented_edges();
        ojson dj = ojson::object();
        for (std::size_t i = 0; i < deg.size(); ++i) dj[g.vertices()[i].label] = deg[i];
        j["degrees"] = std::move(dj);
        j["constants"] = to_json(sc);
        j["invariant_bracket"] = {sc.d, sc.invariant_upper()};
        j["index_lattice_ok"] = lattice;
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    if (c.format == Format::csv) {
        os << "key,value\n";
        os << "dimension," << g.dim() << "\nvertices," << g.num_vertices() << "\nedges," << g.num_unoriented_edges()
           << "\nkappa_minus," << sc.kappa_minus << "\nkappa_plus," << sc.kappa_plus << "\nv_star,"
           << fmt_g12(sc.v_star) << "\nkappa_star," << fmt_g12(sc.kappa_star) << "\nd_star," << sc.d_star
           << "\nbeta," << sc.beta << "\nb," << sc.b << "\nb_min," << sc.b_min << "\ngb," << fmt_g12(sc.gb)
           << "\nbipartite," << (sc.bipartite ? "true" : "false") << "\nindex_lattice_ok,"
           << (lattice ? "true" : "false") << "\n";
        return os.str();
    }
    os << "dimension: " << g.dim() << "\n"
       << "vertices: " << g.num_vertices() << "\n"
       << "edges: " << g.num_unoriented_edges() << " unoriented\n"
       << "degrees: " << label_list(g, deg) << "\n"
       << "kappa: " << sc.kappa_minus << " .. " << sc.kappa_plus << ", kappa_star = " << fmt_fixed4(sc.kappa_star)
       << "\n"
       << "v_star: " << fmt_fixed4(sc.v_star) << "\n"
       << "d_star: " << sc.d_star << "\n"
       << "betti: " << sc.beta << "\n"
       << "bridges: " << sc.b << " (current), " << sc.b_min << " (min over radius " << sc.search_radius << ")\n"
       << "invariant bracket: " << sc.d << " <= I <= " << sc.invariant_upper() << "\n"
       << "gb: " << fmt_fixed4(sc.gb) << "\n"
       << "bipartite: " << (sc.bipartite ? "yes" : "no") << "\n"
       << "index lattice: " << (lattice ? "Z^d" : "proper sublattice") << "\n";
    return os.str();
}

inline std::string bands(const FundamentalGraph& g, const Command& c)
{
    const auto op = symbolic_operator(g, c.kind);
    const KGrid grid(c.grid, g.dim());
    const auto t = band_structure(op, c.kind, grid);
    if (!c.dispersion.empty()) {
        std::ofstream f(c.dispersion, std::ios::binary);
        if (!f) throw InputError("cannot write '" + c.dispersion + "'");
        f << dispersion_csv(dispersion(op, grid));
    }
    if (c.format == Format::json) return to_json(t).dump(2) + "\n";
    if (c.format == Format::csv) return to_csv(t);
    std::ostringstream os;
    os << "operator: " << to_string(c.kind) << ", grid " << c.grid << "\n";
    for (std::size_t j = 0; j < t.bands.size(); ++j)
        os << "band " << j + 1 << ": [" << fmt_fixed4(t.bands[j].lo) << ", " << fmt_fixed4(t.bands[j].hi) << "]"
           << (t.bands[j].flat ? " flat" : "") << "\n";
    if (!t.flat_levels.empty()) {
        os << "flat levels:";
        for (const auto& f : t.flat_levels) os << " " << fmt_fixed4(f.value) << " (x" << f.multiplicity << ")";
        os << "\ndispersive bands:";
        for (const auto& b : t.dispersive_bands) os << " [" << fmt_fixed4(b.lo) << ", " << fmt_fixed4(b.hi) << "]";
        os << "\n";
    }
    return os.str();
}

inline std::string bandwidth(const FundamentalGraph& g, const Command& c)
{
    const auto t = band_structure(g, c.kind, KGrid(c.grid, g.dim()));
    const double total = total_bandwidth(t), measure = spectrum_measure(t);
    const auto flats = c.flat_tol ? flat_bands(t, *c.flat_tol) : flat_bands(t);
    std::vector<double> levels;
    for (const auto& b : flats) levels.push_back(0.5 * (b.lo + b.hi));
    if (c.format == Format::json) {
        ojson j;
        j["kind"] = std::string(to_string(c.kind));
        j["grid_n"] = c.grid;
        j["total_bandwidth"] = round12(total);
        j["spectrum_measure"] = round12(measure);
        ojson f = ojson::array();
        for (double x : levels) f.push_back(round12(x));
        j["flat_bands"] = std::move(f);
        return j.dump(2) + "\n";
    }
    if (c.format == Format::csv) {
        std::string flat;
        for (std::size_t i = 0; i < levels.size(); ++i) flat += (i ? ";" : "") + fmt_g12(levels[i]);
        return "kind,grid_n,total_bandwidth,spectrum_measure,flat_bands\n" + std::string(to_string(c.kind)) + "," +
               std::to_string(c.grid) + "," + fmt_g12(total) + "," + fmt_g12(measure) + "," + flat + "\n";
    }
    return "total_bandwidth ≈ " + fmt_fixed4(total) + ", measure ≈ " + fmt_fixed4(measure) +
           ", flat bands: " + join_fixed4(levels) + "\n";
}

inline std::string bounds(const FundamentalGraph& g, const Command& c, int n_max)
{
    const auto r = bounds_for(g, c.kind, n_max, c.radius);
    std::optional<double> scanned;
    if (c.scan_k) scanned = scanned_lower_bound(g, c.kind, n_max, KGrid(c.grid, g.dim()));
    if (c.format == Format::json) {
        auto j = to_json(r);
        if (scanned) j["experimental_scan_lower"] = round12(*scanned);
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    if (c.format == Format::csv) {
        os << "n,B1,B2,value\n";
        for (const auto& t : r.witnesses)
            os << t.n << ',' << fmt_g12(t.B1) << ',' << fmt_g12(t.B2) << ',' << fmt_g12(t.value) << '\n';
        return os.str();
    }
    os << "operator: " << to_string(r.kind) << "\n";
    os << "closed form: [" << fmt_fixed4(r.lower_closed_form) << ", " << fmt_fixed4(r.upper_closed_form) << "]\n";
    for (const auto& t : r.witnesses)
        os << "  n=" << t.n << "  B1=" << fmt_fixed4(t.B1) << "  B2=" << fmt_fixed4(t.B2)
           << "  bound=" << fmt_fixed4(t.value) << "\n";
    os << "refined lower: " << fmt_fixed4(r.lower_refined);
    if (r.refined_n) os << " (n=" << r.refined_n << ")";
    os << "\n";
    if (scanned) os << "experimental k-scan lower: " << fmt_fixed4(*scanned) << "\n";
    os << "bracket [" << fmt_fixed4(r.lower) << ", " << fmt_fixed4(r.upper) << "]\n";
    os << "spectrum measure >= " << fmt_fixed4(r.measure_lower) << "\n";
    return os.str();
}

inline std::vector<CycleClassSummary> cycle_rows(const FundamentalGraph& g, OperatorKind kind, int n_max)
{
    const auto h = with_kind_potential(g, kind);
    require_walk_budget(h, n_max, !is_normalized_kind(kind));
    std::vector<CycleClassSummary> rows;
    for (int n = 1; n <= n_max; ++n) {
        const auto unit = count_walks(g, n);
        const auto w = is_normalized_kind(kind) ? normalized_walk_sums(g, n) : weighted_walk_sums(h, n);
        rows.push_back(classify(unit, w));
    }
    return rows;
}

inline std::string cycles(const FundamentalGraph& g, const Command& c, int n_max)
{
    const auto rows = cycle_rows(g, c.kind, n_max);
    if (c.format == Format::json) {
        ojson j = ojson::array();
        for (const auto& r : rows) j.push_back(to_json(r));
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    if (c.format == Format::csv) {
        os << kCycleCsvHeader;
        for (const auto& r : rows) os << to_csv_row(r);
        return os.str();
    }
    os << "n  N0  N+  Nodd  B1  B2  T0\n";
    for (const auto& r : rows)
        os << r.n << "  " << r.N0 << "  " << r.Nplus << "  " << r.Nodd << "  " << fmt_fixed4(r.Bn1) << "  "
           << fmt_fixed4(r.Bn2) << "  " << fmt_fixed4(r.Tn0) << "\n";
    return os.str();
}

struct TraceRow {
    int n;
    double coeff_residual;
    double eval_residual; // relative to 1 + ||H(k)||^n
};

inline std::vector<TraceRow> trace_rows(const FundamentalGraph& g, OperatorKind kind, int n_max)
{
    require_walk_budget(g, n_max, kind == OperatorKind::schrodinger || kind == OperatorKind::laplacian);
    const auto op = symbolic_operator(g, kind);
    const auto series = trace_series_upto(g, kind, n_max);
    std::mt19937_64 rng(20210611);
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    std::vector<std::vector<double>> ks(20);
    for (auto& k : ks) {
        k.resize(static_cast<std::size_t>(g.dim()));
        for (auto& x : k) x = u(rng);
    }
    std::vector<TraceRow> rows;
    for (int n = 1; n <= n_max; ++n) {
        TraceRow row{n, max_abs_diff(series[n - 1], walk_trace_series(g, kind, n)), 0.0};
        for (const auto& k : ks) {
            const auto ev = eigenvalues(evaluate_fiber(op, k)).values;
            double numeric = 0.0, norm = 0.0;
            for (double l : ev) {
                numeric += std::pow(l, n);
                norm = std::max(norm, std::abs(l));
            }
            const double diff = std::abs(series[n - 1].eval(k) - Complex(numeric));
            row.eval_residual = std::max(row.eval_residual, diff / (1.0 + std::pow(norm, n)));
        }
        rows.push_back(row);
    }
    return rows;
}

inline std::string traces(const FundamentalGraph& g, const Command& c, int n_max, bool& consistent)
{
    const auto rows = trace_rows(g, c.kind, n_max);
    consistent = true;
    for (const auto& r : rows)
        if (r.coeff_residual > kDualEngineTol || r.eval_residual > 1e-9) consistent = false;
    std::ostringstream os;
    if (c.format == Format::json) {
        ojson j;
        j["kind"] = std::string(to_string(c.kind));
        ojson arr = ojson::array();
        for (const auto& r : rows)
            arr.push_back({{"n", r.n}, {"coeff_residual", round12(r.coeff_residual)},
                           {"eval_residual", round12(r.eval_residual)}});
        j["rows"] = std::move(arr);
        j["consistent"] = consistent;
        return j.dump(2) + "\n";
    }
    if (c.format == Format::csv) {
        os << "n,coeff_residual,eval_residual\n";
        for (const auto& r : rows) os << r.n << ',' << fmt_g12(r.coeff_residual) << ',' << fmt_g12(r.eval_residual) << '\n';
        return os.str();
    }
    os << "operator: " << to_string(c.kind) << "\n";
    for (const auto& r : rows)
        os << "n=" << r.n << "  symbolic vs walks: " << fmt_g12(r.coeff_residual)
           << "  symbolic vs eigenvalues: " << fmt_g12(r.eval_residual) << "\n";
    os << (consistent ? "consistent\n" : "MISMATCH\n");
    return os.str();
}

inline std::string embed(const FundamentalGraph& g, const Command& c)
{
    const auto m = minimize_bridges(g, c.radius);
    const auto h = gauge_transform(g, m.gauge);
    if (c.format == Format::json) {
        ojson j;
        j["radius"] = c.radius;
        j["bridges_before"] = bridge_count(g);
        j["bridges_after"] = m.count;
        j["bracket"] = {m.lower, m.upper};
        ojson gauge = ojson::object();
        for (std::size_t x = 0; x < g.num_vertices(); ++x) gauge[g.vertices()[x].label] = m.gauge.shift[x];
        j["gauge"] = std::move(gauge);
        j["graph"] = graph_to_json(h);
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    if (c.format == Format::csv) {
        os << "from,to,index\n";
        for (const auto& e : h.edge_specs()) {
            os << h.vertices()[e.from].label << ',' << h.vertices()[e.to].label << ",\"" << to_key(e.index) << "\"\n";
        }
        return os.str();
    }
    os << "bridges: " << bridge_count(g) << " -> " << m.count << " (radius " << c.radius << ")\n";
    os << "bracket: " << m.lower << " <= I <= " << std::min(m.count, m.upper) << "\n";
    os << "gauge:";
    for (std::size_t x = 0; x < g.num_vertices(); ++x) os << " " << g.vertices()[x].label << "=(" << to_key(m.gauge.shift[x]) << ")";
    os << "\nedges:\n";
    for (const auto& e : h.edge_specs())
        os << "  " << h.vertices()[e.from].label << " -> " << h.vertices()[e.to].label << "  (" << to_key(e.index)
           << ")\n";
    return os.str();
}

inline std::string verify(const FundamentalGraph& g, const Command& c)
{
    const auto r = verify_lftz(g);
    if (c.format == Format::json) return to_json(g, r).dump(2) + "\n";
    std::ostringstream os;
    if (c.format == Format::csv) {
        os << "key,value\nlattice_ok," << (r.lattice_ok ? "true" : "false") << "\nbasis_subset,"
           << (r.basis_subset ? "found" : "none") << "\nwitness_n," << (r.witness_n ? std::to_string(*r.witness_n) : "")
           << "\nwitness_nodd," << r.witness_nodd << "\nbipartite," << (r.bipartite ? "true" : "false")
           << "\nbipartite_witness_n," << (r.bipartite_witness_n ? std::to_string(*r.bipartite_witness_n) : "")
           << "\n";
        return os.str();
    }
    os << "index lattice: " << (r.lattice_ok ? "Z^d" : "proper sublattice") << " (invariant factors";
    for (auto f : r.invariant_factors) os << " " << f;
    os << ")\n";
    if (r.basis_subset) {
        os << "unimodular basis cycles:\n";
        for (const auto& cyc : *r.basis_subset) os << "  length " << cyc.length() << ", index (" << to_key(cyc.index) << ")\n";
    } else {
        os << "unimodular basis cycles: none among spanning-tree cycles\n";
    }
    if (r.witness_n)
        os << "odd-index witness: n=" << *r.witness_n << ", Nodd=" << r.witness_nodd << " >= " << *r.witness_n * r.d_star
           << "\n";
    else
        os << "odd-index witness: none for n <= " << g.num_vertices() << "\n";
    if (r.bipartite) {
        if (r.bipartite_witness_n)
            os << "bipartite witness: n=" << *r.bipartite_witness_n << ", Nodd=" << r.bipartite_witness_nodd
               << " >= " << 2 * *r.bipartite_witness_n * g.dim() << "\n";
        else
            os << "bipartite witness: none for n <= " << g.num_vertices() << "\n";
    }
    return os.str();
}

} // namespace detail

/// Exit status: 0 success, 1 input error, 2 internal consistency failure.
inline int run(const Command& c, std::ostream& out, std::ostream& err)
{
    try {
        const auto g = load_graph(c);
        const int n_max = c.n_max.value_or(static_cast<int>(g.num_vertices()));
        if (n_max < 1) throw InputError("--n-max must be at least 1");
        std::string artifact;
        int status = 0;
        if (c.verb == "info") artifact = detail::info(g, c);
        else if (c.verb == "bands") artifact = detail::bands(g, c);
        else if (c.verb == "bandwidth") artifact = detail::bandwidth(g, c);
        else if (c.verb == "bounds") artifact = detail::bounds(g, c, n_max);
        else if (c.verb == "cycles") artifact = detail::cycles(g, c, n_max);
        else if (c.verb == "traces") {
            bool ok = true;
            artifact = detail::traces(g, c, n_max, ok);
            if (!ok) status = 2;
        } else if (c.verb == "embed") artifact = detail::embed(g, c);
        else if (c.verb == "verify") artifact = detail::verify(g, c);
        else throw InputError("unknown verb '" + c.verb + "'");

        if (c.out.empty()) {
            out << artifact;
        } else {
            std::ofstream f(c.out, std::ios::binary);
            if (!f) throw InputError("cannot write '" + c.out + "'");
            f << artifact;
        }
        return status;
    } catch (const ConsistencyError& e) {
        err << "consistency failure: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

inline int main(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Band structures and bandwidth estimates for periodic graphs"};
    Command c;
    try {
        configure(app, c);
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return run(c, out, err);
}

} // namespace pspec::cli
