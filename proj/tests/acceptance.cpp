// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "pspec/pspec.hpp"

using namespace pspec;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream why;

    void expect(bool cond, const std::string& what)
    {
        if (!cond && ok) why << what;
        ok = ok && cond;
    }
    void near(double got, double want, double tol, const std::string& what)
    {
        if (!(std::abs(got - want) <= tol)) {
            std::ostringstream s;
            s << what << ": got " << got << ", want " << want << " +- " << tol;
            expect(false, s.str());
        }
    }
    void le(double a, double b, const std::string& what)
    {
        if (!(a <= b)) {
            std::ostringstream s;
            s << what << ": " << a << " > " << b;
            expect(false, s.str());
        }
    }
};

std::vector<FundamentalGraph> builtins()
{
    std::vector<FundamentalGraph> out;
    for (const auto& n : builtin_catalog()) out.push_back(builtin_graph(n));
    return out;
}

std::vector<double> random_k(std::mt19937_64& rng, int d)
{
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    std::vector<double> k(static_cast<std::size_t>(d));
    for (auto& x : k) x = u(rng);
    return k;
}

std::vector<double> random_potential(std::mt19937_64& rng, std::size_t nu)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(nu);
    for (auto& x : v) x = u(rng);
    return v;
}

KGrid sweep_grid(int d) { return KGrid(d == 1 ? 400 : d == 2 ? 64 : 24, d); }

void criterion1(Check& c)
{
    const auto t = band_structure(kagome_lattice(), OperatorKind::laplacian, KGrid(60, 2));
    const double want[3][2] = {{0, 3}, {3, 6}, {6, 6}};
    for (int j = 0; j < 3; ++j) {
        c.near(t.bands[j].lo, want[j][0], 2e-2, "band lo");
        c.near(t.bands[j].hi, want[j][1], 2e-2, "band hi");
    }
    const auto flat = flat_bands(t, 1e-6);
    c.expect(flat.size() == 1, "one flat band");
    if (!flat.empty()) c.near(flat[0].lo, 6.0, 1e-9, "flat band");
    c.near(total_bandwidth(t), 6.0, 2e-2, "total bandwidth");
    c.near(spectrum_measure(t), 6.0, 2e-2, "measure");
}

void criterion2(Check& c)
{
    const auto r = bounds_for(kagome_lattice(), OperatorKind::laplacian, 3);
    c.near(r.lower_closed_form, 0.25, 1e-12, "closed-form lower");
    c.near(r.upper, 12.0, 1e-12, "upper");
    c.near(r.lower_refined, 2.0, 1e-12, "refined lower");
    c.expect(r.refined_n == 2, "refined n");
}

void criterion3(Check& c)
{
    const auto g = kagome_lattice();
    const std::pair<int, std::array<long long, 2>> want[] = {{1, {0, 0}}, {2, {12, 8}}, {3, {36, 24}}};
    for (const auto& [n, w] : want) {
        const auto walk = classify(count_walks(g, n));
        const auto sym = classify(counts_from_series(trace_series(g, OperatorKind::adjacency, n), n));
        for (const auto& s : {walk, sym}) {
            c.expect(s.Nplus == w[0], "Nplus(" + std::to_string(n) + ")");
            c.expect(s.Nodd == w[1], "Nodd(" + std::to_string(n) + ")");
        }
    }
}

void criterion4(Check& c)
{
    const auto t = band_structure(fig4_chain(), OperatorKind::normalized_laplacian, KGrid(400, 1));
    const double want[3][2] = {{0, 1.0 / 3}, {2.0 / 3, 4.0 / 3}, {5.0 / 3, 2}};
    c.expect(t.dispersive_bands.size() == 3, "three dispersive bands");
    for (std::size_t j = 0; j < 3 && j < t.dispersive_bands.size(); ++j) {
        c.near(t.dispersive_bands[j].lo, want[j][0], 1e-3, "band lo");
        c.near(t.dispersive_bands[j].hi, want[j][1], 1e-3, "band hi");
    }
    const auto flat = flat_bands(t, 1e-6);
    c.expect(flat.size() == 1, "one flat band");
    if (!flat.empty()) c.near(flat[0].lo, 1.0, 1e-3, "flat band");
    c.near(total_bandwidth(t), 4.0 / 3, 5e-3, "total bandwidth");
    c.near(spectrum_measure(t), 4.0 / 3, 5e-3, "measure");
}

void criterion5(Check& c)
{
    const auto g = fig4_chain();
    const auto r = bounds_for(g, OperatorKind::normalized_laplacian, 4);
    c.near(r.constants.gb, 2.0 / 3, 1e-12, "gb");
    const auto s = classify(normalized_walk_sums(g, 3));
    c.near(s.Bn1, 2.0 / 3, 1e-12, "B31");
    c.near(s.Bn2, 4.0 / 3, 1e-12, "B32");
    c.near(r.lower_closed_form, 4.0 / 81, 1e-12, "closed-form lower");
    c.near(r.upper_closed_form, 2.0, 1e-12, "closed-form upper");
    c.near(r.lower, 4.0 / 9, 1e-12, "refined lower");
    c.near(r.upper, 4.0 / 3, 1e-12, "refined upper");
}

void criterion6(Check& c)
{
    double prev = std::numeric_limits<double>::infinity();
    for (double t : {5.0, 10.0, 20.0}) {
        const auto g = z_cycle(3).with_potential(std::vector<double>{0.0, t, 2.0 * t});
        const double v_star = 2.0 + 2.0 * t;
        const double sigma = total_bandwidth(band_structure(g, OperatorKind::schrodinger, KGrid(400, 1)));
        const auto r = bounds_for(g, OperatorKind::schrodinger, 3);
        c.near(r.constants.v_star, v_star, 1e-12, "v_star");
        c.near(r.lower_closed_form, 4.0 / (v_star * v_star), 1e-15, "closed-form lower");
        c.le(4.0 / (v_star * v_star), sigma, "lower bound vs sigma");
        c.le(sigma, 4.0, "sigma vs 4");
        c.le(sigma, prev, "monotone decrease");
        prev = sigma;
    }
}

void criterion7(Check& c)
{
    std::mt19937_64 rng(2024);
    for (const auto& g0 : builtins()) {
        std::vector<std::pair<OperatorKind, FundamentalGraph>> cases{{OperatorKind::adjacency, g0},
                                                                     {OperatorKind::transition, g0}};
        for (int i = 0; i < 3; ++i)
            cases.emplace_back(OperatorKind::schrodinger, g0.with_potential(random_potential(rng, g0.num_vertices())));
        for (const auto& [kind, g] : cases) {
            const auto op = symbolic_operator(g, kind);
            const auto series = trace_series_upto(g, kind, 6);
            std::vector<std::vector<double>> ks;
            for (int i = 0; i < 20; ++i) ks.push_back(random_k(rng, g.dim()));
            for (int n = 1; n <= 6; ++n) {
                c.le(max_abs_diff(series[n - 1], walk_trace_series(g, kind, n)), 1e-9, "dual engines");
                for (const auto& k : ks) {
                    const auto ev = eigenvalues(evaluate_fiber(op, k)).values;
                    double sum = 0.0, norm = 0.0;
                    for (double l : ev) sum += std::pow(l, n), norm = std::max(norm, std::abs(l));
                    c.le(std::abs(series[n - 1].eval(k) - Complex(sum)), 1e-9 * (1.0 + std::pow(norm, n)),
                         "trace identity");
                }
            }
        }
    }
}

void criterion8(Check& c)
{
    std::mt19937_64 rng(8);
    for (const auto& g0 : builtins()) {
        int tau = 0;
        for (const auto& e : g0.edges()) tau = std::max(tau, sup_norm(e.index));
        // Schrodinger weights use the normalized potential: H = A + diag(v)
        const auto gs = g0.with_potential(random_potential(rng, g0.num_vertices()));
        const auto shifted = [&] {
            const auto w = loop_weights(gs, PotentialShift::raw);
            auto v = gs.potential();
            const double lo = *std::min_element(w.begin(), w.end());
            for (auto& x : v) x -= lo;
            return gs.with_potential(v);
        }();
        for (int n = 1; n <= 6; ++n) {
            const KGrid grid(2 * n * tau + 2, g0.dim());
            const std::tuple<OperatorKind, const FundamentalGraph*, double> cases[] = {
                {OperatorKind::adjacency, &g0, classify(count_walks(g0, n)).Tn0},
                {OperatorKind::schrodinger, &shifted, classify(weighted_walk_sums(gs, n)).Tn0},
                {OperatorKind::transition, &g0, classify(normalized_walk_sums(g0, n)).Tn0},
            };
            for (const auto& [kind, g, t0] : cases) {
                const auto op = symbolic_operator(*g, kind);
                double avg = 0.0;
                for (std::size_t i = 0; i < grid.size(); ++i)
                    for (double l : eigenvalues(evaluate_fiber(op, grid.point(i))).values) avg += std::pow(l, n);
                avg /= double(grid.size());
                c.near(avg, t0, 1e-9, std::string("torus average ") + std::string(to_string(kind)));
            }
        }
    }
}

void criterion9(Check& c)
{
    std::mt19937_64 rng(9);
    for (const auto& g : builtins()) {
        for (int rep = 0; rep < 3; ++rep) {
            Gauge m = Gauge::identity(g);
            std::uniform_int_distribution<int> u(-3, 3);
            for (auto& s : m.shift)
                for (auto& x : s) x = u(rng);
            const auto h = gauge_transform(g, m);
            const auto a = cycle_basis(g), b = cycle_basis(h);
            c.expect(a.cycles.size() == b.cycles.size(), "basis size");
            for (std::size_t i = 0; i < a.cycles.size() && i < b.cycles.size(); ++i)
                c.expect(a.cycles[i].index == b.cycles[i].index, "cycle index");
            const KGrid grid(g.dim() == 3 ? 12 : 32, g.dim());
            for (auto kind : kAllOperatorKinds) {
                const auto ta = band_structure(g, kind, grid), tb = band_structure(h, kind, grid);
                for (std::size_t j = 0; j < ta.bands.size(); ++j) {
                    c.near(tb.bands[j].lo, ta.bands[j].lo, 1e-10, "band lo");
                    c.near(tb.bands[j].hi, ta.bands[j].hi, 1e-10, "band hi");
                }
                const auto sa = trace_series_upto(g, kind, 4), sb = trace_series_upto(h, kind, 4);
                for (int n = 0; n < 4; ++n) c.le(max_abs_diff(sa[n], sb[n]), 1e-9, "trace series");
            }
        }
    }
}

void criterion10(Check& c)
{
    for (const char* name : {"hexagonal", "zd(1)", "zd(2)", "zd(3)", "z_cycle(4)"})
        c.expect(is_bipartite(builtin_graph(name)), std::string(name) + " bipartite");
    for (const auto& name : builtin_catalog()) {
        const auto g = builtin_graph(name);
        c.expect(index_lattice_check(g), name + " lattice");
        const auto r = verify_lftz(g);
        c.expect(r.lattice_ok, name + " lattice_ok");
        c.expect(r.witness_n && *r.witness_n <= static_cast<int>(g.num_vertices()) &&
                     r.witness_nodd >= static_cast<long long>(*r.witness_n) * r.d_star,
                 name + " witness");
        if (r.bipartite)
            c.expect(r.bipartite_witness_n && *r.bipartite_witness_n <= static_cast<int>(g.num_vertices()) &&
                         r.bipartite_witness_nodd >= 2LL * *r.bipartite_witness_n * g.dim(),
                     name + " bipartite witness");
    }
}

void criterion11(Check& c)
{
    std::mt19937_64 rng(11);
    for (const auto& g0 : builtins())
        for (int rep = 0; rep < 3; ++rep) {
            const auto g = g0.with_potential(random_potential(rng, g0.num_vertices()));
            for (auto kind : kAllOperatorKinds) {
                const auto t = band_structure(g, kind, sweep_grid(g.dim()));
                const double sigma = total_bandwidth(t);
                const auto r = bounds_for(g, kind, static_cast<int>(g.num_vertices()));
                const std::string tag = std::string(to_string(kind));
                c.le(r.lower_closed_form, sigma + 2e-2, tag + " closed-form lower");
                c.le(r.lower_refined, sigma + 2e-2, tag + " refined lower");
                c.le(sigma, r.upper + 2e-2, tag + " upper");
                const double measure = spectrum_measure(t);
                c.le(sigma / g.num_vertices(), max_band_width(t) + 1e-12, tag + " sigma/nu");
                c.le(max_band_width(t), measure + 1e-12, tag + " max band");
                c.le(measure, sigma + 1e-12, tag + " measure");
            }
        }
}

void criterion12(Check& c)
{
    std::mt19937_64 rng(12);
    for (const auto& g0 : {kagome_lattice(), fig4_chain()}) {
        const KGrid grid(g0.dim() == 1 ? 400 : 64, g0.dim());
        std::vector<FundamentalGraph> schrodinger{g0.with_potential(std::vector<double>(g0.num_vertices(), 0.0))};
        for (int i = 0; i < 2; ++i) schrodinger.push_back(g0.with_potential(random_potential(rng, g0.num_vertices())));
        for (int n = 1; n <= 4; ++n) {
            for (const auto& g : schrodinger) {
                // H with the normalized potential, A + diag(v), v >= 0
                const auto w = loop_weights(g, PotentialShift::raw);
                auto v = g.potential();
                const double lo = *std::min_element(w.begin(), w.end());
                for (auto& x : v) x -= lo;
                const auto op = symbolic_operator(g.with_potential(v), OperatorKind::schrodinger);
                const double sigma = total_bandwidth(band_structure(op, OperatorKind::schrodinger, grid, n));
                const auto s = classify(weighted_walk_sums(g, n));
                c.le(std::max(s.Bn1, s.Bn2), sigma + 2e-2, "schrodinger n=" + std::to_string(n));
            }
            const auto op = symbolic_operator(g0, OperatorKind::transition);
            const double sigma = total_bandwidth(band_structure(op, OperatorKind::transition, grid, n));
            const auto s = classify(normalized_walk_sums(g0, n));
            c.le(std::max(s.Bn1, s.Bn2), sigma + 2e-2, "transition n=" + std::to_string(n));
        }
    }
}

} // namespace

int main()
{
    const std::pair<const char*, std::function<void(Check&)>> criteria[] = {
        {"kagome laplacian bands, bandwidth 6, flat band 6", criterion1},
        {"kagome bounds 1/4 <= S <= 12, refined 2 at n=2", criterion2},
        {"kagome closed-walk counts from both engines", criterion3},
        {"fig4 normalized bands, flat band 1, bandwidth 4/3", criterion4},
        {"fig4 gb, B31, B32 and both brackets", criterion5},
        {"z_cycle(3) potential (0,t,2t) sharpness", criterion6},
        {"trace identities and dual-engine agreement", criterion7},
        {"torus average of the trace equals T_n0", criterion8},
        {"gauge invariance of cycles, bands and traces", criterion9},
        {"index lattice and odd-index witnesses", criterion10},
        {"lower <= bandwidth <= upper on all builtins", criterion11},
        {"bandwidth of H^n dominates max(Bn1, Bn2)", criterion12},
    };
    int failed = 0, id = 0;
    for (const auto& [name, fn] : criteria) {
        ++id;
        Check c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            fn(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s  %2d  %-52s %7.2fs%s%s\n", c.ok ? "PASS" : "FAIL", id, name, secs, c.ok ? "" : "  ",
                    c.why.str().c_str());
        if (!c.ok) ++failed;
    }
    std::printf("%d/%d criteria passed\n", id - failed, id);
    return failed ? 1 : 0;
}
