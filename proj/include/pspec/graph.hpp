#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "pspec/error.hpp"
#include "pspec/index.hpp"
#include "pspec/smith.hpp"

namespace pspec {

struct Vertex {
    std::string label;
    double potential = 0.0;
};

/// One unoriented edge as listed in a graph description. The inverse
/// orientation with negated index is implied.
struct EdgeSpec {
    std::size_t from = 0;
    std::size_t to = 0;
    IndexVec index;
};

/// Oriented edge of the fundamental graph. Oriented ids come in pairs:
/// 2p is the listed orientation of unoriented edge p and 2p+1 its inverse.
struct OrientedEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    IndexVec index;
    std::size_t pair_id = 0;

    bool is_loop() const { return from == to; }
};

inline constexpr std::size_t inverse_edge(std::size_t e) { return e ^ std::size_t{1}; }

/// Quotient of a periodic graph by its lattice of periods: finitely many
/// vertices and oriented edges, each edge carrying an integer index in Z^d.
/// Immutable once built.
class FundamentalGraph {
public:
    FundamentalGraph(int dim, std::vector<Vertex> vertices, std::vector<EdgeSpec> edges)
        : dim_(dim), vertices_(std::move(vertices)), specs_(std::move(edges))
    {
        if (dim_ < 1) throw InputError("lattice rank must be at least 1");
        if (vertices_.empty()) throw InputError("graph has no vertices");
        std::unordered_set<std::string> seen;
        for (const auto& v : vertices_) {
            if (!seen.insert(v.label).second) throw InputError("duplicate vertex label '" + v.label + "'");
            if (!std::isfinite(v.potential)) throw InputError("non-finite potential at '" + v.label + "'");
        }
        out_.assign(vertices_.size(), {});
        edges_.reserve(2 * specs_.size());
        for (std::size_t p = 0; p < specs_.size(); ++p) {
            const auto& s = specs_[p];
            if (s.from >= vertices_.size() || s.to >= vertices_.size())
                throw InputError("edge " + std::to_string(p) + " has an unknown endpoint");
            if (s.index.size() != static_cast<std::size_t>(dim_))
                throw InputError("edge " + std::to_string(p) + " index length differs from dimension");
            edges_.push_back({s.from, s.to, s.index, p});
            edges_.push_back({s.to, s.from, -s.index, p});
            out_[s.from].push_back(2 * p);
            out_[s.to].push_back(2 * p + 1);
        }
        if (!connected()) throw InputError("fundamental graph is not connected");
    }

    int dim() const { return dim_; }
    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_unoriented_edges() const { return specs_.size(); }

    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<EdgeSpec>& edge_specs() const { return specs_; }
    const std::vector<OrientedEdge>& edges() const { return edges_; }
    const OrientedEdge& edge(std::size_t e) const { return edges_[e]; }

    /// Oriented edges starting at x, in id order.
    const std::vector<std::size_t>& out_edges(std::size_t x) const { return out_[x]; }

    std::vector<double> potential() const
    {
        std::vector<double> v;
        v.reserve(vertices_.size());
        for (const auto& x : vertices_) v.push_back(x.potential);
        return v;
    }

    std::optional<std::size_t> find_vertex(const std::string& label) const
    {
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            if (vertices_[i].label == label) return i;
        return std::nullopt;
    }

    FundamentalGraph with_potential(std::span<const double> v) const
    {
        if (v.size() != vertices_.size()) throw InputError("potential length differs from vertex count");
        auto verts = vertices_;
        for (std::size_t i = 0; i < verts.size(); ++i) verts[i].potential = v[i];
        return {dim_, std::move(verts), specs_};
    }

    /// Same graph with new indices, one per unoriented edge in listed orientation.
    FundamentalGraph with_indices(const std::vector<IndexVec>& idx) const
    {
        if (idx.size() != specs_.size()) throw InputError("index list length differs from edge count");
        auto specs = specs_;
        for (std::size_t p = 0; p < specs.size(); ++p) specs[p].index = idx[p];
        return {dim_, vertices_, std::move(specs)};
    }

private:
    bool connected() const
    {
        std::vector<bool> seen(vertices_.size(), false);
        std::queue<std::size_t> q;
        q.push(0);
        seen[0] = true;
        std::size_t count = 1;
        while (!q.empty()) {
            auto x = q.front();
            q.pop();
            for (auto e : out_[x]) {
                auto y = edges_[e].to;
                if (!seen[y]) {
                    seen[y] = true;
                    ++count;
                    q.push(y);
                }
            }
        }
        return count == vertices_.size();
    }

    int dim_;
    std::vector<Vertex> vertices_;
    std::vector<EdgeSpec> specs_;
    std::vector<OrientedEdge> edges_;
    std::vector<std::vector<std::size_t>> out_;
};

/// Function m: V_* -> Z^d. Vertex 0 is pinned to the zero vector.
struct Gauge {
    std::vector<IndexVec> shift;

    static Gauge identity(const FundamentalGraph& g)
    {
        return {std::vector<IndexVec>(g.num_vertices(), zero_index(g.dim()))};
    }
};

/// Closed path in the fundamental graph, stored as oriented edge ids.
struct CycleRecord {
    std::vector<std::size_t> edges;
    IndexVec index;

    std::size_t length() const { return edges.size(); }
};

struct CycleBasis {
    std::vector<CycleRecord> cycles;
    IntMatrix index_matrix; // d x beta, column j is the index of cycles[j]
};

// ---------------------------------------------------------------------------

/// kappa_x: oriented edges starting at x. A loop contributes 2.
inline std::vector<int> vertex_degrees(const FundamentalGraph& g)
{
    std::vector<int> deg(g.num_vertices());
    for (std::size_t x = 0; x < g.num_vertices(); ++x) deg[x] = static_cast<int>(g.out_edges(x).size());
    return deg;
}

inline int betti_number(const FundamentalGraph& g)
{
    return static_cast<int>(g.num_unoriented_edges()) - static_cast<int>(g.num_vertices()) + 1;
}

/// Unoriented edges with nonzero index under the current embedding.
inline int bridge_count(const FundamentalGraph& g)
{
    int b = 0;
    for (const auto& s : g.edge_specs())
        if (!is_zero(s.index)) ++b;
    return b;
}

inline FundamentalGraph gauge_transform(const FundamentalGraph& g, const Gauge& m)
{
    if (m.shift.size() != g.num_vertices()) throw InputError("gauge must be defined on every vertex");
    std::vector<IndexVec> idx;
    idx.reserve(g.num_unoriented_edges());
    for (const auto& s : g.edge_specs()) idx.push_back(s.index + m.shift[s.to] - m.shift[s.from]);
    return g.with_indices(idx);
}

struct BridgeMinimum {
    Gauge gauge;
    int count = 0;     // bridges after applying gauge
    int lower = 0;     // d
    int upper = 0;     // beta
};

inline constexpr double kDefaultGaugeSearchCap = 1e7;

/// Exhaustive search over gauges with every shift in [-radius, radius]^d,
/// vertex 0 pinned. The identity gauge is kept unless some gauge does strictly
/// better; otherwise the first strict minimizer in lexicographic order wins.
inline BridgeMinimum minimize_bridges(const FundamentalGraph& g, int radius,
                                      double cap = kDefaultGaugeSearchCap)
{
    if (radius < 0) throw InputError("radius must be nonnegative");
    const int d = g.dim();
    const std::size_t free_vars = static_cast<std::size_t>(d) * (g.num_vertices() - 1);
    const int side = 2 * radius + 1;
    if (std::pow(static_cast<double>(side), static_cast<double>(free_vars)) > cap)
        throw CapExceeded("gauge search space exceeds cap");

    std::vector<int> digits(free_vars, -radius);
    auto make_gauge = [&] {
        Gauge m = Gauge::identity(g);
        for (std::size_t x = 1; x < g.num_vertices(); ++x)
            for (int s = 0; s < d; ++s) m.shift[x][s] = digits[(x - 1) * d + s];
        return m;
    };
    auto count_for = [&](const Gauge& m) {
        int b = 0;
        for (const auto& s : g.edge_specs()) {
            for (int c = 0; c < d; ++c)
                if (s.index[c] + m.shift[s.to][c] - m.shift[s.from][c] != 0) {
                    ++b;
                    break;
                }
        }
        return b;
    };

    BridgeMinimum best{Gauge::identity(g), bridge_count(g), d, betti_number(g)};
    while (true) {
        Gauge m = make_gauge();
        int b = count_for(m);
        if (b < best.count) {
            best.gauge = m;
            best.count = b;
        }
        std::size_t i = 0;
        while (i < free_vars && digits[i] == radius) digits[i++] = -radius;
        if (i == free_vars) break;
        ++digits[i];
    }
    return best;
}

/// Certificate that the periodic cover is bipartite: parity p on vertices and
/// s in {0,1}^d with p(x) + p(y) + <s, tau(e)> = 1 mod 2 on every edge.
struct BipartiteWitness {
    std::vector<int> parity;
    std::vector<int> s;
};

/// Solves the GF(2) system above; free variables are set to 0.
inline std::optional<BipartiteWitness> bipartite_witness(const FundamentalGraph& g)
{
    const std::size_t nv = g.num_vertices();
    const std::size_t nvar = nv + static_cast<std::size_t>(g.dim());
    std::vector<std::vector<std::uint8_t>> rows;
    for (const auto& e : g.edge_specs()) {
        std::vector<std::uint8_t> r(nvar + 1, 0);
        r[e.from] ^= 1;
        r[e.to] ^= 1;
        for (int c = 0; c < g.dim(); ++c) r[nv + c] = static_cast<std::uint8_t>(std::abs(e.index[c]) & 1);
        r[nvar] = 1;
        rows.push_back(std::move(r));
    }
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < nvar && rank < rows.size(); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && !rows[piv][col]) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != rank && rows[i][col])
                for (std::size_t c = col; c <= nvar; ++c) rows[i][c] ^= rows[rank][c];
        pivot_col.push_back(col);
        ++rank;
    }
    for (std::size_t i = rank; i < rows.size(); ++i)
        if (rows[i][nvar]) return std::nullopt;

    std::vector<int> sol(nvar, 0);
    for (std::size_t i = 0; i < rank; ++i) sol[pivot_col[i]] = rows[i][nvar];
    BipartiteWitness w;
    w.parity.assign(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(nv));
    w.s.assign(sol.begin() + static_cast<std::ptrdiff_t>(nv), sol.end());
    return w;
}

inline bool is_bipartite(const FundamentalGraph& g) { return bipartite_witness(g).has_value(); }

/// Fundamental cycles of a BFS spanning tree rooted at vertex 0: one per
/// non-tree unoriented edge e = (x, y), formed as e followed by the tree path
/// y -> lca -> x. Each is prime and proper.
inline CycleBasis cycle_basis(const FundamentalGraph& g)
{
    const std::size_t nv = g.num_vertices();
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> parent_edge(nv, none); // oriented edge parent -> x
    std::vector<std::size_t> depth(nv, 0);
    std::vector<bool> seen(nv, false), tree_pair(g.num_unoriented_edges(), false);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = true;
    while (!q.empty()) {
        auto x = q.front();
        q.pop();
        for (auto e : g.out_edges(x)) {
            auto y = g.edge(e).to;
            if (!seen[y]) {
                seen[y] = true;
                parent_edge[y] = e;
                depth[y] = depth[x] + 1;
                tree_pair[g.edge(e).pair_id] = true;
                q.push(y);
            }
        }
    }

    CycleBasis basis;
    for (std::size_t p = 0; p < g.num_unoriented_edges(); ++p) {
        if (tree_pair[p]) continue;
        const std::size_t e = 2 * p;
        std::size_t a = g.edge(e).to;   // walk up from y
        std::size_t b = g.edge(e).from; // walk up from x
        std::vector<std::size_t> up_from_y, up_from_x;
        while (depth[a] > depth[b]) { up_from_y.push_back(inverse_edge(parent_edge[a])); a = g.edge(parent_edge[a]).from; }
        while (depth[b] > depth[a]) { up_from_x.push_back(parent_edge[b]); b = g.edge(parent_edge[b]).from; }
        while (a != b) {
            up_from_y.push_back(inverse_edge(parent_edge[a]));
            a = g.edge(parent_edge[a]).from;
            up_from_x.push_back(parent_edge[b]);
            b = g.edge(parent_edge[b]).from;
        }
        CycleRecord c;
        c.edges.push_back(e);
        c.edges.insert(c.edges.end(), up_from_y.begin(), up_from_y.end());
        c.edges.insert(c.edges.end(), up_from_x.rbegin(), up_from_x.rend());
        c.index = zero_index(g.dim());
        for (auto f : c.edges) c.index += g.edge(f).index;
        basis.cycles.push_back(std::move(c));
    }
    basis.index_matrix = IntMatrix(static_cast<std::size_t>(g.dim()), basis.cycles.size());
    for (std::size_t j = 0; j < basis.cycles.size(); ++j)
        for (int s = 0; s < g.dim(); ++s) basis.index_matrix(s, j) = basis.cycles[j].index[s];
    return basis;
}

/// True iff the cycle indices generate all of Z^d.
inline bool index_lattice_check(const FundamentalGraph& g)
{
    auto f = smith_invariant_factors(cycle_basis(g).index_matrix);
    if (f.size() != static_cast<std::size_t>(g.dim())) return false;
    return std::all_of(f.begin(), f.end(), [](long long x) { return x == 1; });
}

} // namespace pspec
