#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pspec/graph.hpp"
#include "pspec/laurent.hpp"

namespace pspec {

enum class OperatorKind { adjacency, laplacian, schrodinger, normalized_laplacian, transition };

inline constexpr std::array kAllOperatorKinds{OperatorKind::adjacency, OperatorKind::laplacian,
                                              OperatorKind::schrodinger, OperatorKind::normalized_laplacian,
                                              OperatorKind::transition};

inline std::string_view to_string(OperatorKind k)
{
    switch (k) {
    case OperatorKind::adjacency: return "adjacency";
    case OperatorKind::laplacian: return "laplacian";
    case OperatorKind::schrodinger: return "schrodinger";
    case OperatorKind::normalized_laplacian: return "normalized_laplacian";
    case OperatorKind::transition: return "transition";
    }
    return "?";
}

inline OperatorKind parse_operator_kind(std::string_view s)
{
    for (auto k : kAllOperatorKinds)
        if (to_string(k) == s) return k;
    throw InputError("unknown operator kind '" + std::string(s) + "'");
}

inline bool is_normalized_kind(OperatorKind k)
{
    return k == OperatorKind::normalized_laplacian || k == OperatorKind::transition;
}

/// Symbolic fiber operator. Entry (x, y) sums, over oriented edges e = (x, y),
/// a term of frequency tau(e):
///   adjacency             1
///   laplacian             -1, plus kappa_x on the diagonal
///   schrodinger           +1, plus V_x - kappa_x on the diagonal (modified-graph loops)
///   transition            1 / sqrt(kappa_x kappa_y)
///   normalized_laplacian  I - transition
inline LaurentMatrix symbolic_operator(const FundamentalGraph& g, OperatorKind kind)
{
    const auto deg = vertex_degrees(g);
    const int d = g.dim();
    if (is_normalized_kind(kind))
        for (std::size_t x = 0; x < deg.size(); ++x)
            if (deg[x] == 0) throw InputError("isolated vertex '" + g.vertices()[x].label + "'");

    LaurentMatrix m(g.num_vertices(), d);
    for (const auto& e : g.edges()) {
        double w = 1.0;
        switch (kind) {
        case OperatorKind::adjacency:
        case OperatorKind::schrodinger: w = 1.0; break;
        case OperatorKind::laplacian: w = -1.0; break;
        case OperatorKind::transition: w = 1.0 / std::sqrt(double(deg[e.from]) * deg[e.to]); break;
        case OperatorKind::normalized_laplacian: w = -1.0 / std::sqrt(double(deg[e.from]) * deg[e.to]); break;
        }
        m(e.from, e.to).add_term(e.index, w);
    }
    const auto zero = zero_index(d);
    for (std::size_t x = 0; x < g.num_vertices(); ++x) {
        switch (kind) {
        case OperatorKind::laplacian: m(x, x).add_term(zero, double(deg[x])); break;
        case OperatorKind::schrodinger: m(x, x).add_term(zero, g.vertices()[x].potential - deg[x]); break;
        case OperatorKind::normalized_laplacian: m(x, x).add_term(zero, 1.0); break;
        default: break;
        }
    }
    for (std::size_t x = 0; x < g.num_vertices(); ++x)
        for (std::size_t y = 0; y < g.num_vertices(); ++y) m(x, y).prune();
    return m;
}

/// Schrodinger operator assembled as -Delta(k) + V, the second route to the
/// same matrix as symbolic_operator(g, schrodinger).
inline LaurentMatrix schrodinger_via_laplacian(const FundamentalGraph& g)
{
    LaurentMatrix m = symbolic_operator(g, OperatorKind::laplacian) * Complex(-1.0);
    const auto zero = zero_index(g.dim());
    for (std::size_t x = 0; x < g.num_vertices(); ++x) {
        m(x, x).add_term(zero, g.vertices()[x].potential);
        m(x, x).prune();
    }
    return m;
}

inline constexpr double kHermitianTol = 1e-12;

/// Fiber operator at a fixed quasimomentum. Construction checks Hermiticity
/// entry by entry and refuses to symmetrize.
class HermitianMatrix {
public:
    explicit HermitianMatrix(Eigen::MatrixXcd m, double tol = kHermitianTol) : m_(std::move(m))
    {
        if (m_.rows() != m_.cols()) throw ConsistencyError("fiber matrix is not square");
        for (Eigen::Index i = 0; i < m_.rows(); ++i)
            for (Eigen::Index j = i; j < m_.cols(); ++j)
                if (std::abs(m_(j, i) - std::conj(m_(i, j))) > tol)
                    throw ConsistencyError("fiber matrix is not Hermitian");
    }

    std::size_t size() const { return static_cast<std::size_t>(m_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return m_; }

private:
    Eigen::MatrixXcd m_;
};

inline HermitianMatrix evaluate_fiber(const LaurentMatrix& m, std::span<const double> k)
{
    return HermitianMatrix(m.evaluate(k));
}

/// Eigenvalues in ascending order.
struct Spectrum {
    std::vector<double> values;
};

inline Spectrum eigenvalues(const HermitianMatrix& h)
{
    Spectrum s;
    if (h.size() == 1) {
        s.values = {h.matrix()(0, 0).real()};
        return s;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw ConsistencyError("Hermitian eigensolver did not converge");
    const auto& ev = solver.eigenvalues();
    s.values.assign(ev.data(), ev.data() + ev.size());
    return s;
}

} // namespace pspec
