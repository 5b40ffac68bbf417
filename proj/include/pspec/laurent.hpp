#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "pspec/error.hpp"
#include "pspec/index.hpp"

namespace pspec {

using Complex = std::complex<double>;

/// Coefficients below this magnitude are dropped after products and sums.
/// This is the only inexact step of the symbolic layer.
inline constexpr double kPruneThreshold = 1e-14;

/// Finite Fourier series sum_m c_m exp(i <m, k>) over m in Z^d.
class LaurentPoly {
public:
    using TermMap = std::map<IndexVec, Complex>;

    explicit LaurentPoly(int dim = 1) : dim_(dim) {}

    static LaurentPoly constant(int dim, Complex c)
    {
        LaurentPoly p(dim);
        p.add_term(zero_index(dim), c);
        p.prune();
        return p;
    }

    static LaurentPoly monomial(const IndexVec& m, Complex c)
    {
        LaurentPoly p(static_cast<int>(m.size()));
        p.add_term(m, c);
        p.prune();
        return p;
    }

    int dim() const { return dim_; }
    const TermMap& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    /// Accumulates into the coefficient of m. Call prune() when done.
    void add_term(const IndexVec& m, Complex c)
    {
        if (m.size() != static_cast<std::size_t>(dim_)) throw InputError("frequency dimension mismatch");
        terms_[m] += c;
    }

    void prune(double threshold = kPruneThreshold)
    {
        for (auto it = terms_.begin(); it != terms_.end();)
            it = std::abs(it->second) < threshold ? terms_.erase(it) : std::next(it);
    }

    Complex coeff(const IndexVec& m) const
    {
        if (m.size() != static_cast<std::size_t>(dim_)) throw InputError("frequency dimension mismatch");
        auto it = terms_.find(m);
        return it == terms_.end() ? Complex{} : it->second;
    }

    Complex eval(std::span<const double> k) const
    {
        if (k.size() != static_cast<std::size_t>(dim_)) throw InputError("quasimomentum dimension mismatch");
        Complex s{};
        for (const auto& [m, c] : terms_) {
            double phase = 0.0;
            for (int i = 0; i < dim_; ++i) phase += m[i] * k[i];
            s += c * Complex(std::cos(phase), std::sin(phase));
        }
        return s;
    }

    /// p*(k) = conj(p(k)) on the torus: conjugate coefficients, negate frequencies.
    LaurentPoly conj_reflect() const
    {
        LaurentPoly r(dim_);
        for (const auto& [m, c] : terms_) r.terms_[-m] = std::conj(c);
        return r;
    }

    /// Largest |m_s| over the support.
    int max_frequency() const
    {
        int r = 0;
        for (const auto& [m, c] : terms_) r = std::max(r, sup_norm(m));
        return r;
    }

    LaurentPoly& operator+=(const LaurentPoly& o)
    {
        check_dim(o);
        for (const auto& [m, c] : o.terms_) terms_[m] += c;
        prune();
        return *this;
    }

    LaurentPoly& operator-=(const LaurentPoly& o)
    {
        check_dim(o);
        for (const auto& [m, c] : o.terms_) terms_[m] -= c;
        prune();
        return *this;
    }

    LaurentPoly& operator*=(Complex s)
    {
        for (auto& [m, c] : terms_) c *= s;
        prune();
        return *this;
    }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(LaurentPoly a, Complex s) { return a *= s; }

    /// Convolution product.
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b)
    {
        a.check_dim(b);
        LaurentPoly r(a.dim_);
        accumulate_product(r, a, b);
        r.prune();
        return r;
    }

    /// r += a * b without pruning.
    static void accumulate_product(LaurentPoly& r, const LaurentPoly& a, const LaurentPoly& b)
    {
        IndexVec m(static_cast<std::size_t>(a.dim_));
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                for (int i = 0; i < a.dim_; ++i) m[i] = ma[i] + mb[i];
                r.terms_[m] += ca * cb;
            }
    }

    /// max over the union of supports of |a_m - b_m|.
    friend double max_abs_diff(const LaurentPoly& a, const LaurentPoly& b)
    {
        double r = 0.0;
        for (const auto& [m, c] : a.terms_) r = std::max(r, std::abs(c - b.coeff(m)));
        for (const auto& [m, c] : b.terms_) r = std::max(r, std::abs(c - a.coeff(m)));
        return r;
    }

private:
    void check_dim(const LaurentPoly& o) const
    {
        if (o.dim_ != dim_) throw InputError("Laurent polynomial dimension mismatch");
    }

    int dim_;
    TermMap terms_;
};

inline Complex lp_eval(const LaurentPoly& p, std::span<const double> k) { return p.eval(k); }
inline Complex lp_coeff(const LaurentPoly& p, const IndexVec& m) { return p.coeff(m); }

/// Debug dump: {"m1,...,md": [re, im]} in frequency order.
inline nlohmann::ordered_json to_json(const LaurentPoly& p)
{
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [m, c] : p.terms()) j[to_key(m)] = {c.real(), c.imag()};
    return j;
}

/// Square matrix of Laurent polynomials; symbolic form of a fiber operator.
class LaurentMatrix {
public:
    LaurentMatrix(std::size_t n, int dim) : n_(n), dim_(dim), entries_(n * n, LaurentPoly(dim)) {}

    static LaurentMatrix identity(std::size_t n, int dim)
    {
        LaurentMatrix m(n, dim);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = LaurentPoly::constant(dim, 1.0);
        return m;
    }

    std::size_t size() const { return n_; }
    int dim() const { return dim_; }

    LaurentPoly& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
    const LaurentPoly& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

    int max_frequency() const
    {
        int r = 0;
        for (const auto& e : entries_) r = std::max(r, e.max_frequency());
        return r;
    }

    /// Entry (j, i) equals the conjugate reflection of entry (i, j) to tol.
    bool is_hermitian_on_torus(double tol = 1e-12) const
    {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i; j < n_; ++j)
                if (max_abs_diff((*this)(j, i), (*this)(i, j).conj_reflect()) > tol) return false;
        return true;
    }

    Eigen::MatrixXcd evaluate(std::span<const double> k) const
    {
        Eigen::MatrixXcd m(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j).eval(k);
        return m;
    }

    friend LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b)
    {
        if (a.n_ != b.n_ || a.dim_ != b.dim_) throw InputError("Laurent matrix dimension mismatch");
        LaurentMatrix r(a.n_, a.dim_);
        for (std::size_t i = 0; i < a.n_; ++i)
            for (std::size_t j = 0; j < a.n_; ++j) {
                LaurentPoly& out = r(i, j);
                for (std::size_t l = 0; l < a.n_; ++l) LaurentPoly::accumulate_product(out, a(i, l), b(l, j));
                out.prune();
            }
        return r;
    }

    friend LaurentMatrix operator+(LaurentMatrix a, const LaurentMatrix& b)
    {
        if (a.n_ != b.n_ || a.dim_ != b.dim_) throw InputError("Laurent matrix dimension mismatch");
        for (std::size_t i = 0; i < a.entries_.size(); ++i) a.entries_[i] += b.entries_[i];
        return a;
    }

    friend LaurentMatrix operator*(LaurentMatrix a, Complex s)
    {
        for (auto& e : a.entries_) e *= s;
        return a;
    }

private:
    std::size_t n_;
    int dim_;
    std::vector<LaurentPoly> entries_;
};

inline LaurentMatrix lmat_mul(const LaurentMatrix& a, const LaurentMatrix& b) { return a * b; }

inline LaurentPoly lmat_trace(const LaurentMatrix& a)
{
    LaurentPoly t(a.dim());
    for (std::size_t i = 0; i < a.size(); ++i) t += a(i, i);
    return t;
}

/// a^n by repeated multiplication, n >= 0.
inline LaurentMatrix lmat_power(const LaurentMatrix& a, int n)
{
    if (n < 0) throw InputError("negative matrix power");
    LaurentMatrix r = LaurentMatrix::identity(a.size(), a.dim());
    for (int i = 0; i < n; ++i) r = r * a;
    return r;
}

} // namespace pspec
