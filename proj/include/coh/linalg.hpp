#pragma once

#include "coh/arith.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace coh {

template <class F>
struct DenseMatrix {
    using Elem = typename F::Elem;
    std::size_t rows = 0, cols = 0;
    std::vector<Elem> a;

    DenseMatrix() = default;
    DenseMatrix(const F& field, std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, field.zero()) {}
    Elem& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Elem& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static DenseMatrix identity(const F& field, std::size_t n) {
        DenseMatrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = field.one();
        return m;
    }
};

/// Polynomials as ascending coefficient lists; the zero polynomial is empty.
template <class F>
using Poly = std::vector<typename F::Elem>;

template <class F>
void poly_trim(const F& field, Poly<F>& p) {
    while (!p.empty() && field.is_zero(p.back())) p.pop_back();
}

template <class F>
DenseMatrix<F> mat_mul(const F& field, const DenseMatrix<F>& x, const DenseMatrix<F>& y) {
    if (x.cols != y.rows) throw std::invalid_argument("mat_mul: shape mismatch");
    DenseMatrix<F> r(field, x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            const auto& xik = x.at(i, k);
            if (field.is_zero(xik)) continue;
            for (std::size_t j = 0; j < y.cols; ++j) r.at(i, j) = field.add(r.at(i, j), field.mul(xik, y.at(k, j)));
        }
    return r;
}

template <class F>
std::vector<typename F::Elem> mat_vec(const F& field, const DenseMatrix<F>& m, const std::vector<typename F::Elem>& v) {
    std::vector<typename F::Elem> r(m.rows, field.zero());
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            if (!field.is_zero(v[j])) r[i] = field.add(r[i], field.mul(m.at(i, j), v[j]));
    return r;
}

/// In-place reduced row echelon form; returns pivot columns (first-nonzero
/// pivoting, columns scanned left to right).
template <class F>
std::vector<std::size_t> rref(const F& field, DenseMatrix<F>& m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t piv = r;
        while (piv < m.rows && field.is_zero(m.at(piv, c))) ++piv;
        if (piv == m.rows) continue;
        if (piv != r)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
        auto inv = field.inv(m.at(r, c));
        for (std::size_t j = c; j < m.cols; ++j) m.at(r, j) = field.mul(m.at(r, j), inv);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == r || field.is_zero(m.at(i, c))) continue;
            auto f = m.at(i, c);
            for (std::size_t j = c; j < m.cols; ++j) m.at(i, j) = field.sub(m.at(i, j), field.mul(f, m.at(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

template <class F>
std::size_t rank(const F& field, DenseMatrix<F> m) {
    return rref(field, m).size();
}

/// Basis of {v : m v = 0}: one vector per free column j, with v_j = 1 and
/// the pivot coordinates read off the reduced echelon form.
template <class F>
std::vector<std::vector<typename F::Elem>> kernel_basis(const F& field, DenseMatrix<F> m) {
    auto pivots = rref(field, m);
    std::vector<bool> is_pivot(m.cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<typename F::Elem>> basis;
    for (std::size_t j = 0; j < m.cols; ++j) {
        if (is_pivot[j]) continue;
        std::vector<typename F::Elem> v(m.cols, field.zero());
        v[j] = field.one();
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = field.neg(m.at(r, j));
        basis.push_back(std::move(v));
    }
    return basis;
}

/// det(X I - m) by reduction to upper Hessenberg form; monic, ascending.
template <class F>
Poly<F> charpoly(const F& field, DenseMatrix<F> h) {
    if (h.rows != h.cols) throw std::invalid_argument("charpoly: matrix must be square");
    const std::size_t n = h.rows;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        std::size_t piv = k;
        while (piv < n && field.is_zero(h.at(piv, k - 1))) ++piv;
        if (piv == n) continue;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(h.at(piv, j), h.at(k, j));
            for (std::size_t i = 0; i < n; ++i) std::swap(h.at(i, piv), h.at(i, k));
        }
        auto inv = field.inv(h.at(k, k - 1));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (field.is_zero(h.at(i, k - 1))) continue;
            auto f = field.mul(h.at(i, k - 1), inv);
            for (std::size_t j = 0; j < n; ++j) h.at(i, j) = field.sub(h.at(i, j), field.mul(f, h.at(k, j)));
            for (std::size_t r = 0; r < n; ++r) h.at(r, k) = field.add(h.at(r, k), field.mul(f, h.at(r, i)));
        }
    }
    std::vector<Poly<F>> p(n + 1);
    p[0] = {field.one()};
    for (std::size_t m = 1; m <= n; ++m) {
        // (X - h_mm) p_{m-1}
        Poly<F> cur(m + 1, field.zero());
        for (std::size_t i = 0; i < p[m - 1].size(); ++i) {
            cur[i + 1] = field.add(cur[i + 1], p[m - 1][i]);
            cur[i] = field.sub(cur[i], field.mul(h.at(m - 1, m - 1), p[m - 1][i]));
        }
        auto prod = field.one();
        for (std::size_t i = m - 1; i-- > 0;) {
            prod = field.mul(prod, h.at(i + 1, i));
            if (field.is_zero(prod)) break;
            auto coef = field.mul(h.at(i, m - 1), prod);
            for (std::size_t t = 0; t < p[i].size(); ++t) cur[t] = field.sub(cur[t], field.mul(coef, p[i][t]));
        }
        p[m] = std::move(cur);
    }
    return p[n];
}

/// Evaluates a polynomial at a square matrix (Horner).
template <class F>
DenseMatrix<F> poly_eval_matrix(const F& field, const Poly<F>& p, const DenseMatrix<F>& m) {
    DenseMatrix<F> r(field, m.rows, m.cols);
    for (std::size_t k = p.size(); k-- > 0;) {
        r = mat_mul(field, r, m);
        for (std::size_t i = 0; i < m.rows; ++i) r.at(i, i) = field.add(r.at(i, i), p[k]);
    }
    return r;
}

/// Incrementally built semi-echelon basis of a row space. Each stored row
/// is normalised to 1 at its pivot (its first nonzero column at insertion)
/// and vanishes at the pivots of all earlier rows.
template <class F>
class Echelon {
public:
    using Elem = typename F::Elem;

    Echelon(const F& field, std::size_t ncols) : f_(field), ncols_(ncols) {}

    std::size_t rank() const { return pivots_.size(); }
    std::size_t cols() const { return ncols_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }
    const std::vector<Elem>& row(std::size_t i) const { return rows_[i]; }

    /// Reduces v in place; if `coeffs` is given, records the multiple of
    /// each stored row that was subtracted. Returns true if v became zero.
    bool reduce(std::vector<Elem>& v, std::vector<Elem>* coeffs = nullptr) const {
        if (coeffs) coeffs->assign(rows_.size(), f_.zero());
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const std::size_t c = pivots_[i];
            if (f_.is_zero(v[c])) continue;
            const Elem x = v[c];
            if (coeffs) (*coeffs)[i] = x;
            const auto& r = rows_[i];
            for (std::size_t j = c; j < ncols_; ++j)
                if (!f_.is_zero(r[j])) v[j] = f_.sub(v[j], f_.mul(x, r[j]));
        }
        for (const auto& x : v)
            if (!f_.is_zero(x)) return false;
        return true;
    }

    /// Adds v if it is independent of the stored rows; returns whether it was.
    bool insert(std::vector<Elem> v) {
        if (reduce(v)) return false;
        std::size_t c = 0;
        while (f_.is_zero(v[c])) ++c;
        auto inv = f_.inv(v[c]);
        for (std::size_t j = c; j < ncols_; ++j) v[j] = f_.mul(v[j], inv);
        rows_.push_back(std::move(v));
        pivots_.push_back(c);
        return true;
    }

    /// Basis of the orthogonal complement {x : r.x = 0 for all stored rows}.
    std::vector<std::vector<Elem>> kernel_basis() const {
        DenseMatrix<F> m(f_, rows_.size(), ncols_);
        for (std::size_t i = 0; i < rows_.size(); ++i)
            for (std::size_t j = 0; j < ncols_; ++j) m.at(i, j) = rows_[i][j];
        return coh::kernel_basis(f_, std::move(m));
    }

private:
    F f_;
    std::size_t ncols_;
    std::vector<std::vector<Elem>> rows_;
    std::vector<std::size_t> pivots_;
};

/// Prime-field specialisation: rows are kept as 32-bit residues when
/// p < 2^32 and reduction runs with lazily reduced 64-bit accumulators.
template <>
class Echelon<PrimeField> {
public:
    using Elem = std::uint64_t;

    Echelon(const PrimeField& field, std::size_t ncols);

    std::size_t rank() const { return pivots_.size(); }
    std::size_t cols() const { return ncols_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }
    std::vector<Elem> row(std::size_t i) const;

    bool reduce(std::vector<Elem>& v, std::vector<Elem>* coeffs = nullptr) const;
    bool insert(std::vector<Elem> v);
    /// Inserts a row given as a raw array of residues (avoids a copy).
    bool insert(const Elem* v);
    std::vector<std::vector<Elem>> kernel_basis() const;

private:
    PrimeField f_;
    std::size_t ncols_;
    bool small_;                       // p < 2^32
    std::vector<std::uint32_t> data32_;  // rank x ncols
    std::vector<std::uint64_t> data64_;
    std::vector<std::size_t> pivots_;
    mutable std::vector<std::uint64_t> acc_;

    bool reduce_acc(std::vector<Elem>* coeffs) const;
    void append_from_acc();
};

/// Number of distinct real roots of a nonzero rational polynomial (Sturm).
std::size_t real_root_count(const std::vector<Rational>& p);

/// Squarefree part p / gcd(p, p') over Q, made monic.
std::vector<Rational> squarefree_part(const std::vector<Rational>& p);

/// Polynomial arithmetic over Q used by the Hecke module.
std::vector<Rational> qpoly_mul(const std::vector<Rational>& a, const std::vector<Rational>& b);
/// Remainder of a modulo b (b nonzero).
std::vector<Rational> qpoly_rem(std::vector<Rational> a, const std::vector<Rational>& b);
std::vector<Rational> qpoly_div_exact(std::vector<Rational> a, const std::vector<Rational>& b);
std::string qpoly_str(const std::vector<Rational>& p, const std::string& var = "X");

/// Sparse row over a prime field: sorted (column, nonzero residue) pairs.
using SparseRow = std::vector<std::pair<std::uint32_t, std::uint64_t>>;

/// Rank of a sparse system mod p by structured elimination (shortest row
/// first, sparsest column within it); falls back to dense elimination on
/// the remaining block once fill-in makes it dense.
std::size_t sparse_rank(const PrimeField& F, std::size_t ncols, std::vector<SparseRow> rows);

/// Rank mod p of a dense matrix, switching to the sparse path when the
/// density is below 10%.
std::size_t rank_modp(const PrimeField& F, const DenseMatrix<PrimeField>& m);

}  // namespace coh
