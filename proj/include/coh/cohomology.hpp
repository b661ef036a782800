#pragma once

#include "coh/groups.hpp"
#include "coh/linalg.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>

namespace coh {

/// Matrix of g on Sym^n: column i holds the coefficients of
/// (ax+cy)^(n-i) (bx+dy)^i in the basis x^(n-k) y^k.
template <class F>
DenseMatrix<F> sym_power(const F& f, const Mat2<typename F::Elem>& g, int n) {
    using E = typename F::Elem;
    const std::size_t N = static_cast<std::size_t>(n) + 1;
    // pu[k] = (a x + c y)^k, pv[k] = (b x + d y)^k, indexed by y-degree.
    std::vector<std::vector<E>> pu(N), pv(N);
    pu[0] = {f.one()};
    pv[0] = {f.one()};
    for (std::size_t k = 1; k < N; ++k) {
        pu[k].assign(k + 1, f.zero());
        pv[k].assign(k + 1, f.zero());
        for (std::size_t j = 0; j < k; ++j) {
            pu[k][j] = f.add(pu[k][j], f.mul(pu[k - 1][j], g.a));
            pu[k][j + 1] = f.add(pu[k][j + 1], f.mul(pu[k - 1][j], g.c));
            pv[k][j] = f.add(pv[k][j], f.mul(pv[k - 1][j], g.b));
            pv[k][j + 1] = f.add(pv[k][j + 1], f.mul(pv[k - 1][j], g.d));
        }
    }
    DenseMatrix<F> m(f, N, N);
    for (std::size_t i = 0; i < N; ++i) {
        const auto& u = pu[N - 1 - i];
        const auto& v = pv[i];
        for (std::size_t s = 0; s < u.size(); ++s) {
            if (f.is_zero(u[s])) continue;
            for (std::size_t t = 0; t < v.size(); ++t) m.at(s + t, i) = f.add(m.at(s + t, i), f.mul(u[s], v[t]));
        }
    }
    return m;
}

/// Kronecker product, row index i*rows(b)+j.
template <class F>
DenseMatrix<F> kron(const F& f, const DenseMatrix<F>& a, const DenseMatrix<F>& b) {
    DenseMatrix<F> r(f, a.rows * b.rows, a.cols * b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const auto x = a.at(i, k);
            if (f.is_zero(x)) continue;
            for (std::size_t j = 0; j < b.rows; ++j)
                for (std::size_t l = 0; l < b.cols; ++l)
                    r.at(i * b.rows + j, k * b.cols + l) = f.mul(x, b.at(j, l));
        }
    return r;
}

/// Matrix of g on E_{n,m} = Sym^n (x) conj-Sym^m, given g and its conjugate.
template <class F>
DenseMatrix<F> tensor_action(const F& f, const Mat2<typename F::Elem>& g, const Mat2<typename F::Elem>& gbar, int n,
                             int m) {
    return kron(f, sym_power(f, g, n), sym_power(f, gbar, m));
}

/// A block-monomial linear map on blocks of E_{n,m}: output block j receives
/// tensor_action(mat[j], conj[j]) applied to input block src[j].
template <class F>
struct BlockMap {
    using Elem = typename F::Elem;
    std::vector<std::size_t> src;
    std::vector<Mat2<Elem>> mat, conj;
};

/// The module E_{n,m}, or a module induced from it (blocks > 1), as an
/// action of each generator and its inverse.
template <class F>
struct ModuleAction {
    using Elem = typename F::Elem;
    F field;
    int n = 0, m = 0;
    std::size_t blocks = 1;
    std::vector<BlockMap<F>> gens, inv_gens;

    std::size_t block_dim() const { return static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(m + 1); }
    std::size_t dim() const { return blocks * block_dim(); }
    std::size_t num_generators() const { return gens.size(); }
};

template <class F>
BlockMap<F> block_identity(const F& f, std::size_t blocks) {
    BlockMap<F> b;
    for (std::size_t j = 0; j < blocks; ++j) {
        b.src.push_back(j);
        b.mat.push_back(mat2_identity(f));
        b.conj.push_back(mat2_identity(f));
    }
    return b;
}

/// x * y as maps (apply y first).
template <class F>
BlockMap<F> block_compose(const F& f, const BlockMap<F>& x, const BlockMap<F>& y) {
    BlockMap<F> r;
    const std::size_t N = x.src.size();
    r.src.resize(N);
    r.mat.resize(N);
    r.conj.resize(N);
    for (std::size_t j = 0; j < N; ++j) {
        const std::size_t k = x.src[j];
        r.src[j] = y.src[k];
        r.mat[j] = mat2_mul(f, x.mat[j], y.mat[k]);
        r.conj[j] = mat2_mul(f, x.conj[j], y.conj[k]);
    }
    return r;
}

template <class F>
BlockMap<F> block_inverse(const F& f, const BlockMap<F>& x) {
    BlockMap<F> r;
    const std::size_t N = x.src.size();
    r.src.resize(N);
    r.mat.resize(N);
    r.conj.resize(N);
    for (std::size_t j = 0; j < N; ++j) {
        r.src[x.src[j]] = j;
        r.mat[x.src[j]] = mat2_inv(f, x.mat[j]);
        r.conj[x.src[j]] = mat2_inv(f, x.conj[j]);
    }
    return r;
}

/// Dense matrix of a block map on a module with the given weights.
template <class F>
DenseMatrix<F> block_matrix(const F& f, const BlockMap<F>& b, int n, int m) {
    const std::size_t bd = static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(m + 1);
    const std::size_t N = b.src.size();
    DenseMatrix<F> r(f, N * bd, N * bd);
    for (std::size_t j = 0; j < N; ++j) {
        auto t = tensor_action(f, b.mat[j], b.conj[j], n, m);
        for (std::size_t u = 0; u < bd; ++u)
            for (std::size_t v = 0; v < bd; ++v) r.at(j * bd + u, b.src[j] * bd + v) = t.at(u, v);
    }
    return r;
}

/// Action of a word (product of generator actions, leftmost letter outermost).
template <class F>
BlockMap<F> word_action(const ModuleAction<F>& act, const Word& w) {
    BlockMap<F> p = block_identity(act.field, act.blocks);
    for (const auto& l : w) p = block_compose(act.field, p, l.exp > 0 ? act.gens[l.gen] : act.inv_gens[l.gen]);
    return p;
}

struct OddWeight : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// E_{n,m} reduced through r (n+m must be even for projective presentations).
ModuleAction<PrimeField> build_action(const MatrixGroupPresentation& p, int n, int m, const ReductionMap& r);
/// E_{n,m} over the tower of the presentation itself.
ModuleAction<TowerField> build_action_exact(const MatrixGroupPresentation& p, int n, int m);

/// Adds the Fox expansion of `relator` to the block row `out` (dim x s*dim,
/// row-major, entries added in place) using the prefix products.
template <class F>
void fox_accumulate(const ModuleAction<F>& act, const Word& relator, std::vector<typename F::Elem>& out) {
    const F& f = act.field;
    const std::size_t bd = act.block_dim(), D = act.dim(), cols = act.num_generators() * D;
    BlockMap<F> prefix = block_identity(f, act.blocks);
    auto add_block = [&](const BlockMap<F>& pr, std::size_t gen, bool negative) {
        for (std::size_t j = 0; j < act.blocks; ++j) {
            auto t = tensor_action(f, pr.mat[j], pr.conj[j], act.n, act.m);
            const std::size_t c0 = gen * D + pr.src[j] * bd;
            for (std::size_t u = 0; u < bd; ++u) {
                auto* row = out.data() + (j * bd + u) * cols + c0;
                for (std::size_t v = 0; v < bd; ++v) {
                    const auto x = t.at(u, v);
                    if (f.is_zero(x)) continue;
                    row[v] = negative ? f.sub(row[v], x) : f.add(row[v], x);
                }
            }
        }
    };
    for (const auto& l : relator) {
        const auto g = static_cast<std::size_t>(l.gen);
        if (l.exp > 0) {
            add_block(prefix, g, false);
            prefix = block_compose(f, prefix, act.gens[g]);
        } else {
            prefix = block_compose(f, prefix, act.inv_gens[g]);
            add_block(prefix, g, true);
        }
    }
}

/// Coefficient of f(g_i) in the expansion of f(relator), one dim x dim
/// matrix per generator.
template <class F>
std::vector<DenseMatrix<F>> fox_expand(const ModuleAction<F>& act, const Word& relator) {
    const F& f = act.field;
    const std::size_t D = act.dim(), s = act.num_generators();
    std::vector<typename F::Elem> buf(D * s * D, f.zero());
    fox_accumulate(act, relator, buf);
    std::vector<DenseMatrix<F>> out;
    for (std::size_t g = 0; g < s; ++g) {
        DenseMatrix<F> m(f, D, D);
        for (std::size_t i = 0; i < D; ++i)
            for (std::size_t j = 0; j < D; ++j) m.at(i, j) = buf[i * s * D + g * D + j];
        out.push_back(std::move(m));
    }
    return out;
}

/// Rows of mu: row b is ((g_1 - 1) e_b, ..., (g_s - 1) e_b).
template <class F>
std::vector<std::vector<typename F::Elem>> mu_rows(const ModuleAction<F>& act) {
    const F& f = act.field;
    const std::size_t D = act.dim(), s = act.num_generators();
    std::vector<std::vector<typename F::Elem>> rows(D, std::vector<typename F::Elem>(s * D, f.zero()));
    for (std::size_t g = 0; g < s; ++g) {
        auto m = block_matrix(f, act.gens[g], act.n, act.m);
        for (std::size_t b = 0; b < D; ++b) {
            for (std::size_t i = 0; i < D; ++i) rows[b][g * D + i] = m.at(i, b);
            rows[b][g * D + b] = f.sub(rows[b][g * D + b], f.one());
        }
    }
    return rows;
}

/// H^1 with an explicit cocycle basis. A cocycle is the vector
/// (c(g_1), ..., c(g_s)) in M^s.
template <class F>
struct CohomologySpace {
    using Elem = typename F::Elem;
    F field;
    std::size_t dim = 0;
    std::size_t module_dim = 0;
    std::size_t num_generators = 0;
    std::size_t ider_rank = 0;
    std::vector<std::vector<Elem>> basis;
    std::shared_ptr<Echelon<F>> span;  // Im(mu) rows first, then the basis

    /// Coordinates of a cocycle modulo coboundaries; throws if c is not a cocycle.
    std::vector<Elem> coordinates(std::vector<Elem> c) const {
        std::vector<Elem> coeffs;
        if (!span->reduce(c, &coeffs)) throw std::invalid_argument("coordinates: not a cocycle");
        return std::vector<Elem>(coeffs.begin() + static_cast<long>(ider_rank), coeffs.end());
    }
};

/// H^1(G, M) = ker(Lambda) / Im(mu), with a basis completing Im(mu).
template <class F>
CohomologySpace<F> h1(const MatrixGroupPresentation& p, const ModuleAction<F>& act) {
    const F& f = act.field;
    const std::size_t D = act.dim(), s = act.num_generators(), cols = s * D;
    Echelon<F> lam(f, cols);
    std::vector<typename F::Elem> buf;
    for (const auto& r : p.relators) {
        buf.assign(D * cols, f.zero());
        fox_accumulate(act, r, buf);
        for (std::size_t i = 0; i < D; ++i)
            lam.insert(std::vector<typename F::Elem>(buf.begin() + static_cast<long>(i * cols),
                                                     buf.begin() + static_cast<long>((i + 1) * cols)));
    }
    auto kernel = lam.kernel_basis();
    CohomologySpace<F> h{f, 0, D, s, 0, {}, std::make_shared<Echelon<F>>(f, cols)};
    for (auto& row : mu_rows(act)) h.span->insert(std::move(row));
    h.ider_rank = h.span->rank();
    for (auto& v : kernel) h.span->insert(std::move(v));
    for (std::size_t i = h.ider_rank; i < h.span->rank(); ++i) {
        auto row = h.span->row(i);
        h.basis.emplace_back(row.begin(), row.end());
    }
    h.dim = h.basis.size();
    return h;
}

/// dim H^1 mod p by rank computations only (no basis).
std::size_t h1_dimension(const MatrixGroupPresentation& p, const ModuleAction<PrimeField>& act);

/// Rank of mu, the dimension of the inner derivations.
template <class F>
std::size_t ider_dim(const ModuleAction<F>& act) {
    Echelon<F> e(act.field, act.num_generators() * act.dim());
    for (auto& row : mu_rows(act)) e.insert(std::move(row));
    return e.rank();
}

struct DimOptions {
    /// Stop once a map attains this value. Zero is always safe: a map
    /// giving dimension 0 already realises the minimum.
    std::optional<std::size_t> lower_bound = 0;
    unsigned threads = 1;
    /// Skip a map whose conjugate assignment was already evaluated; valid
    /// whenever the module for r and for its conjugate are isomorphic.
    bool dedupe_conjugates = true;
    std::uint64_t min_prime = 2;
};

struct DimResult {
    std::size_t dim = 0;
    std::vector<std::uint64_t> witnesses;  ///< primes attaining the minimum
    std::size_t maps_evaluated = 0;
};

/// Minimum over admissible reduction maps with p <= x of a per-map
/// dimension; nullopt when no map exists. Maps for which `eval` returns
/// nullopt are skipped. Results do not depend on the thread count.
std::optional<DimResult> min_over_maps(const MatrixGroupPresentation& p, std::uint64_t x,
                                       const std::function<std::optional<std::size_t>(const ReductionMap&)>& eval,
                                       const DimOptions& opt = {});

/// dim_{<=x} H^1(G, E_{n,m}).
std::optional<DimResult> h1_dim_upto(const MatrixGroupPresentation& p, int n, int m, std::uint64_t x,
                                     DimOptions opt = {});

}  // namespace coh
