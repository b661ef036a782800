#include "coh/hecke.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>

namespace coh {

namespace {

// Coefficient primes stay below 2^28 so that 256 products fit in 64 bits.
constexpr std::uint64_t kPrimeCeiling = 1ull << 28;

long parse_long(const std::string& s) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("bad integer: '" + s + "'");
    return v;
}

long floor_long(const Rational& q) {
    BigInt f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    if (!f.fits_slong_p()) throw std::overflow_error("quotient does not fit in a long");
    return f.get_si();
}

bool integral(const RingElem& e) {
    return std::all_of(e.c.begin(), e.c.end(), [](const Rational& q) { return q.get_den() == 1; });
}

RingElem make_elem(const NumberRing& R, long x, long y) {
    return R.add(R.constant(Rational(x)), R.mul(R.constant(Rational(y)), R.gen(0)));
}

Mat2<RingElem> ring_mul(const std::shared_ptr<const NumberRing>& R, const Mat2<RingElem>& x, const Mat2<RingElem>& y) {
    return mat2_mul(TowerField{R}, x, y);
}

struct Gens {
    int A = -1, B = -1, U = -1;
};

Gens find_gens(const MatrixGroupPresentation& G) {
    Gens g;
    for (std::size_t i = 0; i < G.generators.size(); ++i) {
        if (G.generators[i] == "A") g.A = static_cast<int>(i);
        if (G.generators[i] == "B") g.B = static_cast<int>(i);
        if (G.generators[i] == "U") g.U = static_cast<int>(i);
    }
    if (g.A < 0 || g.B < 0 || g.U < 0) throw std::invalid_argument("group lacks the generators A, B, U");
    return g;
}

// T^(x + y w) = A^x U^y.
void append_translation(Word& w, const Gens& g, const RingElem& t) {
    if (!integral(t)) throw std::invalid_argument("translation is not integral");
    const long x = t.c[0].get_num().get_si(), y = t.c[1].get_num().get_si();
    for (long i = 0; i < std::labs(x); ++i) w.push_back({g.A, x > 0 ? 1 : -1});
    for (long i = 0; i < std::labs(y); ++i) w.push_back({g.U, y > 0 ? 1 : -1});
}

// out = m v mod p, with one reduction per 256 products.
void matvec(const DenseMatrix<PrimeField>& m, const std::uint64_t* v, std::uint64_t* out, std::uint64_t p) {
    const std::size_t n = m.cols;
    for (std::size_t i = 0; i < m.rows; ++i) {
        const std::uint64_t* row = m.a.data() + i * n;
        std::uint64_t acc = 0;
        std::size_t j = 0;
        while (j < n) {
            const std::size_t end = std::min(n, j + 255);
            for (; j < end; ++j) acc += row[j] * v[j];
            acc %= p;
        }
        out[i] = acc;
    }
}

Vec apply(const DenseMatrix<PrimeField>& m, const Vec& v, std::uint64_t p) {
    Vec out(m.rows);
    matvec(m, v.data(), out.data(), p);
    return out;
}

void add_into(Vec& a, const Vec& b, const PrimeField& F) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = F.add(a[i], b[i]);
}

Vec sub(Vec a, const Vec& b, const PrimeField& F) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = F.sub(a[i], b[i]);
    return a;
}

// Horner evaluation of a cocycle whose value on a letter may depend on the
// coset where the letter is read: y[key(x, g)] plays the role of f(g).
// Returns the value and sets *end to the final coset.
Vec eval_indexed(const H1Layer& L, const CosetTable* t, const std::vector<Vec>& y, const Word& w,
                 std::size_t* end = nullptr) {
    const PrimeField& F = L.act.field;
    const std::uint64_t p = F.p();
    const std::size_t s = L.gen.size();
    std::vector<std::size_t> xs(w.size() + 1, 0);
    if (t) {
        xs[0] = t->base;
        for (std::size_t j = 0; j < w.size(); ++j) xs[j + 1] = (w[j].exp > 0 ? t->act : t->inv)[static_cast<std::size_t>(w[j].gen)][xs[j]];
    }
    auto key = [&](std::size_t x, std::size_t g) { return t ? x * s + g : g; };
    Vec Q(L.act.dim(), 0), tmp(L.act.dim());
    for (std::size_t j = w.size(); j-- > 0;) {
        const auto g = static_cast<std::size_t>(w[j].gen);
        if (w[j].exp > 0) {
            matvec(L.gen[g], Q.data(), tmp.data(), p);
            Q.swap(tmp);
            add_into(Q, y[key(xs[j], g)], F);
        } else {
            Q = sub(std::move(Q), y[key(xs[j + 1], g)], F);
            matvec(L.gen_inv[g], Q.data(), tmp.data(), p);
            Q.swap(tmp);
        }
    }
    if (end) *end = xs.back();
    return Q;
}

Word schreier_word(const CosetTable& t, std::size_t x, std::size_t g) {
    Word w = t.transversal[x];
    w.push_back({static_cast<int>(g), 1});
    return word_free_reduce(word_concat(w, word_inverse(t.transversal[t.act[g][x]])));
}

// y_{x,g} = t_x^-1 c(s_{x,g}).
std::vector<Vec> coset_values(const H1Layer& L, const CosetTable& t, const SubgroupCocycle& c) {
    const std::uint64_t p = L.act.field.p();
    const std::size_t s = L.gen.size();
    if (c.values.size() != t.index() * s) throw std::invalid_argument("subgroup cocycle has the wrong shape");
    std::vector<Vec> y(c.values.size());
    for (std::size_t x = 0; x < t.index(); ++x)
        for (std::size_t g = 0; g < s; ++g) {
            Vec v = c.values[x * s + g];
            for (const auto& l : t.transversal[x])
                v = apply(l.exp > 0 ? L.gen_inv[static_cast<std::size_t>(l.gen)] : L.gen[static_cast<std::size_t>(l.gen)],
                          v, p);
            y[x * s + g] = std::move(v);
        }
    return y;
}

Vec eval_in_subgroup(const H1Layer& L, const CosetTable& t, const std::vector<Vec>& y, const Word& w) {
    std::size_t end = 0;
    Vec v = eval_indexed(L, &t, y, w, &end);
    if (end != t.base) throw std::logic_error("word does not lie in the subgroup");
    return v;
}

SubgroupCocycle conjugate(const H1Layer& L, const CosetTable& from, const CosetTable& to,
                          const std::vector<Word>& words, const DenseMatrix<PrimeField>& weight,
                          const SubgroupCocycle& c) {
    const auto y = coset_values(L, from, c);
    const std::size_t s = L.gen.size();
    SubgroupCocycle out;
    out.values.assign(to.index() * s, Vec(L.act.dim(), 0));
    for (std::size_t k = 0; k < out.values.size(); ++k)
        if (!words[k].empty()) out.values[k] = apply(weight, eval_in_subgroup(L, from, y, words[k]), L.act.field.p());
    return out;
}

std::vector<std::uint64_t> reduce_poly(const PrimeField& F, const std::vector<BigInt>& q) {
    std::vector<std::uint64_t> out;
    for (const auto& c : q) out.push_back(F.from_big(c));
    return out;
}

std::vector<Rational> to_qpoly(const std::vector<BigInt>& p) { return std::vector<Rational>(p.begin(), p.end()); }

// Kernel of q(T) in H^1 coordinates.
std::vector<Vec> nl_kernel(const PrimeField& F, const DenseMatrix<PrimeField>& T, const std::vector<BigInt>& q) {
    return kernel_basis(F, poly_eval_matrix(F, reduce_poly(F, q), T));
}

// Splits the flat cocycle vector (c(g_1), ..., c(g_s)) into per-generator values.
Cocycle split(const Vec& flat, std::size_t s, std::size_t D) {
    Cocycle f(s);
    for (std::size_t g = 0; g < s; ++g) f[g].assign(flat.begin() + static_cast<long>(g * D), flat.begin() + static_cast<long>((g + 1) * D));
    return f;
}

Vec flatten(const Cocycle& f) {
    Vec out;
    for (const auto& v : f) out.insert(out.end(), v.begin(), v.end());
    return out;
}

}  // namespace

QuadElement parse_quad_element(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw std::invalid_argument("empty element");
    QuadElement e;
    if (s.back() != 'w') {
        e.a = parse_long(s);
        return e;
    }
    s.pop_back();
    if (!s.empty() && s.back() == '*') s.pop_back();
    std::size_t j = s.size();
    while (j > 0 && std::isdigit(static_cast<unsigned char>(s[j - 1]))) --j;
    const std::string digits = s.substr(j);
    if (digits.empty() && !s.empty() && s.back() != '+' && s.back() != '-')
        throw std::invalid_argument("bad element: '" + text + "'");
    e.b = digits.empty() ? 1 : parse_long(digits);
    if (j > 0 && (s[j - 1] == '+' || s[j - 1] == '-')) {
        if (s[j - 1] == '-') e.b = -e.b;
        --j;
    } else if (j > 0) {
        throw std::invalid_argument("bad element: '" + text + "'");
    }
    if (j > 0) e.a = parse_long(s.substr(0, j));
    return e;
}

std::string format_quad_element(const QuadElement& e) {
    if (e.b == 0) return std::to_string(e.a);
    std::string w = std::labs(e.b) == 1 ? "w" : std::to_string(std::labs(e.b)) + "*w";
    if (e.a == 0) return (e.b < 0 ? "-" : "") + w;
    return std::to_string(e.a) + (e.b < 0 ? "-" : "+") + w;
}

bool has_word_problem(long d) { return d == -1 || d == -2 || d == -3 || d == -7 || d == -11; }

Word word_for_matrix(const MatrixGroupPresentation& G, long d, const Mat2<RingElem>& M) {
    if (!has_word_problem(d)) throw std::invalid_argument("no Euclidean algorithm for d = " + std::to_string(d));
    const Gens gens = find_gens(G);
    const auto& Rp = G.ring;
    const NumberRing& R = *Rp;
    for (const auto* e : {&M.a, &M.b, &M.c, &M.d})
        if (!integral(*e)) throw std::invalid_argument("matrix entries are not integral");
    if (!R.eq(R.sub(R.mul(M.a, M.d), R.mul(M.b, M.c)), R.one())) throw std::invalid_argument("determinant is not 1");
    auto norm = [&](const RingElem& e) { return R.mul(e, R.conj(e)).c[0]; };

    Word out;
    Mat2<RingElem> cur = M;
    while (!R.is_zero(cur.c)) {
        const RingElem z = R.div(cur.a, cur.c);
        const long fx = floor_long(z.c[0]), fy = floor_long(z.c[1]);
        RingElem best_q, best_r;
        Rational best_n = -1;
        for (long i = -1; i <= 2; ++i)
            for (long j = -1; j <= 2; ++j) {
                RingElem q = make_elem(R, fx + i, fy + j);
                RingElem r = R.sub(cur.a, R.mul(q, cur.c));
                Rational n = norm(r);
                if (best_n < 0 || n < best_n) best_q = q, best_r = r, best_n = n;
            }
        if (!(best_n < norm(cur.c))) throw std::logic_error("Euclidean step failed to reduce the norm");
        // cur = T^q B^-1 (B T^-q cur)
        append_translation(out, gens, best_q);
        out.push_back({gens.B, -1});
        const RingElem nb = R.sub(cur.b, R.mul(best_q, cur.d));
        cur = {cur.c, cur.d, R.neg(best_r), R.neg(nb)};
    }
    // cur = diag(u, u^-1) T^(u^-1 b); diag(u, u^-1) = w(u) w(1)^-1 with
    // w(u) = T^u (B T^(u^-1) B^-1) T^u.
    const RingElem u = cur.a, ui = R.inv(u);
    if (!R.eq(u, R.one()) && !R.eq(u, R.neg(R.one()))) {
        auto w_of = [&](const RingElem& v) {
            Word w;
            append_translation(w, gens, v);
            w.push_back({gens.B, 1});
            append_translation(w, gens, R.inv(v));
            w.push_back({gens.B, -1});
            append_translation(w, gens, v);
            return w;
        };
        out = word_concat(out, word_concat(w_of(u), word_inverse(w_of(R.one()))));
    }
    append_translation(out, gens, R.mul(ui, cur.b));
    out = word_free_reduce(out);
    const auto E = evaluate_word(G, out);
    if (!mat2_is_identity(TowerField{Rp}, ring_mul(Rp, E, mat2_inv(TowerField{Rp}, M)), true))
        throw std::logic_error("word problem produced a wrong word");
    return out;
}

HeckePair hecke_pair(const MatrixGroupPresentation& G, long d, const QuadElement& pi) {
    if (!has_word_problem(d)) throw std::invalid_argument("Hecke operators need a Euclidean Bianchi group");
    HeckePair P;
    P.d = d;
    P.pi = pi;
    P.field = residue_field(d, pi.a, pi.b);
    const auto& Rp = G.ring;
    P.ring = Rp;
    const NumberRing& R = *Rp;
    const RingElem pe = make_elem(R, pi.a, pi.b);
    P.delta = {R.one(), R.zero(), R.zero(), pe};
    P.delta_inv = {R.one(), R.zero(), R.zero(), R.inv(pe)};
    P.lower = coset_table(G, P.field, CongruenceKind::Lower);
    P.upper = coset_table(G, P.field, CongruenceKind::Upper);
    const std::size_t s = G.num_generators();
    auto words = [&](const CosetTable& from, const CosetTable& into, const Mat2<RingElem>& left,
                     const Mat2<RingElem>& right) {
        std::vector<Word> out(from.index() * s);
        for (std::size_t x = 0; x < from.index(); ++x)
            for (std::size_t g = 0; g < s; ++g) {
                const Word w = schreier_word(from, x, g);
                if (w.empty()) continue;
                const auto M = ring_mul(Rp, ring_mul(Rp, left, evaluate_word(G, w)), right);
                Word img = word_for_matrix(G, d, M);
                if (into.apply(into.base, img) != into.base) throw std::logic_error("conjugate left the subgroup");
                out[x * s + g] = std::move(img);
            }
        return out;
    };
    P.down = words(P.upper, P.lower, P.delta, P.delta_inv);
    P.up = words(P.lower, P.upper, P.delta_inv, P.delta);
    return P;
}

HeckeSpace::HeckeSpace(MatrixGroupPresentation G, long d, int n)
    : G_(std::move(G)), d_(d), n_(n), next_prime_(kPrimeCeiling) {
    if (n < 0) throw std::invalid_argument("weight must be non-negative");
}

std::size_t HeckeSpace::dim() { return layer(0).space.dim; }

const H1Layer& HeckeSpace::layer(std::size_t i) {
    while (layers_.size() <= i) {
        const std::uint64_t q = prev_prime(next_prime_);
        next_prime_ = q;
        auto maps = admissible_maps(G_, q);
        if (maps.empty()) continue;
        H1Layer L{maps[0], build_action(G_, n_, n_, maps[0]), {}, {}, {}};
        L.space = h1(G_, L.act);
        // A prime where the dimension jumps sees torsion; skip it.
        if (!layers_.empty() && L.space.dim != layers_[0].space.dim) continue;
        for (std::size_t g = 0; g < L.act.num_generators(); ++g) {
            L.gen.push_back(block_matrix(L.act.field, L.act.gens[g], n_, n_));
            L.gen_inv.push_back(block_matrix(L.act.field, L.act.inv_gens[g], n_, n_));
        }
        layers_.push_back(std::move(L));
    }
    return layers_[i];
}

Vec cocycle_value(const H1Layer& L, const Cocycle& f, const Word& w) { return eval_indexed(L, nullptr, f, w); }

Vec cocycle_value(const H1Layer& L, const CosetTable& t, const SubgroupCocycle& c, const Word& w) {
    return eval_in_subgroup(L, t, coset_values(L, t, c), w);
}

SubgroupCocycle restrict_cocycle(const H1Layer& L, const CosetTable& t, const Cocycle& f) {
    const std::size_t s = L.gen.size();
    SubgroupCocycle c;
    c.values.assign(t.index() * s, Vec(L.act.dim(), 0));
    for (std::size_t x = 0; x < t.index(); ++x)
        for (std::size_t g = 0; g < s; ++g) {
            const Word w = schreier_word(t, x, g);
            if (!w.empty()) c.values[x * s + g] = cocycle_value(L, f, w);
        }
    return c;
}

DenseMatrix<PrimeField> gl2_action(const H1Layer& L, const NumberRing& R, const Mat2<RingElem>& m) {
    auto red = [&](const RingElem& e, bool cj) { return R.reduce(L.map, e, cj); };
    const Mat2<std::uint64_t> a{red(m.a, false), red(m.b, false), red(m.c, false), red(m.d, false)};
    const Mat2<std::uint64_t> b{red(m.a, true), red(m.b, true), red(m.c, true), red(m.d, true)};
    return tensor_action(L.act.field, a, b, L.act.n, L.act.m);
}

SubgroupCocycle conjugate_down(const H1Layer& L, const HeckePair& P, const SubgroupCocycle& c) {
    return conjugate(L, P.lower, P.upper, P.down, gl2_action(L, *P.ring, P.delta_inv), c);
}

SubgroupCocycle conjugate_up(const H1Layer& L, const HeckePair& P, const SubgroupCocycle& c) {
    return conjugate(L, P.upper, P.lower, P.up, gl2_action(L, *P.ring, P.delta), c);
}

Cocycle corestrict_cocycle(const H1Layer& L, const CosetTable& t, const SubgroupCocycle& c) {
    const auto y = coset_values(L, t, c);
    const std::size_t s = L.gen.size();
    Cocycle f(s, Vec(L.act.dim(), 0));
    for (std::size_t x = 0; x < t.index(); ++x)
        for (std::size_t g = 0; g < s; ++g) add_into(f[g], y[x * s + g], L.act.field);
    return f;
}

// Multiplying by N(pi)^n replaces the weight delta^-1 by the adjugate of
// delta; calibrated once against the tables and frozen.
int hecke_norm_exponent(int n) { return n; }

DenseMatrix<PrimeField> hecke_matrix_mod(const H1Layer& L, const HeckePair& P, int n) {
    const PrimeField& F = L.act.field;
    const std::size_t k = L.space.dim, s = L.gen.size(), D = L.act.dim();
    const DenseMatrix<PrimeField> down_weight = gl2_action(L, *P.ring, P.delta_inv);
    const std::uint64_t N = static_cast<std::uint64_t>(element_norm(P.d, P.pi.a, P.pi.b));
    const int e = hecke_norm_exponent(n);
    const std::uint64_t scale = e >= 0 ? F.pow(F.from_int(static_cast<long>(N)), static_cast<std::uint64_t>(e))
                                       : F.inv(F.pow(F.from_int(static_cast<long>(N)), static_cast<std::uint64_t>(-e)));
    DenseMatrix<PrimeField> T(F, k, k);
    for (std::size_t j = 0; j < k; ++j) {
        const Cocycle f = split(L.space.basis[j], s, D);
        const auto c = conjugate(L, P.lower, P.upper, P.down, down_weight, restrict_cocycle(L, P.lower, f));
        const auto coords = L.space.coordinates(flatten(corestrict_cocycle(L, P.upper, c)));
        for (std::size_t i = 0; i < k; ++i) T.at(i, j) = F.mul(scale, coords[i]);
    }
    return T;
}

HeckeOperator hecke_matrix(HeckeSpace& S, const QuadElement& pi, const HeckeOptions& opt) {
    const HeckePair P = hecke_pair(S.group(), S.d(), pi);
    HeckeOperator op;
    op.d = S.d();
    op.n = S.n();
    op.pi = pi;
    op.index = P.index();
    std::vector<std::vector<std::uint64_t>> res;
    std::size_t stable = 0;
    for (std::size_t i = 0; i < opt.max_primes; ++i) {
        const H1Layer& L = S.layer(i);
        auto T = hecke_matrix_mod(L, P, S.n());
        const auto cp = charpoly(L.act.field, T);
        res.resize(cp.size());
        for (std::size_t c = 0; c < cp.size(); ++c) res[c].push_back(cp[c]);
        op.primes.push_back(L.map.p);
        op.matrices.push_back(std::move(T));
        std::vector<BigInt> lift;
        for (const auto& r : res) lift.push_back(crt_symmetric(r, op.primes));
        stable = (!op.charpoly.empty() && lift == op.charpoly) ? stable + 1 : 0;
        op.charpoly = std::move(lift);
        if (op.primes.size() >= opt.min_primes && stable >= opt.confirm) return op;
    }
    throw std::runtime_error("characteristic polynomial did not stabilise; it may not be integral");
}

bool real_rooted(const std::vector<BigInt>& charpoly) {
    const auto sf = squarefree_part(to_qpoly(charpoly));
    return real_root_count(sf) + 1 == sf.size();
}

bool divides(const std::vector<BigInt>& factor, const std::vector<BigInt>& poly) {
    auto r = qpoly_rem(to_qpoly(poly), to_qpoly(factor));
    return std::all_of(r.begin(), r.end(), [](const Rational& q) { return q == 0; });
}

NLSubspace nl_subspace(HeckeSpace& S, const QuadElement& pi, const std::vector<BigInt>& q, const HeckeOptions& opt) {
    if (q.size() != 3 || q[2] != 1) throw std::invalid_argument("q must be a monic quadratic");
    NLSubspace nl;
    nl.pi = pi;
    nl.q = q;
    nl.op = hecke_matrix(S, pi, opt);
    std::vector<Rational> q2 = qpoly_mul(to_qpoly(q), to_qpoly(q));
    auto r2 = qpoly_rem(to_qpoly(nl.op.charpoly), q2);
    const bool twice = std::all_of(r2.begin(), r2.end(), [](const Rational& c) { return c == 0; });
    if (!divides(q, nl.op.charpoly) || twice) throw std::invalid_argument("q is not a simple factor of the charpoly");
    for (std::size_t i = 0; i < nl.op.matrices.size(); ++i) {
        auto K = nl_kernel(S.layer(i).act.field, nl.op.matrices[i], q);
        if (K.size() != 2) throw std::logic_error("kernel of q(T) is not two-dimensional");
        nl.kernel.push_back(std::move(K));
    }
    return nl;
}

std::optional<Rational> rational_reconstruct(const BigInt& r, const BigInt& m) {
    BigInt r0 = m, r1 = r % m, t0 = 0, t1 = 1;
    if (r1 < 0) r1 += m;
    BigInt bound;
    BigInt half = m / 2;
    mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
    while (r1 > bound) {
        BigInt q = r0 / r1;
        BigInt t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = t0 - q * t1;
        t0 = t1;
        t1 = t;
    }
    if (abs(t1) > bound || t1 == 0) return std::nullopt;
    BigInt g;
    mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
    if (g != 1) return std::nullopt;
    Rational out(r1, t1);
    out.canonicalize();
    return out;
}

NLRestriction nl_restriction(HeckeSpace& S, const NLSubspace& nl, const QuadElement& pi, const HeckeOptions& opt) {
    const HeckePair P = hecke_pair(S.group(), S.d(), pi);
    std::optional<HeckePair> P0;
    std::vector<std::uint64_t> ra, rb, mods;
    std::optional<Rational> a, b;
    std::size_t stable = 0;
    for (std::size_t i = 0; i < opt.max_primes; ++i) {
        const H1Layer& L = S.layer(i);
        const PrimeField& F = L.act.field;
        DenseMatrix<PrimeField> T0;
        std::vector<Vec> K;
        if (i < nl.kernel.size()) {
            T0 = nl.op.matrices[i];
            K = nl.kernel[i];
        } else {
            if (!P0) P0 = hecke_pair(S.group(), S.d(), nl.pi);
            T0 = hecke_matrix_mod(L, *P0, S.n());
            K = nl_kernel(F, T0, nl.q);
            if (K.size() != 2) throw std::logic_error("kernel of q(T) is not two-dimensional");
        }
        const auto T1 = hecke_matrix_mod(L, P, S.n());
        const Vec& v = K[0];
        const Vec u = mat_vec(F, T0, v), w = mat_vec(F, T1, v);
        // Solve w = a v + b u on two coordinates where (v, u) is independent.
        std::optional<std::pair<std::uint64_t, std::uint64_t>> ab;
        for (std::size_t x = 0; x < v.size() && !ab; ++x)
            for (std::size_t y = x + 1; y < v.size() && !ab; ++y) {
                const auto det = F.sub(F.mul(v[x], u[y]), F.mul(v[y], u[x]));
                if (det == 0) continue;
                const auto di = F.inv(det);
                ab = std::make_pair(F.mul(F.sub(F.mul(w[x], u[y]), F.mul(w[y], u[x])), di),
                                    F.mul(F.sub(F.mul(v[x], w[y]), F.mul(v[y], w[x])), di));
            }
        if (!ab) throw std::logic_error("T_pi is scalar on the NL space");
        auto check = [&](const Vec& lhs, const Vec& x0, const Vec& x1) {
            for (std::size_t t = 0; t < lhs.size(); ++t)
                if (lhs[t] != F.add(F.mul(ab->first, x0[t]), F.mul(ab->second, x1[t])))
                    throw std::runtime_error("operator does not preserve the NL space");
        };
        check(w, v, u);
        check(mat_vec(F, T1, u), u, mat_vec(F, T0, u));
        ra.push_back(ab->first);
        rb.push_back(ab->second);
        mods.push_back(L.map.p);
        BigInt M = 1;
        for (auto q : mods) M *= q;
        auto na = rational_reconstruct(crt_symmetric(ra, mods), M);
        auto nb = rational_reconstruct(crt_symmetric(rb, mods), M);
        stable = (na && nb && a && b && *na == *a && *nb == *b) ? stable + 1 : 0;
        a = na;
        b = nb;
        if (mods.size() >= opt.min_primes && stable >= opt.confirm) break;
    }
    if (stable < opt.confirm) throw std::runtime_error("NL restriction did not stabilise");
    NLRestriction out;
    out.a = *a;
    out.b = *b;
    const Rational c0(nl.q[0]), c1(nl.q[1]);
    // Companion rows: v -> T v, T v -> -c0 v - c1 T v.
    out.matrix = {{{out.a, out.b}, {-out.b * c0, out.a - out.b * c1}}};
    const Rational tr = 2 * out.a - out.b * c1, det = out.a * out.a - out.a * out.b * c1 + out.b * out.b * c0;
    if (tr.get_den() != 1 || det.get_den() != 1) throw std::runtime_error("NL charpoly is not integral");
    out.charpoly = {det.get_num(), -tr.get_num(), BigInt(1)};
    return out;
}

}  // namespace coh
