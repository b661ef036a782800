#include "doctest.h"

#include "coh/hecke.hpp"

#include <algorithm>

using namespace coh;

namespace {

using IntPoly = std::vector<BigInt>;

// Ascending integer polynomial from decimal strings, highest degree last.
IntPoly poly(std::initializer_list<const char*> coeffs) {
    IntPoly p;
    for (const char* c : coeffs) p.emplace_back(c);
    return p;
}

IntPoly mul(const IntPoly& a, const IntPoly& b) {
    IntPoly r(a.size() + b.size() - 1, BigInt(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

HeckeSpace& space(long d, int n) {
    static std::vector<std::unique_ptr<HeckeSpace>> cache;
    for (auto& s : cache)
        if (s->d() == d && s->n() == n) return *s;
    cache.push_back(std::make_unique<HeckeSpace>(catalog_get({Family::BianchiO, d}), d, n));
    return *cache.back();
}

const NLSubspace& nl7() {
    static const NLSubspace nl = nl_subspace(space(-7, 12), {0, 1}, poly({"-14432", "50", "1"}));
    return nl;
}

const NLSubspace& nl11() {
    static const NLSubspace nl = nl_subspace(space(-11, 10), {0, 1}, poly({"40671", "700", "1"}));
    return nl;
}

using M2 = std::array<std::array<long, 2>, 2>;

void check_matrix(const NLRestriction& r, const M2& m) {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(r.matrix[i][j] == Rational(m[i][j]));
}

std::array<std::array<Rational, 2>, 2> adj(const std::array<std::array<Rational, 2>, 2>& m) {
    return {{{m[1][1], -m[0][1]}, {-m[1][0], m[0][0]}}};
}

// cor o res acts as multiplication by the index on every basis class.
void check_cor_res(HeckeSpace& S, const HeckePair& P) {
    const H1Layer& L = S.layer(0);
    const std::size_t s = L.gen.size(), D = L.act.dim();
    const PrimeField& F = L.act.field;
    for (const CosetTable* t : {&P.lower, &P.upper})
        for (std::size_t j = 0; j < L.space.dim; ++j) {
            Cocycle f(s);
            for (std::size_t g = 0; g < s; ++g)
                f[g].assign(L.space.basis[j].begin() + static_cast<long>(g * D),
                            L.space.basis[j].begin() + static_cast<long>((g + 1) * D));
            const Cocycle back = corestrict_cocycle(L, *t, restrict_cocycle(L, *t, f));
            Vec flat;
            for (const auto& v : back) flat.insert(flat.end(), v.begin(), v.end());
            const auto c = L.space.coordinates(flat);
            for (std::size_t i = 0; i < c.size(); ++i)
                CHECK(c[i] == (i == j ? F.from_int(static_cast<long>(P.index())) : 0));
        }
}

}  // namespace

TEST_CASE("quadratic element syntax") {
    CHECK(parse_quad_element("1+2*w") == QuadElement{1, 2});
    CHECK(parse_quad_element(" -2 + w ") == QuadElement{-2, 1});
    CHECK(parse_quad_element("w") == QuadElement{0, 1});
    CHECK(parse_quad_element("-w") == QuadElement{0, -1});
    CHECK(parse_quad_element("3") == QuadElement{3, 0});
    CHECK(parse_quad_element("3-8*w") == QuadElement{3, -8});
    CHECK(parse_quad_element("4w") == QuadElement{0, 4});
    CHECK_THROWS_AS(parse_quad_element("x+w"), std::invalid_argument);
    CHECK_THROWS_AS(parse_quad_element(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_quad_element("1+2*v"), std::invalid_argument);
    for (const char* s : {"1+2*w", "-2+w", "w", "-w", "3", "3-8*w", "0"})
        CHECK(format_quad_element(parse_quad_element(s)) == s);
}

TEST_CASE("residue fields of prime elements") {
    const auto k = residue_field(-7, 3, 0);
    CHECK(k.degree == 2);
    CHECK(k.size() == 9);
    for (std::uint64_t x = 1; x < k.size(); ++x) CHECK(k.mul(x, k.inv(x)) == 1);
    // w^2 - w + 2 = 0 in F_9.
    const std::uint64_t w = 3;
    CHECK(k.add(k.sub(k.mul(w, w), w), 2) == 0);
    const auto k11 = residue_field(-7, 1, 2);
    CHECK(k11.degree == 1);
    CHECK(k11.p == 11);
    CHECK((1 + 2 * static_cast<long>(k11.r)) % 11 == 0);
    CHECK(residue_field(-11, 7, 0).size() == 49);
    CHECK(residue_field(-1, 0, 3).size() == 9);   // 3i, an associate of 3
    CHECK_THROWS_AS(residue_field(-7, 2, 0), std::invalid_argument);   // 2 splits
    CHECK_THROWS_AS(residue_field(-7, 4, 1), std::invalid_argument);   // norm 22
    CHECK_THROWS_AS(residue_field(-1, 1, 0), std::invalid_argument);   // a unit
    CHECK_THROWS_AS(residue_field(-1, 5, 0), std::invalid_argument);   // 5 splits in Z[i]
}

TEST_CASE("word problem in Euclidean Bianchi groups") {
    for (long d : {-1L, -2L, -3L, -7L, -11L}) {
        CAPTURE(d);
        const auto G = catalog_get({Family::BianchiO, d});
        const auto& R = *G.ring;
        const TowerField F{G.ring};
        // Products of generators, plus all unit diagonals of the field.
        for (const char* s : {"A", "BUBA^3U^-2B", "UBUBUBA^-5BU^4BA", "(AUB)^5U^-3", "BU^-2BA^7BUBU"}) {
            const auto M = evaluate_word(G, parse_word(s, G.generators));
            const auto E = evaluate_word(G, word_for_matrix(G, d, M));
            CHECK(mat2_is_identity(F, mat2_mul(F, E, mat2_inv(F, M)), true));
        }
        const RingElem w = R.gen(0);
        const RingElem unit = d == -1 ? w : d == -3 ? w : R.neg(R.one());
        const Mat2<RingElem> D{unit, R.zero(), R.zero(), R.inv(unit)};
        const auto E = evaluate_word(G, word_for_matrix(G, d, D));
        CHECK(mat2_is_identity(F, mat2_mul(F, E, mat2_inv(F, D)), true));
        const Mat2<RingElem> bad{R.constant(2), R.zero(), R.zero(), R.one()};
        CHECK_THROWS_AS(word_for_matrix(G, d, bad), std::invalid_argument);
    }
    const auto G5 = catalog_get({Family::BianchiO, -5});
    CHECK_THROWS_AS(word_for_matrix(G5, -5, evaluate_word(G5, parse_word("A", G5.generators))), std::invalid_argument);
    CHECK_THROWS_AS(hecke_pair(G5, -5, {1, 1}), std::invalid_argument);
}

TEST_CASE("double coset data") {
    struct Case {
        long d;
        QuadElement pi;
        std::size_t cosets;
    };
    for (const auto& c : {Case{-7, {1, 2}, 12}, Case{-11, {0, 1}, 4}, Case{-7, {3, 0}, 10}, Case{-1, {1, 1}, 3}}) {
        CAPTURE(c.d);
        const auto G = catalog_get({Family::BianchiO, c.d});
        const auto P = hecke_pair(G, c.d, c.pi);
        CHECK(P.index() == c.cosets);
        CHECK(P.upper.index() == c.cosets);
        // The transversal reaches every coset exactly once.
        std::vector<std::size_t> seen;
        for (const auto& w : P.lower.transversal) seen.push_back(P.lower.apply(P.lower.base, w));
        std::sort(seen.begin(), seen.end());
        CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
        // Membership: Schreier generators of H have c = 0 mod pi.
        const auto& R = *G.ring;
        const std::size_t s = G.num_generators();
        for (std::size_t x = 0; x < P.lower.index(); ++x)
            for (std::size_t g = 0; g < s; ++g) {
                Word w = P.lower.transversal[x];
                w.push_back({static_cast<int>(g), 1});
                w = word_concat(w, word_inverse(P.lower.transversal[P.lower.act[g][x]]));
                CHECK(P.field.reduce(R, evaluate_word(G, w).c) == 0);
                if (!P.up[x * s + g].empty())
                    CHECK(P.upper.apply(P.upper.base, P.up[x * s + g]) == P.upper.base);
            }
    }
    const auto G7 = catalog_get({Family::BianchiO, -7});
    CHECK_THROWS_AS(hecke_pair(G7, -7, {2, 0}), std::invalid_argument);
    CHECK_THROWS_AS(hecke_pair(G7, -7, {1, 0}), std::invalid_argument);
}

TEST_CASE("restriction, conjugation and transfer") {
    auto& S = space(-7, 12);
    const auto P = hecke_pair(S.group(), -7, {1, 2});
    check_cor_res(S, P);
    check_cor_res(S, hecke_pair(S.group(), -7, {3, 0}));
    auto& S11 = space(-11, 10);
    check_cor_res(S11, hecke_pair(S11.group(), -11, {0, 1}));
    check_cor_res(S11, hecke_pair(S11.group(), -11, {-2, 1}));

    const H1Layer& L = S.layer(0);
    const std::size_t s = L.gen.size(), D = L.act.dim();
    Cocycle zero(s, Vec(D, 0));
    for (const auto& v : restrict_cocycle(L, P.lower, zero).values)
        CHECK(std::all_of(v.begin(), v.end(), [](std::uint64_t x) { return x == 0; }));

    Cocycle f(s);
    for (std::size_t g = 0; g < s; ++g)
        f[g].assign(L.space.basis[0].begin() + static_cast<long>(g * D),
                    L.space.basis[0].begin() + static_cast<long>((g + 1) * D));
    const auto c = restrict_cocycle(L, P.lower, f);
    const auto round = conjugate_up(L, P, conjugate_down(L, P, c));
    CHECK(round.values == c.values);
    // A restricted cocycle evaluates like the original on subgroup words.
    const Word w = P.down[1 * s + 0].empty() ? P.down[2 * s + 1] : P.down[1 * s + 0];
    CHECK(cocycle_value(L, P.lower, c, w) == cocycle_value(L, f, w));
}

TEST_CASE("characteristic polynomial for d = -7, weight 12") {
    auto& S = space(-7, 12);
    CHECK(S.dim() == 6);
    const auto op = hecke_matrix(S, {1, 2});
    CHECK(op.index == 12);
    const IntPoly expected = mul(mul(poly({"-9951764", "1"}), poly({"-54779120751344", "1877432", "1"})),
                              poly({"-1678794474022559168", "-7410075237136", "-2226532", "1"}));
    CHECK(op.charpoly == expected);
    CHECK(real_rooted(op.charpoly));
    // The degree-two prime 3 acts by -1939626 on the non-lifted part.
    const auto op3 = hecke_matrix(S, {3, 0});
    CHECK(divides(poly({"3762149019876", "3879252", "1"}), op3.charpoly));
    CHECK(real_rooted(op3.charpoly));
}

TEST_CASE("characteristic polynomial for d = -11, weight 10") {
    auto& S = space(-11, 10);
    const auto op = hecke_matrix(S, {0, 1});
    CHECK(op.index == 4);
    CHECK(divides(poly({"-252", "1"}), op.charpoly));
    CHECK(divides(poly({"-67", "1"}), op.charpoly));
    CHECK(divides(poly({"40671", "700", "1"}), op.charpoly));
    CHECK(divides(poly({"1097145000", "-113276475", "-439713", "403", "1"}), op.charpoly));
    CHECK(op.charpoly.size() == 9);
    CHECK(real_rooted(op.charpoly));
    CHECK_FALSE(divides(poly({"-251", "1"}), op.charpoly));
    CHECK_THROWS_AS(nl_subspace(S, {0, 1}, poly({"1", "1", "1"})), std::invalid_argument);
}

TEST_CASE("non-lifted space for d = -7") {
    auto& S = space(-7, 12);
    const auto& nl = nl7();
    CHECK(nl.kernel[0].size() == 2);
    check_matrix(nl_restriction(S, nl, {0, 1}), {{{0, 1}, {14432, -50}}});
    check_matrix(nl_restriction(S, nl, {-1, 2}), {{{44800, 1792}, {25862144, -44800}}});
    const auto L11 = nl_restriction(S, nl, {1, 2});
    check_matrix(L11, {{{581284, 60800}, {877465600, -2458716}}});
    CHECK(L11.charpoly == poly({"-54779120751344", "1877432", "1"}));
    check_matrix(nl_restriction(S, nl, {3, 2}), {{{-257854600, 4457728}, {64333930496, -480741000}}});
    check_matrix(nl_restriction(S, nl, {-1, 4}), {{{-114226222, -627200}, {-9051750400, -82866222}}});
    for (auto [p, lambda] : {std::pair<long, long>{3, -1939626}, {5, -747491750}}) {
        const auto r = nl_restriction(S, nl, {p, 0});
        CHECK(r.scalar());
        CHECK(r.a == Rational(lambda));
    }
    // L_{-pi} = -L_pi.
    for (QuadElement pi : {QuadElement{0, 1}, QuadElement{1, 2}}) {
        const auto a = nl_restriction(S, nl, pi), b = nl_restriction(S, nl, {-pi.a, -pi.b});
        CHECK(b.a == -a.a);
        CHECK(b.b == -a.b);
    }
    // Conjugate primes: 2 + sqrt(-7) = 1 + 2w and 2 - sqrt(-7) = 3 - 2w.
    CHECK(nl_restriction(S, nl, {3, -2}).matrix == adj(L11.matrix));
    // The ramified prime sqrt(-7) = -1 + 2w equals minus its conjugate, so a
    // relation L_{conj} = -adj(L) would force its trace-zero matrix to vanish.
    const auto Lr = nl_restriction(S, nl, {-1, 2});
    CHECK(Lr.matrix[0][0] + Lr.matrix[1][1] == 0);
    CHECK(adj(Lr.matrix) != Lr.matrix);
    // Discriminant of the defining quadratic: squarefree part 7 * 239.
    const BigInt disc = BigInt(1877432) * 1877432 + BigInt(4) * BigInt("54779120751344");
    CHECK(disc % (7 * 239) == 0);
    CHECK(disc == BigInt(7 * 239) * BigInt(364800) * BigInt(364800));
}

TEST_CASE("non-lifted space for d = -11") {
    auto& S = space(-11, 10);
    const auto& nl = nl11();
    check_matrix(nl_restriction(S, nl, {0, 1}), {{{0, 1}, {-40671, -700}}});
    check_matrix(nl_restriction(S, nl, {-2, 1}), {{{-14203, -26}, {1057446, 3997}}});
    check_matrix(nl_restriction(S, nl, {-1, 2}), {{{-117612, 0}, {0, -117612}}});
    check_matrix(nl_restriction(S, nl, {-5, 1}), {{{44565050, 22561}, {-917578431, 28772350}}});
    check_matrix(nl_restriction(S, nl, {-4, 3}), {{{-124944582, -577125}, {23472250875, 279042918}}});
    check_matrix(nl_restriction(S, nl, {-5, 3}), {{{351981325, 819882}, {-33345420822, -221936075}}});
    for (auto [p, mu] : {std::pair<long, long>{2, -80}, {7, -818885550}}) {
        const auto r = nl_restriction(S, nl, {p, 0});
        CHECK(r.scalar());
        CHECK(r.a == Rational(mu));
    }
    // L_{-pi} = L_pi and L_{conj pi} = adj(L_pi).
    const auto Lw = nl_restriction(S, nl, {0, 1});
    CHECK(nl_restriction(S, nl, {0, -1}).matrix == Lw.matrix);
    CHECK(nl_restriction(S, nl, {1, -1}).matrix == adj(Lw.matrix));
    const auto L5 = nl_restriction(S, nl, {-2, 1});
    CHECK(nl_restriction(S, nl, {-1, -1}).matrix == adj(L5.matrix));  // conj(-2 + w) = -1 - w
    // 700^2 - 4 * 40671 = 2^2 * 11 * 43 * 173.
    CHECK(700 * 700 - 4 * 40671 == 4 * 11 * 43 * 173);
}

TEST_CASE("Hecke operators commute") {
    struct Case {
        long d;
        int n;
        std::vector<QuadElement> pis;
    };
    for (const auto& c : {Case{-11, 10, {{0, 1}, {-2, 1}, {2, 0}, {-1, 2}}}, Case{-7, 12, {{0, 1}, {1, 2}, {3, 0}}},
                          Case{-1, 4, {{1, 1}, {2, 1}, {3, 0}}}, Case{-3, 6, {{1, 1}, {2, 0}}},
                          Case{-2, 4, {{0, 1}, {1, 1}}}}) {
        CAPTURE(c.d);
        auto& S = space(c.d, c.n);
        std::vector<HeckeOperator> ops;
        for (const auto& pi : c.pis) {
            ops.push_back(hecke_matrix(S, pi));
            CHECK(real_rooted(ops.back().charpoly));
            CHECK(ops.back().charpoly.back() == 1);
        }
        for (std::size_t i = 0; i < ops.size(); ++i)
            for (std::size_t j = i + 1; j < ops.size(); ++j)
                for (std::size_t k = 0; k < 2; ++k) {
                    const PrimeField F = S.layer(k).act.field;
                    const auto& A = ops[i].matrices[k];
                    const auto& B = ops[j].matrices[k];
                    CHECK(mat_mul(F, A, B).a == mat_mul(F, B, A).a);
                }
    }
}

TEST_CASE("rational reconstruction") {
    const BigInt m = BigInt(1000003) * BigInt(998244353);
    for (auto [n, d] : {std::pair<long, long>{-5, 7}, {123456, 1}, {0, 1}, {-1, 3}}) {
        BigInt dinv;
        const BigInt dd(d);
        mpz_invert(dinv.get_mpz_t(), dd.get_mpz_t(), m.get_mpz_t());
        BigInt r = (BigInt(n) * dinv) % m;
        const auto q = rational_reconstruct(r, m);
        REQUIRE(q);
        CHECK(*q == Rational(n, d));
    }
}
