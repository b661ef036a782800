#include "doctest.h"

#include "coh/number_ring.hpp"

#include <random>

using namespace coh;

TEST_CASE("prime field basics") {
    PrimeField F(101);
    CHECK(F.mul(F.inv(7), 7) == 1);
    CHECK(F.from_rational(Rational(1, 2)) == 51);
    CHECK_THROWS_AS(PrimeField(100), std::invalid_argument);
    CHECK_THROWS_AS(F.from_rational(Rational(1, 101)), DivisionByZero);
    PrimeField G(2305843009213693951ull);  // 2^61 - 1
    auto a = G.from_int(-5);
    CHECK(G.add(a, 5) == 0);
    CHECK(G.mul(G.inv(a), a) == 1);
    std::uint64_t r = 0;
    REQUIRE(G.sqrt(G.from_int(-7), r));
    CHECK(G.mul(r, r) == G.from_int(-7));
}

TEST_CASE("roots mod p agree with brute force") {
    PrimeField F(1000003);
    // (x-5)(x-17)(x^2+1) mod p
    std::vector<std::uint64_t> f{F.from_int(85), F.from_int(-22), F.from_int(86), F.from_int(-22), 1};
    auto roots = roots_mod_p(F, f);
    std::vector<std::uint64_t> brute;
    for (std::uint64_t x = 0; x < F.p(); ++x) {
        std::uint64_t v = 0;
        for (std::size_t i = f.size(); i-- > 0;) v = F.add(F.mul(v, x), f[i]);
        if (v == 0) brute.push_back(x);
    }
    CHECK(roots == brute);
}

TEST_CASE("gaussian integers ring and its reductions") {
    NumberRing R = ring_define({{"x", "x^2+1"}}, {"-x"}, {});
    auto m5 = R.reduction_maps(5);
    REQUIRE(m5.size() == 2);
    CHECK(m5[0].roots[0] == 2);
    CHECK(m5[0].conj_roots[0] == 3);
    CHECK(m5[1].roots[0] == 3);
    CHECK(m5[1].conj_roots[0] == 2);
    CHECK(R.reduction_maps(3).empty());
    auto m2 = R.reduction_maps(2);
    REQUIRE(m2.size() == 1);
    CHECK(m2[0].self_conjugate());

    auto e = R.parse("1+x");
    CHECK(R.reduce(m5[0], e) == 3);
    CHECK(R.reduce(m5[0], R.mul(R.gen(0), R.gen(0))) == 4);
    CHECK(R.reduce(m5[0], R.conj(e)) == 4);
    CHECK(R.reduce(m5[0], e, true) == 4);
    CHECK(R.format(R.conj(e)) == "1 - x");
}

TEST_CASE("ring definition errors") {
    CHECK_THROWS_AS(ring_define({{"x", "2x^2+1"}}, {"-x"}, {}), std::invalid_argument);
    CHECK_THROWS_AS(ring_define({{"x", "x^2+1"}}, {"x+1"}, {}), std::invalid_argument);
    CHECK_THROWS_AS(ring_define({{"x", "x^3-2"}}, {"x^2"}, {}), std::invalid_argument);
}

TEST_CASE("two-level tower: inverses and reduction homomorphism properties") {
    NumberRing R = ring_define({{"u", "u^4-u^2+1"}, {"s", "s^2-(2u-u^3)"}}, {"u-u^3", "s"}, {});
    std::mt19937_64 rng(7);
    auto random_elem = [&] {
        RingElem e = R.zero();
        for (auto& c : e.c) {
            c = Rational(static_cast<long>(rng() % 11) - 5, static_cast<long>(rng() % 3) + 1);
            c.canonicalize();
        }
        return e;
    };
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_elem(), b = random_elem();
        if (R.is_zero(a)) continue;
        CHECK(R.eq(R.mul(a, R.inv(a)), R.one()));
        CHECK(R.eq(R.conj(R.conj(a)), a));
        CHECK(R.eq(R.conj(R.mul(a, b)), R.mul(R.conj(a), R.conj(b))));
        for (std::uint64_t p : {13ull, 37ull, 61ull, 73ull}) {
            PrimeField F(p);
            for (const auto& r : R.reduction_maps(p)) {
                std::uint64_t ra, rb;
                try {
                    ra = R.reduce(r, a);
                    rb = R.reduce(r, b);
                } catch (const DivisionByZero&) {
                    continue;
                }
                CHECK(R.reduce(r, R.add(a, b)) == F.add(ra, rb));
                CHECK(R.reduce(r, R.mul(a, b)) == F.mul(ra, rb));
                CHECK(R.reduce(r, R.one()) == 1);
                CHECK(R.reduce(r, R.conj(a)) == R.reduce(r, a, true));
            }
        }
    }
    CHECK(R.reduction_maps(13).size() == 8);
    CHECK(R.format(R.parse("(u+s)^2 - s^2 - u^2")) == "2*u*s");
}
