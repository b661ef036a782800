#include "doctest.h"

#include "coh/groups.hpp"

using namespace coh;

namespace {

std::vector<BigInt> ints(std::initializer_list<long> xs) {
    std::vector<BigInt> v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

void check_consistent(const MatrixGroupPresentation& p, std::uint64_t bound) {
    for (const auto& w : p.relators) CHECK(mat2_is_identity(TowerField(p.ring), evaluate_word(p, w), p.projective));
    for (std::uint64_t q : primes_up_to(bound)) {
        for (const auto& r : admissible_maps(p, q)) {
            PrimeField F = r.field();
            for (const auto& w : p.relators) {
                CHECK(mat2_is_identity(F, evaluate_word(p, w, r), p.projective));
                CHECK(mat2_is_identity(F, evaluate_word(p, w, r, true), p.projective));
            }
            // The conjugate images reduce like the images under the conjugate assignment.
            auto a = reduce_images(p, r, true);
            auto b = reduce_images(p, r.conjugate(), false);
            for (std::size_t i = 0; i < a.size(); ++i) CHECK(mat2_eq(F, a[i], b[i]));
        }
    }
}

}  // namespace

TEST_CASE("word parsing and formatting") {
    std::vector<std::string> g{"A", "B", "U"};
    Word w = parse_word("(BU^2BU^-1)^2", g);
    CHECK(w.size() == 10);
    CHECK(format_word(w, g) == "B U^2 B U^-1 B U^2 B U^-1");
    CHECK(parse_word("A^{-1}", g) == Word{{0, -1}});
    CHECK(parse_word("", g).empty());
    CHECK(word_free_reduce(parse_word("AUU^-1A^-1B", g)) == Word{{1, 1}});
    CHECK(word_inverse(parse_word("AB^-1", g)) == parse_word("BA^-1", g));
    std::map<std::string, Word> macros{{"z", parse_word("AB", g)}};
    CHECK(parse_word("z^-1U", g, macros) == parse_word("B^-1A^-1U", g));
    CHECK_THROWS(parse_word("AX", g));
}

TEST_CASE("evaluate_word: projective identities") {
    auto p = catalog_get({Family::BianchiO, -1});
    TowerField K(p.ring);
    auto b2 = evaluate_word(p, parse_word("B^2", p.generators));
    CHECK(K.eq(b2.a, K.from_int(-1)));
    CHECK(mat2_is_identity(K, b2, true));
    CHECK_FALSE(mat2_is_identity(K, b2, false));
    CHECK(mat2_is_identity(K, evaluate_word(p, Word{}), false));
    auto q = catalog_get({Family::BianchiO, -2});
    CHECK(mat2_is_identity(K, evaluate_word(q, parse_word("(AB)^3", q.generators)), true));
}

TEST_CASE("catalog shapes") {
    auto p19 = catalog_get(*parse_catalog_key("bianchi:-19"));
    CHECK(p19.generators == std::vector<std::string>{"A", "B", "U", "C"});
    CHECK(p19.relators.size() == 7);
    bool found = false;
    for (const auto& r : p19.relators) found |= (r == parse_word("(CA^-1)^3", p19.generators));
    CHECK(found);

    auto tet = catalog_get(*parse_catalog_key("tetrahedral"));
    CHECK(tet.relators.size() == 6);
    CHECK(format_word(tet.relators[5], tet.generators) == "a b a b a b a b");

    auto h1 = catalog_get(*parse_catalog_key("helling:1"));
    CHECK(h1.relators.size() == 2);
    CHECK(catalog_key_string(*parse_catalog_key("klimenko332:14")) == "klimenko332:14");
    CHECK_FALSE(parse_catalog_key("bianchi:x").has_value());
    CHECK_THROWS_AS(catalog_get({Family::BianchiO, -15}), UnsupportedKey);
    CHECK_THROWS_AS(catalog_get({Family::Klimenko333, 7}), UnsupportedKey);
}

TEST_CASE("Helling polynomials") {
    CHECK(helling_f(1) == ints({3, -3, 1}));
    CHECK(helling_f(2) == ints({8, 0, -5, 0, 1}));
    CHECK(helling_f(3) == ints({3, 1, -1, -2, 1}));
    CHECK(helling_f(4) == ints({4, 0, 8, 0, -6, 0, 1}));
    CHECK(helling_f(5) == ints({3, -5, 2, 6, -3, -2, 1}));
    CHECK(helling_f(6) == ints({8, 0, -17, 0, 20, 0, -8, 0, 1}));
    CHECK(helling_f(7) == ints({3, 3, -2, -14, 7, 10, -5, -2, 1}));
    CHECK(helling_f(8) == ints({4, 0, 24, 0, -50, 0, 35, 0, -10, 0, 1}));
    CHECK(helling_f(9) == ints({3, -7, 3, 26, -13, -32, 16, 14, -7, -2, 1}));
    CHECK(helling_f(10) == ints({8, 0, -37, 0, 105, 0, -112, 0, 54, 0, -12, 0, 1}));
    CHECK(helling_ptilde(0) == ints({2}));
    CHECK(helling_ptilde(1) == ints({1}));
    CHECK(helling_ptilde(3) == ints({-1, 1}));
}

TEST_CASE("relator consistency: fixed catalog") {
    for (const auto& k : catalog_fixed_keys()) {
        CAPTURE(catalog_key_string(k));
        check_consistent(catalog_get(k), 100);
    }
}

TEST_CASE("relator consistency: parametric families") {
    for (const char* key : {"helling:1", "helling:2", "helling:3", "helling:4", "helling:7", "klimenko333:8",
                            "klimenko333:12", "klimenko332:8", "klimenko332:14"}) {
        CAPTURE(key);
        check_consistent(catalog_get(*parse_catalog_key(key)), 100);
    }
}

TEST_CASE("serialisation round trip") {
    for (const char* key : {"bianchi:-7", "bianchi-ideal:-14", "helling:3", "klimenko332:14", "tetrahedral"}) {
        CAPTURE(key);
        auto p = catalog_get(*parse_catalog_key(key));
        std::string text = serialize_presentation(p);
        auto q = parse_presentation(text);
        CHECK(q.generators == p.generators);
        CHECK(q.relators == p.relators);
        CHECK(q.ring->dim() == p.ring->dim());
        CHECK(serialize_presentation(q) == text);
        for (std::uint64_t prime : {13ULL, 29ULL, 41ULL, 61ULL, 97ULL, 113ULL}) {
            auto mp = admissible_maps(p, prime);
            auto mq = admissible_maps(q, prime);
            REQUIRE(mp.size() == mq.size());
            for (std::size_t i = 0; i < mp.size(); ++i) {
                auto a = reduce_images(p, mp[i]);
                auto b = reduce_images(q, mq[i]);
                for (std::size_t j = 0; j < a.size(); ++j) CHECK(mat2_eq(mp[i].field(), a[j], b[j]));
            }
        }
    }
}

TEST_CASE("parse_presentation rejects bad input") {
    CHECK_THROWS(parse_presentation("level w : w^2 + 1\ninvolution w -> -w\ngenerator A = [1, 1; 0, 2]\n"));
    CHECK_THROWS(parse_presentation(
        "level w : w^2 + 1\ninvolution w -> -w\ngenerator A = [1, 1; 0, 1]\nrelator A^2\n"));
}
