#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace coh {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Raised when a reduction or inversion hits a vanishing denominator.
struct DivisionByZero : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> primes_up_to(std::uint64_t x);
/// Largest prime strictly below `below`.
std::uint64_t prev_prime(std::uint64_t below);

/// Arithmetic in Z/pZ for a prime p < 2^63; residues are kept in [0, p).
class PrimeField {
public:
    using Elem = std::uint64_t;

    PrimeField() = default;
    explicit PrimeField(std::uint64_t p);

    std::uint64_t p() const { return p_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem from_int(std::int64_t v) const;
    Elem from_big(const BigInt& v) const;
    /// Throws DivisionByZero when p divides the denominator.
    Elem from_rational(const Rational& q) const;

    Elem add(Elem a, Elem b) const {
        Elem s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
    Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
    Elem mul(Elem a, Elem b) const {
        return static_cast<Elem>((static_cast<unsigned __int128>(a) * b) % p_);
    }
    Elem pow(Elem a, std::uint64_t e) const;
    Elem inv(Elem a) const;
    bool is_zero(Elem a) const { return a == 0; }
    bool eq(Elem a, Elem b) const { return a == b; }

    /// Signed representative in (-p/2, p/2].
    std::int64_t centered(Elem a) const;
    /// Some square root of a, if one exists.
    bool sqrt(Elem a, Elem& root) const;
    std::string str(Elem a) const { return std::to_string(a); }

    bool operator==(const PrimeField& o) const { return p_ == o.p_; }

private:
    std::uint64_t p_ = 2;
};

/// The rational numbers as a field object for the generic linear algebra.
struct RationalField {
    using Elem = Rational;
    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem from_int(std::int64_t v) const { return Rational(static_cast<long>(v)); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem inv(const Elem& a) const {
        if (a == 0) throw DivisionByZero("rational inverse of zero");
        return 1 / a;
    }
    bool is_zero(const Elem& a) const { return a == 0; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    std::string str(const Elem& a) const { return to_string(a); }
};

/// Distinct roots in F_p of a polynomial given by ascending coefficients, sorted.
std::vector<std::uint64_t> roots_mod_p(const PrimeField& F, std::vector<std::uint64_t> coeffs);

/// Rabin's irreducibility test for a polynomial over F_p (leading coefficient nonzero).
bool irreducible_mod_p(const PrimeField& F, std::vector<std::uint64_t> coeffs);

/// Chinese remaindering of residues into the symmetric range (-M/2, M/2].
BigInt crt_symmetric(const std::vector<std::uint64_t>& residues,
                     const std::vector<std::uint64_t>& moduli);

}  // namespace coh
