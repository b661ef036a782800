#include "coh/arith.hpp"

#include <algorithm>

namespace coh {

Rational parse_rational(const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }
std::string to_string(const BigInt& z) { return z.get_str(); }

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t x) {
    std::vector<std::uint64_t> out;
    if (x < 2) return out;
    std::vector<bool> sieve(x + 1, true);
    for (std::uint64_t i = 2; i <= x; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= x; j += i) sieve[j] = false;
    }
    return out;
}

std::uint64_t prev_prime(std::uint64_t below) {
    for (std::uint64_t n = below - 1; n >= 2; --n)
        if (is_prime(n)) return n;
    throw std::invalid_argument("no prime below bound");
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
    if (p >= (1ull << 63) || !is_prime(p)) throw std::invalid_argument("PrimeField: modulus must be a prime below 2^63");
}

PrimeField::Elem PrimeField::from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    return r < 0 ? static_cast<Elem>(r + static_cast<std::int64_t>(p_)) : static_cast<Elem>(r);
}

PrimeField::Elem PrimeField::from_big(const BigInt& v) const {
    BigInt r = v % BigInt(std::to_string(p_));
    if (r < 0) r += BigInt(std::to_string(p_));
    return std::stoull(r.get_str());
}

PrimeField::Elem PrimeField::from_rational(const Rational& q) const {
    Elem den = from_big(q.get_den());
    if (den == 0) throw DivisionByZero("denominator divisible by p=" + std::to_string(p_));
    return mul(from_big(q.get_num()), inv(den));
}

PrimeField::Elem PrimeField::pow(Elem a, std::uint64_t e) const { return powmod(a, e, p_); }

PrimeField::Elem PrimeField::inv(Elem a) const {
    if (a == 0) throw DivisionByZero("inverse of zero mod p=" + std::to_string(p_));
    // Extended Euclid on signed 128-bit values.
    __int128 t = 0, nt = 1, r = p_, nr = a;
    while (nr != 0) {
        __int128 q = r / nr;
        __int128 tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (t < 0) t += p_;
    return static_cast<Elem>(t);
}

std::int64_t PrimeField::centered(Elem a) const {
    return a > p_ / 2 ? -static_cast<std::int64_t>(p_ - a) : static_cast<std::int64_t>(a);
}

bool PrimeField::sqrt(Elem a, Elem& root) const {
    if (a == 0 || p_ == 2) {
        root = a;
        return true;
    }
    if (pow(a, (p_ - 1) / 2) != 1) return false;
    // Tonelli-Shanks.
    std::uint64_t q = p_ - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    Elem z = 2;
    while (pow(z, (p_ - 1) / 2) != p_ - 1) ++z;
    Elem m = static_cast<Elem>(s), c = pow(z, q), t = pow(a, q), r = pow(a, (q + 1) / 2);
    while (t != 1) {
        Elem i = 0, tt = t;
        while (tt != 1) {
            tt = mul(tt, tt);
            ++i;
        }
        Elem b = c;
        for (Elem j = 0; j + i + 1 < m; ++j) b = mul(b, b);
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        r = mul(r, b);
    }
    root = std::min(r, p_ - r);
    return true;
}

BigInt crt_symmetric(const std::vector<std::uint64_t>& residues, const std::vector<std::uint64_t>& moduli) {
    BigInt x = 0, m = 1;
    for (std::size_t i = 0; i < residues.size(); ++i) {
        BigInt mi(std::to_string(moduli[i]));
        BigInt ri(std::to_string(residues[i]));
        // x' = x + m * ((ri - x) * m^{-1} mod mi)
        BigInt minv;
        mpz_invert(minv.get_mpz_t(), BigInt(m % mi).get_mpz_t(), mi.get_mpz_t());
        BigInt k = ((ri - x) % mi) * minv % mi;
        if (k < 0) k += mi;
        x += m * k;
        m *= mi;
    }
    if (2 * x > m) x -= m;
    return x;
}

}  // namespace coh
