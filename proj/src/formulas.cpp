#include "coh/formulas.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace coh {

namespace {

bool squarefree(long n) {
    n = std::labs(n);
    for (long p = 2; p * p <= n; ++p)
        if (n % (p * p) == 0) return false;
    return true;
}

std::vector<std::pair<long, int>> factor(long n) {
    std::vector<std::pair<long, int>> out;
    n = std::labs(n);
    for (long p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) n /= p, ++e;
        if (e) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

Rational frac(long a, long b) {
    Rational q(a, b);
    q.canonicalize();
    return q;
}

long ipow(long b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

Rational pow2(long e) {
    Rational r = 1;
    if (e >= 0)
        r = Rational(BigInt(1) << static_cast<mp_bitcnt_t>(e));
    else
        r = Rational(1, 1) / Rational(BigInt(1) << static_cast<mp_bitcnt_t>(-e));
    return r;
}

long to_long_checked(const Rational& q, const char* what) {
    if (q.get_den() != 1 || q < 0)
        throw std::domain_error(std::string(what) + " is not a non-negative integer: " + to_string(q));
    return q.get_num().get_si();
}

// x < sqrt(D) for integer x and non-square D > 0.
bool below_sqrt(long x, long D) { return x < 0 || x * x < D; }

long isqrt(long n) {
    long s = static_cast<long>(std::sqrt(static_cast<double>(n)));
    while (s * s > n) --s;
    while ((s + 1) * (s + 1) <= n) ++s;
    return s;
}

long floor_mod(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

// Genus character of L evaluated on a positive integer that is a norm from K:
// at primes dividing d_L the complementary character d_K/d_L is used.
int genus_character(const QuadField& K, const QuadField& L, long norm) {
    const long comp = K.disc / L.disc;
    int v = 1;
    for (auto [p, e] : factor(norm)) {
        int c = (L.disc % p != 0) ? kronecker(L.disc, p) : kronecker(comp, p);
        if (e % 2) v *= c;
    }
    return v;
}

}  // namespace

bool is_fundamental_discriminant(long D) {
    if (D == 0 || D == 1) return false;
    if (floor_mod(D, 4) == 1) return squarefree(D);
    if (floor_mod(D, 4) != 0) return false;
    long m = D / 4;
    long r = floor_mod(m, 4);
    return (r == 2 || r == 3) && squarefree(m);
}

QuadField quad_field(long d) {
    if (d == 0 || d == 1 || !squarefree(d)) throw std::invalid_argument("d must be squarefree and != 0, 1");
    QuadField K;
    K.d = d;
    K.disc = floor_mod(d, 4) == 1 ? d : 4 * d;
    for (auto [p, e] : factor(K.disc)) K.ramified.emplace_back(p, e);
    return K;
}

QuadField quad_field_from_disc(long D) {
    if (!is_fundamental_discriminant(D)) throw std::invalid_argument("not a fundamental discriminant: " + std::to_string(D));
    return quad_field(D % 4 == 0 ? D / 4 : D);
}

int kronecker(long D, long n) { return mpz_kronecker_si(BigInt(D).get_mpz_t(), n); }

Rational d_of(long n, long r) {
    const long m = floor_mod(n, 2 * r);
    if (m % 2 == 0) return 1 - frac(m + 1, r);
    if (m < r) return -frac(m + 1, r);
    return 2 - frac(m + 1, r);
}

long fuchsian_h1(const FuchsianData& fd, long n) {
    if (n <= 0) throw std::invalid_argument("fuchsian_h1 needs n > 0");
    Rational chi = 2 * fd.genus - 2 + fd.cusps;
    Rational corr = 0;
    for (long r : fd.orders) {
        chi += 1 - frac(1, r);
        corr += d_of(n, r);
    }
    return to_long_checked(chi * (n + 1) - corr, "Fuchsian dimension");
}

Rational eps(long n) {
    if (n % 2) return 0;
    return frac((n / 2) % 2 == 0 ? 1 : -1, 4);
}

Rational mu(long n) {
    switch (floor_mod(n, 3)) {
        case 1: return 0;
        case 2: return frac(-1, 3);
        default: return frac(1, 3);
    }
}

int nu(const QuadField& L, long n) {
    if (L.d == -3) return floor_mod(n, 3) == 2 ? 1 : 0;
    if (L.d == -1) return n % 2 ? 1 : 0;
    return 1;
}

long class_number(long D) {
    if (D >= 0 || !is_fundamental_discriminant(D)) throw std::invalid_argument("class_number needs a negative fundamental discriminant");
    long h = 0;
    const long N = -D;
    for (long a = 1; 3 * a * a <= N; ++a)
        for (long b = -a + 1; b <= a; ++b) {
            if (floor_mod(b * b + N, 4 * a) != 0) continue;
            long c = (b * b + N) / (4 * a);
            if (c < a) continue;
            if (c == a && b < 0) continue;
            if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) continue;
            ++h;
        }
    return h;
}

long narrow_class_number(long D) {
    if (D <= 0 || !is_fundamental_discriminant(D)) throw std::invalid_argument("narrow_class_number needs a positive fundamental discriminant");
    const long s = isqrt(D);
    using Form = std::array<long, 3>;
    std::set<Form> reduced;
    for (long b = 1; b <= s; ++b) {
        if (floor_mod(b - D, 2)) continue;
        const long num = D - b * b;  // = -4ac > 0
        for (long a = 1; 2 * a <= s + b + 1; ++a) {
            // sqrt(D) - b < 2a < sqrt(D) + b
            if (!below_sqrt(2 * a - b, D) || below_sqrt(2 * a + b, D)) continue;
            if (num % (4 * a)) continue;
            const long c = num / (4 * a);
            for (long sg : {1L, -1L}) {
                Form f{sg * a, b, -sg * c};
                if (std::gcd(std::gcd(a, b), c) == 1) reduced.insert(f);
            }
        }
    }
    auto rho = [&](const Form& f) {
        const long c = f[2], m = 2 * std::labs(c);
        long b = s - floor_mod(s + f[1], m);  // largest b <= s with b = -f[1] (mod m)
        return Form{c, b, (b * b - D) / (4 * c)};
    };
    long cycles = 0;
    std::set<Form> seen;
    for (const auto& f : reduced) {
        if (seen.count(f)) continue;
        ++cycles;
        Form g = f;
        do {
            seen.insert(g);
            g = rho(g);
            if (!reduced.count(g)) throw std::logic_error("reduction cycle left the reduced set");
        } while (g != f);
    }
    return cycles;
}

long genus_number(long D) { return 1L << (factor(D).size() - 1); }

std::vector<QuadField> lk_fields(const QuadField& K) {
    std::vector<QuadField> out;
    const long N = -K.disc;
    for (long a = 3; a < N; ++a) {
        if (N % a) continue;
        const long dl = -a;
        if (!is_fundamental_discriminant(dl)) continue;
        if (std::gcd(a, N / a) != 1) continue;
        // d_K = d_L d' with both factors discriminants, else LK/K ramifies.
        if (!is_fundamental_discriminant(N / a)) continue;
        out.push_back(quad_field_from_disc(dl));
    }
    return out;
}

BcConstants bc_constants(const QuadField& K) {
    const long R = static_cast<long>(K.ramified.size());
    bool all1mod4 = true, all13mod8 = true, odd13mod8 = true, all1mod3 = true, others1mod3 = true, has2 = false,
         has3 = false;
    for (auto [p, e] : K.ramified) {
        const long pe = ipow(p, e);
        if (p == 2) has2 = true;
        if (p == 3) has3 = true;
        if (p != 2 && p % 4 != 1) all1mod4 = false;
        const bool m8 = p % 8 == 1 || p % 8 == 3;
        if (!m8) all13mod8 = false;
        if (p != 2 && !m8) odd13mod8 = false;
        if (pe % 3 != 1) all1mod3 = false;
        if (p != 3 && pe % 3 != 1) others1mod3 = false;
    }
    BcConstants c;
    c.c2 = all1mod4 ? pow2(R - 4) : Rational(0);
    c.c4 = all13mod8 ? pow2(R) : (has2 && odd13mod8) ? pow2(R - 1) : Rational(0);
    c.c3 = all1mod3 ? pow2(R - 1) : (has3 && others1mod3) ? pow2(R - 2) : Rational(0);
    return c;
}

Rational bc_dim_rational(const QuadField& K, long n) {
    if (!K.imaginary()) throw std::invalid_argument("bc_dim needs an imaginary quadratic field");
    if (n < 0) throw std::invalid_argument("weight must be non-negative");
    const long R = static_cast<long>(K.ramified.size());
    const BcConstants c = bc_constants(K);
    Rational prod = 1;
    for (auto [p, e] : K.ramified) prod *= ipow(p, e) + 1;
    const Rational sign = n % 2 ? 1 : -1;  // (-1)^(n+1)
    Rational v = (prod / 24 + c.c2 * sign) * (n + 1);
    v -= frac(nu(K, n) * class_number(K.disc), 2);
    v -= pow2(R - 2);
    v += c.c4 * eps(n + 2) + c.c3 * mu(n + 2);
    if (n == 0) v += 1;
    return v;
}

long bc_dim(const QuadField& K, long n) { return to_long_checked(bc_dim_rational(K, n), "base change dimension"); }

long bc_dim_ideal(const QuadField& K, long norm_a, long n) {
    if (norm_a <= 0) throw std::invalid_argument("ideal norm must be positive");
    Rational v = bc_dim_rational(K, n);
    const long R = static_cast<long>(K.ramified.size());
    for (const auto& L : lk_fields(K)) {
        if (genus_character(K, L, norm_a) != -1) continue;
        v -= nu(L, n) * pow2(R - static_cast<long>(L.ramified.size()) - 1) * class_number(L.disc);
    }
    return to_long_checked(v, "base change dimension");
}

long cusp_codim(const QuadField& K, long n) { return nu(K, n) * class_number(K.disc); }

std::pair<bool, std::vector<CmWitness>> cm_extra(const QuadField& K) {
    std::vector<CmWitness> w;
    for (const auto& L : lk_fields(K)) {
        const long D = K.disc / L.disc;
        const long hp = narrow_class_number(D), gp = genus_number(D);
        if (hp > gp) w.push_back({D, hp, gp});
    }
    return {!w.empty(), w};
}

long cm_contribution(const QuadField& K, long norm_a, long n) {
    long total = 0;
    for (const auto& L : lk_fields(K)) {
        if (genus_character(K, L, norm_a) != 1) continue;
        total += nu(L, n) * narrow_class_number(K.disc / L.disc) * class_number(L.disc);
    }
    return total;
}

}  // namespace coh
