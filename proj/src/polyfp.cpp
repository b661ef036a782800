#include "coh/arith.hpp"

#include <algorithm>
#include <random>

namespace coh {

namespace {

using Poly = std::vector<std::uint64_t>;

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(const PrimeField& F, Poly a, const Poly& m) {
    trim(a);
    const std::size_t dm = m.size() - 1;
    const auto lead_inv = F.inv(m.back());
    while (a.size() > dm) {
        auto c = F.mul(a.back(), lead_inv);
        std::size_t shift = a.size() - 1 - dm;
        for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = F.sub(a[shift + i], F.mul(c, m[i]));
        trim(a);
    }
    return a;
}

Poly poly_mulmod(const PrimeField& F, const Poly& a, const Poly& b, const Poly& m) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    return poly_mod(F, r, m);
}

Poly poly_powmod(const PrimeField& F, Poly base, std::uint64_t e, const Poly& m) {
    Poly r{1};
    base = poly_mod(F, base, m);
    while (e) {
        if (e & 1) r = poly_mulmod(F, r, base, m);
        base = poly_mulmod(F, base, base, m);
        e >>= 1;
    }
    return r;
}

Poly poly_gcd(const PrimeField& F, Poly a, Poly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = poly_mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        auto li = F.inv(a.back());
        for (auto& c : a) c = F.mul(c, li);
    }
    return a;
}

Poly poly_divexact(const PrimeField& F, Poly a, const Poly& b) {
    const std::size_t db = b.size() - 1;
    Poly q(a.size() - db, 0);
    const auto li = F.inv(b.back());
    for (std::size_t k = q.size(); k-- > 0;) {
        auto c = F.mul(a[k + db], li);
        q[k] = c;
        for (std::size_t i = 0; i <= db; ++i) a[k + i] = F.sub(a[k + i], F.mul(c, b[i]));
    }
    return q;
}

// Splits a monic squarefree product of distinct linear factors.
void split_linear(const PrimeField& F, const Poly& g, std::mt19937_64& rng, std::vector<std::uint64_t>& out) {
    if (g.size() <= 1) return;
    if (g.size() == 2) {
        out.push_back(F.neg(F.mul(g[0], F.inv(g[1]))));
        return;
    }
    const std::uint64_t p = F.p();
    for (;;) {
        std::uint64_t a = rng() % p;
        Poly h = poly_powmod(F, Poly{a, 1}, (p - 1) / 2, g);
        if (h.empty()) continue;
        h[0] = F.sub(h[0], 1);
        Poly d = poly_gcd(F, g, h);
        if (d.size() > 1 && d.size() < g.size()) {
            split_linear(F, d, rng, out);
            split_linear(F, poly_divexact(F, g, d), rng, out);
            return;
        }
    }
}

}  // namespace

bool irreducible_mod_p(const PrimeField& F, std::vector<std::uint64_t> f) {
    trim(f);
    if (f.size() < 2) return false;
    const std::size_t n = f.size() - 1;
    if (n == 1) return true;
    auto li = F.inv(f.back());
    for (auto& c : f) c = F.mul(c, li);
    const Poly x{0, 1};
    // x^(p^k) mod f for k = 1..n
    std::vector<Poly> frob(n + 1);
    frob[0] = x;
    for (std::size_t k = 1; k <= n; ++k) frob[k] = poly_powmod(F, frob[k - 1], F.p(), f);
    auto minus_x = [&](Poly a) {
        a.resize(std::max<std::size_t>(a.size(), 2), 0);
        a[1] = F.sub(a[1], 1);
        trim(a);
        return a;
    };
    if (!minus_x(frob[n]).empty()) return false;
    for (std::size_t q = 2; q <= n; ++q) {
        if (n % q != 0) continue;
        bool prime = true;
        for (std::size_t d = 2; d * d <= q; ++d)
            if (q % d == 0) prime = false;
        if (!prime) continue;
        if (poly_gcd(F, f, minus_x(frob[n / q])).size() != 1) return false;
    }
    return true;
}

std::vector<std::uint64_t> roots_mod_p(const PrimeField& F, std::vector<std::uint64_t> f) {
    trim(f);
    std::vector<std::uint64_t> out;
    if (f.empty()) throw std::invalid_argument("roots_mod_p: zero polynomial");
    if (f.size() == 1) return out;
    const std::uint64_t p = F.p();
    if (p <= 4096 || p <= 64 * f.size()) {
        for (std::uint64_t x = 0; x < p; ++x) {
            std::uint64_t v = 0;
            for (std::size_t i = f.size(); i-- > 0;) v = F.add(F.mul(v, x), f[i]);
            if (v == 0) out.push_back(x);
        }
        return out;
    }
    Poly monic = f;
    auto li = F.inv(monic.back());
    for (auto& c : monic) c = F.mul(c, li);
    Poly xp = poly_powmod(F, Poly{0, 1}, p, monic);
    xp.resize(std::max<std::size_t>(xp.size(), 2), 0);
    xp[1] = F.sub(xp[1], 1);
    Poly g = poly_gcd(F, monic, xp);
    std::mt19937_64 rng(0x5eed ^ p);
    split_linear(F, g, rng, out);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace coh
