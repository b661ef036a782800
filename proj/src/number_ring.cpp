#include "coh/number_ring.hpp"

#include "coh/expr_parser.hpp"

#include <functional>
#include <sstream>

namespace coh {

namespace {

using Vec = std::vector<Rational>;

bool vec_zero(const Vec& a) {
    for (const auto& x : a)
        if (x != 0) return false;
    return true;
}

bool range_zero(const Rational* a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] != 0) return false;
    return true;
}

void vec_add_to(Vec& a, const Vec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

void vec_sub_from(Vec& a, const Vec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
}

// Polynomials in one variable with coefficients in a lower level.
struct LowerPolys {
    std::size_t dim;  // size of a coefficient vector
    std::function<Vec(const Vec&, const Vec&)> mul;
    std::function<Vec(const Vec&)> inv;

    using P = std::vector<Vec>;
    void trim(P& a) const {
        while (!a.empty() && vec_zero(a.back())) a.pop_back();
    }
    P times(const P& a, const P& b) const {
        if (a.empty() || b.empty()) return {};
        P r(a.size() + b.size() - 1, Vec(dim));
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (vec_zero(a[i])) continue;
            for (std::size_t j = 0; j < b.size(); ++j) {
                if (vec_zero(b[j])) continue;
                vec_add_to(r[i + j], mul(a[i], b[j]));
            }
        }
        trim(r);
        return r;
    }
    P minus(P a, const P& b) const {
        if (a.size() < b.size()) a.resize(b.size(), Vec(dim));
        for (std::size_t i = 0; i < b.size(); ++i) vec_sub_from(a[i], b[i]);
        trim(a);
        return a;
    }
    // a = q*b + r with deg r < deg b.
    void divmod(P a, const P& b, P& q, P& r) const {
        trim(a);
        const std::size_t db = b.size() - 1;
        Vec li = inv(b.back());
        q.assign(a.size() > db ? a.size() - db : 0, Vec(dim));
        while (a.size() > db) {
            std::size_t shift = a.size() - 1 - db;
            Vec c = mul(a.back(), li);
            q[shift] = c;
            for (std::size_t i = 0; i <= db; ++i) vec_sub_from(a[shift + i], mul(c, b[i]));
            a.pop_back();
            trim(a);
        }
        trim(q);
        r = std::move(a);
    }
};

struct RingAlg {
    using Elem = RingElem;
    const NumberRing& R;
    Elem constant(const Rational& q) const { return R.constant(q); }
    Elem variable(const std::string& name) const {
        int k = R.var_index(name);
        if (k < 0) throw std::invalid_argument("unknown variable '" + name + "'");
        return R.gen(static_cast<std::size_t>(k));
    }
    Elem add(const Elem& a, const Elem& b) const { return R.add(a, b); }
    Elem sub(const Elem& a, const Elem& b) const { return R.sub(a, b); }
    Elem mul(const Elem& a, const Elem& b) const { return R.mul(a, b); }
    Elem div(const Elem& a, const Elem& b) const { return R.div(a, b); }
    Elem neg(const Elem& a) const { return R.neg(a); }
    Elem pow(const Elem& a, long e) const { return R.pow(a, e); }
};

// Polynomials in a new variable over the current tower, for parsing level polynomials.
struct NewLevelAlg {
    using Elem = std::vector<RingElem>;
    const NumberRing& R;
    std::string var;
    void trim(Elem& a) const {
        while (!a.empty() && R.is_zero(a.back())) a.pop_back();
    }
    Elem constant(const Rational& q) const {
        Elem e{R.constant(q)};
        trim(e);
        return e;
    }
    Elem variable(const std::string& name) const {
        if (name == var) return {R.zero(), R.one()};
        int k = R.var_index(name);
        if (k < 0) throw std::invalid_argument("unknown variable '" + name + "'");
        return {R.gen(static_cast<std::size_t>(k))};
    }
    Elem add(Elem a, const Elem& b) const {
        if (a.size() < b.size()) a.resize(b.size(), R.zero());
        for (std::size_t i = 0; i < b.size(); ++i) a[i] = R.add(a[i], b[i]);
        trim(a);
        return a;
    }
    Elem neg(Elem a) const {
        for (auto& x : a) x = R.neg(x);
        return a;
    }
    Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }
    Elem mul(const Elem& a, const Elem& b) const {
        if (a.empty() || b.empty()) return {};
        Elem r(a.size() + b.size() - 1, R.zero());
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = R.add(r[i + j], R.mul(a[i], b[j]));
        trim(r);
        return r;
    }
    Elem div(const Elem& a, const Elem& b) const {
        if (b.size() != 1) throw std::invalid_argument("level polynomial: division by a non-constant");
        RingElem ib = R.inv(b[0]);
        Elem r = a;
        for (auto& x : r) x = R.mul(x, ib);
        return r;
    }
    Elem pow(const Elem& a, long e) const {
        if (e < 0) throw std::invalid_argument("level polynomial: negative exponent");
        Elem r{R.one()};
        for (long i = 0; i < e; ++i) r = mul(r, a);
        return r;
    }
};

}  // namespace

int NumberRing::var_index(const std::string& name) const {
    for (std::size_t k = 0; k < levels_.size(); ++k)
        if (levels_[k].var == name) return static_cast<int>(k);
    return -1;
}

void NumberRing::add_level(const std::string& var, const std::string& poly) {
    if (!tau_.empty()) throw std::logic_error("add_level after set_involution");
    if (var_index(var) >= 0) throw std::invalid_argument("duplicate level variable " + var);
    NewLevelAlg alg{*this, var};
    auto f = ExprParser<NewLevelAlg>(alg, poly).parse();
    if (f.size() < 2) throw std::invalid_argument("level polynomial must have degree >= 1: " + poly);
    if (!eq(f.back(), one())) throw std::invalid_argument("level polynomial must be monic: " + poly);
    Level L;
    L.var = var;
    L.degree = static_cast<int>(f.size() - 1);
    for (int r = 0; r < L.degree; ++r) L.coeffs.push_back(f[static_cast<std::size_t>(r)].c);
    levels_.push_back(std::move(L));
    dims_.push_back(dims_.back() * static_cast<std::size_t>(levels_.back().degree));
    for (auto& d : denominators_) d.c.resize(dim());
}

void NumberRing::add_level(const std::string& var, const std::vector<RingElem>& coeffs) {
    if (!tau_.empty()) throw std::logic_error("add_level after set_involution");
    if (var_index(var) >= 0) throw std::invalid_argument("duplicate level variable " + var);
    if (coeffs.empty()) throw std::invalid_argument("level polynomial must have degree >= 1");
    Level L;
    L.var = var;
    L.degree = static_cast<int>(coeffs.size());
    for (const auto& c : coeffs) L.coeffs.push_back(embed(c).c);
    levels_.push_back(std::move(L));
    dims_.push_back(dims_.back() * static_cast<std::size_t>(levels_.back().degree));
    for (auto& d : denominators_) d.c.resize(dim());
}

RingElem NumberRing::embed(const RingElem& a) const {
    if (a.c.size() > dim()) throw std::invalid_argument("embed: element from a larger ring");
    RingElem r = a;
    r.c.resize(dim());
    return r;
}

RingElem NumberRing::zero() const { return RingElem{Vec(dim())}; }

RingElem NumberRing::one() const { return constant(1); }

RingElem NumberRing::constant(const Rational& q) const {
    RingElem e = zero();
    e.c[0] = q;
    return e;
}

RingElem NumberRing::gen(std::size_t k) const {
    RingElem e = zero();
    if (levels_[k].degree == 1) {
        // Linear level: x = -c_0.
        const auto& c0 = levels_[k].coeffs[0];
        for (std::size_t i = 0; i < c0.size(); ++i) e.c[i] = -c0[i];
    } else {
        e.c[dims_[k]] = 1;
    }
    return e;
}

RingElem NumberRing::parse(const std::string& expr) const {
    RingAlg alg{*this};
    return ExprParser<RingAlg>(alg, expr).parse();
}

std::string NumberRing::format(const RingElem& a) const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t idx = 0; idx < a.c.size(); ++idx) {
        const Rational& q = a.c[idx];
        if (q == 0) continue;
        std::string mono;
        std::size_t rest = idx;
        for (std::size_t k = 0; k < levels_.size(); ++k) {
            std::size_t e = rest % static_cast<std::size_t>(levels_[k].degree);
            rest /= static_cast<std::size_t>(levels_[k].degree);
            if (e == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += levels_[k].var;
            if (e > 1) mono += "^" + std::to_string(e);
        }
        Rational mag = q < 0 ? Rational(-q) : q;
        if (first) {
            if (q < 0) os << "-";
        } else {
            os << (q < 0 ? " - " : " + ");
        }
        first = false;
        if (mono.empty()) {
            os << mag.get_str();
        } else if (mag == 1) {
            os << mono;
        } else {
            os << mag.get_str() << "*" << mono;
        }
    }
    if (first) return "0";
    return os.str();
}

RingElem NumberRing::add(const RingElem& a, const RingElem& b) const {
    RingElem r = a;
    vec_add_to(r.c, b.c);
    return r;
}

RingElem NumberRing::sub(const RingElem& a, const RingElem& b) const {
    RingElem r = a;
    vec_sub_from(r.c, b.c);
    return r;
}

RingElem NumberRing::neg(const RingElem& a) const {
    RingElem r = a;
    for (auto& x : r.c) x = -x;
    return r;
}

NumberRing::Vec NumberRing::mul_at(const Vec& a, const Vec& b, std::size_t k) const {
    if (k == 0) return Vec{a[0] * b[0]};
    const std::size_t n = static_cast<std::size_t>(levels_[k - 1].degree);
    const std::size_t s = dims_[k - 1];
    std::vector<Vec> prod(2 * n - 1, Vec(s));
    std::vector<bool> az(n), bz(n);
    for (std::size_t i = 0; i < n; ++i) {
        az[i] = range_zero(a.data() + i * s, s);
        bz[i] = range_zero(b.data() + i * s, s);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (az[i]) continue;
        Vec ai(a.begin() + static_cast<long>(i * s), a.begin() + static_cast<long>((i + 1) * s));
        for (std::size_t j = 0; j < n; ++j) {
            if (bz[j]) continue;
            Vec bj(b.begin() + static_cast<long>(j * s), b.begin() + static_cast<long>((j + 1) * s));
            vec_add_to(prod[i + j], mul_at(ai, bj, k - 1));
        }
    }
    const auto& cf = levels_[k - 1].coeffs;
    for (std::size_t l = 2 * n - 2; l >= n; --l) {
        if (vec_zero(prod[l])) continue;
        for (std::size_t r = 0; r < n; ++r) {
            if (vec_zero(cf[r])) continue;
            vec_sub_from(prod[l - n + r], mul_at(prod[l], cf[r], k - 1));
        }
    }
    Vec out(n * s);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < s; ++t) out[i * s + t] = prod[i][t];
    return out;
}

RingElem NumberRing::mul(const RingElem& a, const RingElem& b) const {
    return RingElem{mul_at(a.c, b.c, levels_.size())};
}

NumberRing::Vec NumberRing::inv_at(const Vec& a, std::size_t k) const {
    if (k == 0) {
        if (a[0] == 0) throw DivisionByZero("inverse of zero");
        return Vec{1 / a[0]};
    }
    const std::size_t n = static_cast<std::size_t>(levels_[k - 1].degree);
    const std::size_t s = dims_[k - 1];
    LowerPolys P{s, [this, k](const Vec& x, const Vec& y) { return mul_at(x, y, k - 1); },
                 [this, k](const Vec& x) { return inv_at(x, k - 1); }};
    LowerPolys::P f(levels_[k - 1].coeffs.begin(), levels_[k - 1].coeffs.end());
    Vec one_low(s);
    one_low[0] = 1;
    f.push_back(one_low);
    LowerPolys::P g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = Vec(a.begin() + static_cast<long>(i * s), a.begin() + static_cast<long>((i + 1) * s));
    P.trim(g);
    if (g.empty()) throw DivisionByZero("inverse of zero");
    LowerPolys::P r0 = f, r1 = g, t0, t1{one_low};
    while (r1.size() > 1) {
        LowerPolys::P q, r;
        P.divmod(r0, r1, q, r);
        if (r.empty()) throw DivisionByZero("element is a zero divisor in the tower");
        LowerPolys::P t2 = P.minus(t0, P.times(q, t1));
        r0 = std::move(r1);
        r1 = std::move(r);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    Vec cinv = inv_at(r1[0], k - 1);
    for (auto& coeff : t1) coeff = mul_at(coeff, cinv, k - 1);
    LowerPolys::P q, rem;
    P.divmod(t1, f, q, rem);
    Vec out(n * s);
    for (std::size_t i = 0; i < rem.size(); ++i)
        for (std::size_t t = 0; t < s; ++t) out[i * s + t] = rem[i][t];
    return out;
}

RingElem NumberRing::inv(const RingElem& a) const { return RingElem{inv_at(a.c, levels_.size())}; }

RingElem NumberRing::pow(const RingElem& a, long e) const {
    RingElem base = e < 0 ? inv(a) : a;
    unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    RingElem r = one();
    while (k) {
        if (k & 1) r = mul(r, base);
        k >>= 1;
        if (k) base = mul(base, base);
    }
    return r;
}

bool NumberRing::is_zero(const RingElem& a) const { return vec_zero(a.c); }

bool NumberRing::is_rational(const RingElem& a) const {
    for (std::size_t i = 1; i < a.c.size(); ++i)
        if (a.c[i] != 0) return false;
    return true;
}

RingElem NumberRing::conj(const RingElem& a) const {
    std::function<RingElem(const Rational*, std::size_t)> rec = [&](const Rational* p, std::size_t k) -> RingElem {
        if (k == 0) return constant(p[0]);
        const std::size_t n = static_cast<std::size_t>(levels_[k - 1].degree);
        const std::size_t s = dims_[k - 1];
        RingElem acc = zero();
        for (std::size_t j = n; j-- > 0;) {
            if (!is_zero(acc)) acc = mul(acc, tau_[k - 1]);
            if (!range_zero(p + j * s, s)) acc = add(acc, rec(p + j * s, k - 1));
        }
        return acc;
    };
    if (tau_.size() != levels_.size()) throw std::logic_error("involution not set");
    return rec(a.c.data(), levels_.size());
}

void NumberRing::set_involution(const std::vector<std::string>& images) {
    std::vector<RingElem> t;
    for (const auto& s : images) t.push_back(parse(s));
    set_involution(t);
}

void NumberRing::set_involution(const std::vector<RingElem>& images) {
    if (images.size() != levels_.size()) throw std::invalid_argument("involution needs one image per level");
    tau_ = images;
    try {
        validate_involution();
    } catch (...) {
        tau_.clear();
        throw;
    }
}

void NumberRing::validate_involution() const {
    for (std::size_t k = 0; k < levels_.size(); ++k) {
        // Homomorphism: the level polynomial, conjugated, vanishes at tau(x_k).
        const auto& L = levels_[k];
        RingElem val = pow(tau_[k], L.degree);
        for (int r = 0; r < L.degree; ++r) {
            RingElem c = zero();
            for (std::size_t i = 0; i < L.coeffs[static_cast<std::size_t>(r)].size(); ++i)
                c.c[i] = L.coeffs[static_cast<std::size_t>(r)][i];
            val = add(val, mul(conj(c), pow(tau_[k], r)));
        }
        if (!is_zero(val)) throw std::invalid_argument("involution does not respect level " + L.var);
        if (!eq(conj(tau_[k]), gen(k))) throw std::invalid_argument("involution is not of order 2 on " + L.var);
    }
}

void NumberRing::add_denominator(const std::string& expr) { add_denominator(parse(expr)); }

void NumberRing::add_denominator(const RingElem& e) {
    (void)inv(e);  // must be invertible in the tower
    denominators_.push_back(e);
}

std::uint64_t NumberRing::reduce_prefix(const PrimeField& F, const std::vector<std::uint64_t>& roots, const Rational* a,
                                        std::size_t k) const {
    if (k == 0) return a[0] == 0 ? 0 : F.from_rational(a[0]);
    const std::size_t n = static_cast<std::size_t>(levels_[k - 1].degree);
    const std::size_t s = dims_[k - 1];
    std::uint64_t v = 0;
    for (std::size_t j = n; j-- > 0;) v = F.add(F.mul(v, roots[k - 1]), reduce_prefix(F, roots, a + j * s, k - 1));
    return v;
}

std::uint64_t NumberRing::reduce_at(const PrimeField& F, const std::vector<std::uint64_t>& roots,
                                    const RingElem& a) const {
    return reduce_prefix(F, roots, a.c.data(), levels_.size());
}

std::uint64_t NumberRing::reduce(const ReductionMap& r, const RingElem& a, bool conjugate) const {
    return reduce_at(PrimeField(r.p), conjugate ? r.conj_roots : r.roots, a);
}

std::vector<ReductionMap> NumberRing::reduction_maps(std::uint64_t p) const {
    if (tau_.size() != levels_.size()) throw std::logic_error("involution not set");
    PrimeField F(p);
    std::vector<ReductionMap> out;
    auto level_value = [&](const std::vector<std::uint64_t>& roots, std::size_t k, std::uint64_t x) {
        const auto& L = levels_[k];
        std::uint64_t v = 1;
        for (int r = L.degree; r-- > 0;)
            v = F.add(F.mul(v, x), reduce_prefix(F, roots, L.coeffs[static_cast<std::size_t>(r)].data(), k));
        return v;
    };
    try {
        std::vector<std::uint64_t> roots;
        std::function<void(std::size_t)> dfs = [&](std::size_t k) {
            if (k == levels_.size()) {
                std::vector<std::uint64_t> cr;
                for (const auto& t : tau_) cr.push_back(reduce_at(F, roots, t));
                for (std::size_t j = 0; j < levels_.size(); ++j) {
                    std::vector<std::uint64_t> prefix(cr.begin(), cr.begin() + static_cast<long>(j));
                    if (level_value(prefix, j, cr[j]) != 0) return;
                }
                for (const auto& d : denominators_)
                    if (reduce_at(F, roots, d) == 0 || reduce_at(F, cr, d) == 0) return;
                out.push_back(ReductionMap{p, roots, cr});
                return;
            }
            const auto& L = levels_[k];
            std::vector<std::uint64_t> f(static_cast<std::size_t>(L.degree) + 1);
            for (int r = 0; r < L.degree; ++r)
                f[static_cast<std::size_t>(r)] = reduce_prefix(F, roots, L.coeffs[static_cast<std::size_t>(r)].data(), k);
            f.back() = 1;
            for (auto x : roots_mod_p(F, f)) {
                roots.push_back(x);
                dfs(k + 1);
                roots.pop_back();
            }
        };
        dfs(0);
    } catch (const DivisionByZero&) {
        return {};
    }
    return out;
}

NumberRing ring_define(const std::vector<std::pair<std::string, std::string>>& levels,
                       const std::vector<std::string>& involution, const std::vector<std::string>& denominators) {
    NumberRing R;
    for (const auto& [v, f] : levels) R.add_level(v, f);
    R.set_involution(involution);
    for (const auto& d : denominators) R.add_denominator(d);
    return R;
}

}  // namespace coh
