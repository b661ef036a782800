#include "coh/groups.hpp"

#include <sstream>

namespace coh {

namespace {

struct BianchiData {
    long d;
    bool ideal;
    const char* gens;      // extra generator definitions, one per line
    const char* relators;  // one per line
};

// A = [1,1;0,1], B = [0,1;-1,0], U = [1,w;0,1] are added for the full
// groups; the ideal variants list all their generators explicitly.
const BianchiData kBianchi[] = {
    {-1, false, "",
     "B^2\n(AB)^3\n(BUBU^-1)^3\nAUA^-1U^-1\n(BU^2BU^-1)^2\n(AUBAU^-1B)^2\n"},
    {-2, false, "", "B^2\n(AB)^3\nAUA^-1U^-1\n(BU^-1BU)^2\n"},
    {-3, false, "",
     "B^2\n(AB)^3\nAUA^-1U^-1\n(UBA^2U^-2B)^2\n(UBAU^-1B)^3\nAUBAU^-1BA^-1UBA^-1UBAU^-1B\n"},
    {-7, false, "", "B^2\n(BA)^3\nAUA^-1U^-1\n(BAU^-1BU)^2\n"},
    {-11, false, "", "B^2\n(BA)^3\nAUA^-1U^-1\n(BAU^-1BU)^3\n"},
    {-19, false, "C = [1-w, 2; 2, w]\n",
     "B^2\n(AB)^3\nAUA^-1U^-1\nC^3\n(CA^-1)^3\n(BC)^2\n(BA^-1UCU^-1)^2\n"},
    {-5, false, "C = [-4-w, -2w; 2w, -4+w]\nD = [-w, 2; 2, w]\n",
     "B^2\n(AB)^3\nAUA^-1U^-1\nD^2\n(BD)^2\n(BUDU^-1)^2\nAC^-1A^-1BCB\nAC^-1A^-1UDU^-1CD\n"},
    {-5, true, "A = [1, 1; 0, 1]\nV = [1, (1+w)/2; 0, 1]\nC = [1, 0; 2, 1]\nD = [1, 0; 1-w, 1]\n",
     "AVA^-1V^-1\nCDC^-1D^-1\n(AC^-1)^2\n(DV^-1)^3\n(CD^-1VA^-1)^3\n"},
    {-6, false, "C = [5, -2w; 2w, 5]\nD = [-1-w, 2-w; 2, 1+w]\n",
     "B^2\n(AB)^3\nAUA^-1U^-1\nD^2\nBCBC^-1\n(BAUDU^-1)^3\nA^-1CAUDU^-1C^-1D^-1\n(BAD)^3\n"},
    {-6, true,
     "A = [1, 1; 0, 1]\nV = [1, w/2; 0, 1]\nC = [1, 0; 2, 1]\nD = [1, 0; -w, 1]\nE = [-2, -1-w/2; 2-w, 2]\n",
     "E^2\n(CA^-1)^2\n(DV^-1)^3\n(DEV^-1)^2\n(CEA^-1)^2\nCDC^-1D^-1\nAVA^-1V^-1\n(CDEV^-1A^-1)^2\n"},
    {-10, false,
     "C = [-w, 3; 3, w]\nD = [w-1, -4; 3, w+1]\nE = [w, 3; 3, -w]\nF = [11, 5w; 2w, -9]\n",
     "B^2\n(AB)^3\nAUA^-1U^-1\nC^2\nE^2\n(BC)^2\n(BE)^2\nC^-1AD^-1BEBAD\nU^-1E^-1UFCF^-1\n"
     "D^-1E^-1B^-1DU^-1DBCD^-1U\nD^-1B^-1ADC^-1U^-1EDA^-1BD^-1U\nU^-1DA^-1B^-1D^-1UFD^-1BADF^-1\n"},
    {-10, true,
     "A = [1, 1; 0, 1]\nV = [1, w/2; 0, 1]\nC = [1, 0; 2, 1]\nD = [1, 0; -w, 1]\nE = [-2, -w/2; -w, 2]\n"
     "F = [-3, -1-w/2; 2-w, 2]\n",
     "E^2\n(CA^-1)^2\n(FE)^2\n(DEV^-1)^2\n(DF^-1V^-1)^3\nCDC^-1D^-1\nAVA^-1V^-1\n(FC^-1EA)^2\nF^3\n"
     "(CF^-1A^-1)^3\n(CDF^-1A^-1V^-1)^3\n"},
    {-14, false,
     "C = [w, -5; 3, w]\nD = [4, 1+w; 1-w, 4]\nE = [-5+4w, -23; 4-w, 7+w]\nF = [13, 6w; -2w, 13]\n",
     "B^2\n(AB)^3\n(A^-1C^-1BDBAD^-1C)^2\nAUA^-1U^-1\n(A^-1CD^-1ABDBC^-1)^2\nD^-1CE^-1A^-3DC^-1A^3E\n"
     "CB^-1C^-1FC^-1BCF^-1\nC^-1DA^-1B^-1D^-1B^-1CAE^-1A^-2CBD^-1BA^-1DC^-1A^3E\n"
     "ACB^-1D^-1B^-1A^-1DC^-1AFA^-1C^-1BDBAD^-1CA^-1F^-1\n"},
    {-14, true,
     "A = [1, 1; 0, 1]\nU = [1, (1-w)/3; 0, 1]\nC = [1, 0; 3, 1]\nD = [1, 0; 1+w, 1]\nE = [-3-w, -4; 6, 3-w]\n"
     "F = [-3+w, -3; 2+2w, -3+w]\nG = [-2, (w-1)/3; 1+w, 2]\n",
     "G^2\nCDC^-1D^-1\nAUA^-1U^-1\n(CA^-1)^3\n(DGU^-1)^2\nF^-1AE^-1A^-1UFEU^-1\n(CGE^-1A^-1UGU^-1AEA^-1)^3\n"
     "(AEU^-1DGE^-1A^-1UGD^-1)^2\nDC^-1GU^-1AEGD^-1UE^-1F^-1CGE^-1A^-1UGU^-1AEA^-1F\n"},
};

std::string bianchi_text(const BianchiData& b) {
    std::ostringstream os;
    os << "name " << (b.ideal ? "PSL(2,a_" : "PSL(2,O_") << b.d << ")\n";
    os << "projective yes\n";
    long d = b.d;
    if (((d % 4) + 4) % 4 == 1) {
        os << "level w : w^2 - w + " << (1 - d) / 4 << "\n";
        os << "involution w -> 1 - w\n";
    } else {
        os << "level w : w^2 + " << -d << "\n";
        os << "involution w -> -w\n";
    }
    if (!b.ideal) {
        os << "generator A = [1, 1; 0, 1]\n";
        os << "generator B = [0, 1; -1, 0]\n";
        os << "generator U = [1, w; 0, 1]\n";
    }
    std::istringstream g(b.gens);
    std::string line;
    while (std::getline(g, line))
        if (!line.empty()) os << "generator " << line << "\n";
    std::istringstream r(b.relators);
    while (std::getline(r, line))
        if (!line.empty()) os << "relator " << line << "\n";
    return os.str();
}

using IPoly = std::vector<BigInt>;

IPoly ipoly_mul(const IPoly& a, const IPoly& b) {
    IPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

IPoly ipoly_sub(IPoly a, const IPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    while (a.size() > 1 && a.back() == 0) a.pop_back();
    return a;
}

// 2 T_k(x/2) and U_k(x/2) through the three-term recurrences.
IPoly cheb_t2(int k) {
    IPoly a{2}, b{0, 1};
    if (k == 0) return a;
    for (int i = 1; i < k; ++i) {
        IPoly c = ipoly_sub(ipoly_mul(IPoly{0, 1}, b), a);
        a = b;
        b = c;
    }
    return b;
}

IPoly cheb_u(int k) {
    if (k < 0) return IPoly{0};
    IPoly a{1}, b{0, 1};
    if (k == 0) return a;
    for (int i = 1; i < k; ++i) {
        IPoly c = ipoly_sub(ipoly_mul(IPoly{0, 1}, b), a);
        a = b;
        b = c;
    }
    return b;
}

RingElem eval_ipoly(const NumberRing& R, const IPoly& f, const RingElem& x) {
    RingElem acc = R.zero();
    for (std::size_t i = f.size(); i-- > 0;) acc = R.add(R.mul(acc, x), R.constant(Rational(f[i])));
    return acc;
}

MatrixGroupPresentation helling(int m) {
    if (m < 1) throw UnsupportedKey("helling: m must be >= 1");
    IPoly f = helling_f(m);
    const std::size_t n = f.size() - 1;
    // Certify irreducibility over Q by irreducibility modulo some prime.
    bool certified = false;
    for (std::uint64_t p : primes_up_to(20000)) {
        if (f.back() % BigInt(std::to_string(p)) == 0) continue;
        PrimeField F(p);
        std::vector<std::uint64_t> fp;
        for (const auto& c : f) fp.push_back(F.from_big(c));
        if (irreducible_mod_p(F, fp)) {
            certified = true;
            break;
        }
    }
    if (!certified) throw UnsupportedKey("helling: could not certify irreducibility of f_" + std::to_string(m));
    auto R = std::make_shared<NumberRing>();
    {
        std::vector<RingElem> cz;
        for (std::size_t i = 0; i < n; ++i) cz.push_back(R->constant(Rational(f[i])));
        R->add_level("z", cz);
    }
    RingElem z = R->gen(0);
    // Second level: the conjugate root w, a root of f(w)/(w - z) for odd m
    // and of f(w)/(w^2 - z^2) for even m (f is even in that case).
    std::vector<RingElem> quotient;  // ascending coefficients in w, monic
    if (m % 2 == 1) {
        // Synthetic division by (w - z).
        std::vector<RingElem> q(n);
        RingElem carry = R->zero();
        for (std::size_t k = n; k-- > 0;) {
            carry = R->add(R->mul(carry, z), R->constant(Rational(f[k + 1])));
            q[k] = carry;
        }
        quotient = q;
    } else {
        // f(w) = F(w^2); divide F(W) by (W - z^2), then substitute W = w^2.
        const std::size_t h = n / 2;
        RingElem z2 = R->mul(z, z);
        std::vector<RingElem> q(h);
        RingElem carry = R->zero();
        for (std::size_t k = h; k-- > 0;) {
            carry = R->add(R->mul(carry, z2), R->constant(Rational(f[2 * (k + 1)])));
            q[k] = carry;
        }
        quotient.assign(2 * h - 1, R->zero());
        for (std::size_t k = 0; k < h; ++k) quotient[2 * k] = q[k];
    }
    quotient.pop_back();  // drop the leading 1
    R->add_level("w", quotient);
    R->set_involution(std::vector<RingElem>{R->gen(1), R->gen(0)});
    RingElem zz = R->gen(0);
    RingElem den = eval_ipoly(*R, helling_ptilde(m + 2), zz);
    R->add_denominator(den);
    RingElem r = R->mul(eval_ipoly(*R, helling_ptilde(m), zz), R->inv(den));
    MatrixGroupPresentation p;
    p.name = "Theta_" + std::to_string(m);
    p.projective = true;
    p.ring = R;
    p.generators = {"A", "B", "C"};
    p.images = {{R->zero(), R->one(), R->constant(-1), zz},
                {R->one(), R->zero(), r, R->one()},
                {R->one(), r, R->zero(), R->one()}};
    p.relators = {parse_word("ACA^-1B", p.generators),
                  parse_word("CBC^-1B^-1A^-" + std::to_string(m), p.generators)};
    finalize_presentation(p);
    return p;
}

IPoly cyclotomic(long n) {
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    IPoly num(static_cast<std::size_t>(n) + 1, 0);
    num[0] = -1;
    num.back() = 1;
    for (long d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        IPoly den = cyclotomic(d);
        // exact division
        IPoly q(num.size() - den.size() + 1, 0);
        for (std::size_t k = q.size(); k-- > 0;) {
            BigInt c = num[k + den.size() - 1] / den.back();
            q[k] = c;
            for (std::size_t i = 0; i < den.size(); ++i) num[k + i] -= c * den[i];
        }
        num = q;
    }
    return num;
}

MatrixGroupPresentation klimenko(long k, bool cusped) {
    if (k < 8 || k % 2 != 0) throw UnsupportedKey("klimenko: k must be even and >= 8");
    auto R = std::make_shared<NumberRing>();
    IPoly phi = cyclotomic(2 * k);
    {
        std::vector<RingElem> c;
        for (std::size_t i = 0; i + 1 < phi.size(); ++i) c.push_back(R->constant(Rational(phi[i])));
        R->add_level("u", c);
    }
    RingElem u = R->gen(0);
    RingElem uinv = R->inv(u);
    RingElem t = R->add(R->add(R->mul(u, u), R->mul(uinv, uinv)), R->constant(2));
    RingElem tm3 = R->sub(t, R->constant(3));
    RingElem fmt = R->sub(R->constant(4), t);
    RingElem s1sq, s2sq;
    if (cusped) {
        s1sq = R->div(t, R->mul(tm3, fmt));
        s2sq = R->div(R->constant(3), tm3);
    } else {
        s1sq = R->div(R->mul(R->constant(2), R->sub(t, R->constant(2))), R->mul(tm3, fmt));
        s2sq = R->div(R->constant(2), tm3);
    }
    RingElem ratio = R->div(tm3, fmt);
    R->add_level("s", {R->neg(s1sq), R->zero()});
    R->add_level("r", {R->embed(R->neg(s2sq)), R->zero()});
    R->set_involution(std::vector<RingElem>{R->embed(uinv), R->gen(1), R->gen(2)});
    R->add_denominator(R->embed(tm3));
    R->add_denominator(R->embed(fmt));
    RingElem s = R->gen(1), rr = R->gen(2);
    RingElem half = R->constant(Rational(1, 2));
    MatrixGroupPresentation p;
    p.name = std::string("GTet1[") + std::to_string(k) + (cusped ? ",3,3]" : ",3,2]");
    p.projective = true;
    p.ring = R;
    p.generators = {"f", "g"};
    p.images = {{R->embed(u), R->zero(), R->zero(), R->embed(uinv)},
                {R->mul(half, R->add(s, rr)), R->one(), R->embed(ratio), R->mul(half, R->sub(s, rr))}};
    std::map<std::string, Word> macros;
    macros["z"] = parse_word("fgfg^-1f", p.generators);
    std::string fk2 = "f^" + std::to_string(k / 2);
    p.relators = {parse_word("f^" + std::to_string(k), p.generators),
                  parse_word("(g" + fk2 + "z" + fk2 + "g^-1z)^" + (cusped ? "3" : "2"), p.generators, macros),
                  parse_word("z^2", p.generators, macros), parse_word("fzgf^-1g^-1z", p.generators, macros)};
    finalize_presentation(p);
    return p;
}

// Conjugation on Q(t)[c] was found by an integer relation search and is
// verified exactly by the ring's involution check.
const char* kTetrahedral = R"(name Gamma_26
projective yes
level t : t^4 - t^3 + t^2 - t + 1
level c : c^4 + (-6t^3 + 6t^2 + 8)/5 c^3 + (-t^3 + t^2 - 3)/5 c^2 + (-4t^3 + 4t^2 + 2)/25 c + (3t^3 - 3t^2 + 2)/25
involution t -> -t^3 + t^2 - t + 1
involution c -> -((8 - 25c + 110c^2 + 50c^3) + t^2 (6 - 10c + 70c^2 + 25c^3) + t^3 (-6 + 10c - 70c^2 - 25c^3))/5
generator a = [(2t^3 + t^2 + t + 2)/5, 1; (-t^3 + t^2 - 2)/5, (-2t^3 - t^2 - t + 3)/5]
generator b = [(-3t^3 + t^2 - 4t + 2)/5, (-20t^3 + 20t^2 + 35)c^3 + (-50t^3 + 50t^2 + 80)c^2 + (9t^3 - 9t^2 - 17)c - 4t^3 + 4t^2 + 6; c, (3t^3 - t^2 + 4t - 2)/5]
generator c = [t^-1, 0; 0, t]
relator a^3
relator b^2
relator c^5
relator (ac^-1)^2
relator (bc^-1)^3
relator (ab)^4
)";

}  // namespace

std::vector<BigInt> helling_ptilde(int m) {
    if (m < 0) throw std::invalid_argument("helling_ptilde: m >= 0");
    if (m % 2 == 0) return cheb_t2(m / 2);
    int k = (m - 1) / 2;
    return ipoly_sub(cheb_u(k), cheb_u(k - 1));
}

std::vector<BigInt> helling_f(int m) {
    IPoly p = helling_ptilde(m + 2);
    IPoly sq = ipoly_mul(p, p);
    if (m % 2 == 0) return ipoly_sub(sq, IPoly{-4, 0, 1});
    return ipoly_sub(sq, IPoly{-2, 1});
}

std::optional<CatalogKey> parse_catalog_key(const std::string& s) {
    if (s == "tetrahedral") return CatalogKey{Family::Tetrahedral, 0};
    auto colon = s.find(':');
    if (colon == std::string::npos) return std::nullopt;
    std::string fam = s.substr(0, colon);
    long v = 0;
    try {
        std::size_t used = 0;
        v = std::stol(s.substr(colon + 1), &used);
        if (used != s.size() - colon - 1) return std::nullopt;
    } catch (...) {
        return std::nullopt;
    }
    if (fam == "bianchi") return CatalogKey{Family::BianchiO, v};
    if (fam == "bianchi-ideal") return CatalogKey{Family::BianchiIdeal, v};
    if (fam == "helling") return CatalogKey{Family::Helling, v};
    if (fam == "klimenko333") return CatalogKey{Family::Klimenko333, v};
    if (fam == "klimenko332") return CatalogKey{Family::Klimenko332, v};
    return std::nullopt;
}

std::string catalog_key_string(const CatalogKey& k) {
    switch (k.family) {
        case Family::BianchiO: return "bianchi:" + std::to_string(k.param);
        case Family::BianchiIdeal: return "bianchi-ideal:" + std::to_string(k.param);
        case Family::Helling: return "helling:" + std::to_string(k.param);
        case Family::Klimenko333: return "klimenko333:" + std::to_string(k.param);
        case Family::Klimenko332: return "klimenko332:" + std::to_string(k.param);
        case Family::Tetrahedral: return "tetrahedral";
    }
    return "?";
}

MatrixGroupPresentation catalog_get(const CatalogKey& k) {
    switch (k.family) {
        case Family::BianchiO:
        case Family::BianchiIdeal:
            for (const auto& b : kBianchi)
                if (b.d == k.param && b.ideal == (k.family == Family::BianchiIdeal))
                    return parse_presentation(bianchi_text(b));
            throw UnsupportedKey("no catalog presentation for " + catalog_key_string(k));
        case Family::Helling:
            if (k.param > 400) throw UnsupportedKey("helling: m too large");
            return helling(static_cast<int>(k.param));
        case Family::Klimenko333: return klimenko(k.param, true);
        case Family::Klimenko332: return klimenko(k.param, false);
        case Family::Tetrahedral: return parse_presentation(kTetrahedral);
    }
    throw UnsupportedKey("unknown family");
}

std::vector<CatalogKey> catalog_fixed_keys() {
    std::vector<CatalogKey> keys;
    for (const auto& b : kBianchi) keys.push_back({b.ideal ? Family::BianchiIdeal : Family::BianchiO, b.d});
    keys.push_back({Family::Tetrahedral, 0});
    return keys;
}

}  // namespace coh
