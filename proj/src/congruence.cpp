#include "coh/congruence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace coh {

namespace {

long floor_mod(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

bool d_is_1_mod_4(long d) { return floor_mod(d, 4) == 1; }

// Minimal polynomial of w, ascending, reduced mod p.
std::vector<std::uint64_t> min_poly_mod(const PrimeField& F, long d) {
    if (d_is_1_mod_4(d)) return {F.from_int((1 - d) / 4), F.from_int(-1), 1};
    return {F.from_int(-d), 0, 1};
}

template <class F>
std::size_t mobius(const F& f, std::uint64_t size, const Mat2<std::uint64_t>& g, std::size_t x) {
    std::uint64_t num, den;
    if (x == size) {
        num = g.a;
        den = g.c;
    } else {
        num = f.add(f.mul(g.a, x), g.b);
        den = f.add(f.mul(g.c, x), g.d);
    }
    if (den == 0) return size;
    return f.mul(num, f.inv(den));
}

std::size_t mobius(const PrimeField& F, const Mat2<std::uint64_t>& g, std::size_t x) { return mobius(F, F.p(), g, x); }

void check_ring(const MatrixGroupPresentation& pres, long d) {
    const NumberRing& R = *pres.ring;
    bool ok = R.num_levels() == 1 && R.level(0).degree == 2;
    if (ok) {
        const auto& c = R.level(0).coeffs;
        const bool m1 = d_is_1_mod_4(d);
        ok = c[0][0] == Rational(m1 ? (1 - d) / 4 : -d) && c[1][0] == Rational(m1 ? -1 : 0);
    }
    if (!ok) throw std::invalid_argument("group ring is not the ring of integers of the ideal's field");
}

std::string schreier_name(const std::string& gen, std::size_t coset) { return gen + "_" + std::to_string(coset); }

}  // namespace

long element_norm(long d, long a, long b) {
    if (d_is_1_mod_4(d)) return a * a + a * b + (1 - d) / 4 * b * b;
    return a * a - d * b * b;
}

std::string PrimeIdealDeg1::tag() const {
    if (!generator) return "(" + std::to_string(p) + ",w-" + std::to_string(r) + ")";
    auto [a, b] = *generator;
    std::string s = std::to_string(a);
    if (b == 1) return s + "+w";
    if (b == -1) return s + "-w";
    return s + (b > 0 ? "+" : "-") + std::to_string(std::labs(b)) + "*w";
}

std::vector<PrimeIdealDeg1> deg1_primes(long d, std::uint64_t bound) {
    std::vector<PrimeIdealDeg1> out;
    for (std::uint64_t p : primes_up_to(bound)) {
        PrimeField F(p);
        auto roots = roots_mod_p(F, min_poly_mod(F, d));
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
        for (std::uint64_t r : roots) {
            PrimeIdealDeg1 P{d, p, r, std::nullopt};
            // Elements of norm p in the ideal; among associates prefer a >= 0,
            // then the smallest |b|, then b > 0.
            const long lp = static_cast<long>(p);
            const long bmax = static_cast<long>(std::sqrt(4.0 * static_cast<double>(lp) / 3.0)) + 2;
            for (long b = -bmax; b <= bmax; ++b) {
                const long a0 = floor_mod(-b * static_cast<long>(r), lp);
                for (long a : {a0, a0 - lp}) {
                    if (element_norm(d, a, b) != lp || a < 0 || (a == 0 && b < 0)) continue;
                    auto key = [](long x, long y) { return std::make_tuple(std::labs(y), y < 0, x); };
                    if (!P.generator || key(a, b) < key(P.generator->first, P.generator->second))
                        P.generator = std::make_pair(a, b);
                }
            }
            out.push_back(P);
        }
    }
    return out;
}

std::size_t CosetTable::apply(std::size_t x, const Word& w) const {
    for (const auto& l : w) x = (l.exp > 0 ? act : inv)[static_cast<std::size_t>(l.gen)][x];
    return x;
}

ResidueField::Elem ResidueField::add(Elem a, Elem b) const {
    if (degree == 1) return (a + b) % p;
    return (a % p + b % p) % p + ((a / p + b / p) % p) * p;
}

ResidueField::Elem ResidueField::neg(Elem a) const {
    if (degree == 1) return (p - a) % p;
    return (p - a % p) % p + ((p - a / p) % p) * p;
}

ResidueField::Elem ResidueField::sub(Elem a, Elem b) const { return add(a, neg(b)); }

ResidueField::Elem ResidueField::mul(Elem a, Elem b) const {
    if (degree == 1) return a * b % p;
    const std::uint64_t x1 = a % p, y1 = a / p, x2 = b % p, y2 = b / p, yy = y1 * y2 % p;
    const std::uint64_t x = (x1 * x2 + (p - c0) % p * yy) % p;
    const std::uint64_t y = (x1 * y2 + x2 * y1 + (p - c1) % p * yy) % p;
    return x + y * p;
}

ResidueField::Elem ResidueField::inv(Elem a) const {
    if (a == 0) throw DivisionByZero("inverse of zero in a residue field");
    Elem r = 1, b = a;
    for (std::uint64_t e = size() - 2; e; e >>= 1, b = mul(b, b))
        if (e & 1) r = mul(r, b);
    return r;
}

ResidueField::Elem ResidueField::reduce(const NumberRing& R, const RingElem& e) const {
    PrimeField F(p);
    if (degree == 1) return R.reduce_at(F, {r}, e);
    return F.from_rational(e.c[0]) + F.from_rational(e.c[1]) * p;
}

ResidueField residue_field(long d, long a, long b) {
    const long N = element_norm(d, a, b);
    ResidueField k;
    k.d = d;
    if (N > 1 && is_prime(static_cast<std::uint64_t>(N))) {
        PrimeField F(static_cast<std::uint64_t>(N));
        k.p = F.p();
        k.r = F.neg(F.mul(F.from_int(a), F.inv(F.from_int(b))));
        return k;
    }
    const long s = static_cast<long>(std::llround(std::sqrt(static_cast<double>(N))));
    if (N > 1 && s * s == N && is_prime(static_cast<std::uint64_t>(s)) && a % s == 0 && b % s == 0 &&
        element_norm(d, a / s, b / s) == 1) {
        PrimeField F(static_cast<std::uint64_t>(s));
        auto mp = min_poly_mod(F, d);
        if (irreducible_mod_p(F, mp)) {
            k.p = F.p();
            k.degree = 2;
            k.c0 = mp[0];
            k.c1 = mp[1];
            return k;
        }
    }
    throw std::invalid_argument("not a prime element of O_" + std::to_string(d));
}

ResidueField residue_field(const PrimeIdealDeg1& P) {
    ResidueField k;
    k.d = P.d;
    k.p = P.p;
    k.r = P.r;
    return k;
}

std::vector<Mat2<std::uint64_t>> reduce_mod_prime(const MatrixGroupPresentation& pres, const PrimeIdealDeg1& P) {
    check_ring(pres, P.d);
    const NumberRing& R = *pres.ring;
    PrimeField F(P.p);
    std::vector<Mat2<std::uint64_t>> out;
    for (const auto& g : pres.images) {
        auto red = [&](const RingElem& e) { return R.reduce_at(F, {P.r}, e); };
        out.push_back({red(g.a), red(g.b), red(g.c), red(g.d)});
    }
    return out;
}

CosetTable coset_table(const MatrixGroupPresentation& pres, const PrimeIdealDeg1& P, CongruenceKind kind) {
    return coset_table(pres, residue_field(P), kind);
}

CosetTable coset_table(const MatrixGroupPresentation& pres, const ResidueField& k, CongruenceKind kind) {
    check_ring(pres, k.d);
    const std::uint64_t q = k.size();
    const std::size_t N = q + 1;
    CosetTable t;
    t.field_size = q;
    t.base = kind == CongruenceKind::Upper ? 0 : q;
    for (const auto& m : pres.images) {
        const NumberRing& R = *pres.ring;
        const Mat2<std::uint64_t> g{k.reduce(R, m.a), k.reduce(R, m.b), k.reduce(R, m.c), k.reduce(R, m.d)};
        const auto gi = mat2_inv(k, g);
        std::vector<std::size_t> a(N), b(N);
        for (std::size_t x = 0; x < N; ++x) {
            a[x] = mobius(k, q, gi, x);  // x . g = g^-1 x
            b[x] = mobius(k, q, g, x);
        }
        t.act.push_back(std::move(a));
        t.inv.push_back(std::move(b));
    }
    t.transversal.assign(N, Word{});
    std::vector<bool> seen(N, false);
    std::deque<std::size_t> queue{t.base};
    seen[t.base] = true;
    while (!queue.empty()) {
        const std::size_t x = queue.front();
        queue.pop_front();
        for (int g = 0; g < static_cast<int>(pres.images.size()); ++g)
            for (int e : {1, -1}) {
                const std::size_t y = (e > 0 ? t.act : t.inv)[static_cast<std::size_t>(g)][x];
                if (seen[y]) continue;
                seen[y] = true;
                t.transversal[y] = t.transversal[x];
                t.transversal[y].push_back({g, e});
                queue.push_back(y);
            }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        throw std::logic_error("generators do not act transitively on P^1");
    return t;
}

ModuleAction<PrimeField> induced_action(const MatrixGroupPresentation& pres, const CosetTable& t, int n, int m,
                                        const ReductionMap& r) {
    if (pres.projective && (n + m) % 2) throw OddWeight("E_{n,m} with n+m odd does not factor through PSL(2)");
    const PrimeField F = r.field();
    const auto img = reduce_images(pres, r, false), cimg = reduce_images(pres, r, true);
    ModuleAction<PrimeField> act{F, n, m, t.index(), {}, {}};
    for (std::size_t g = 0; g < img.size(); ++g) {
        BlockMap<PrimeField> b;
        b.src = t.act[g];
        b.mat.assign(t.index(), img[g]);
        b.conj.assign(t.index(), cimg[g]);
        act.inv_gens.push_back(block_inverse(F, b));
        act.gens.push_back(std::move(b));
    }
    return act;
}

std::optional<DimResult> shapiro_h1_dim(const MatrixGroupPresentation& pres, const CosetTable& t, int n,
                                        std::uint64_t x, DimOptions opt) {
    return min_over_maps(
        pres, x,
        [&](const ReductionMap& r) -> std::optional<std::size_t> {
            return h1_dimension(pres, induced_action(pres, t, n, n, r));
        },
        opt);
}

MatrixGroupPresentation rs_presentation(const MatrixGroupPresentation& pres, const CosetTable& t) {
    const std::size_t N = t.index(), s = pres.num_generators();
    // Schreier generator index for (coset, generator), or -1 on tree edges.
    std::vector<std::vector<int>> sid(N, std::vector<int>(s, -1));
    MatrixGroupPresentation out;
    out.name = pres.name + " subgroup of index " + std::to_string(N);
    out.ring = pres.ring;
    out.projective = pres.projective;
    for (std::size_t x = 0; x < N; ++x)
        for (std::size_t g = 0; g < s; ++g) {
            const Letter l{static_cast<int>(g), 1};
            const std::size_t y = t.act[g][x];
            Word w = t.transversal[x];
            w.push_back(l);
            w = word_free_reduce(word_concat(w, word_inverse(t.transversal[y])));
            if (w.empty()) continue;
            sid[x][g] = static_cast<int>(out.generators.size());
            out.generators.push_back(schreier_name(pres.generators[g], x));
            out.images.push_back(evaluate_word(pres, w));
        }
    for (std::size_t x = 0; x < N; ++x)
        for (const auto& rel : pres.relators) {
            Word w;
            std::size_t c = x;
            for (const auto& l : rel) {
                const auto g = static_cast<std::size_t>(l.gen);
                if (l.exp > 0) {
                    if (sid[c][g] >= 0) w.push_back({sid[c][g], 1});
                    c = t.act[g][c];
                } else {
                    c = t.inv[g][c];
                    if (sid[c][g] >= 0) w.push_back({sid[c][g], -1});
                }
            }
            if (c != x) throw std::logic_error("relator does not fix its coset");
            out.relators.push_back(std::move(w));
        }
    finalize_presentation(out);
    return out;
}

std::optional<std::uint64_t> sqrt_minus_one(std::uint64_t p) {
    if (p == 2) return 1;
    if (p % 4 != 1 || !is_prime(p)) return std::nullopt;
    PrimeField F(p);
    std::uint64_t r = 0;
    if (!F.sqrt(F.from_int(-1), r)) return std::nullopt;
    return std::min(r, p - r);
}

std::size_t p1_quotient_dim(std::uint64_t p, std::uint64_t rho, std::uint64_t q) {
    PrimeField Fp(p), Fq(q);
    const std::size_t N = p + 1;
    if (Fp.add(Fp.mul(rho, rho), 1) != 0) throw std::invalid_argument("rho^2 + 1 != 0 mod p");
    const Mat2<std::uint64_t> B{0, 1, Fp.from_int(-1), 0}, W{0, 1, 1, 0}, S{1, Fp.from_int(-1), 1, 0},
        Y{Fp.neg(rho % p), 1, 1, 0};

    // Signed union-find: u_x = sign[x] * u_parent[x].
    std::vector<std::size_t> parent(N);
    std::vector<int> sign(N, 1);
    std::vector<bool> zero(N, false);
    for (std::size_t x = 0; x < N; ++x) parent[x] = x;
    const bool char2 = q == 2;
    auto find = [&](std::size_t x) {
        int sg = 1;
        std::size_t r = x;
        while (parent[r] != r) {
            sg *= sign[r];
            r = parent[r];
        }
        // Path compression.
        int acc = sg;
        std::size_t y = x;
        while (parent[y] != y) {
            const std::size_t nx = parent[y];
            const int ns = acc * sign[y];
            parent[y] = r;
            sign[y] = acc;
            acc = ns;
            y = nx;
        }
        return std::make_pair(r, char2 ? 1 : sg);
    };
    // u_x + u_y = 0.
    auto unite = [&](std::size_t x, std::size_t y) {
        auto [rx, sx] = find(x);
        auto [ry, sy] = find(y);
        if (rx == ry) {
            if (!char2 && sx == sy) zero[rx] = true;  // 2 u = 0
            return;
        }
        // u_rx = -sx*sy u_ry
        parent[rx] = ry;
        sign[rx] = char2 ? 1 : -sx * sy;
        if (zero[rx]) zero[ry] = true;
    };
    zero[find(0).first] = true;
    for (std::size_t x = 0; x < N; ++x) {
        unite(x, mobius(Fp, B, x));
        unite(x, mobius(Fp, W, x));
    }
    std::vector<long> col(N, -1);
    std::size_t ncols = 0;
    for (std::size_t x = 0; x < N; ++x) {
        auto [r, sg] = find(x);
        (void)sg;
        if (!zero[r] && col[r] < 0) col[r] = static_cast<long>(ncols++);
    }
    std::vector<SparseRow> rows;
    for (const auto& M : {S, Y}) {
        std::vector<bool> done(N, false);
        for (std::size_t x = 0; x < N; ++x) {
            if (done[x]) continue;
            const std::size_t y = mobius(Fp, M, x), z = mobius(Fp, M, y);
            done[x] = done[y] = done[z] = true;
            std::map<std::uint32_t, std::uint64_t> acc;
            for (std::size_t v : {x, y, z}) {
                auto [r, sg] = find(v);
                if (zero[r]) continue;
                auto& e = acc[static_cast<std::uint32_t>(col[r])];
                e = Fq.add(e, Fq.from_int(sg));
            }
            SparseRow row;
            for (auto [c, v] : acc)
                if (v) row.emplace_back(c, v);
            if (!row.empty()) rows.push_back(std::move(row));
        }
    }
    return ncols - sparse_rank(Fq, ncols, std::move(rows));
}

P1Result p1_abelianization_dim(std::uint64_t p, const std::vector<std::uint64_t>& qs, std::optional<std::uint64_t> rho) {
    if (!rho) rho = sqrt_minus_one(p);
    if (!rho) throw std::invalid_argument("p must be 2 or a prime congruent to 1 mod 4");
    P1Result res;
    bool any = false;
    for (std::uint64_t q : qs) {
        const std::size_t v = p1_quotient_dim(p, *rho, q);
        if (!any || v < res.dim) {
            res.dim = v;
            res.witnesses.clear();
            any = true;
        }
        if (v == res.dim) res.witnesses.push_back(q);
        if (res.dim == 0) break;
    }
    if (!any) throw std::invalid_argument("no coefficient primes");
    return res;
}

std::string format_scan_record(const ScanRecord& r) {
    std::ostringstream os;
    os << r.d << ' ' << r.norm << ' ' << r.tag << ' ' << r.dim << ' ';
    if (r.witnesses.empty()) os << '-';
    for (std::size_t i = 0; i < r.witnesses.size(); ++i) os << (i ? "," : "") << r.witnesses[i];
    return os.str();
}

std::optional<ScanRecord> parse_scan_record(const std::string& line) {
    if (line.empty() || line[0] == '#') return std::nullopt;
    std::istringstream is(line);
    ScanRecord r;
    std::string wit;
    if (!(is >> r.d >> r.norm >> r.tag >> r.dim >> wit)) return std::nullopt;
    if (wit != "-") {
        std::istringstream ws(wit);
        std::string tok;
        while (std::getline(ws, tok, ',')) r.witnesses.push_back(std::stoull(tok));
    }
    return r;
}

ScanResult scan_stat(std::uint64_t x, const ScanOptions& opt) {
    if (x < 2) throw std::invalid_argument("scan bound must be at least 2");
    const auto ideals = deg1_primes(-1, x);
    auto qs = primes_up_to(opt.qbound);
    // Large q first: the minimum is usually 0 and found at once.
    std::reverse(qs.begin(), qs.end());

    std::vector<std::uint64_t> norms;
    for (const auto& P : ideals)
        if (norms.empty() || norms.back() != P.p) norms.push_back(P.p);

    const std::string header = "# scan d=-1 qbound=" + std::to_string(opt.qbound);
    std::map<std::string, ScanRecord> cached;
    if (!opt.results_file.empty()) {
        std::ifstream in(opt.results_file);
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            if (first && line != header) throw std::runtime_error("results file was written with other settings");
            first = false;
            if (auto r = parse_scan_record(line)) cached[std::to_string(r->norm) + " " + r->tag] = *r;
        }
    }
    std::ofstream out;
    if (!opt.results_file.empty()) {
        const bool fresh = cached.empty();
        out.open(opt.results_file, std::ios::app);
        if (fresh) out << header << '\n' << std::flush;
    }

    // Per norm: the records of its ideals. Conjugate ideals give conjugate
    // subgroups, so one computation serves both.
    std::vector<std::vector<ScanRecord>> per_norm(norms.size());
    std::vector<bool> ready(norms.size(), false), from_cache(norms.size(), false);
    std::vector<std::size_t> todo;
    for (std::size_t i = 0, k = 0; i < norms.size(); ++i) {
        bool all = true;
        std::vector<ScanRecord> recs;
        for (; k < ideals.size() && ideals[k].p == norms[i]; ++k) {
            auto it = cached.find(std::to_string(norms[i]) + " " + ideals[k].tag());
            if (it == cached.end()) all = false;
            else recs.push_back(it->second);
            if (it == cached.end()) recs.push_back({-1, norms[i], ideals[k].tag(), 0, {}});
        }
        per_norm[i] = std::move(recs);
        if (all) ready[i] = from_cache[i] = true;
        else todo.push_back(i);
    }
    std::vector<std::uint64_t> rho(norms.size());
    for (std::size_t i = 0, k = 0; i < norms.size(); ++i) {
        rho[i] = ideals[k].r;
        while (k < ideals.size() && ideals[k].p == norms[i]) ++k;
    }

    std::mutex mu;
    std::size_t flushed = 0;
    auto flush = [&] {
        while (flushed < norms.size() && ready[flushed]) {
            if (!from_cache[flushed]) {
                for (const auto& r : per_norm[flushed]) {
                    if (out.is_open()) out << format_scan_record(r) << '\n';
                }
                if (out.is_open()) out.flush();
            }
            if (opt.on_record)
                for (const auto& r : per_norm[flushed]) opt.on_record(r);
            ++flushed;
        }
    };
    {
        std::lock_guard<std::mutex> lk(mu);
        flush();
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t j = next++;
            if (j >= todo.size()) return;
            const std::size_t i = todo[j];
            const auto res = p1_abelianization_dim(norms[i], qs, rho[i]);
            std::lock_guard<std::mutex> lk(mu);
            for (auto& r : per_norm[i]) {
                r.dim = res.dim;
                r.witnesses = res.witnesses;
            }
            ready[i] = true;
            flush();
        }
    };
    const unsigned T = std::max(1u, opt.threads);
    if (T == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < T; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    ScanResult res;
    std::size_t total = 0, count = 0;
    for (std::size_t i = 0; i < norms.size(); ++i) {
        for (const auto& r : per_norm[i]) {
            total += r.dim;
            ++count;
            res.records.push_back(r);
        }
        if (norms[i] % 4 == 1) {
            const std::size_t v = per_norm[i].front().dim;
            if (res.histogram.size() <= v) res.histogram.resize(v + 1, 0);
            ++res.histogram[v];
        }
    }
    res.S = count ? std::pow(static_cast<double>(x), 1.0 / 6.0) * static_cast<double>(total) / static_cast<double>(count)
                  : 0.0;
    return res;
}

long new_dim(const PrimeIdealDeg1& P, int n, std::uint64_t x, DimOptions opt) {
    if (P.d != -1) throw std::invalid_argument("new_dim is defined for d = -1");
    const auto G = catalog_get({Family::BianchiO, -1});
    const auto t = coset_table(G, P);
    const auto sub = shapiro_h1_dim(G, t, n, x, opt);
    const auto full = h1_dim_upto(G, n, n, x, opt);
    if (!sub || !full) throw std::runtime_error("no admissible primes below the bound");
    const long v = static_cast<long>(sub->dim) - 2 * static_cast<long>(full->dim);
    if (v < 0) throw std::runtime_error("negative new dimension: prime bound too small");
    return v;
}

}  // namespace coh
