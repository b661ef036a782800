#include "coh/groups.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace coh {

// ---------------------------------------------------------------------------
// Words

Word word_inverse(const Word& w) {
    Word r(w.rbegin(), w.rend());
    for (auto& l : r) l.exp = -l.exp;
    return r;
}

Word word_concat(const Word& a, const Word& b) {
    Word r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

Word word_power(const Word& w, long e) {
    Word base = e < 0 ? word_inverse(w) : w;
    Word r;
    for (long i = 0; i < (e < 0 ? -e : e); ++i) r.insert(r.end(), base.begin(), base.end());
    return r;
}

Word word_free_reduce(const Word& w) {
    Word r;
    for (const auto& l : w) {
        if (!r.empty() && r.back().gen == l.gen && r.back().exp == -l.exp)
            r.pop_back();
        else
            r.push_back(l);
    }
    return r;
}

namespace {

class WordParser {
public:
    WordParser(const std::string& s, const std::vector<std::string>& gens, const std::map<std::string, Word>& macros)
        : s_(s), gens_(gens), macros_(macros) {}

    Word parse() {
        Word w = sequence();
        skip();
        if (i_ != s_.size()) fail("unexpected character");
        return w;
    }

private:
    const std::string& s_;
    const std::vector<std::string>& gens_;
    const std::map<std::string, Word>& macros_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& why) const {
        throw std::invalid_argument("word '" + s_ + "': " + why + " at offset " + std::to_string(i_));
    }
    void skip() {
        while (i_ < s_.size() && (std::isspace(static_cast<unsigned char>(s_[i_])) || s_[i_] == '*' || s_[i_] == '.')) ++i_;
    }
    Word sequence() {
        Word w;
        for (;;) {
            skip();
            if (i_ == s_.size() || s_[i_] == ')') return w;
            Word item = atom();
            skip();
            if (i_ < s_.size() && s_[i_] == '^') {
                ++i_;
                item = word_power(item, exponent());
            }
            w.insert(w.end(), item.begin(), item.end());
        }
    }
    long exponent() {
        skip();
        bool braced = false;
        if (i_ < s_.size() && s_[i_] == '{') {
            braced = true;
            ++i_;
        }
        bool neg = false;
        if (i_ < s_.size() && s_[i_] == '-') {
            neg = true;
            ++i_;
        }
        std::size_t start = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (start == i_) fail("exponent expected");
        long e = std::stol(s_.substr(start, i_ - start));
        if (braced) {
            if (i_ >= s_.size() || s_[i_] != '}') fail("'}' expected");
            ++i_;
        }
        return neg ? -e : e;
    }
    Word atom() {
        if (s_[i_] == '(') {
            ++i_;
            Word w = sequence();
            if (i_ >= s_.size() || s_[i_] != ')') fail("')' expected");
            ++i_;
            return w;
        }
        // Longest match among generator names and macros.
        std::size_t best = 0;
        Word result;
        for (std::size_t g = 0; g < gens_.size(); ++g) {
            const auto& n = gens_[g];
            if (n.size() > best && s_.compare(i_, n.size(), n) == 0) {
                best = n.size();
                result = Word{Letter{static_cast<int>(g), 1}};
            }
        }
        for (const auto& [n, w] : macros_) {
            if (n.size() > best && s_.compare(i_, n.size(), n) == 0) {
                best = n.size();
                result = w;
            }
        }
        if (best == 0) fail("unknown generator");
        i_ += best;
        return result;
    }
};

}  // namespace

Word parse_word(const std::string& text, const std::vector<std::string>& generators,
                const std::map<std::string, Word>& macros) {
    return WordParser(text, generators, macros).parse();
}

std::string format_word(const Word& w, const std::vector<std::string>& generators) {
    std::string s;
    for (std::size_t i = 0; i < w.size();) {
        std::size_t j = i;
        while (j < w.size() && w[j] == w[i]) ++j;
        long e = static_cast<long>(j - i) * w[i].exp;
        if (!s.empty()) s += " ";
        s += generators[static_cast<std::size_t>(w[i].gen)];
        if (e != 1) s += "^" + std::to_string(e);
        i = j;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Presentations

Mat2<RingElem> evaluate_word(const MatrixGroupPresentation& p, const Word& w) {
    TowerField F{p.ring};
    std::vector<Mat2<RingElem>> inv(p.images.size());
    std::vector<bool> have(p.images.size(), false);
    Mat2<RingElem> m = mat2_identity(F);
    for (const auto& l : w) {
        auto g = static_cast<std::size_t>(l.gen);
        if (l.exp > 0) {
            m = mat2_mul(F, m, p.images[g]);
        } else {
            if (!have[g]) {
                inv[g] = mat2_inv(F, p.images[g]);
                have[g] = true;
            }
            m = mat2_mul(F, m, inv[g]);
        }
    }
    return m;
}

std::vector<Mat2<std::uint64_t>> reduce_images(const MatrixGroupPresentation& p, const ReductionMap& r, bool conjugate) {
    std::vector<Mat2<std::uint64_t>> out;
    const auto& R = *p.ring;
    for (const auto& m : p.images)
        out.push_back({R.reduce(r, m.a, conjugate), R.reduce(r, m.b, conjugate), R.reduce(r, m.c, conjugate),
                       R.reduce(r, m.d, conjugate)});
    return out;
}

Mat2<std::uint64_t> evaluate_word(const MatrixGroupPresentation& p, const Word& w, const ReductionMap& r, bool conjugate) {
    PrimeField F(r.p);
    auto imgs = reduce_images(p, r, conjugate);
    Mat2<std::uint64_t> m = mat2_identity(F);
    for (const auto& l : w) {
        const auto& g = imgs[static_cast<std::size_t>(l.gen)];
        m = mat2_mul(F, m, l.exp > 0 ? g : mat2_inv(F, g));
    }
    return m;
}

std::vector<ReductionMap> admissible_maps(const MatrixGroupPresentation& p, std::uint64_t prime) {
    std::vector<ReductionMap> out;
    PrimeField F(prime);
    for (const auto& r : p.ring->reduction_maps(prime)) {
        try {
            auto a = reduce_images(p, r, false);
            auto b = reduce_images(p, r, true);
            bool ok = true;
            for (std::size_t g = 0; g < a.size() && ok; ++g)
                ok = mat2_det(F, a[g]) != 0 && mat2_det(F, b[g]) != 0;
            if (ok) out.push_back(r);
        } catch (const DivisionByZero&) {
        }
    }
    return out;
}

void finalize_presentation(MatrixGroupPresentation& p) {
    TowerField F{p.ring};
    const auto& R = *p.ring;
    if (p.images.size() != p.generators.size()) throw std::invalid_argument(p.name + ": one matrix per generator required");
    p.conj_images.clear();
    for (std::size_t g = 0; g < p.images.size(); ++g) {
        auto& m = p.images[g];
        m = {R.embed(m.a), R.embed(m.b), R.embed(m.c), R.embed(m.d)};
        if (!R.eq(mat2_det(F, m), R.one()))
            throw std::invalid_argument(p.name + ": generator " + p.generators[g] + " does not have determinant 1");
        p.conj_images.push_back({R.conj(m.a), R.conj(m.b), R.conj(m.c), R.conj(m.d)});
    }
    for (const auto& w : p.relators) {
        if (!mat2_is_identity(F, evaluate_word(p, w), p.projective))
            throw std::invalid_argument(p.name + ": relator " + format_word(w, p.generators) + " is not trivial");
    }
}

std::string serialize_presentation(const MatrixGroupPresentation& p) {
    const auto& R = *p.ring;
    std::ostringstream os;
    os << "name " << p.name << "\n";
    os << "projective " << (p.projective ? "yes" : "no") << "\n";
    for (std::size_t k = 0; k < R.num_levels(); ++k) {
        const auto& L = R.level(k);
        os << "level " << L.var << " : " << L.var << "^" << L.degree;
        for (int r = L.degree; r-- > 0;) {
            RingElem c = R.embed(RingElem{L.coeffs[static_cast<std::size_t>(r)]});
            if (R.is_zero(c)) continue;
            os << " + (" << R.format(c) << ")";
            if (r > 0) os << "*" << L.var << (r > 1 ? "^" + std::to_string(r) : "");
        }
        os << "\n";
    }
    for (std::size_t k = 0; k < R.num_levels(); ++k)
        os << "involution " << R.level(k).var << " -> " << R.format(R.involution()[k]) << "\n";
    for (const auto& d : R.denominators()) os << "denominator " << R.format(d) << "\n";
    for (std::size_t g = 0; g < p.generators.size(); ++g) {
        const auto& m = p.images[g];
        os << "generator " << p.generators[g] << " = [" << R.format(m.a) << ", " << R.format(m.b) << "; "
           << R.format(m.c) << ", " << R.format(m.d) << "]\n";
    }
    for (const auto& w : p.relators) os << "relator " << format_word(w, p.generators) << "\n";
    return os.str();
}

namespace {

std::string trim_copy(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

MatrixGroupPresentation parse_presentation(const std::string& text) {
    MatrixGroupPresentation p;
    std::vector<std::pair<std::string, std::string>> levels;
    std::map<std::string, std::string> involution;
    std::vector<std::string> denominators;
    std::vector<std::pair<std::string, std::string>> gens;
    std::vector<std::pair<std::string, std::string>> defines;
    std::vector<std::string> relators;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim_copy(line);
        if (line.empty() || line[0] == '#') continue;
        std::size_t sp = line.find(' ');
        std::string key = line.substr(0, sp);
        std::string rest = sp == std::string::npos ? "" : trim_copy(line.substr(sp + 1));
        auto split = [&](const std::string& sep) {
            std::size_t at = rest.find(sep);
            if (at == std::string::npos)
                throw std::invalid_argument("line " + std::to_string(lineno) + ": expected '" + sep + "'");
            return std::make_pair(trim_copy(rest.substr(0, at)), trim_copy(rest.substr(at + sep.size())));
        };
        if (key == "name") {
            p.name = rest;
        } else if (key == "projective") {
            p.projective = (rest == "yes" || rest == "true" || rest == "1");
        } else if (key == "level") {
            levels.push_back(split(":"));
        } else if (key == "involution") {
            involution.insert(split("->"));
        } else if (key == "denominator") {
            denominators.push_back(rest);
        } else if (key == "generator") {
            gens.push_back(split("="));
        } else if (key == "define") {
            defines.push_back(split("="));
        } else if (key == "relator") {
            relators.push_back(rest);
        } else {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": unknown keyword '" + key + "'");
        }
    }
    auto ring = std::make_shared<NumberRing>();
    for (const auto& [v, f] : levels) ring->add_level(v, f);
    std::vector<std::string> inv;
    for (const auto& [v, f] : levels) {
        auto it = involution.find(v);
        if (it == involution.end()) throw std::invalid_argument("no involution image for level " + v);
        inv.push_back(it->second);
    }
    ring->set_involution(inv);
    for (const auto& d : denominators) ring->add_denominator(d);
    p.ring = ring;
    for (const auto& [name, mat] : gens) {
        std::string body = mat;
        if (body.size() < 2 || body.front() != '[' || body.back() != ']')
            throw std::invalid_argument("generator " + name + ": matrix must be written [a, b; c, d]");
        body = body.substr(1, body.size() - 2);
        std::size_t semi = body.find(';');
        if (semi == std::string::npos) throw std::invalid_argument("generator " + name + ": missing ';'");
        auto row1 = body.substr(0, semi), row2 = body.substr(semi + 1);
        std::size_t c1 = row1.find(','), c2 = row2.find(',');
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw std::invalid_argument("generator " + name + ": missing ','");
        p.generators.push_back(name);
        p.images.push_back({ring->parse(row1.substr(0, c1)), ring->parse(row1.substr(c1 + 1)),
                            ring->parse(row2.substr(0, c2)), ring->parse(row2.substr(c2 + 1))});
    }
    std::map<std::string, Word> macros;
    for (const auto& [name, w] : defines) macros[name] = parse_word(w, p.generators, macros);
    for (const auto& r : relators) p.relators.push_back(parse_word(r, p.generators, macros));
    finalize_presentation(p);
    return p;
}

}  // namespace coh
