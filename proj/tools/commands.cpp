#include "commands.hpp"

#include "coh/cohomology.hpp"
#include "coh/formulas.hpp"

#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace coh::cli {

using nlohmann::ordered_json;

void RunConfig::validate() const {
    if (n_lo > n_hi || n_lo < 0) throw std::invalid_argument("empty weight range");
    if (x < 2) throw std::invalid_argument("x must be at least 2");
}

std::pair<int, int> parse_range(const std::string& s) {
    const auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            const int v = std::stoi(s);
            return {v, v};
        }
        return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
    } catch (const std::logic_error&) {
        throw std::invalid_argument("bad weight range '" + s + "'");
    }
}

namespace {

MatrixGroupPresentation group_for(const std::string& key) {
    const auto k = parse_catalog_key(key);
    if (!k) throw UnsupportedKey("unrecognised group key '" + key + "'");
    return catalog_get(*k);
}

std::string bianchi_key(long d) { return "bianchi:" + std::to_string(d); }

std::string join(const std::vector<std::uint64_t>& v, char sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(v[i]);
    }
    return s;
}

std::vector<std::string> poly_strings(const std::vector<BigInt>& asc) {
    std::vector<std::string> out;
    for (const auto& c : asc) out.push_back(c.get_str());
    return out;
}

ordered_json envelope(const RunConfig& c) {
    ordered_json j;
    j["schema"] = kSchema;
    j["command"] = c.command;
    return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::vector<BigInt> nl_quadratic(const std::vector<long>& desc) {
    if (desc.size() != 3 || desc[0] != 1) throw std::invalid_argument("--nl expects 1,c1,c0 (monic quadratic)");
    return {BigInt(desc[2]), BigInt(desc[1]), BigInt(1)};
}

}  // namespace

std::string format_poly(const std::vector<BigInt>& asc) {
    std::string s;
    for (std::size_t k = asc.size(); k-- > 0;) {
        const BigInt& c = asc[k];
        if (c == 0) continue;
        const bool neg = c < 0;
        const BigInt a = neg ? BigInt(-c) : c;
        if (s.empty())
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        if (k == 0)
            s += a.get_str();
        else {
            if (a != 1) s += a.get_str() + "*";
            s += k == 1 ? "X" : "X^" + std::to_string(k);
        }
    }
    return s.empty() ? "0" : s;
}

std::vector<DimRow> cmd_dim(const RunConfig& c) {
    c.validate();
    const auto G = group_for(c.group);
    DimOptions opt;
    opt.threads = c.threads;
    std::vector<DimRow> rows;
    for (int n = c.n_lo; n <= c.n_hi; ++n) {
        const auto r = h1_dim_upto(G, n, n, c.x, opt);
        if (!r) throw Degenerate("no admissible prime <= " + std::to_string(c.x) + " for " + c.group);
        rows.push_back({n, r->dim, r->witnesses});
    }
    return rows;
}

std::vector<BcRow> cmd_bc(const RunConfig& c) {
    c.validate();
    const QuadField K = quad_field(c.d);
    std::vector<BcRow> rows;
    for (int n = c.n_lo; n <= c.n_hi; ++n) rows.push_back({n, bc_dim(K, n), cusp_codim(K, n)});
    return rows;
}

std::vector<CompareRow> cmd_compare(const RunConfig& c) {
    RunConfig dc = c;
    dc.group = bianchi_key(c.d);
    const auto dims = cmd_dim(dc);
    const auto bcs = cmd_bc(c);
    std::vector<CompareRow> rows;
    for (std::size_t i = 0; i < dims.size(); ++i)
        rows.push_back({dims[i].n, dims[i].dim, bcs[i].bc + bcs[i].codim});
    return rows;
}

ScanResult cmd_scan(const RunConfig& c) {
    if (c.x < 2) throw std::invalid_argument("x must be at least 2");
    ScanOptions opt;
    opt.qbound = c.qbound;
    opt.threads = c.threads;
    opt.results_file = c.results;
    auto r = scan_stat(c.x, opt);
    if (r.records.empty()) throw Degenerate("no degree-one prime ideals of norm <= " + std::to_string(c.x));
    return r;
}

HeckeReport cmd_hecke(const RunConfig& c) {
    if (c.pi.empty()) throw std::invalid_argument("--pi is required");
    if (c.n_lo != c.n_hi) throw std::invalid_argument("hecke takes a single weight");
    if (!c.restrict_to.empty() && c.nl.empty()) throw std::invalid_argument("--restrict needs --nl");
    HeckeSpace S(group_for(bianchi_key(c.d)), c.d, c.n_lo);
    const QuadElement pi = parse_quad_element(c.pi);
    HeckeReport rep;
    if (c.nl.empty()) {
        rep.op = hecke_matrix(S, pi);
    } else {
        const auto q = nl_quadratic(c.nl);
        const auto nl = nl_subspace(S, pi, q);
        rep.op = nl.op;
        rep.nl_q = q;
        for (const auto& s : c.restrict_to) {
            const QuadElement p2 = parse_quad_element(s);
            rep.restrictions.emplace_back(p2, nl_restriction(S, nl, p2));
        }
    }
    rep.real_rooted = real_rooted(rep.op.charpoly);
    return rep;
}

std::string render_dim(const RunConfig& c, const std::vector<DimRow>& rows) {
    if (c.format == Format::Json) {
        auto j = envelope(c);
        j["group"] = c.group;
        j["x"] = c.x;
        auto& a = j["rows"] = ordered_json::array();
        for (const auto& r : rows) a.push_back({{"n", r.n}, {"dim", r.dim}, {"witnesses", r.witnesses}});
        return dump(j);
    }
    std::ostringstream o;
    o << "group,x,n,dim,witnesses\n";
    for (const auto& r : rows) o << c.group << ',' << c.x << ',' << r.n << ',' << r.dim << ',' << join(r.witnesses, ';') << '\n';
    return o.str();
}

std::string render_bc(const RunConfig& c, const std::vector<BcRow>& rows) {
    if (c.format == Format::Json) {
        auto j = envelope(c);
        j["d"] = c.d;
        auto& a = j["rows"] = ordered_json::array();
        for (const auto& r : rows) a.push_back({{"n", r.n}, {"bc", r.bc}, {"cusp_codim", r.codim}});
        return dump(j);
    }
    std::ostringstream o;
    o << "d,n,bc,cusp_codim\n";
    for (const auto& r : rows) o << c.d << ',' << r.n << ',' << r.bc << ',' << r.codim << '\n';
    return o.str();
}

std::string render_compare(const RunConfig& c, const std::vector<CompareRow>& rows) {
    if (c.format == Format::Json) {
        auto j = envelope(c);
        j["d"] = c.d;
        j["x"] = c.x;
        auto& a = j["rows"] = ordered_json::array();
        for (const auto& r : rows)
            a.push_back({{"n", r.n},
                         {"computed", r.computed},
                         {"bc_plus_codim", r.predicted},
                         {"gap", r.gap()},
                         {"flagged", r.gap() != 0}});
        return dump(j);
    }
    std::ostringstream o;
    o << "d,x,n,computed,bc_plus_codim,gap,flagged\n";
    for (const auto& r : rows)
        o << c.d << ',' << c.x << ',' << r.n << ',' << r.computed << ',' << r.predicted << ',' << r.gap() << ','
          << (r.gap() != 0 ? 1 : 0) << '\n';
    return o.str();
}

std::string render_scan(const RunConfig& c, const ScanResult& r) {
    if (c.format == Format::Json) {
        auto j = envelope(c);
        j["x"] = c.x;
        j["qbound"] = c.qbound;
        j["S"] = r.S;
        j["histogram"] = r.histogram;
        auto& a = j["records"] = ordered_json::array();
        for (const auto& s : r.records)
            a.push_back({{"norm", s.norm}, {"ideal", s.tag}, {"dim", s.dim}, {"witnesses", s.witnesses}});
        return dump(j);
    }
    std::ostringstream o;
    o << "norm,ideal,dim,witnesses\n";
    for (const auto& s : r.records) o << s.norm << ',' << s.tag << ',' << s.dim << ',' << join(s.witnesses, ';') << '\n';
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", r.S);
    o << "# S(" << c.x << ")=" << buf << '\n';
    return o.str();
}

std::string render_hecke(const RunConfig& c, const HeckeReport& r) {
    auto matrix_strings = [](const NLRestriction& L) {
        std::vector<std::vector<std::string>> m(2, std::vector<std::string>(2));
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) m[i][k] = to_string(L.matrix[i][k]);
        return m;
    };
    if (c.format == Format::Json) {
        auto j = envelope(c);
        j["d"] = c.d;
        j["n"] = c.n_lo;
        j["pi"] = format_quad_element(r.op.pi);
        j["index"] = r.op.index;
        j["dim"] = r.op.charpoly.size() - 1;
        j["charpoly"] = poly_strings(r.op.charpoly);
        j["real_rooted"] = r.real_rooted;
        j["primes"] = r.op.primes.size();
        if (r.nl_q) {
            j["nl_q"] = poly_strings(*r.nl_q);
            auto& a = j["restrictions"] = ordered_json::array();
            for (const auto& [p, L] : r.restrictions)
                a.push_back({{"pi", format_quad_element(p)},
                             {"matrix", matrix_strings(L)},
                             {"charpoly", poly_strings(L.charpoly)},
                             {"scalar", L.scalar() ? ordered_json(to_string(L.a)) : ordered_json(nullptr)}});
        }
        return dump(j);
    }
    std::ostringstream o;
    o << "d,n,pi,item,value\n";
    const std::string head = std::to_string(c.d) + ',' + std::to_string(c.n_lo) + ',';
    const std::string pi = format_quad_element(r.op.pi);
    o << head << pi << ",dim," << r.op.charpoly.size() - 1 << '\n';
    o << head << pi << ",charpoly," << format_poly(r.op.charpoly) << '\n';
    o << head << pi << ",real_rooted," << (r.real_rooted ? 1 : 0) << '\n';
    if (r.nl_q) o << head << pi << ",nl_q," << format_poly(*r.nl_q) << '\n';
    for (const auto& [p, L] : r.restrictions) {
        const auto m = matrix_strings(L);
        const std::string ps = format_quad_element(p);
        o << head << ps << ",nl_matrix,[[" << m[0][0] << ' ' << m[0][1] << "] [" << m[1][0] << ' ' << m[1][1] << "]]\n";
        o << head << ps << ",nl_charpoly," << format_poly(L.charpoly) << '\n';
        if (L.scalar()) o << head << ps << ",nl_scalar," << to_string(L.a) << '\n';
    }
    return o.str();
}

int run(const RunConfig& c) {
    std::string text;
    try {
        if (c.command == "dim")
            text = render_dim(c, cmd_dim(c));
        else if (c.command == "bc")
            text = render_bc(c, cmd_bc(c));
        else if (c.command == "compare")
            text = render_compare(c, cmd_compare(c));
        else if (c.command == "scan")
            text = render_scan(c, cmd_scan(c));
        else if (c.command == "hecke")
            text = render_hecke(c, cmd_hecke(c));
        else
            throw std::invalid_argument("unknown command '" + c.command + "'");
    } catch (const UnsupportedKey& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Degenerate& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    if (c.output.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(c.output);
    if (!(out << text)) {
        std::cerr << "error: cannot write " << c.output << '\n';
        return 1;
    }
    return 0;
}

}  // namespace coh::cli
