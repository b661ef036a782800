#pragma once

#include "coh/cohomology.hpp"
#include "coh/groups.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace coh {

/// Degree-one prime (p, w - r) of O_d, w the standard integral generator
/// (sqrt(d), or (1 + sqrt(d))/2 when d = 1 mod 4).
struct PrimeIdealDeg1 {
    long d = -1;
    std::uint64_t p = 2;
    std::uint64_t r = 0;                   ///< w = r mod the ideal
    std::optional<std::pair<long, long>> generator;  ///< (a, b) with (a + b w) = the ideal, if principal

    /// "a+b*w" for a principal ideal, otherwise "(p,w-r)".
    std::string tag() const;
};

/// All degree-one primes of O_d with norm <= bound, sorted by norm then by r.
std::vector<PrimeIdealDeg1> deg1_primes(long d, std::uint64_t bound);

/// Norm of a + b w in O_d.
long element_norm(long d, long a, long b);

enum class CongruenceKind {
    Upper,  ///< Gamma^0: b in the ideal, the stabiliser of 0
    Lower,  ///< Gamma_0: c in the ideal, the stabiliser of infinity
};

/// The residue field O_d / (pi) of a prime element pi = a + b w: F_p for a
/// degree-one prime, F_{p^2} = F_p[w] for an inert rational prime.
/// Elements are encoded as integers 0..size()-1 (x + y p for x + y w).
struct ResidueField {
    using Elem = std::uint64_t;
    long d = -1;
    std::uint64_t p = 2;
    int degree = 1;
    std::uint64_t r = 0;       ///< degree one: w = r
    std::uint64_t c0 = 0, c1 = 0;  ///< degree two: w^2 = -c1 w - c0

    std::uint64_t size() const { return degree == 1 ? p : p * p; }
    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem add(Elem a, Elem b) const;
    Elem sub(Elem a, Elem b) const;
    Elem neg(Elem a) const;
    Elem mul(Elem a, Elem b) const;
    Elem inv(Elem a) const;
    bool is_zero(Elem a) const { return a == 0; }
    bool eq(Elem a, Elem b) const { return a == b; }
    /// Image of an element of the group ring (throws DivisionByZero on a
    /// denominator divisible by p).
    Elem reduce(const NumberRing& R, const RingElem& e) const;
};

/// Residue field of a + b w; throws std::invalid_argument unless the element
/// generates a prime ideal.
ResidueField residue_field(long d, long a, long b);
ResidueField residue_field(const PrimeIdealDeg1& P);

/// Right action of the generators on the cosets H\G, H a congruence subgroup
/// of prime level. Cosets are the points of P^1(k), k the residue field:
/// 0..|k|-1 and infinity = |k|; the coset Hw corresponds to the point w^-1 x0.
struct CosetTable {
    std::uint64_t field_size = 2;
    std::size_t base = 0;                        ///< x0
    std::vector<std::vector<std::size_t>> act;   ///< act[g][x] = x . g
    std::vector<std::vector<std::size_t>> inv;   ///< act of g^-1
    std::vector<Word> transversal;               ///< transversal[x]: x0 . word = x; prefix closed

    std::size_t index() const { return act.empty() ? 0 : act[0].size(); }
    /// Coset reached from x by the word.
    std::size_t apply(std::size_t x, const Word& w) const;
};

/// Generator images reduced modulo the ideal (entries in F_p).
std::vector<Mat2<std::uint64_t>> reduce_mod_prime(const MatrixGroupPresentation& pres, const PrimeIdealDeg1& P);

/// Throws std::invalid_argument when the group ring is not O_d of the ideal.
CosetTable coset_table(const MatrixGroupPresentation& pres, const PrimeIdealDeg1& P,
                       CongruenceKind kind = CongruenceKind::Upper);
CosetTable coset_table(const MatrixGroupPresentation& pres, const ResidueField& k,
                       CongruenceKind kind = CongruenceKind::Upper);

/// The module Ind(E_{n,m}) = F[H\G] (x) E_{n,m} of dimension index * (n+1)(m+1).
ModuleAction<PrimeField> induced_action(const MatrixGroupPresentation& pres, const CosetTable& t, int n, int m,
                                        const ReductionMap& r);

/// dim_{<=x} H^1(H, E_n) via Shapiro's lemma on the parent group.
std::optional<DimResult> shapiro_h1_dim(const MatrixGroupPresentation& pres, const CosetTable& t, int n,
                                        std::uint64_t x, DimOptions opt = {});

/// Reidemeister-Schreier presentation of H with exact matrix images.
MatrixGroupPresentation rs_presentation(const MatrixGroupPresentation& pres, const CosetTable& t);

/// A square root of -1 mod p (p = 2 or p = 1 mod 4); std::nullopt otherwise.
std::optional<std::uint64_t> sqrt_minus_one(std::uint64_t p);

/// dim_{F_q} P^1(F_q, p) / U(F_q, p) for one coefficient prime q.
std::size_t p1_quotient_dim(std::uint64_t p, std::uint64_t rho, std::uint64_t q);

struct P1Result {
    std::size_t dim = 0;
    std::vector<std::uint64_t> witnesses;  ///< coefficient primes attaining the minimum
};

/// Minimum of p1_quotient_dim over the given coefficient primes (tried in
/// order, stopping at 0). Throws std::invalid_argument if p has no sqrt(-1).
P1Result p1_abelianization_dim(std::uint64_t p, const std::vector<std::uint64_t>& qs,
                               std::optional<std::uint64_t> rho = std::nullopt);

struct ScanRecord {
    long d = -1;
    std::uint64_t norm = 0;
    std::string tag;
    std::size_t dim = 0;
    std::vector<std::uint64_t> witnesses;
};

std::string format_scan_record(const ScanRecord& r);
std::optional<ScanRecord> parse_scan_record(const std::string& line);

struct ScanOptions {
    std::uint64_t qbound = 500;
    unsigned threads = 1;
    std::string results_file;  ///< append-only checkpoint; empty = none
    /// Called with each finished record in norm order.
    std::function<void(const ScanRecord&)> on_record;
};

struct ScanResult {
    std::vector<ScanRecord> records;         ///< one per degree-one prime ideal
    double S = 0;                            ///< x^(1/6) * (sum of dims) / (number of ideals)
    std::vector<std::size_t> histogram;      ///< histogram[r] = number of norms with dim r
};

/// The trivial-coefficient scan over the degree-one primes of O_{-1}.
ScanResult scan_stat(std::uint64_t x, const ScanOptions& opt = {});

/// dim H^1(Gamma^0(P), E_n) - 2 dim H^1(PSL(2,O), E_n) for the d = -1 catalog
/// group. Throws std::runtime_error if negative (the prime bound was too small).
long new_dim(const PrimeIdealDeg1& P, int n, std::uint64_t x, DimOptions opt = {});

}  // namespace coh
