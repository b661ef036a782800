#pragma once

#include "coh/cohomology.hpp"
#include "coh/congruence.hpp"

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace coh {

/// An element a + b w of O_d, w as in PrimeIdealDeg1.
struct QuadElement {
    long a = 0, b = 0;
    bool operator==(const QuadElement& o) const { return a == o.a && b == o.b; }
};

/// Parses "a+b*w", "3", "w", "-2+w", "1-2*w" (spaces ignored).
QuadElement parse_quad_element(const std::string& s);
std::string format_quad_element(const QuadElement& e);

/// Generators A = [1,1;0,1], B = [0,1;-1,0], U = [1,w;0,1] of a Euclidean
/// Bianchi group (d = -1, -2, -3, -7, -11).
bool has_word_problem(long d);

/// A word in A, B, U equal to M up to sign, by the Euclidean algorithm in
/// the first column. Throws std::invalid_argument when d is not Euclidean,
/// the generators are missing or M is not in SL(2, O_d).
Word word_for_matrix(const MatrixGroupPresentation& G, long d, const Mat2<RingElem>& M);

/// The double coset of delta = diag(1, pi): H = Gamma n delta Gamma delta^-1
/// is {c = 0 mod pi} and delta^-1 H delta is {b = 0 mod pi}.
struct HeckePair {
    long d = -1;
    QuadElement pi;
    std::shared_ptr<const NumberRing> ring;
    ResidueField field;
    Mat2<RingElem> delta, delta_inv;
    CosetTable lower;  ///< H; its transversal lists the cosets H\Gamma
    CosetTable upper;  ///< delta^-1 H delta
    /// Per Schreier pair (x, g) of `upper` (index x * s + g): a word for
    /// delta s delta^-1 in H; empty on tree edges.
    std::vector<Word> down;
    /// Per Schreier pair of `lower`: a word for delta^-1 s delta.
    std::vector<Word> up;

    std::size_t index() const { return lower.index(); }
};

/// Throws std::invalid_argument if pi is not a prime element of O_d or the
/// group has no word problem solver.
HeckePair hecke_pair(const MatrixGroupPresentation& G, long d, const QuadElement& pi);

/// One coefficient prime: E_{n,n} reduced through `map` and H^1 with a basis.
struct H1Layer {
    ReductionMap map;
    ModuleAction<PrimeField> act;
    CohomologySpace<PrimeField> space;
    std::vector<DenseMatrix<PrimeField>> gen, gen_inv;  ///< dense generator actions
};

/// H^1(Gamma, E_{n,n}) modulo a growing list of large split primes. Layers
/// are built on demand; not safe for concurrent use.
class HeckeSpace {
public:
    HeckeSpace(MatrixGroupPresentation G, long d, int n);

    const MatrixGroupPresentation& group() const { return G_; }
    long d() const { return d_; }
    int n() const { return n_; }
    std::size_t dim();
    const H1Layer& layer(std::size_t i);

private:
    MatrixGroupPresentation G_;
    long d_;
    int n_;
    std::uint64_t next_prime_;
    std::vector<H1Layer> layers_;
};

using Vec = std::vector<std::uint64_t>;
using Cocycle = std::vector<Vec>;  ///< values on the generators of Gamma

/// A cocycle on a finite-index subgroup, stored by its values on the Schreier
/// generators t_x g t_{x.g}^-1 (zero on tree edges), index x * s + g.
struct SubgroupCocycle {
    std::vector<Vec> values;
};

/// Value of a cocycle of Gamma on a word.
Vec cocycle_value(const H1Layer& L, const Cocycle& f, const Word& w);
/// Value of a subgroup cocycle on a word of Gamma lying in the subgroup.
Vec cocycle_value(const H1Layer& L, const CosetTable& t, const SubgroupCocycle& c, const Word& w);

SubgroupCocycle restrict_cocycle(const H1Layer& L, const CosetTable& t, const Cocycle& f);
/// delta-conjugate of a cocycle on H = lower, living on upper:
/// c'(h) = delta^-1 c(delta h delta^-1).
SubgroupCocycle conjugate_down(const H1Layer& L, const HeckePair& P, const SubgroupCocycle& c);
/// The inverse operation, from upper back to lower.
SubgroupCocycle conjugate_up(const H1Layer& L, const HeckePair& P, const SubgroupCocycle& c);
/// Transfer to Gamma: cor(c)(g) = sum_x t_x^-1 c(t_x g t_{x.g}^-1).
Cocycle corestrict_cocycle(const H1Layer& L, const CosetTable& t, const SubgroupCocycle& c);

/// Action of a GL(2, K) matrix on E_{n,n} through the layer's reduction map.
DenseMatrix<PrimeField> gl2_action(const H1Layer& L, const NumberRing& R, const Mat2<RingElem>& m);

/// cor o delta~ o res on the basis of one layer, times N(pi)^e with
/// e = hecke_norm_exponent(n).
DenseMatrix<PrimeField> hecke_matrix_mod(const H1Layer& L, const HeckePair& P, int n);

/// The exponent of N(pi) multiplying the bare operator.
int hecke_norm_exponent(int n);

struct HeckeOperator {
    long d = -1;
    int n = 0;
    QuadElement pi;
    std::size_t index = 0;                        ///< N(pi) + 1
    std::vector<BigInt> charpoly;                 ///< ascending, monic
    std::vector<std::uint64_t> primes;            ///< coefficient primes used
    std::vector<DenseMatrix<PrimeField>> matrices;  ///< per prime, in that layer's basis
};

struct HeckeOptions {
    std::size_t min_primes = 3;
    std::size_t max_primes = 40;
    /// Consecutive primes that must leave the CRT lift unchanged.
    std::size_t confirm = 2;
};

/// Characteristic polynomial by Chinese remaindering; throws std::runtime_error
/// if it does not stabilise within max_primes (a non-integral polynomial).
HeckeOperator hecke_matrix(HeckeSpace& S, const QuadElement& pi, const HeckeOptions& opt = {});

/// Number of distinct real roots equals the number of distinct roots.
bool real_rooted(const std::vector<BigInt>& charpoly);

/// Exact factor test over Z[X] (ascending coefficients, factor monic).
bool divides(const std::vector<BigInt>& factor, const std::vector<BigInt>& poly);

/// ker q(T_pi) for a quadratic q dividing the charpoly exactly once.
struct NLSubspace {
    QuadElement pi;
    std::vector<BigInt> q;                           ///< ascending, monic, degree 2
    HeckeOperator op;
    std::vector<std::vector<Vec>> kernel;            ///< per layer, two H^1 coordinate vectors
};

NLSubspace nl_subspace(HeckeSpace& S, const QuadElement& pi, const std::vector<BigInt>& q,
                       const HeckeOptions& opt = {});

/// L_{pi'} on NL in the basis (v, T_pi v), rows holding images. Commuting
/// with T_pi forces L = a + b T_pi, so the matrix does not depend on v.
struct NLRestriction {
    Rational a, b;
    std::array<std::array<Rational, 2>, 2> matrix;
    std::vector<BigInt> charpoly;  ///< ascending, monic
    bool scalar() const { return b == 0; }
};

NLRestriction nl_restriction(HeckeSpace& S, const NLSubspace& nl, const QuadElement& pi, const HeckeOptions& opt = {});

/// Rational number congruent to r mod m with numerator and denominator below
/// sqrt(m/2), if one exists.
std::optional<Rational> rational_reconstruct(const BigInt& r, const BigInt& m);

}  // namespace coh
