#pragma once

#include "coh/arith.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace coh {

/// Element of a NumberRing: rational coefficients on the monomial basis
/// x_1^{e_1}...x_k^{e_k}, e_i < deg_i, with the first level varying fastest.
struct RingElem {
    std::vector<Rational> c;
    bool operator==(const RingElem& o) const { return c == o.c; }
};

/// A ring homomorphism from a NumberRing to F_p together with its
/// composition with the involution.
struct ReductionMap {
    std::uint64_t p = 2;
    std::vector<std::uint64_t> roots;       ///< image of each level generator
    std::vector<std::uint64_t> conj_roots;  ///< image of each generator under map∘involution
    PrimeField field() const { return PrimeField(p); }
    bool self_conjugate() const { return roots == conj_roots; }
    /// The map composed with the involution (roots and conjugate roots swapped).
    ReductionMap conjugate() const { return {p, conj_roots, roots}; }
};

/// Triangular tower Q[x_1]/(f_1)[x_2]/(f_2)... with monic f_i whose
/// coefficients lie in the previous levels, an involution given on the
/// generators, and a set of elements required to stay invertible.
class NumberRing {
public:
    struct Level {
        std::string var;
        int degree = 1;
        /// Non-leading coefficients c_0..c_{deg-1} of x^deg + sum c_r x^r,
        /// each an element of the previous levels (size = lower dimension).
        std::vector<std::vector<Rational>> coeffs;
    };

    NumberRing() = default;

    /// Adds a level; `poly` is a monic polynomial in `var` with coefficients
    /// written in the variables of earlier levels.
    void add_level(const std::string& var, const std::string& poly);
    /// Adds the level x^deg + sum coeffs[r] x^r with coefficients taken
    /// from the current tower.
    void add_level(const std::string& var, const std::vector<RingElem>& coeffs);
    /// Pads an element created before later levels were added.
    RingElem embed(const RingElem& a) const;
    /// Sets the involution by the images of every level generator, then validates.
    void set_involution(const std::vector<std::string>& images);
    void set_involution(const std::vector<RingElem>& images);
    void add_denominator(const std::string& expr);
    void add_denominator(const RingElem& e);

    std::size_t num_levels() const { return levels_.size(); }
    const Level& level(std::size_t k) const { return levels_[k]; }
    std::size_t dim() const { return dims_.back(); }
    const std::vector<RingElem>& involution() const { return tau_; }
    const std::vector<RingElem>& denominators() const { return denominators_; }
    int var_index(const std::string& name) const;

    RingElem zero() const;
    RingElem one() const;
    RingElem constant(const Rational& q) const;
    RingElem gen(std::size_t k) const;
    RingElem parse(const std::string& expr) const;
    std::string format(const RingElem& a) const;

    RingElem add(const RingElem& a, const RingElem& b) const;
    RingElem sub(const RingElem& a, const RingElem& b) const;
    RingElem neg(const RingElem& a) const;
    RingElem mul(const RingElem& a, const RingElem& b) const;
    /// Throws DivisionByZero if `a` is not invertible in the tower.
    RingElem inv(const RingElem& a) const;
    RingElem div(const RingElem& a, const RingElem& b) const { return mul(a, inv(b)); }
    RingElem pow(const RingElem& a, long e) const;
    bool is_zero(const RingElem& a) const;
    bool eq(const RingElem& a, const RingElem& b) const { return a.c == b.c; }
    /// Complex conjugation (the involution extended as a ring map).
    RingElem conj(const RingElem& a) const;
    /// Is the element a rational number (all non-constant coefficients zero)?
    bool is_rational(const RingElem& a) const;

    /// All admissible reduction maps at the prime p (empty when none exist).
    std::vector<ReductionMap> reduction_maps(std::uint64_t p) const;
    /// Applies the map; with `conjugate` the map∘involution is used.
    std::uint64_t reduce(const ReductionMap& r, const RingElem& a, bool conjugate = false) const;
    /// Reduces under an explicit assignment of generator images.
    std::uint64_t reduce_at(const PrimeField& F, const std::vector<std::uint64_t>& roots, const RingElem& a) const;

private:
    using Vec = std::vector<Rational>;
    std::vector<Level> levels_;
    std::vector<std::size_t> dims_{1};  // dims_[k] = dimension of the first k levels
    std::vector<RingElem> tau_;
    std::vector<RingElem> denominators_;

    Vec mul_at(const Vec& a, const Vec& b, std::size_t k) const;
    Vec inv_at(const Vec& a, std::size_t k) const;
    std::uint64_t reduce_prefix(const PrimeField& F, const std::vector<std::uint64_t>& roots, const Rational* a,
                                std::size_t k) const;
    void validate_involution() const;
};

/// Builds and validates a ring: levels as (variable, monic polynomial),
/// involution images per generator, and the invertible denominators.
NumberRing ring_define(const std::vector<std::pair<std::string, std::string>>& levels,
                       const std::vector<std::string>& involution, const std::vector<std::string>& denominators);

/// The NumberRing viewed as a field (valid when the tower is a field), for
/// the generic linear algebra.
struct TowerField {
    using Elem = RingElem;
    std::shared_ptr<const NumberRing> R;
    Elem zero() const { return R->zero(); }
    Elem one() const { return R->one(); }
    Elem from_int(std::int64_t v) const { return R->constant(Rational(static_cast<long>(v))); }
    Elem add(const Elem& a, const Elem& b) const { return R->add(a, b); }
    Elem sub(const Elem& a, const Elem& b) const { return R->sub(a, b); }
    Elem neg(const Elem& a) const { return R->neg(a); }
    Elem mul(const Elem& a, const Elem& b) const { return R->mul(a, b); }
    Elem inv(const Elem& a) const { return R->inv(a); }
    bool is_zero(const Elem& a) const { return R->is_zero(a); }
    bool eq(const Elem& a, const Elem& b) const { return R->eq(a, b); }
    std::string str(const Elem& a) const { return R->format(a); }
};

}  // namespace coh
