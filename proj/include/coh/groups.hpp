#pragma once

#include "coh/number_ring.hpp"

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace coh {

/// 2x2 matrix [[a, b], [c, d]] over an arbitrary element type.
template <class E>
struct Mat2 {
    E a, b, c, d;
};

template <class F>
Mat2<typename F::Elem> mat2_mul(const F& f, const Mat2<typename F::Elem>& x, const Mat2<typename F::Elem>& y) {
    return {f.add(f.mul(x.a, y.a), f.mul(x.b, y.c)), f.add(f.mul(x.a, y.b), f.mul(x.b, y.d)),
            f.add(f.mul(x.c, y.a), f.mul(x.d, y.c)), f.add(f.mul(x.c, y.b), f.mul(x.d, y.d))};
}

template <class F>
typename F::Elem mat2_det(const F& f, const Mat2<typename F::Elem>& x) {
    return f.sub(f.mul(x.a, x.d), f.mul(x.b, x.c));
}

template <class F>
Mat2<typename F::Elem> mat2_inv(const F& f, const Mat2<typename F::Elem>& x) {
    auto di = f.inv(mat2_det(f, x));
    return {f.mul(x.d, di), f.neg(f.mul(x.b, di)), f.neg(f.mul(x.c, di)), f.mul(x.a, di)};
}

template <class F>
Mat2<typename F::Elem> mat2_identity(const F& f) {
    return {f.one(), f.zero(), f.zero(), f.one()};
}

template <class F>
bool mat2_eq(const F& f, const Mat2<typename F::Elem>& x, const Mat2<typename F::Elem>& y) {
    return f.eq(x.a, y.a) && f.eq(x.b, y.b) && f.eq(x.c, y.c) && f.eq(x.d, y.d);
}

/// Is x equal to +I, or to -I when `projective` is set?
template <class F>
bool mat2_is_identity(const F& f, const Mat2<typename F::Elem>& x, bool projective) {
    if (mat2_eq(f, x, mat2_identity(f))) return true;
    if (!projective) return false;
    return f.is_zero(x.b) && f.is_zero(x.c) && f.eq(x.a, f.neg(f.one())) && f.eq(x.d, x.a);
}

struct Letter {
    int gen = 0;  ///< generator index
    int exp = 1;  ///< +1 or -1
    bool operator==(const Letter& o) const { return gen == o.gen && exp == o.exp; }
};
using Word = std::vector<Letter>;

Word word_inverse(const Word& w);
Word word_concat(const Word& a, const Word& b);
Word word_power(const Word& w, long e);
/// Cancels adjacent inverse pairs.
Word word_free_reduce(const Word& w);

/// Parses words such as "(BU^2BU^-1)^2" or "f z g f^{-1}". Names are matched
/// longest-first among the generators and the abbreviations in `macros`.
Word parse_word(const std::string& text, const std::vector<std::string>& generators,
                const std::map<std::string, Word>& macros = {});
std::string format_word(const Word& w, const std::vector<std::string>& generators);

struct MatrixGroupPresentation {
    std::string name;
    std::vector<std::string> generators;
    std::vector<Word> relators;
    std::shared_ptr<const NumberRing> ring;
    std::vector<Mat2<RingElem>> images;
    std::vector<Mat2<RingElem>> conj_images;
    bool projective = true;

    std::size_t num_generators() const { return generators.size(); }
};

/// Fills conj_images from images and checks determinants and relators
/// exactly (throws std::invalid_argument on failure).
void finalize_presentation(MatrixGroupPresentation& p);

/// Exact product of generator images along w.
Mat2<RingElem> evaluate_word(const MatrixGroupPresentation& p, const Word& w);
/// Product through a reduction map; `conjugate` uses the conjugate images.
Mat2<std::uint64_t> evaluate_word(const MatrixGroupPresentation& p, const Word& w, const ReductionMap& r,
                                  bool conjugate = false);
/// Generator images reduced through r.
std::vector<Mat2<std::uint64_t>> reduce_images(const MatrixGroupPresentation& p, const ReductionMap& r,
                                               bool conjugate = false);
/// Reduction maps at p whose generator images reduce without vanishing denominators.
std::vector<ReductionMap> admissible_maps(const MatrixGroupPresentation& p, std::uint64_t prime);

/// Plain-text serialisation (see README for the format).
std::string serialize_presentation(const MatrixGroupPresentation& p);
MatrixGroupPresentation parse_presentation(const std::string& text);

enum class Family { BianchiO, BianchiIdeal, Helling, Klimenko333, Klimenko332, Tetrahedral };

struct CatalogKey {
    Family family = Family::BianchiO;
    long param = 0;
};

/// Parses "bianchi:-7", "bianchi-ideal:-5", "helling:3", "klimenko333:8",
/// "klimenko332:14" or "tetrahedral".
std::optional<CatalogKey> parse_catalog_key(const std::string& s);
std::string catalog_key_string(const CatalogKey& k);

struct UnsupportedKey : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Built-in presentation; throws UnsupportedKey outside the supported range.
MatrixGroupPresentation catalog_get(const CatalogKey& k);
/// All keys of the fixed (non-parametric) part of the catalog.
std::vector<CatalogKey> catalog_fixed_keys();

/// Integer polynomials of the Helling family (ascending coefficients).
std::vector<BigInt> helling_ptilde(int m);
std::vector<BigInt> helling_f(int m);

}  // namespace coh
