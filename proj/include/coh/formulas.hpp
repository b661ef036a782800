#pragma once

#include "coh/arith.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace coh {

/// Quadratic field Q(sqrt(d)), d squarefree and != 0, 1.
struct QuadField {
    long d = -1;
    long disc = -4;  ///< fundamental discriminant
    std::vector<std::pair<long, int>> ramified;  ///< (p, exact power of p in disc)

    bool imaginary() const { return d < 0; }
};

QuadField quad_field(long d);
/// Field with the given fundamental discriminant.
QuadField quad_field_from_disc(long D);
bool is_fundamental_discriminant(long D);
/// Kronecker symbol (D | n).
int kronecker(long D, long n);

// ---- Fuchsian groups ----

struct FuchsianData {
    long genus = 0;
    long cusps = 0;
    std::vector<long> orders;  ///< elliptic orders r_i >= 2
};

Rational d_of(long n, long r);
/// dim H^1(G, Sym^n) for n > 0; throws std::domain_error if the data give a
/// non-integral or negative value.
long fuchsian_h1(const FuchsianData& fd, long n);

// ---- bookkeeping functions ----

Rational eps(long n);
Rational mu(long n);
/// nu_{L,n}: 1 unless L is Q(i) (then n odd) or Q(sqrt(-3)) (then n = 2 mod 3).
int nu(const QuadField& L, long n);

// ---- class numbers ----

/// Class number of an imaginary quadratic order of fundamental discriminant D < 0.
long class_number(long D);
/// Narrow class number of the real quadratic field of fundamental discriminant D > 0.
long narrow_class_number(long D);
/// Number of narrow genera, 2^(number of prime divisors of D) / 2.
long genus_number(long D);

/// Imaginary quadratic L != K with LK/K unramified: d_K = d_L d' with coprime
/// fundamental discriminants d_L < 0 and d' > 1.
std::vector<QuadField> lk_fields(const QuadField& K);

// ---- base change dimensions ----

struct BcConstants {
    Rational c2, c3, c4;
};
BcConstants bc_constants(const QuadField& K);

/// The exact value of the closed formula (may be checked for integrality).
Rational bc_dim_rational(const QuadField& K, long n);
/// dim H^1_bc(SL(2,O_K), E_n); throws std::domain_error if not a non-negative integer.
long bc_dim(const QuadField& K, long n);
/// dim H^1_bc(SL(2,a), E_n) for an ideal a of norm `norm_a`.
long bc_dim_ideal(const QuadField& K, long norm_a, long n);
/// dim H^1 - dim H^1_cusp for SL(2,O_K): nu_{K,n} h_K.
long cusp_codim(const QuadField& K, long n);

// ---- CM classes ----

struct CmWitness {
    long real_disc;  ///< discriminant of L'
    long h_plus;
    long g_plus;
};

/// Real quadratic L' with KL'/K unramified and h+ > g+. The flag is true
/// when the list is non-empty.
std::pair<bool, std::vector<CmWitness>> cm_extra(const QuadField& K);
/// Dimension of the CM part of H^1_cusp(SL(2,a), E_n) coming from all L in L(K).
long cm_contribution(const QuadField& K, long norm_a, long n);

}  // namespace coh
