#pragma once

#include <latdyn/torus.hpp>

#include <vector>

namespace latdyn {

// Lattice model of an abelian-variety isogeny: an integer matrix F of even
// size 2g acting on the rank-2g lattice modeling first cohomology.  The
// relevant degree notions live on F: deg = |det F|, and the dynamical degree
// is the SQUARE of the spectral radius of F.
//
// Arbitrary even nonsingular matrices are accepted as the linear-algebra
// shadow; only matrices assembled from Weil blocks (complex-conjugate
// eigenvalue pairs of common modulus sqrt(d), the elliptic-curve case) are
// flagged as realizable by an actual product of CM curves.  Reports carry
// that flag rather than silently over-claiming.

struct WeilBlock {
    BigInt a; // trace
    BigInt d; // norm, >= 1, with a^2 <= 4d
};

inline WeilBlock weil_block(const BigInt& a, const BigInt& d) {
    if (d < 1) throw domain_error("weil block needs norm d >= 1");
    if (a * a > 4 * d) throw domain_error("weil block needs a^2 <= 4d");
    return WeilBlock{a, d};
}

// Companion matrix with characteristic polynomial t^2 - a t + d.
inline IntMatrix weil_companion(const WeilBlock& b) {
    IntMatrix m(2, 2);
    m.at(0, 1) = -b.d;
    m.at(1, 0) = 1;
    m.at(1, 1) = b.a;
    return m;
}

struct AbelianEndo {
    IntMatrix matrix; // 2g x 2g, det != 0
    int g = 0;
    bool weil_built = false; // realizability certificate

    int dim() const { return matrix.rows; }
};

inline AbelianEndo abelian_endo(const IntMatrix& f) {
    if (f.rows != f.cols || f.rows < 2 || f.rows % 2 != 0)
        throw dimension_error("abelian lattice model needs even size 2g >= 2");
    if (determinant(f) == 0) throw domain_error("isogeny requires det(F) != 0");
    return AbelianEndo{f, f.rows / 2, false};
}

inline AbelianEndo abelian_endo(const std::vector<WeilBlock>& blocks) {
    if (blocks.empty()) throw dimension_error("abelian model needs at least one block");
    std::vector<IntMatrix> parts;
    parts.reserve(blocks.size());
    for (const WeilBlock& b : blocks) parts.push_back(weil_companion(b));
    AbelianEndo f;
    f.matrix = block_diag(parts);
    f.g = static_cast<int>(blocks.size());
    f.weil_built = true; // det = product of norms >= 1
    return f;
}

inline BigInt ab_degree(const AbelianEndo& f) { return abs_int(determinant(f.matrix)); }

// d1 = rho(F)^2, exact through the modsq machinery.
inline SpectralRadius ab_dyn_degree(const AbelianEndo& f) {
    return pow_radius(spectral_radius(f.matrix), 2);
}

// Fixed points of the n-th iterate: |det(F^n - I)|.  A vanishing
// determinant means the fixed locus is positive dimensional, which the
// counting model treats as an error rather than a number.
inline BigInt ab_fix_count(const AbelianEndo& f, unsigned long n) {
    if (n == 0) throw domain_error("ab_fix_count: the iterate must be >= 1");
    IntMatrix p = pow(f.matrix, n);
    BigInt d = determinant(sub(p, IntMatrix::identity(p.rows)));
    if (d == 0) throw domain_error("infinite fixed locus: det(F^n - I) = 0");
    return abs_int(d);
}

// Maximal SDD abelian subvariety, as the same primary-component lattice the
// torus construction uses (the threshold rho(F) squares to d1 on both
// sides).  The three radii are reported squared, i.e. as abelian dynamical
// degrees.  For Weil-built matrices the lattice is a union of whole blocks,
// so its rank is even; raw matrices carry no such promise.
inline SddSubgroup ab_sdd_subgroup(const AbelianEndo& f) {
    SddSubgroup s = sdd_subgroup(torus_endo(f.matrix));
    s.d1_restricted = pow_radius(s.d1_restricted, 2);
    s.d1_quotient = pow_radius(s.d1_quotient, 2);
    s.d1_total = pow_radius(s.d1_total, 2);
    return s;
}

struct AbelianCount {
    BigInt count;
    BigInt bound;
};

// count = |det(Fbar^n - I)| on the quotient by the SDD subvariety; the
// quotient eigenvalues all have modulus rho > 1, so the count is positive.
// bound = ceil((rho_hi^n + 1)^(2m)) with 2m the quotient rank and rho_hi a
// rational upper enclosure of rho(F) = sqrt(d1) refined to 1e-6 (exact when
// rho is an integer).  count <= bound since |det(Fbar^n - I)| <=
// prod(|lambda|^n + 1) over the 2m quotient eigenvalues.
// Precomputed-parts form for callers that walk many iterates of one system:
// s from ab_sdd_subgroup, rho an enclosure of rho(F) (refined here, a no-op
// when the caller already tightened it).
inline AbelianCount ab_count_sf(const SddSubgroup& s, const SpectralRadius& rho,
                                unsigned long n) {
    if (n == 0) throw domain_error("ab_count_sf: the iterate must be >= 1");
    BigInt count = count_sf(s, n);
    SpectralRadius r = refined(rho, Rational(1, 1000000));
    Rational base = pow_rational(r.hi, n) + 1;
    BigInt bound = ceil_r(pow_rational(base, static_cast<unsigned long>(s.quotient.rows)));
    return AbelianCount{count, bound};
}

inline AbelianCount ab_count_sf(const AbelianEndo& f, unsigned long n) {
    if (n == 0) throw domain_error("ab_count_sf: the iterate must be >= 1");
    SddSubgroup s = ab_sdd_subgroup(f); // throws when d1 = 1
    return ab_count_sf(s, spectral_radius(f.matrix), n);
}

// Genus-1 fixed-point bound, entirely in integer arithmetic:
// |det(F - I)| <= d + 2 sqrt(d) + 1 iff the excess over d + 1 is <= 0 or
// its square is <= 4d.  True for every valid block since
// |alpha - 1| |conj(alpha) - 1| <= (sqrt(d) + 1)^2.
inline bool curve_lefschetz_check(const WeilBlock& b) {
    if (b.d <= 1) throw domain_error("non-polarized block: need norm d >= 2");
    BigInt fix = abs_int(1 - b.a + b.d);
    BigInt excess = fix - b.d - 1;
    return excess <= 0 || excess * excess <= 4 * b.d;
}

// The optimality family: multiplication by -q on a product of two copies of
// a CM curve.  Odd iterates have exactly (q^(2n+1) + 1)^2 fixed points.
inline BigInt product_divisor_example(const BigInt& q, unsigned long n) {
    if (q < 2) throw domain_error("product divisor example needs q >= 2");
    AbelianEndo f = abelian_endo(scale(IntMatrix::identity(2), -q));
    return ab_fix_count(f, 2 * n + 1);
}

// ---------------------------------------------------------------------------
// Semi-abelian count: the system is stored as a (torus, abelian) pair; all
// implemented quantities are extension independent.  d1 is the exact max of
// the two dynamical degrees; a part whose d1 sits strictly below the global
// one is absorbed into the SDD subgroup wholesale and contributes factor 1,
// the other part contributes its own quotient count.
// ---------------------------------------------------------------------------

inline BigInt semiabelian_count(const TorusEndo& t, const AbelianEndo& a, unsigned long n) {
    if (n == 0) throw domain_error("semiabelian_count: the iterate must be >= 1");
    SpectralRadius dt = dyn_degree(t);
    SpectralRadius da = ab_dyn_degree(a);
    Ordering cmp = radius_compare(dt, da);
    const SpectralRadius& global = cmp == Ordering::less ? da : dt;
    if (radius_compare(global, one_radius()) != Ordering::greater)
        throw no_positive_entropy_error("semi-abelian system needs d1 > 1");
    BigInt tor(1), ab(1);
    if (cmp != Ordering::less) tor = count_sf(t, n);
    if (cmp != Ordering::greater) ab = ab_count_sf(a, n).count;
    return tor * ab;
}

} // namespace latdyn
