#pragma once

#include <latdyn/charpoly.hpp>
#include <latdyn/factor.hpp>
#include <latdyn/matrix.hpp>
#include <latdyn/sturm.hpp>

#include <optional>
#include <utility>
#include <vector>

namespace latdyn {

// Exact spectral radius of an integer matrix, represented by a squarefree
// integer polynomial whose largest real root is rho^2, plus a rational
// enclosure of rho itself.  Squaring sidesteps complex arithmetic: the
// eigenvalue moduli squared are real roots of a resultant built from the
// characteristic polynomial, and rho^2 is the largest of them.
//
// For a nonzero integer matrix rho is either 0 (nilpotent) or >= 1: the
// product of the moduli of the nonzero eigenvalues is the absolute value of
// the lowest nonzero coefficient of the monic characteristic polynomial,
// hence >= 1.  That dichotomy is what makes the square-root enclosures below
// well conditioned.

struct SpectralRadius {
    // Squarefree with positive leading coefficient; largest real root is
    // rho^2.  Monic whenever it came from a monic characteristic polynomial.
    IntPolynomial modsq_minpoly;
    // 0 <= lo <= rho <= hi, with lo^2 <= (largest real root) <= hi^2.
    Rational lo, hi;
    // When set, rho = lo = hi exactly.
    bool exact = false;
    // Irreducible factors of the characteristic polynomial whose largest
    // root modulus equals rho.  Filled by spectral_radius; empty for values
    // built by pow_radius or the scalar constructors.
    std::vector<IntPolynomial> attaining_factors;
};

enum class Ordering { less, equal, greater };

// ---------------------------------------------------------------------------
// modsq_poly: squarefree polynomial whose largest real root is rho(p)^2.
//
// Writing p = t^v * q with q(0) != 0 and n = deg q, the resultant
//   Gamma(t) = Res_z(q(z), z^n * q(t/z))
// has roots exactly the pairwise products alpha*beta of roots of q; among
// them alpha * conj(alpha) = |alpha|^2 for every root, so the largest real
// root of Gamma is max |alpha|^2 = rho(q)^2 (any real root alpha*beta is
// bounded by rho^2 in absolute value).  The second resultant argument, as a
// polynomial in z, has coefficient a_{n-k} * t^{n-k} at z^k.  A factor t is
// put back when v > 0 so that rho = 0 cases keep root 0.
// ---------------------------------------------------------------------------

inline IntPolynomial modsq_poly(const IntPolynomial& p) {
    if (p.is_zero()) throw domain_error("modsq_poly of the zero polynomial");
    int v = zero_root_order(p);
    IntPolynomial q = p;
    for (int i = 0; i < v; ++i) q = exact_div(q, IntPolynomial::t());
    const int n = q.degree();
    if (n == 0) {
        // Constant after stripping zero roots: rho = 0, keep root 0 only.
        return IntPolynomial::t();
    }
    GPoly<IntPolynomial> A, B;
    A.c.reserve(static_cast<std::size_t>(n) + 1);
    B.c.reserve(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        A.c.push_back(IntPolynomial::constant(q.coeffs[static_cast<std::size_t>(k)]));
        // z^k coefficient of z^n * q(t/z): a_{n-k} * t^{n-k}.
        IntPolynomial term;
        const BigInt& ank = q.coeffs[static_cast<std::size_t>(n - k)];
        if (ank != 0) {
            term.coeffs.assign(static_cast<std::size_t>(n - k) + 1, BigInt(0));
            term.coeffs.back() = ank;
        }
        B.c.push_back(term);
    }
    A.normalize();
    B.normalize();
    IntPolynomial gamma = prs_resultant<IntPolynomial>(A, B);
    IntPolynomial msq = squarefree_part(gamma);
    if (v > 0 && sign_at(msq, Rational(0)) != 0) msq = mul(msq, IntPolynomial::t());
    return msq;
}

// ---------------------------------------------------------------------------
// Exact root-membership test used by the comparator: does the largest real
// root of squarefree msq also vanish on g?  Works by shrinking an isolating
// interval; rational bisection points that happen to be roots are deflated
// from both polynomials in parallel, which preserves roots(g) inside
// roots(msq) and keeps every Sturm count endpoint-root free.
// ---------------------------------------------------------------------------

inline bool top_root_in(const IntPolynomial& msq, const IntPolynomial& g0) {
    IntPolynomial m = msq, g = g0;
    if (g.degree() < 1) return false;
    SturmChain ch = sturm_chain(m);
    if (count_real_roots(ch) == 0) throw domain_error("top_root_in: no real roots");
    Rational bound = cauchy_root_bound(m);
    Rational lo = -bound, hi = bound;
    // invariant: the top root of m lies in (lo, hi), none in [hi, oo),
    // and neither endpoint is a root of the current m.
    for (;;) {
        if (count_roots_between(ch, lo, hi) == 1)
            return count_roots_between(sturm_chain(g), lo, hi) == 1;
        Rational mid = (lo + hi) / 2;
        if (sign_at(m, mid) == 0) {
            if (is_top_root(m, mid)) return sign_at(g, mid) == 0;
            IntPolynomial lin = linear_from_root(mid);
            m = exact_div(m, lin);
            ch = sturm_chain(m);
            if (sign_at(g, mid) == 0) {
                g = exact_div(g, lin);
                if (g.degree() < 1) return false;
            }
            continue;
        }
        if (count_roots_between(ch, mid, hi) >= 1) lo = mid; else hi = mid;
    }
}

// sqrt(x) when it is rational: both parts of x in lowest terms must be
// perfect squares.
inline std::optional<Rational> exact_sqrt_rational(const Rational& x) {
    if (x < 0) return std::nullopt;
    BigInt nu = numerator_of(x), de = denominator_of(x);
    BigInt sn = isqrt_floor(nu), sd = isqrt_floor(de);
    if (sn * sn == nu && sd * sd == de) return Rational(sn, sd);
    return std::nullopt;
}

namespace detail {

// Enclose rho = sqrt(top root of msq) to the requested width.  The root
// interval at width w/2 plus sqrt enclosures at w/8 lands under w because
// either rho = 0 exactly or rho >= 1 (see the header comment).
inline void enclose_from_modsq(SpectralRadius& r, const Rational& width) {
    Rational rw = width > 1 ? Rational(1, 2) : width / 2;
    auto s = largest_real_root(r.modsq_minpoly, rw);
    if (!s) throw domain_error("spectral enclosure: no real root");
    if (s->exact) {
        if (auto rt = exact_sqrt_rational(s->lo)) {
            r.lo = r.hi = *rt;
            r.exact = true;
            return;
        }
        auto e = sqrt_enclose(s->lo, width / 2);
        r.lo = e.first;
        r.hi = e.second;
        return;
    }
    Rational l = s->lo < 0 ? Rational(0) : s->lo;
    r.lo = sqrt_enclose(l, width / 8).first;
    r.hi = sqrt_enclose(s->hi, width / 8).second;
    if (r.lo < 0) r.lo = 0;
}

} // namespace detail

// Build a SpectralRadius from a precomputed modsq polynomial.  Snaps integer
// radii to exact points (rational radii of monic inputs are automatically
// integers, by the rational root theorem applied to modsq).
inline SpectralRadius radius_from_modsq(const IntPolynomial& msq,
                                        const Rational& width = Rational(1, 10000)) {
    if (width <= 0) throw domain_error("radius enclosure width must be positive");
    SpectralRadius r;
    r.modsq_minpoly = msq;
    auto s = largest_real_root(msq, Rational(1, 16));
    if (!s) throw domain_error("spectral radius: modsq polynomial has no real root");
    if (!s->exact) {
        // Width 1/16 < 1 admits at most one integer k with k^2 inside.
        Rational top = s->hi < 0 ? Rational(0) : s->hi;
        BigInt kb = isqrt_floor(floor_r(top));
        for (BigInt k = kb; k <= kb + 1; ++k) {
            if (is_top_root(msq, Rational(k * k))) {
                r.lo = r.hi = Rational(k);
                r.exact = true;
                return r;
            }
        }
    }
    detail::enclose_from_modsq(r, width);
    return r;
}

// Same radius with the enclosure tightened to the given width.  Returns a
// new value; enclosures only ever shrink.
inline SpectralRadius refined(const SpectralRadius& a, const Rational& width) {
    if (width <= 0) throw domain_error("radius enclosure width must be positive");
    if (a.exact || a.hi - a.lo <= width) return a;
    SpectralRadius r = a;
    detail::enclose_from_modsq(r, width);
    if (!r.exact) {
        if (r.lo < a.lo) r.lo = a.lo;
        if (r.hi > a.hi) r.hi = a.hi;
    }
    return r;
}

// Exact nonnegative integer radius (modsq = t - k^2).
inline SpectralRadius integer_radius(const BigInt& k) {
    if (k < 0) throw domain_error("integer_radius of a negative value");
    SpectralRadius r;
    r.modsq_minpoly = IntPolynomial{-(k * k), BigInt(1)};
    r.lo = r.hi = Rational(k);
    r.exact = true;
    return r;
}

inline SpectralRadius one_radius() { return integer_radius(BigInt(1)); }

// Largest root modulus of an integer polynomial.
inline SpectralRadius poly_radius(const IntPolynomial& p) {
    return radius_from_modsq(modsq_poly(p));
}

// ---------------------------------------------------------------------------
// Total comparison.  Interval refinement decides all strict inequalities; a
// tie that survives the quick rounds is settled exactly: rho(a) = rho(b) iff
// both top roots of the modsq polynomials are roots of their gcd (the gcd's
// roots are common roots, and a shared top root forces equality both ways).
// The quick phase spends roughly 256 bisection steps before the gcd branch.
// ---------------------------------------------------------------------------

inline Ordering radius_compare(const SpectralRadius& a, const SpectralRadius& b) {
    if (a.exact && b.exact)
        return a.lo < b.lo ? Ordering::less
                           : (a.lo == b.lo ? Ordering::equal : Ordering::greater);
    auto decide = [](const SpectralRadius& x, const SpectralRadius& y) -> std::optional<Ordering> {
        if (x.hi < y.lo) return Ordering::less;
        if (y.hi < x.lo) return Ordering::greater;
        return std::nullopt;
    };
    if (auto d = decide(a, b)) return *d;
    SpectralRadius ra = a, rb = b;
    Rational w(1, 1024);
    for (int round = 0; round < 3; ++round) {
        ra = refined(ra, w);
        rb = refined(rb, w);
        if (auto d = decide(ra, rb)) return *d;
        w = w * w;
    }
    IntPolynomial g = gcd(a.modsq_minpoly, b.modsq_minpoly);
    if (g.degree() >= 1 && top_root_in(a.modsq_minpoly, g) && top_root_in(b.modsq_minpoly, g))
        return Ordering::equal;
    // Distinct algebraic numbers separate at some finite width.
    for (;;) {
        ra = refined(ra, w);
        rb = refined(rb, w);
        if (auto d = decide(ra, rb)) return *d;
        w = w * w;
    }
}

// ---------------------------------------------------------------------------
// Radius of the k-th iterate: rho(M^k) = rho(M)^k, computed on the modsq
// side as Res_z(modsq(z), t - z^k), whose roots are the k-th powers of the
// modsq roots.  The largest real one is (rho^2)^k since every root is
// bounded by rho^2 in modulus and (rho^2)^k itself appears.
// ---------------------------------------------------------------------------

inline SpectralRadius pow_radius(const SpectralRadius& a, unsigned long k) {
    if (k == 0) throw domain_error("pow_radius: exponent must be >= 1");
    if (k == 1) return a;
    GPoly<IntPolynomial> A, B;
    A.c.reserve(a.modsq_minpoly.coeffs.size());
    for (const BigInt& c : a.modsq_minpoly.coeffs) A.c.push_back(IntPolynomial::constant(c));
    A.normalize();
    B.c.assign(static_cast<std::size_t>(k) + 1, IntPolynomial::zero());
    B.c[0] = IntPolynomial::t();
    B.c[static_cast<std::size_t>(k)] = IntPolynomial::constant(BigInt(-1));
    IntPolynomial msq = squarefree_part(prs_resultant<IntPolynomial>(A, B));
    SpectralRadius r = radius_from_modsq(msq);
    if (a.exact && !r.exact) {
        r.lo = r.hi = pow_rational(a.lo, k);
        r.exact = true;
    }
    return r;
}

// rho as an integer, when it is one.  Rational radii of monic systems are
// always integers, so this is exactly the "is the radius rational" question.
inline std::optional<BigInt> radius_integer_value(const SpectralRadius& a) {
    SpectralRadius r = a.exact ? a : refined(a, Rational(1, 4));
    if (r.exact) {
        if (denominator_of(r.lo) == 1) return numerator_of(r.lo);
        return std::nullopt;
    }
    BigInt k = floor_r(r.hi);
    if (k >= 0 && Rational(k) >= r.lo && is_top_root(a.modsq_minpoly, Rational(k * k)))
        return k;
    return std::nullopt;
}

// Exact ceil(rho^n).  Interval powers decide almost always; when the power
// interval straddles an integer k, the tie rho^n = k is settled exactly via
// gcd(modsq, x^n - k^2) (for rho >= 0, rho^n = k iff rho^2 is a root of
// x^n - k^2).
inline BigInt ceil_radius_pow(const SpectralRadius& a, unsigned long n) {
    if (n == 0) return BigInt(1);
    if (a.exact) return ceil_r(pow_rational(a.lo, n));
    SpectralRadius r = a;
    // |hi^n - lo^n| <= n * hi^(n-1) * (hi - lo), so this width usually pins
    // ceil(rho^n) on the first pass.
    Rational hi1 = r.hi < 1 ? Rational(1) : r.hi;
    Rational w = Rational(1, 2 * BigInt(n)) / pow_rational(hi1, n - 1);
    std::vector<BigInt> ruled_out;
    for (;;) {
        r = refined(r, w);
        // Snap the endpoints outward to short decimals before powering;
        // bisection endpoints carry numerators far too big to raise to n.
        unsigned long digits =
            static_cast<unsigned long>(int_str(ceil_r(Rational(1) / w)).size()) + 1;
        BigInt scale = pow_int(10, digits);
        Rational slo = Rational(floor_r(r.lo * Rational(scale)), scale);
        Rational shi = Rational(ceil_r(r.hi * Rational(scale)), scale);
        if (slo < 0) slo = Rational(0);
        Rational plo = pow_rational(slo, n), phi = pow_rational(shi, n);
        BigInt clo = ceil_r(plo), chi = ceil_r(phi);
        if (clo == chi) return clo;
        BigInt kmax = floor_r(phi);
        if (kmax - clo <= 3) {
            for (BigInt k = clo; k <= kmax; ++k) {
                if (k < 0) continue;
                bool seen = false;
                for (const BigInt& o : ruled_out) seen = seen || o == k;
                if (seen) continue;
                IntPolynomial q;
                q.coeffs.assign(static_cast<std::size_t>(n) + 1, BigInt(0));
                q.coeffs[0] = -(k * k);
                q.coeffs[static_cast<std::size_t>(n)] = 1;
                IntPolynomial g = gcd(a.modsq_minpoly, q);
                if (g.degree() >= 1 && top_root_in(a.modsq_minpoly, g)) return k;
                ruled_out.push_back(k);
            }
        }
        w = w / 1024;
    }
}

// ---------------------------------------------------------------------------
// Spectral radius of a square integer matrix.  The 0 x 0 matrix is the
// empty system and reports the multiplicative unit 1.  Nilpotent matrices
// report rho = 0 exactly (modsq collapses to t).  attaining_factors lists
// the irreducible characteristic factors whose own radius ties the whole,
// which is what the small-degree splitting downstream keys on.
// ---------------------------------------------------------------------------

inline SpectralRadius spectral_radius(const IntMatrix& m) {
    if (m.rows != m.cols) throw dimension_error("spectral_radius needs a square matrix");
    if (m.rows == 0) return integer_radius(BigInt(1));
    IntPolynomial cp = charpoly(m);
    SpectralRadius whole = radius_from_modsq(modsq_poly(cp));
    // Factor-level data only within the factorization cap; the radius itself
    // has no such limit.  Beyond the cap the list stays empty (for any
    // factored nonzero system at least one factor attains, so an empty list
    // is unambiguous).
    if (cp.degree() <= factor_degree_cap) {
        FactoredPolynomial f = factor_over_rationals(cp);
        for (const auto& fac : f.factors) {
            SpectralRadius rq = radius_from_modsq(modsq_poly(fac.first));
            if (radius_compare(rq, whole) == Ordering::equal)
                whole.attaining_factors.push_back(fac.first);
        }
    }
    return whole;
}

} // namespace latdyn
