#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "polynomial.hpp"

namespace latdyn {

// Sturm chain of a squarefree polynomial, over the integers. Each step stores
// the negated pseudo-remainder with the sign corrected for the parity of the
// leading-coefficient multiplications, then strips the content; both keep the
// sign pattern of the rational chain at every point.
struct SturmChain {
    std::vector<IntPolynomial> seq; // seq[0] = the squarefree polynomial
};

inline SturmChain sturm_chain(const IntPolynomial& sf) {
    if (sf.is_zero()) throw domain_error("sturm chain of the zero polynomial");
    SturmChain ch;
    ch.seq.push_back(primitive_part(sf));
    if (sf.degree() == 0) return ch;
    ch.seq.push_back(primitive_part(derivative(sf)));
    while (ch.seq.back().degree() >= 1) {
        const IntPolynomial& a = ch.seq[ch.seq.size() - 2];
        const IntPolynomial& b = ch.seq.back();
        auto [r, k] = detail::prem_counted(a, b);
        if (r.is_zero()) throw domain_error("sturm chain: input was not squarefree");
        bool flipped = b.lc() < 0 && (k % 2 == 1); // r = lc^k * true remainder
        ch.seq.push_back(primitive_part(flipped ? r : neg(r)));
    }
    return ch;
}

inline int variations_at(const SturmChain& ch, const Rational& x) {
    int count = 0, prev = 0;
    for (const IntPolynomial& s : ch.seq) {
        int sg = sign_at(s, x);
        if (sg == 0) continue;
        if (prev != 0 && sg != prev) ++count;
        prev = sg;
    }
    return count;
}

inline int variations_at_pos_inf(const SturmChain& ch) {
    int count = 0, prev = 0;
    for (const IntPolynomial& s : ch.seq) {
        int sg = s.lc() > 0 ? 1 : -1;
        if (prev != 0 && sg != prev) ++count;
        prev = sg;
    }
    return count;
}

inline int variations_at_neg_inf(const SturmChain& ch) {
    int count = 0, prev = 0;
    for (const IntPolynomial& s : ch.seq) {
        int sg = s.lc() > 0 ? 1 : -1;
        if (s.degree() % 2 == 1) sg = -sg;
        if (prev != 0 && sg != prev) ++count;
        prev = sg;
    }
    return count;
}

inline int count_real_roots(const SturmChain& ch) {
    return variations_at_neg_inf(ch) - variations_at_pos_inf(ch);
}

// Distinct real roots in the open interval (a, b). Endpoints must not be
// roots; the callers below arrange that.
inline int count_roots_between(const SturmChain& ch, const Rational& a, const Rational& b) {
    if (a >= b) throw domain_error("count_roots_between: empty interval");
    if (sign_at(ch.seq[0], a) == 0 || sign_at(ch.seq[0], b) == 0)
        throw domain_error("count_roots_between: endpoint is a root");
    return variations_at(ch, a) - variations_at(ch, b);
}

inline int count_roots_above(const SturmChain& ch, const Rational& a) {
    if (sign_at(ch.seq[0], a) == 0) throw domain_error("count_roots_above: endpoint is a root");
    return variations_at(ch, a) - variations_at_pos_inf(ch);
}

// Every complex root z of p has |z| < the returned bound (strict), so the
// bound and its negative are never roots themselves.
inline Rational cauchy_root_bound(const IntPolynomial& p) {
    if (p.degree() < 1) throw domain_error("root bound of a constant");
    Rational m = 0;
    BigInt lead = abs_int(p.lc());
    for (int i = 0; i < p.degree(); ++i) {
        Rational c = Rational(abs_int(p.coeff(i))) / Rational(lead);
        if (c > m) m = c;
    }
    return m + 1;
}

inline IntPolynomial linear_from_root(const Rational& r) {
    return IntPolynomial({-numerator_of(r), denominator_of(r)});
}

// True iff r is a real root of sf (squarefree) with no real root above it.
// Works by deflating the exactly-known factor, so r being a root of sf is
// not an obstacle to Sturm counting.
inline bool is_top_root(const IntPolynomial& sf, const Rational& r) {
    if (sf.degree() < 1 || sign_at(sf, r) != 0) return false;
    IntPolynomial rest = exact_div(sf, linear_from_root(r));
    if (rest.degree() < 1) return true;
    return count_roots_above(sturm_chain(rest), r) == 0;
}

struct RootInterval {
    Rational lo, hi;
    bool exact = false; // exact implies lo == hi == the root

    Rational width() const { return hi - lo; }
};

// Encloses the largest real root of p in an interval of width at most
// `width` (or returns it exactly when a bisection point lands on it).
// nullopt when p has no real roots. The enclosure guarantee is one-sided
// strong: no real root of p lies at or above the returned hi unless the
// result is exact.
inline std::optional<RootInterval> largest_real_root(const IntPolynomial& p, const Rational& width) {
    if (p.is_zero()) throw domain_error("largest_real_root of the zero polynomial");
    if (width <= 0) throw domain_error("largest_real_root: width must be positive");
    IntPolynomial sf = squarefree_part(p);
    if (sf.degree() < 1) return std::nullopt;
    if (sf.degree() == 1) {
        Rational r(-sf.coeffs[0], sf.coeffs[1]);
        return RootInterval{r, r, true};
    }
    SturmChain ch = sturm_chain(sf);
    if (count_real_roots(ch) == 0) return std::nullopt;
    Rational bound = cauchy_root_bound(sf);
    Rational lo = -bound, hi = bound;
    // invariant: at least one root in (lo, hi), none in [hi, oo)
    for (;;) {
        if (hi - lo <= width) return RootInterval{lo, hi, false};
        Rational mid = (lo + hi) / 2;
        if (sign_at(sf, mid) == 0) {
            if (is_top_root(sf, mid)) return RootInterval{mid, mid, true};
            lo = mid;
        } else if (count_roots_between(ch, mid, hi) >= 1) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

} // namespace latdyn
