#pragma once

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

#include "polynomial.hpp"

namespace latdyn {

// Factorization over Z: unit_sign * content * prod factor^multiplicity
// reconstructs the input exactly. Factors are primitive, irreducible, with
// positive leading coefficient, sorted by degree then coefficients.
struct FactoredPolynomial {
    int unit_sign = 1;
    BigInt content = 1;
    std::vector<std::pair<IntPolynomial, int>> factors;
};

inline constexpr int factor_degree_cap = 16;

// Arithmetic in F_ell[t] for a small odd prime ell. Coefficients live in
// [0, ell) as longs; ell stays below 2^15 so products fit comfortably.
namespace fp {

using Poly = std::vector<long>; // ascending, no trailing zeros

inline void norm(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}
inline int deg(const Poly& a) { return static_cast<int>(a.size()) - 1; }

inline long inv_mod(long a, long ell) {
    long t = 0, nt = 1, r = ell, nr = ((a % ell) + ell) % ell;
    while (nr != 0) {
        long q = r / nr;
        long tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw domain_error("fp: inverse of a non-unit");
    return ((t % ell) + ell) % ell;
}

inline Poly reduce(const IntPolynomial& p, long ell) {
    Poly a(p.coeffs.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        long c = (p.coeffs[i] % ell).convert_to<long>();
        a[i] = c < 0 ? c + ell : c;
    }
    norm(a);
    return a;
}

inline Poly add(const Poly& x, const Poly& y, long ell) {
    Poly r(std::max(x.size(), y.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        long v = (i < x.size() ? x[i] : 0) + (i < y.size() ? y[i] : 0);
        r[i] = v >= ell ? v - ell : v;
    }
    norm(r);
    return r;
}

inline Poly sub(const Poly& x, const Poly& y, long ell) {
    Poly r(std::max(x.size(), y.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        long v = (i < x.size() ? x[i] : 0) - (i < y.size() ? y[i] : 0);
        r[i] = v < 0 ? v + ell : v;
    }
    norm(r);
    return r;
}

inline Poly mul(const Poly& x, const Poly& y, long ell) {
    if (x.empty() || y.empty()) return {};
    Poly r(x.size() + y.size() - 1, 0);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) r[i + j] = (r[i + j] + x[i] * y[j]) % ell;
    norm(r);
    return r;
}

inline Poly scale(const Poly& x, long c, long ell) {
    Poly r = x;
    for (long& v : r) v = (v * c) % ell;
    norm(r);
    return r;
}

inline Poly monic(const Poly& x, long ell) {
    if (x.empty()) throw domain_error("fp: monic of zero");
    return scale(x, inv_mod(x.back(), ell), ell);
}

inline std::pair<Poly, Poly> divmod(const Poly& x, const Poly& y, long ell) {
    if (y.empty()) throw domain_error("fp: division by zero");
    Poly r = x;
    norm(r);
    if (deg(r) < deg(y)) return {Poly{}, r};
    Poly q(static_cast<std::size_t>(deg(r) - deg(y)) + 1, 0);
    long linv = inv_mod(y.back(), ell);
    while (deg(r) >= deg(y)) {
        int sh = deg(r) - deg(y);
        long c = (r.back() * linv) % ell;
        q[static_cast<std::size_t>(sh)] = c;
        for (std::size_t i = 0; i < y.size(); ++i) {
            long v = (r[static_cast<std::size_t>(sh) + i] - c * y[i]) % ell;
            r[static_cast<std::size_t>(sh) + i] = v < 0 ? v + ell : v;
        }
        norm(r);
    }
    norm(q);
    return {q, r};
}

inline Poly gcd(Poly a, Poly b, long ell) {
    while (!b.empty()) {
        Poly r = divmod(a, b, ell).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) a = monic(a, ell);
    return a;
}

// s*a + t*b = 1 for coprime a, b.
inline std::pair<Poly, Poly> bezout(const Poly& a, const Poly& b, long ell) {
    Poly r0 = a, r1 = b, s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
    while (!r1.empty()) {
        auto [q, r2] = divmod(r0, r1, ell);
        Poly s2 = sub(s0, mul(q, s1, ell), ell);
        Poly t2 = sub(t0, mul(q, t1, ell), ell);
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (deg(r0) != 0) throw domain_error("fp: bezout of non-coprime inputs");
    long inv = inv_mod(r0[0], ell);
    return {scale(s0, inv, ell), scale(t0, inv, ell)};
}

inline Poly powmod(Poly base, BigInt e, const Poly& f, long ell) {
    Poly result = {1};
    base = divmod(base, f, ell).second;
    while (e > 0) {
        if ((e & 1) != 0) result = divmod(mul(result, base, ell), f, ell).second;
        base = divmod(mul(base, base, ell), f, ell).second;
        e >>= 1;
    }
    return result;
}

inline Poly deriv(const Poly& a, long ell) {
    Poly r;
    for (std::size_t i = 1; i < a.size(); ++i) r.push_back((a[i] * (static_cast<long>(i) % ell)) % ell);
    norm(r);
    return r;
}

struct DegreeBlock {
    Poly prod;
    int d;
};

// Distinct-degree factorization of a monic squarefree f.
inline std::vector<DegreeBlock> ddf(Poly f, long ell) {
    std::vector<DegreeBlock> out;
    const Poly x = {0, 1};
    Poly r = divmod(x, f, ell).second;
    int d = 0;
    while (deg(f) > 0) {
        ++d;
        if (2 * d > deg(f)) {
            out.push_back({f, deg(f)});
            break;
        }
        r = powmod(r, BigInt(ell), f, ell);
        Poly g = gcd(f, sub(r, x, ell), ell);
        if (deg(g) > 0) {
            out.push_back({g, d});
            f = divmod(f, g, ell).first;
            r = divmod(r, f, ell).second;
        }
    }
    return out;
}

// Equal-degree splitting (Cantor-Zassenhaus, ell odd) of a product of
// distinct irreducibles of degree d.
inline void edf(const Poly& g, int d, long ell, std::mt19937_64& rng, std::vector<Poly>& out) {
    if (deg(g) == d) {
        out.push_back(monic(g, ell));
        return;
    }
    BigInt e = (pow_int(BigInt(ell), static_cast<unsigned long>(d)) - 1) / 2;
    for (int tries = 0; tries < 200; ++tries) {
        Poly u(static_cast<std::size_t>(deg(g)));
        for (long& c : u) c = static_cast<long>(rng() % static_cast<unsigned long>(ell));
        norm(u);
        if (deg(u) < 1) continue;
        Poly w = sub(powmod(u, e, g, ell), Poly{1}, ell);
        Poly h = gcd(g, w, ell);
        if (deg(h) > 0 && deg(h) < deg(g)) {
            edf(h, d, ell, rng, out);
            edf(divmod(g, h, ell).first, d, ell, rng, out);
            return;
        }
    }
    throw capability_error("equal-degree splitting did not converge");
}

inline std::vector<Poly> factor_mod(const Poly& fmonic, long ell) {
    std::vector<Poly> out;
    std::mt19937_64 rng(0x5eed0000ull + static_cast<unsigned long>(ell));
    for (const DegreeBlock& blk : ddf(fmonic, ell)) edf(blk.prod, blk.d, ell, rng, out);
    std::sort(out.begin(), out.end(), [](const Poly& a, const Poly& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        for (std::size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    });
    return out;
}

} // namespace fp

// Arithmetic modulo ell^e over BigInt coefficients, for Hensel lifting.
namespace zq {

inline BigInt mod_pos(const BigInt& x, const BigInt& m) {
    BigInt r = x % m;
    if (r < 0) r += m;
    return r;
}

inline IntPolynomial reduce(const IntPolynomial& p, const BigInt& m) {
    std::vector<BigInt> c = p.coeffs;
    for (BigInt& v : c) v = mod_pos(v, m);
    return IntPolynomial(std::move(c));
}

// Representative with coefficients in (-m/2, m/2); m odd here.
inline IntPolynomial symmetric(const IntPolynomial& p, const BigInt& m) {
    std::vector<BigInt> c = p.coeffs;
    for (BigInt& v : c) {
        v = mod_pos(v, m);
        if (2 * v > m) v -= m;
    }
    return IntPolynomial(std::move(c));
}

// Division by a divisor whose stored leading coefficient is exactly 1.
inline std::pair<IntPolynomial, IntPolynomial> divmod_monic(const IntPolynomial& x,
                                                            const IntPolynomial& y,
                                                            const BigInt& m) {
    if (y.is_zero() || y.lc() != 1) throw domain_error("zq: monic divisor required");
    std::vector<BigInt> r = reduce(x, m).coeffs;
    const int dy = y.degree();
    if (static_cast<int>(r.size()) - 1 < dy) return {IntPolynomial::zero(), IntPolynomial(std::move(r))};
    std::vector<BigInt> q(r.size() - static_cast<std::size_t>(dy), 0);
    for (int d = static_cast<int>(r.size()) - 1; d >= dy; --d) {
        BigInt c = r[static_cast<std::size_t>(d)];
        if (c == 0) continue;
        q[static_cast<std::size_t>(d - dy)] = c;
        for (int i = 0; i <= dy; ++i)
            r[static_cast<std::size_t>(d - dy + i)] =
                mod_pos(r[static_cast<std::size_t>(d - dy + i)] - c * y.coeffs[static_cast<std::size_t>(i)], m);
    }
    r.resize(static_cast<std::size_t>(dy));
    return {IntPolynomial(std::move(q)), IntPolynomial(std::move(r))};
}

inline BigInt inv_mod(const BigInt& a, const BigInt& m) {
    BigInt t = 0, nt = 1, r = m, nr = mod_pos(a, m);
    while (nr != 0) {
        BigInt q = r / nr;
        BigInt tmp = t - q * nt;
        t = std::move(nt);
        nt = std::move(tmp);
        tmp = r - q * nr;
        r = std::move(nr);
        nr = std::move(tmp);
    }
    if (r != 1) throw domain_error("zq: inverse of a non-unit");
    return mod_pos(t, m);
}

} // namespace zq

namespace detail {

inline bool is_prime_long(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline IntPolynomial lift_fp(const fp::Poly& a) {
    std::vector<BigInt> c(a.begin(), a.end());
    return IntPolynomial(std::move(c));
}

// One quadratic lift: given f = g*h and s*g + t*h = 1 at the previous
// precision, rewrites g, h, s, t so both identities hold modulo m2, keeping
// h monic and the degrees fixed.
inline void hensel_step(const IntPolynomial& f, IntPolynomial& g, IntPolynomial& h,
                        IntPolynomial& s, IntPolynomial& t, const BigInt& m2) {
    IntPolynomial e = zq::reduce(sub(f, mul(g, h)), m2);
    auto [q, r] = zq::divmod_monic(mul(s, e), h, m2);
    IntPolynomial g1 = zq::reduce(add(g, add(mul(t, e), mul(q, g))), m2);
    IntPolynomial h1 = zq::reduce(add(h, r), m2);
    IntPolynomial b = zq::reduce(sub(add(mul(s, g1), mul(t, h1)), IntPolynomial::one()), m2);
    auto [c, d] = zq::divmod_monic(mul(s, b), h1, m2);
    g = std::move(g1);
    s = zq::reduce(sub(s, d), m2);
    t = zq::reduce(sub(t, add(mul(t, b), mul(c, g))), m2);
    h = std::move(h1);
}

// Lifts the factor list of `anchor` from mod ell to mod ell^target_e by
// splitting it in halves. anchor = (leftmost ? L : 1) * prod(parts) mod ell,
// and anchor is known modulo ell^target_e. Appends monic lifted factors.
inline void hensel_split(const IntPolynomial& anchor, bool leftmost, const BigInt& L,
                         const std::vector<fp::Poly>& parts, long ell, int target_e,
                         const BigInt& target, std::vector<IntPolynomial>& out) {
    if (parts.size() == 1) {
        IntPolynomial h = zq::reduce(anchor, target);
        if (leftmost) h = zq::reduce(scale(h, zq::inv_mod(h.lc(), target)), target);
        out.push_back(std::move(h));
        return;
    }
    const std::size_t half = parts.size() / 2;
    std::vector<fp::Poly> lparts(parts.begin(), parts.begin() + static_cast<long>(half));
    std::vector<fp::Poly> rparts(parts.begin() + static_cast<long>(half), parts.end());
    fp::Poly a0 = fp::reduce(IntPolynomial::constant(leftmost ? L : BigInt(1)), ell);
    for (const fp::Poly& p : lparts) a0 = fp::mul(a0, p, ell);
    fp::Poly b0 = {1};
    for (const fp::Poly& p : rparts) b0 = fp::mul(b0, p, ell);
    auto [s0, t0] = fp::bezout(a0, b0, ell);
    IntPolynomial a = lift_fp(a0), b = lift_fp(b0), s = lift_fp(s0), t = lift_fp(t0);
    int cur_e = 1;
    BigInt m = ell;
    while (cur_e < target_e) {
        int next_e = std::min(2 * cur_e, target_e);
        m = pow_int(BigInt(ell), static_cast<unsigned long>(next_e));
        hensel_step(anchor, a, b, s, t, m);
        cur_e = next_e;
    }
    hensel_split(a, leftmost, L, lparts, ell, target_e, target, out);
    hensel_split(b, false, L, rparts, ell, target_e, target, out);
}

// Subset recombination: multiplies lc(frem) onto subsets of the lifted monic
// factors, reads coefficients in the symmetric range, and trial-divides.
// Searching cardinalities in increasing order makes every accepted factor
// irreducible.
inline std::vector<IntPolynomial> recombine(IntPolynomial frem, const std::vector<IntPolynomial>& hs,
                                            const BigInt& m) {
    std::vector<IntPolynomial> found;
    std::vector<std::size_t> alive(hs.size());
    for (std::size_t i = 0; i < hs.size(); ++i) alive[i] = i;
    std::size_t c = 1;
    while (2 * c <= alive.size()) {
        std::vector<std::size_t> idx(c);
        for (std::size_t i = 0; i < c; ++i) idx[i] = i;
        bool accepted = false;
        for (;;) {
            IntPolynomial cand = IntPolynomial::constant(frem.lc());
            for (std::size_t pos : idx) cand = zq::reduce(mul(cand, hs[alive[pos]]), m);
            IntPolynomial g = primitive_part(zq::symmetric(cand, m));
            auto quo = try_exact_div(frem, g);
            if (quo && g.degree() >= 1) {
                found.push_back(g);
                frem = primitive_part(*quo);
                for (std::size_t i = c; i-- > 0;)
                    alive.erase(alive.begin() + static_cast<long>(idx[i]));
                accepted = true;
                break;
            }
            // advance to the next c-subset in lexicographic order
            std::size_t i = c;
            while (i > 0 && idx[i - 1] == alive.size() - c + (i - 1)) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < c; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!accepted) ++c;
    }
    if (frem.degree() >= 1) found.push_back(frem);
    return found;
}

// Zassenhaus for a primitive squarefree polynomial with positive lc.
inline std::vector<IntPolynomial> factor_squarefree_primitive(const IntPolynomial& sf) {
    if (sf.degree() == 1) return {sf};
    long ell = 0;
    for (long cand = 3; cand < 32768; cand += 2) {
        if (!is_prime_long(cand)) continue;
        if (sf.lc() % cand == 0) continue;
        fp::Poly fbar = fp::reduce(sf, cand);
        if (fp::deg(fp::gcd(fbar, fp::deriv(fbar, cand), cand)) == 0) {
            ell = cand;
            break;
        }
    }
    if (ell == 0) throw capability_error("factor: no usable small prime");
    fp::Poly fmonic = fp::monic(fp::reduce(sf, ell), ell);
    std::vector<fp::Poly> parts = fp::factor_mod(fmonic, ell);
    if (parts.size() == 1) return {sf};

    // modulus large enough that any true factor, scaled by the leading
    // coefficient, is recovered exactly from its symmetric representative
    BigInt norm2sq = 0;
    for (const BigInt& v : sf.coeffs) norm2sq += v * v;
    BigInt norm2c = isqrt_floor(norm2sq);
    if (norm2c * norm2c < norm2sq) ++norm2c;
    BigInt bound = 2 * (BigInt(1) << static_cast<unsigned>(sf.degree())) * norm2c * abs_int(sf.lc());
    int target_e = 1;
    BigInt target = ell;
    while (target <= bound) {
        target *= ell;
        ++target_e;
    }

    std::vector<IntPolynomial> hs;
    hensel_split(sf, true, sf.lc(), parts, ell, target_e, target, hs);
    return recombine(sf, hs, target);
}

} // namespace detail

inline FactoredPolynomial factor_over_rationals(const IntPolynomial& p) {
    if (p.is_zero()) throw domain_error("factor of the zero polynomial");
    if (p.degree() > factor_degree_cap) throw capability_error("factor: degree cap exceeded");
    FactoredPolynomial out;
    out.content = content(p);
    IntPolynomial q = primitive_part(p);
    if (q.lc() < 0) {
        out.unit_sign = -1;
        q = neg(q);
    }
    if (q.degree() == 0) return out;
    int v = zero_root_order(q);
    if (v > 0) {
        out.factors.push_back({IntPolynomial::t(), v});
        q = shift_down(q, v);
    }
    if (q.degree() >= 1) {
        IntPolynomial sf = squarefree_part(q);
        for (const IntPolynomial& f : detail::factor_squarefree_primitive(sf)) {
            int mult = 0;
            for (;;) {
                auto d = try_exact_div(q, f);
                if (!d) break;
                q = *d;
                ++mult;
            }
            out.factors.push_back({f, mult});
        }
        if (!(q == IntPolynomial::one()))
            throw domain_error("factor: reconstruction left a non-unit remainder");
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const std::pair<IntPolynomial, int>& x, const std::pair<IntPolynomial, int>& y) {
                  if (x.first.degree() != y.first.degree()) return x.first.degree() < y.first.degree();
                  for (std::size_t i = x.first.coeffs.size(); i-- > 0;)
                      if (x.first.coeffs[i] != y.first.coeffs[i]) return x.first.coeffs[i] < y.first.coeffs[i];
                  return false;
              });
    return out;
}

// Convenience reconstruction, mostly for checks.
inline IntPolynomial reconstruct(const FactoredPolynomial& f) {
    IntPolynomial p = IntPolynomial::constant(f.unit_sign * f.content);
    for (const auto& [fac, mult] : f.factors)
        p = mul(p, pow(fac, static_cast<unsigned long>(mult)));
    return p;
}

} // namespace latdyn
