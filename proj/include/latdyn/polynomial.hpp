#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "errors.hpp"

namespace latdyn {

// Dense univariate polynomial over Z, coefficients ascending by degree.
// Invariant: coeffs is empty (the zero polynomial) or coeffs.back() != 0.
struct IntPolynomial {
    std::vector<BigInt> coeffs;

    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<BigInt> c) : coeffs(std::move(c)) { normalize(); }
    IntPolynomial(std::initializer_list<BigInt> c) : coeffs(c) { normalize(); }

    void normalize() {
        while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    }

    bool is_zero() const { return coeffs.empty(); }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; } // -1 for zero

    const BigInt& lc() const {
        if (is_zero()) throw domain_error("leading coefficient of the zero polynomial");
        return coeffs.back();
    }

    BigInt coeff(int i) const {
        if (i < 0 || i >= static_cast<int>(coeffs.size())) return BigInt(0);
        return coeffs[static_cast<std::size_t>(i)];
    }

    bool is_monic() const { return !is_zero() && coeffs.back() == 1; }

    bool operator==(const IntPolynomial& o) const { return coeffs == o.coeffs; }
    bool operator!=(const IntPolynomial& o) const { return !(*this == o); }

    static IntPolynomial zero() { return IntPolynomial(); }
    static IntPolynomial one() { return IntPolynomial{BigInt(1)}; }
    static IntPolynomial t() { return IntPolynomial{BigInt(0), BigInt(1)}; }
    static IntPolynomial constant(const BigInt& c) { return IntPolynomial{c}; }
};

inline IntPolynomial add(const IntPolynomial& x, const IntPolynomial& y) {
    std::vector<BigInt> c(std::max(x.coeffs.size(), y.coeffs.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = x.coeff(static_cast<int>(i)) + y.coeff(static_cast<int>(i));
    return IntPolynomial(std::move(c));
}

inline IntPolynomial sub(const IntPolynomial& x, const IntPolynomial& y) {
    std::vector<BigInt> c(std::max(x.coeffs.size(), y.coeffs.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = x.coeff(static_cast<int>(i)) - y.coeff(static_cast<int>(i));
    return IntPolynomial(std::move(c));
}

inline IntPolynomial neg(const IntPolynomial& x) {
    std::vector<BigInt> c = x.coeffs;
    for (auto& v : c) v = -v;
    return IntPolynomial(std::move(c));
}

inline IntPolynomial mul(const IntPolynomial& x, const IntPolynomial& y) {
    if (x.is_zero() || y.is_zero()) return IntPolynomial::zero();
    std::vector<BigInt> c(x.coeffs.size() + y.coeffs.size() - 1);
    for (std::size_t i = 0; i < x.coeffs.size(); ++i) {
        if (x.coeffs[i] == 0) continue;
        for (std::size_t j = 0; j < y.coeffs.size(); ++j) c[i + j] += x.coeffs[i] * y.coeffs[j];
    }
    for (const BigInt& v : c) guard_bits(v);
    return IntPolynomial(std::move(c));
}

inline IntPolynomial scale(const IntPolynomial& x, const BigInt& c) {
    if (c == 0) return IntPolynomial::zero();
    std::vector<BigInt> r = x.coeffs;
    for (auto& v : r) v *= c;
    return IntPolynomial(std::move(r));
}

// x * t^k
inline IntPolynomial shift_up(const IntPolynomial& x, int k) {
    if (x.is_zero()) return x;
    std::vector<BigInt> c(static_cast<std::size_t>(k), BigInt(0));
    c.insert(c.end(), x.coeffs.begin(), x.coeffs.end());
    return IntPolynomial(std::move(c));
}

inline IntPolynomial pow(const IntPolynomial& x, unsigned long e) {
    IntPolynomial acc = IntPolynomial::one();
    IntPolynomial base = x;
    unsigned long k = e;
    while (k) {
        if (k & 1) acc = mul(acc, base);
        k >>= 1;
        if (k) base = mul(base, base);
    }
    return acc;
}

inline IntPolynomial derivative(const IntPolynomial& x) {
    if (x.degree() <= 0) return IntPolynomial::zero();
    std::vector<BigInt> c(x.coeffs.size() - 1);
    for (std::size_t i = 1; i < x.coeffs.size(); ++i) c[i - 1] = x.coeffs[i] * BigInt(i);
    return IntPolynomial(std::move(c));
}

inline BigInt eval(const IntPolynomial& x, const BigInt& v) {
    BigInt acc = 0;
    for (std::size_t i = x.coeffs.size(); i-- > 0;) acc = acc * v + x.coeffs[i];
    return acc;
}

inline Rational eval(const IntPolynomial& x, const Rational& v) {
    Rational acc = 0;
    for (std::size_t i = x.coeffs.size(); i-- > 0;) acc = acc * v + Rational(x.coeffs[i]);
    return acc;
}

// Sign of p(u/v) for v > 0, computed as the integer sum c_i u^i v^(deg-i).
inline int sign_at(const IntPolynomial& p, const Rational& x) {
    if (p.is_zero()) return 0;
    const BigInt u = numerator_of(x), v = denominator_of(x);
    int n = p.degree();
    BigInt acc = 0, upow = 1;
    std::vector<BigInt> vpow(static_cast<std::size_t>(n) + 1);
    vpow[static_cast<std::size_t>(n)] = 1;
    for (int i = n - 1; i >= 0; --i) vpow[static_cast<std::size_t>(i)] = vpow[static_cast<std::size_t>(i) + 1] * v;
    for (int i = 0; i <= n; ++i) {
        acc += p.coeffs[static_cast<std::size_t>(i)] * upow * vpow[static_cast<std::size_t>(i)];
        upow *= u;
    }
    if (acc == 0) return 0;
    return acc > 0 ? 1 : -1;
}

// gcd of all coefficients, >= 0; content of the zero polynomial is 0.
inline BigInt content(const IntPolynomial& x) {
    BigInt g = 0;
    for (const auto& v : x.coeffs) {
        g = gcd_int(g, v);
        if (g == 1) break;
    }
    return g;
}

// x / content(x); sign of the leading coefficient is preserved. pp(0) = 0.
inline IntPolynomial primitive_part(const IntPolynomial& x) {
    BigInt c = content(x);
    if (c == 0 || c == 1) return x;
    std::vector<BigInt> r = x.coeffs;
    for (auto& v : r) v /= c;
    return IntPolynomial(std::move(r));
}

// Exact division in Z[t]; nullopt when y does not divide x there.
inline std::optional<IntPolynomial> try_exact_div(const IntPolynomial& x, const IntPolynomial& y) {
    if (y.is_zero()) throw domain_error("polynomial division by zero");
    if (x.is_zero()) return IntPolynomial::zero();
    if (x.degree() < y.degree()) return std::nullopt;
    std::vector<BigInt> rem = x.coeffs;
    std::vector<BigInt> q(static_cast<std::size_t>(x.degree() - y.degree()) + 1);
    const int dy = y.degree();
    for (int d = x.degree(); d >= dy;) {
        BigInt& lead = rem[static_cast<std::size_t>(d)];
        if (lead % y.lc() != 0) return std::nullopt;
        BigInt f = lead / y.lc();
        q[static_cast<std::size_t>(d - dy)] = f;
        if (f != 0) {
            for (int i = 0; i <= dy; ++i) rem[static_cast<std::size_t>(d - dy + i)] -= f * y.coeffs[static_cast<std::size_t>(i)];
        }
        --d;
    }
    for (int i = 0; i < dy; ++i)
        if (rem[static_cast<std::size_t>(i)] != 0) return std::nullopt;
    return IntPolynomial(std::move(q));
}

inline IntPolynomial exact_div(const IntPolynomial& x, const IntPolynomial& y) {
    auto q = try_exact_div(x, y);
    if (!q) throw domain_error("polynomial division was not exact");
    return *q;
}

namespace detail {
// prem with exact multiplier bookkeeping: returns (r, k) with
// lc(y)^k * x = q*y + r. k counts the multiplications actually performed.
inline std::pair<IntPolynomial, int> prem_counted(const IntPolynomial& x, const IntPolynomial& y) {
    if (y.is_zero()) throw domain_error("pseudo-division by zero");
    if (x.is_zero() || x.degree() < y.degree()) return {x, 0};
    std::vector<BigInt> rem = x.coeffs;
    const int dy = y.degree();
    const BigInt& ly = y.lc();
    int k = 0;
    int d = static_cast<int>(rem.size()) - 1;
    while (d >= dy) {
        if (rem[static_cast<std::size_t>(d)] == 0) {
            --d;
            continue;
        }
        BigInt lead = rem[static_cast<std::size_t>(d)];
        for (auto& v : rem) v *= ly;
        ++k;
        for (int i = 0; i <= dy; ++i)
            rem[static_cast<std::size_t>(d - dy + i)] -= lead * y.coeffs[static_cast<std::size_t>(i)];
        for (const BigInt& v : rem) guard_bits(v);
        --d;
    }
    return {IntPolynomial(std::vector<BigInt>(rem.begin(), rem.begin() + dy)), k};
}
} // namespace detail

// gcd over Z[t] by a primitive pseudo-remainder cascade. Result is primitive
// with positive leading coefficient, times gcd of the contents.
inline IntPolynomial gcd(const IntPolynomial& x, const IntPolynomial& y) {
    if (x.is_zero() && y.is_zero()) return IntPolynomial::zero();
    if (x.is_zero()) {
        IntPolynomial g = y;
        if (g.lc() < 0) g = neg(g);
        return g;
    }
    if (y.is_zero()) {
        IntPolynomial g = x;
        if (g.lc() < 0) g = neg(g);
        return g;
    }
    BigInt cont = gcd_int(content(x), content(y));
    IntPolynomial a = primitive_part(x), b = primitive_part(y);
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        IntPolynomial r = detail::prem_counted(a, b).first;
        a = b;
        b = primitive_part(r);
    }
    if (a.lc() < 0) a = neg(a);
    return scale(a, cont);
}

// p / gcd(p, p'), content-normalized, positive leading coefficient.
inline IntPolynomial squarefree_part(const IntPolynomial& p) {
    if (p.is_zero()) throw domain_error("squarefree part of the zero polynomial");
    IntPolynomial pp = primitive_part(p);
    if (pp.lc() < 0) pp = neg(pp);
    if (pp.degree() == 0) return IntPolynomial::one();
    IntPolynomial g = gcd(pp, derivative(pp));
    if (g.degree() == 0) return pp;
    IntPolynomial sf = exact_div(pp, g);
    sf = primitive_part(sf);
    if (sf.lc() < 0) sf = neg(sf);
    return sf;
}

// Number of trailing zero coefficients: multiplicity of the root 0.
inline int zero_root_order(const IntPolynomial& p) {
    if (p.is_zero()) throw domain_error("zero polynomial");
    int v = 0;
    while (p.coeffs[static_cast<std::size_t>(v)] == 0) ++v;
    return v;
}

// p / t^v
inline IntPolynomial shift_down(const IntPolynomial& p, int v) {
    return IntPolynomial(std::vector<BigInt>(p.coeffs.begin() + v, p.coeffs.end()));
}

// Descending-power display form: "t^2 - 3t + 1".
inline std::string poly_str(const IntPolynomial& p, const std::string& var = "t") {
    if (p.is_zero()) return "0";
    std::string s;
    for (int i = p.degree(); i >= 0; --i) {
        BigInt c = p.coeff(i);
        if (c == 0) continue;
        bool first = s.empty();
        BigInt ac = abs_int(c);
        if (!first) s += (c > 0) ? " + " : " - ";
        else if (c < 0) s += "-";
        std::string term;
        if (i == 0) {
            term = ac.str();
        } else {
            if (ac != 1) term = ac.str();
            term += var;
            if (i > 1) term += "^" + std::to_string(i);
        }
        s += term;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Generic dense polynomials over a coefficient ring R (R = BigInt or
// R = IntPolynomial). Only what the fraction-free resultant cascade needs.
// ---------------------------------------------------------------------------

template <class R> struct ring_ops;

template <> struct ring_ops<BigInt> {
    static BigInt zero() { return BigInt(0); }
    static BigInt one() { return BigInt(1); }
    static bool is_zero(const BigInt& v) { return v == 0; }
    static BigInt add(const BigInt& a, const BigInt& b) { return a + b; }
    static BigInt sub(const BigInt& a, const BigInt& b) { return a - b; }
    static BigInt mul(const BigInt& a, const BigInt& b) {
        BigInt r = a * b;
        guard_bits(r);
        return r;
    }
    static BigInt neg(const BigInt& a) { return -a; }
    static BigInt exact_div(const BigInt& a, const BigInt& b) {
        if (b == 0) throw domain_error("exact division by zero");
        BigInt q = a / b;
        if (q * b != a) throw domain_error("integer division was not exact");
        return q;
    }
};

template <> struct ring_ops<IntPolynomial> {
    static IntPolynomial zero() { return IntPolynomial::zero(); }
    static IntPolynomial one() { return IntPolynomial::one(); }
    static bool is_zero(const IntPolynomial& v) { return v.is_zero(); }
    static IntPolynomial add(const IntPolynomial& a, const IntPolynomial& b) { return latdyn::add(a, b); }
    static IntPolynomial sub(const IntPolynomial& a, const IntPolynomial& b) { return latdyn::sub(a, b); }
    static IntPolynomial mul(const IntPolynomial& a, const IntPolynomial& b) { return latdyn::mul(a, b); }
    static IntPolynomial neg(const IntPolynomial& a) { return latdyn::neg(a); }
    static IntPolynomial exact_div(const IntPolynomial& a, const IntPolynomial& b) { return latdyn::exact_div(a, b); }
};

template <class R> struct GPoly {
    std::vector<R> c; // ascending

    void normalize() {
        while (!c.empty() && ring_ops<R>::is_zero(c.back())) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    const R& lc() const { return c.back(); }
};

namespace detail {

template <class R> GPoly<R> gscale(const GPoly<R>& p, const R& f) {
    GPoly<R> r;
    r.c.reserve(p.c.size());
    for (const auto& v : p.c) r.c.push_back(ring_ops<R>::mul(v, f));
    r.normalize();
    return r;
}

template <class R> GPoly<R> gexact_div_scalar(const GPoly<R>& p, const R& f) {
    GPoly<R> r;
    r.c.reserve(p.c.size());
    for (const auto& v : p.c) r.c.push_back(ring_ops<R>::exact_div(v, f));
    r.normalize();
    return r;
}

// Pseudo-remainder over R with canonical multiplier lc(B)^(deg A - deg B + 1).
template <class R> GPoly<R> gprem(const GPoly<R>& A, const GPoly<R>& B) {
    if (B.is_zero()) throw domain_error("pseudo-division by zero");
    GPoly<R> rem = A;
    const int db = B.degree();
    int steps_needed = A.degree() - db + 1;
    int steps_done = 0;
    int d = rem.degree();
    while (d >= db && !rem.is_zero()) {
        R lead = rem.c[static_cast<std::size_t>(d)];
        if (!ring_ops<R>::is_zero(lead)) {
            for (auto& v : rem.c) v = ring_ops<R>::mul(v, B.lc());
            ++steps_done;
            for (int i = 0; i <= db; ++i) {
                auto& tgt = rem.c[static_cast<std::size_t>(d - db + i)];
                tgt = ring_ops<R>::sub(tgt, ring_ops<R>::mul(lead, B.c[static_cast<std::size_t>(i)]));
            }
        }
        --d;
    }
    rem.normalize();
    // Pad to the canonical multiplier so the subresultant divisions stay exact.
    for (; steps_done < steps_needed; ++steps_done) rem = gscale(rem, B.lc());
    return rem;
}

} // namespace detail

// Resultant of A and B over R by the subresultant (fraction-free) cascade.
// Ducos-style bookkeeping of g, h keeps every division exact in R.
template <class R> R prs_resultant(GPoly<R> A, GPoly<R> B) {
    using O = ring_ops<R>;
    A.normalize();
    B.normalize();
    if (A.is_zero() || B.is_zero()) return O::zero();
    int sign_flips = 0;
    if (A.degree() < B.degree()) {
        if ((A.degree() & 1) && (B.degree() & 1)) sign_flips ^= 1;
        std::swap(A, B);
    }
    if (B.degree() == 0) {
        // res(A, b) = b^(deg A)
        R r = O::one();
        for (int i = 0; i < A.degree(); ++i) r = O::mul(r, B.lc());
        if (A.degree() == 0) r = O::one();
        return r;
    }
    R g = O::one(), h = O::one();
    for (;;) {
        int da = A.degree(), db = B.degree();
        int delta = da - db;
        if ((da & 1) && (db & 1)) sign_flips ^= 1;
        GPoly<R> rem = detail::gprem(A, B);
        if (rem.is_zero()) {
            // Common factor of positive degree: resultant vanishes.
            if (db > 0) return O::zero();
            throw domain_error("unreachable: zero remainder with constant divisor");
        }
        A = B;
        // divisor g * h^delta
        R div = g;
        for (int i = 0; i < delta; ++i) div = O::mul(div, h);
        B = detail::gexact_div_scalar(rem, div);
        g = A.lc();
        // h = g^delta / h^(delta-1), exact in R
        if (delta > 0) {
            R num = O::one();
            for (int i = 0; i < delta; ++i) num = O::mul(num, g);
            R den = O::one();
            for (int i = 0; i < delta - 1; ++i) den = O::mul(den, h);
            h = O::exact_div(num, den);
        }
        // delta == 0 keeps h unchanged
        if (B.degree() == 0) {
            // res = h^(1 - deg A) * lc(B)^(deg A), assembled without negative powers.
            int dA = A.degree();
            R num = O::one();
            for (int i = 0; i < dA; ++i) num = O::mul(num, B.lc());
            R den = O::one();
            for (int i = 0; i < dA - 1; ++i) den = O::mul(den, h);
            R r = O::exact_div(num, den);
            return sign_flips ? O::neg(r) : r;
        }
    }
}

// Naive Sylvester-determinant resultant (fraction-free Bareiss over R). Used
// as an independent oracle for prs_resultant in the tests; also fine for
// small production inputs.
template <class R> R sylvester_resultant(const GPoly<R>& A, const GPoly<R>& B) {
    using O = ring_ops<R>;
    if (A.is_zero() || B.is_zero()) return O::zero();
    int m = A.degree(), n = B.degree();
    if (m == 0 && n == 0) return O::one();
    int N = m + n;
    std::vector<R> w(static_cast<std::size_t>(N) * static_cast<std::size_t>(N), O::zero());
    auto at = [&](int i, int j) -> R& { return w[static_cast<std::size_t>(i) * static_cast<std::size_t>(N) + static_cast<std::size_t>(j)]; };
    for (int i = 0; i < n; ++i)
        for (int k = 0; k <= m; ++k) at(i, i + k) = A.c[static_cast<std::size_t>(m - k)];
    for (int i = 0; i < m; ++i)
        for (int k = 0; k <= n; ++k) at(n + i, i + k) = B.c[static_cast<std::size_t>(n - k)];
    // Bareiss elimination over R.
    R prev = O::one();
    int sign = 1;
    for (int k = 0; k < N - 1; ++k) {
        if (O::is_zero(at(k, k))) {
            int p = -1;
            for (int i = k + 1; i < N; ++i)
                if (!O::is_zero(at(i, k))) { p = i; break; }
            if (p < 0) return O::zero();
            for (int j = 0; j < N; ++j) std::swap(at(k, j), at(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < N; ++i) {
            for (int j = k + 1; j < N; ++j) {
                R num = O::sub(O::mul(at(i, j), at(k, k)), O::mul(at(i, k), at(k, j)));
                at(i, j) = O::exact_div(num, prev);
            }
            at(i, k) = O::zero();
        }
        prev = at(k, k);
    }
    R r = at(N - 1, N - 1);
    return sign > 0 ? r : O::neg(r);
}

inline BigInt resultant(const IntPolynomial& a, const IntPolynomial& b) {
    GPoly<BigInt> A{a.coeffs}, B{b.coeffs};
    return prs_resultant<BigInt>(A, B);
}

} // namespace latdyn
