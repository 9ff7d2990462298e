#pragma once

#include <atomic>
#include <cstddef>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace latdyn {

using BigInt   = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Entry-size guard.
//
// Every exact kernel below can in principle blow up (iterated powers, Hensel
// lifting, pseudo-remainder cascades). A single global ceiling on the bit
// size of any one integer turns runaway growth into a clean resource_error
// instead of an OOM. Default: 10^6 bits.
// ---------------------------------------------------------------------------

inline std::atomic<std::size_t>& entry_bit_limit() {
    static std::atomic<std::size_t> limit{1000000};
    return limit;
}

inline std::size_t bit_size(const BigInt& v) {
    if (v == 0) return 0;
    return static_cast<std::size_t>(boost::multiprecision::msb(boost::multiprecision::abs(v))) + 1;
}

inline void guard_bits(const BigInt& v) {
    if (bit_size(v) > entry_bit_limit().load(std::memory_order_relaxed))
        throw resource_error("integer entry exceeded the configured bit-size ceiling");
}

// ---------------------------------------------------------------------------
// Small exact helpers on BigInt / Rational.
// ---------------------------------------------------------------------------

inline BigInt abs_int(const BigInt& v) { return boost::multiprecision::abs(v); }

inline BigInt gcd_int(const BigInt& a, const BigInt& b) {
    return boost::multiprecision::gcd(a, b);
}

inline BigInt pow_int(const BigInt& base, unsigned long e) {
    return boost::multiprecision::pow(base, e);
}

// floor(sqrt(v)), v >= 0.
inline BigInt isqrt_floor(const BigInt& v) {
    if (v < 0) throw domain_error("isqrt of a negative integer");
    return boost::multiprecision::sqrt(v);
}

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline BigInt floor_r(const Rational& r) {
    BigInt n = numerator_of(r), d = denominator_of(r);
    BigInt q = n / d; // truncates toward zero
    if (n % d != 0 && n < 0) --q;
    return q;
}

inline BigInt ceil_r(const Rational& r) {
    BigInt n = numerator_of(r), d = denominator_of(r);
    BigInt q = n / d;
    if (n % d != 0 && n > 0) ++q;
    return q;
}

// x - floor(x), canonical representative in [0, 1).
inline Rational mod1(const Rational& x) {
    return x - Rational(floor_r(x));
}

inline Rational pow_rational(const Rational& base, unsigned long e) {
    Rational acc = 1, b = base;
    unsigned long k = e;
    while (k) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
    }
    return acc;
}

// Rational enclosure [a, b] of sqrt(x) with a^2 <= x <= b^2 and b - a <= width.
// Exact square roots collapse to [r, r].
inline std::pair<Rational, Rational> sqrt_enclose(const Rational& x, const Rational& width) {
    if (x < 0) throw domain_error("sqrt_enclose of a negative value");
    if (width <= 0) throw dimension_error("sqrt_enclose needs a positive width");
    if (x == 0) return {Rational(0), Rational(0)};
    BigInt p = numerator_of(x), q = denominator_of(x);
    // sqrt(p/q) = sqrt(p*q)/q; scaling by 2^k refines the enclosure to 1/(q*2^k).
    // Pick k so that 1/(q*2^k) <= width up front.
    BigInt need = ceil_r(Rational(1) / (width * Rational(q)));
    unsigned k = 0;
    if (need > 1) k = static_cast<unsigned>(boost::multiprecision::msb(need)) + 1;
    BigInt scale = BigInt(1) << k;
    BigInt rad = p * q * scale * scale;
    BigInt s = isqrt_floor(rad);
    BigInt den = q * scale;
    if (s * s == rad) {
        Rational r(s, den);
        return {r, r};
    }
    return {Rational(s, den), Rational(s + 1, den)};
}

// ---------------------------------------------------------------------------
// String forms. All machine-facing output is exact: integers in decimal,
// rationals as "p/q" (or "p" when q = 1), always in lowest terms.
// ---------------------------------------------------------------------------

inline std::string int_str(const BigInt& v) { return v.str(); }

inline std::string rational_str(const Rational& r) {
    BigInt n = numerator_of(r), d = denominator_of(r);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

// Parses "p", "-p", "p/q"; normalizes to lowest terms. Rejects everything else.
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw parse_error("empty rational literal");
    std::size_t i = 0;
    bool neg = false;
    if (s[i] == '-' || s[i] == '+') {
        neg = (s[i] == '-');
        ++i;
    }
    std::size_t num_start = i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    if (i == num_start) throw parse_error("malformed rational literal: " + s);
    BigInt num(s.substr(num_start, i - num_start));
    BigInt den = 1;
    if (i < s.size()) {
        if (s[i] != '/') throw parse_error("malformed rational literal: " + s);
        ++i;
        std::size_t den_start = i;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
        if (i == den_start || i != s.size()) throw parse_error("malformed rational literal: " + s);
        den = BigInt(s.substr(den_start));
        if (den == 0) throw parse_error("zero denominator: " + s);
    }
    if (neg) num = -num;
    return Rational(num, den);
}

inline BigInt parse_bigint(const std::string& s) {
    Rational r = parse_rational(s);
    if (denominator_of(r) != 1) throw parse_error("expected an integer, got: " + s);
    return numerator_of(r);
}

namespace detail {
// Fixed-point decimal string of v/10^digits.
inline std::string scaled_decimal_str(BigInt v, int digits) {
    bool neg = v < 0;
    if (neg) v = -v;
    std::string body = v.str();
    if (static_cast<int>(body.size()) <= digits)
        body.insert(0, std::string(static_cast<std::size_t>(digits) + 1 - body.size(), '0'));
    if (digits > 0) body.insert(body.size() - static_cast<std::size_t>(digits), ".");
    return (neg ? "-" : "") + body;
}
} // namespace detail

// Decimal approximations for display only; floor/ceil variants keep printed
// enclosures valid. Every caller labels the result approximate.
inline std::string decimal_floor_str(const Rational& x, int digits) {
    BigInt scaled = floor_r(x * Rational(pow_int(10, static_cast<unsigned long>(digits))));
    return detail::scaled_decimal_str(scaled, digits);
}

inline std::string decimal_ceil_str(const Rational& x, int digits) {
    BigInt scaled = ceil_r(x * Rational(pow_int(10, static_cast<unsigned long>(digits))));
    return detail::scaled_decimal_str(scaled, digits);
}

} // namespace latdyn
