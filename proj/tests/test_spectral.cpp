#include <catch2/catch_amalgamated.hpp>

#include <latdyn/hnf.hpp>
#include <latdyn/spectral.hpp>

#include <random>

using namespace latdyn;

namespace {

IntMatrix mat2(long a, long b, long c, long d) {
    IntMatrix m(2, 2);
    m.at(0, 0) = a;
    m.at(0, 1) = b;
    m.at(1, 0) = c;
    m.at(1, 1) = d;
    return m;
}

IntMatrix mpow(const IntMatrix& m, int k) {
    IntMatrix r = IntMatrix::identity(m.rows);
    for (int i = 0; i < k; ++i) r = mul(r, m);
    return r;
}

IntMatrix random_matrix(int n, std::mt19937& rng, int span = 3) {
    std::uniform_int_distribution<int> d(-span, span);
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = d(rng);
    return m;
}

IntMatrix random_unimodular(int n, std::mt19937& rng) {
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::uniform_int_distribution<int> coef(-2, 2);
    IntMatrix u = IntMatrix::identity(n);
    for (int step = 0; step < 6; ++step) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        BigInt c(coef(rng));
        for (int k = 0; k < n; ++k) u.at(j, k) += c * u.at(i, k);
    }
    return u;
}

} // namespace

TEST_CASE("modsq_poly pinned examples") {
    CHECK(modsq_poly(IntPolynomial({-2, 1})) == IntPolynomial({-4, 1}));
    CHECK(modsq_poly(IntPolynomial({1, 0, 1})) == IntPolynomial({-1, 0, 1}));
    // golden ratio: squarefree part of (t^2-3t+1)(t+1)^2
    CHECK(modsq_poly(IntPolynomial({-1, -1, 1})) == IntPolynomial({1, -2, -2, 1}));
    // zero roots are kept as the single root 0
    CHECK(modsq_poly(IntPolynomial::t()) == IntPolynomial::t());
    CHECK(modsq_poly(IntPolynomial({0, 0, 1})) == IntPolynomial::t());
    CHECK_THROWS_AS(modsq_poly(IntPolynomial::zero()), domain_error);
    // t(t-2): roots 0 and 4 survive, top root 4
    IntPolynomial m = modsq_poly(mul(IntPolynomial::t(), IntPolynomial({-2, 1})));
    CHECK(m == mul(IntPolynomial::t(), IntPolynomial({-4, 1})));
}

TEST_CASE("spectral_radius pinned values") {
    IntMatrix d23(2, 2);
    d23.at(0, 0) = 2;
    d23.at(1, 1) = 3;
    SpectralRadius r = spectral_radius(d23);
    CHECK(r.exact);
    CHECK(r.lo == Rational(3));
    CHECK(r.hi == Rational(3));
    REQUIRE(r.attaining_factors.size() == 1);
    CHECK(r.attaining_factors[0] == IntPolynomial({-3, 1}));
    auto iv = radius_integer_value(r);
    REQUIRE(iv.has_value());
    CHECK(*iv == 3);

    SpectralRadius fib = spectral_radius(mat2(1, 1, 1, 0));
    CHECK_FALSE(fib.exact);
    CHECK(fib.hi - fib.lo <= Rational(1, 10000));
    CHECK(fib.lo >= Rational(16179, 10000));
    CHECK(fib.hi <= Rational(16182, 10000));
    REQUIRE(fib.attaining_factors.size() == 1);
    CHECK(fib.attaining_factors[0] == IntPolynomial({-1, -1, 1}));
    CHECK_FALSE(radius_integer_value(fib).has_value());

    SpectralRadius swap2 = spectral_radius(mat2(0, 1, 1, 0));
    CHECK(swap2.exact);
    CHECK(swap2.lo == Rational(1));
    CHECK(swap2.attaining_factors.size() == 2);

    SpectralRadius rot = spectral_radius(mat2(0, -1, 1, 0));
    CHECK(rot.exact);
    CHECK(rot.lo == Rational(1));
    REQUIRE(rot.attaining_factors.size() == 1);
    CHECK(rot.attaining_factors[0] == IntPolynomial({1, 0, 1}));
}

TEST_CASE("degenerate and scalar radii") {
    IntMatrix z(2, 2);
    SpectralRadius r = spectral_radius(z);
    CHECK(r.exact);
    CHECK(r.lo == Rational(0));
    CHECK(r.modsq_minpoly == IntPolynomial::t());
    REQUIRE(r.attaining_factors.size() == 1);
    CHECK(r.attaining_factors[0] == IntPolynomial::t());

    // nilpotent but nonzero
    IntMatrix nil(2, 2);
    nil.at(0, 1) = 5;
    SpectralRadius rn = spectral_radius(nil);
    CHECK(rn.exact);
    CHECK(rn.lo == Rational(0));

    // the empty system is the multiplicative unit
    SpectralRadius e = spectral_radius(IntMatrix(0, 0));
    CHECK(e.exact);
    CHECK(e.lo == Rational(1));

    SpectralRadius one = one_radius();
    CHECK(one.exact);
    CHECK(one.lo == Rational(1));
    CHECK(radius_compare(e, one) == Ordering::equal);

    CHECK_THROWS_AS(integer_radius(BigInt(-1)), domain_error);
    CHECK_THROWS_AS(spectral_radius(IntMatrix(2, 3)), dimension_error);

    // rational non-integer radius from a non-monic polynomial
    SpectralRadius half = poly_radius(IntPolynomial({-3, 2}));
    CHECK(half.exact);
    CHECK(half.lo == Rational(3, 2));
    CHECK_FALSE(radius_integer_value(half).has_value());

    // complex pair of modulus 1
    SpectralRadius unit = poly_radius(IntPolynomial({1, 0, 1}));
    CHECK(unit.exact);
    CHECK(unit.lo == Rational(1));
}

TEST_CASE("radius_compare pinned and total") {
    IntMatrix d23(2, 2);
    d23.at(0, 0) = 2;
    d23.at(1, 1) = 3;
    IntMatrix s3(1, 1);
    s3.at(0, 0) = 3;
    CHECK(radius_compare(spectral_radius(d23), spectral_radius(s3)) == Ordering::equal);

    IntMatrix s2(1, 1);
    s2.at(0, 0) = 2;
    SpectralRadius fib = spectral_radius(mat2(1, 1, 1, 0));
    CHECK(radius_compare(fib, spectral_radius(s2)) == Ordering::less);
    CHECK(radius_compare(spectral_radius(s2), fib) == Ordering::greater);

    IntMatrix sm2(1, 1);
    sm2.at(0, 0) = -2;
    CHECK(radius_compare(spectral_radius(s2), spectral_radius(sm2)) == Ordering::equal);

    // equality between different minimal polynomials sharing the top modulus:
    // golden ratio from the Fibonacci matrix vs its own companion square root
    CHECK(radius_compare(fib, spectral_radius(mat2(1, 1, 1, 0))) == Ordering::equal);

    // close but distinct: sqrt(2) vs 1.41 forces deep refinement on one side
    SpectralRadius rt2 = poly_radius(IntPolynomial({-2, 0, 1}));
    SpectralRadius below = poly_radius(IntPolynomial({-141, 100}));
    CHECK(radius_compare(below, rt2) == Ordering::less);
}

TEST_CASE("refinement invariants") {
    SpectralRadius fib = spectral_radius(mat2(1, 1, 1, 0));
    Rational w30(1, pow_int(10, 30));
    SpectralRadius r30 = refined(fib, w30);
    CHECK(r30.hi - r30.lo <= w30);
    CHECK(r30.lo >= fib.lo);
    CHECK(r30.hi <= fib.hi);
    auto s = largest_real_root(r30.modsq_minpoly, Rational(1, pow_int(10, 35)));
    REQUIRE(s.has_value());
    CHECK(r30.lo * r30.lo <= s->hi);
    CHECK(s->lo <= r30.hi * r30.hi);

    // exactly one root of modsq in a small window around rho^2
    SpectralRadius r10 = refined(fib, Rational(1, pow_int(10, 10)));
    Rational eps(1, pow_int(10, 9));
    SturmChain ch = sturm_chain(r10.modsq_minpoly);
    CHECK(count_roots_between(ch, r10.lo * r10.lo - eps, r10.hi * r10.hi + eps) == 1);

    // refining an exact radius is a no-op
    SpectralRadius three = integer_radius(BigInt(3));
    SpectralRadius t2 = refined(three, w30);
    CHECK(t2.exact);
    CHECK(t2.lo == Rational(3));

    CHECK_THROWS_AS(refined(fib, Rational(0)), domain_error);
}

TEST_CASE("similarity invariance") {
    std::mt19937 rng(4601u);
    for (int iter = 0; iter < 15; ++iter) {
        int n = 2 + static_cast<int>(rng() % 2);
        IntMatrix m = random_matrix(n, rng);
        IntMatrix u = random_unimodular(n, rng);
        IntMatrix c = mul(mul(inverse_unimodular(u), m), u);
        SpectralRadius a = spectral_radius(m);
        SpectralRadius b = spectral_radius(c);
        CHECK(a.modsq_minpoly == b.modsq_minpoly);
        CHECK(radius_compare(a, b) == Ordering::equal);
    }
}

TEST_CASE("block triangular maximum law") {
    std::mt19937 rng(5305u);
    for (int iter = 0; iter < 10; ++iter) {
        IntMatrix a = random_matrix(2, rng);
        IntMatrix b = random_matrix(2, rng);
        IntMatrix m(4, 4);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                m.at(i, j) = a.at(i, j);
                m.at(i + 2, j + 2) = b.at(i, j);
                m.at(i, j + 2) = static_cast<int>(rng() % 5) - 2;
            }
        SpectralRadius ra = spectral_radius(a);
        SpectralRadius rb = spectral_radius(b);
        const SpectralRadius& mx = radius_compare(ra, rb) == Ordering::less ? rb : ra;
        CHECK(radius_compare(spectral_radius(m), mx) == Ordering::equal);
    }
}

TEST_CASE("pow_radius pinned values") {
    IntMatrix d23(2, 2);
    d23.at(0, 0) = 2;
    d23.at(1, 1) = 3;
    SpectralRadius nine = pow_radius(spectral_radius(d23), 2);
    CHECK(nine.exact);
    CHECK(nine.lo == Rational(9));

    SpectralRadius fib = spectral_radius(mat2(1, 1, 1, 0));
    SpectralRadius f2 = pow_radius(fib, 2);
    CHECK(radius_compare(f2, spectral_radius(mat2(2, 1, 1, 1))) == Ordering::equal);

    SpectralRadius one5 = pow_radius(one_radius(), 5);
    CHECK(one5.exact);
    CHECK(one5.lo == Rational(1));

    CHECK_THROWS_AS(pow_radius(fib, 0), domain_error);
}

TEST_CASE("pow_radius agrees with iterated matrices") {
    std::mt19937 rng(6001u);
    for (int iter = 0; iter < 8; ++iter) {
        int n = 2 + static_cast<int>(rng() % 2);
        IntMatrix m = random_matrix(n, rng, 2);
        SpectralRadius r = spectral_radius(m);
        for (int k = 2; k <= 4; ++k) {
            SpectralRadius p = pow_radius(r, static_cast<unsigned long>(k));
            SpectralRadius ik = spectral_radius(mpow(m, k));
            CHECK(radius_compare(p, ik) == Ordering::equal);
        }
    }
}

TEST_CASE("ceil_radius_pow exact ceilings") {
    IntMatrix d23(2, 2);
    d23.at(0, 0) = 2;
    d23.at(1, 1) = 3;
    SpectralRadius three = spectral_radius(d23);
    CHECK(ceil_radius_pow(three, 4) == 81);
    CHECK(ceil_radius_pow(three, 0) == 1);

    SpectralRadius fib = spectral_radius(mat2(1, 1, 1, 0));
    CHECK(ceil_radius_pow(fib, 1) == 2);
    // golden ratio powers sit just under the Lucas numbers at even exponents
    CHECK(ceil_radius_pow(fib, 10) == 123);
    CHECK(ceil_radius_pow(fib, 30) == 1860498);

    // exact tie on an integer: (sqrt 2)^2 = 2 needs the algebraic branch
    SpectralRadius rt2 = poly_radius(IntPolynomial({-2, 0, 1}));
    CHECK(ceil_radius_pow(rt2, 2) == 2);
    CHECK(ceil_radius_pow(rt2, 3) == 3);
    CHECK(ceil_radius_pow(rt2, 30) == 32768);

    SpectralRadius zero = integer_radius(BigInt(0));
    CHECK(ceil_radius_pow(zero, 7) == 0);
}

TEST_CASE("nonsingular matrices have radius at least one") {
    std::mt19937 rng(7207u);
    SpectralRadius one = one_radius();
    int seen = 0;
    while (seen < 12) {
        IntMatrix m = random_matrix(3, rng);
        if (determinant(m) == 0) continue;
        ++seen;
        CHECK(radius_compare(spectral_radius(m), one) != Ordering::less);
    }
}
