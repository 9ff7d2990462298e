#include <catch2/catch_amalgamated.hpp>

#include <latdyn/torus.hpp>

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

IntMatrix diag2(long a, long b) { return mat2(a, 0, 0, b); }

TorsionVector tv(std::vector<Rational> v) { return torsion_vector(std::move(v)); }

IntMatrix random_matrix(int n, std::mt19937& rng, int span = 3) {
    std::uniform_int_distribution<int> d(-span, span);
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = d(rng);
    return m;
}

// nonsingular with d1 > 1
TorusEndo random_expanding(int n, std::mt19937& rng) {
    for (;;) {
        IntMatrix m = random_matrix(n, rng);
        if (determinant(m) == 0) continue;
        TorusEndo f = torus_endo(m);
        if (radius_compare(dyn_degree(f), one_radius()) == Ordering::greater) return f;
    }
}

TorsionVector random_torsion(int n, std::mt19937& rng) {
    std::uniform_int_distribution<int> num(0, 5), den(1, 4);
    std::vector<Rational> v(static_cast<std::size_t>(n));
    for (auto& c : v) c = Rational(num(rng), den(rng));
    return torsion_vector(std::move(v));
}

} // namespace

TEST_CASE("torsion vectors reduce and track the common denominator") {
    TorsionVector v = tv({Rational(7, 2), Rational(-1, 3), Rational(2)});
    CHECK(v.coords == std::vector<Rational>{Rational(1, 2), Rational(2, 3), Rational(0)});
    CHECK(v.denominator == 6);
    CHECK(zero_torsion(2).denominator == 1);
    CHECK(zero_torsion(2).size() == 2);
}

TEST_CASE("torus endomorphism validation") {
    CHECK_THROWS_AS(torus_endo(IntMatrix(2, 3)), dimension_error);
    CHECK_THROWS_AS(torus_endo(mat2(1, 2, 2, 4)), domain_error);
    CHECK_THROWS_AS(torus_endo(diag2(2, 3), zero_torsion(3)), dimension_error);
    TorusEndo f = torus_endo(diag2(2, 3), tv({Rational(1, 2), Rational(1, 3)}));
    CHECK(f.dim() == 2);
}

TEST_CASE("dynamical degree of affine monomial maps") {
    SpectralRadius r = dyn_degree(torus_endo(diag2(2, 3)));
    CHECK(r.exact);
    CHECK(r.lo == Rational(3));
    // translation never enters
    SpectralRadius rt = dyn_degree(torus_endo(diag2(2, 3), tv({Rational(1, 7), Rational(3, 5)})));
    CHECK(rt.exact);
    CHECK(rt.lo == Rational(3));
    SpectralRadius rot = dyn_degree(torus_endo(mat2(0, -1, 1, 0)));
    CHECK(rot.lo == Rational(1));
}

TEST_CASE("sdd subgroup pinned systems") {
    SddSubgroup s = sdd_subgroup(torus_endo(diag2(2, 3)));
    IntMatrix e1(2, 1);
    e1.at(0, 0) = 1;
    CHECK(s.lattice == sublattice_from_generators(2, e1));
    REQUIRE(s.restricted.rows == 1);
    CHECK(s.restricted.at(0, 0) == 2);
    REQUIRE(s.quotient.rows == 1);
    CHECK(s.quotient.at(0, 0) == 3);
    CHECK(s.d1_restricted.lo == Rational(2));
    CHECK(s.d1_quotient.lo == Rational(3));
    CHECK(s.d1_total.lo == Rational(3));

    // irreducible characteristic polynomial: nothing splits off
    SddSubgroup fib = sdd_subgroup(torus_endo(mat2(1, 1, 1, 0)));
    CHECK(fib.lattice.is_zero());
    CHECK(fib.quotient == mat2(1, 1, 1, 0));
    CHECK(fib.d1_restricted.exact);
    CHECK(fib.d1_restricted.lo == Rational(1)); // empty system
    CHECK(radius_compare(fib.d1_quotient, fib.d1_total) == Ordering::equal);

    // single eigenvalue attains: the small product is empty
    SddSubgroup jb = sdd_subgroup(torus_endo(mat2(2, 1, 0, 2)));
    CHECK(jb.lattice.is_zero());

    CHECK_THROWS_AS(sdd_subgroup(torus_endo(mat2(0, -1, 1, 0))), no_positive_entropy_error);
    CHECK_THROWS_AS(sdd_subgroup(torus_endo(diag2(1, 1))), no_positive_entropy_error);
    CHECK_THROWS_AS(sdd_subgroup(torus_endo(mat2(0, 1, 1, 0))), no_positive_entropy_error);
}

TEST_CASE("sdd subgroup structural invariants") {
    std::mt19937 rng(8101u);
    for (int iter = 0; iter < 8; ++iter) {
        int n = 2 + static_cast<int>(rng() % 2);
        TorusEndo f = random_expanding(n, rng);
        SddSubgroup s = sdd_subgroup(f);
        CHECK(s.lattice.saturated);
        CHECK(is_invariant(f.matrix, s.lattice));
        if (s.lattice.is_zero()) {
            CHECK(s.d1_restricted.exact);
            CHECK(s.d1_restricted.lo == Rational(1));
        } else {
            CHECK(radius_compare(s.d1_restricted, s.d1_total) == Ordering::less);
        }
        // maximality witness: every factor upstairs attains the total radius
        FactoredPolynomial fq = factor_over_rationals(charpoly(s.quotient));
        for (const auto& p : fq.factors)
            CHECK(radius_compare(poly_radius(p.first), s.d1_total) == Ordering::equal);
        CHECK(radius_compare(s.d1_quotient, s.d1_total) == Ordering::equal);
    }
}

TEST_CASE("sdd subgroup is stable under iteration") {
    std::mt19937 rng(9203u);
    for (int iter = 0; iter < 5; ++iter) {
        TorusEndo f = random_expanding(2 + static_cast<int>(rng() % 2), rng);
        SddSubgroup s = sdd_subgroup(f);
        for (unsigned long k = 2; k <= 4; ++k) {
            SddSubgroup sk = sdd_subgroup(torus_endo(pow(f.matrix, k)));
            CHECK(sk.lattice == s.lattice);
        }
    }
}

TEST_CASE("quotient system and its translation") {
    TorusEndo f = torus_endo(diag2(2, 3), tv({Rational(1, 2), Rational(1, 3)}));
    SddSubgroup s = sdd_subgroup(f);
    TorusEndo q = quotient_endo(f, s);
    REQUIRE(q.dim() == 1);
    CHECK(q.matrix.at(0, 0) == 3);
    CHECK(q.translation.coords == std::vector<Rational>{Rational(1, 3)});

    // zero SDD lattice: the quotient is the system itself
    TorusEndo fib = torus_endo(mat2(1, 1, 1, 0), tv({Rational(1, 5), Rational(2, 5)}));
    TorusEndo qf = quotient_endo(fib, sdd_subgroup(fib));
    CHECK(qf.matrix == fib.matrix);
    CHECK(qf.translation == fib.translation);

    SddSubgroup s3 = sdd_subgroup(torus_endo(diag2(2, 3)));
    IntMatrix three(1, 1);
    three.at(0, 0) = 3;
    CHECK_THROWS_AS(quotient_endo(torus_endo(three), s3), dimension_error);
}

TEST_CASE("fixed coset counts") {
    TorusEndo f = torus_endo(diag2(2, 3));
    CHECK(count_sf(f, 1) == 2);
    CHECK(count_sf(torus_endo(diag2(2, 2)), 1) == 1);
    CHECK(count_sf(torus_endo(diag2(2, 3), tv({Rational(1, 2), Rational(1, 3)})), 1) == 2);
    CHECK_THROWS_AS(count_sf(f, 0), domain_error);
    CHECK_THROWS_AS(count_sf(torus_endo(mat2(0, 1, 1, 0)), 1), no_positive_entropy_error);
}

TEST_CASE("count table rows and bounds") {
    CountTable t = count_table(torus_endo(diag2(2, 3)), 3);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.rows[0].count == 2);
    CHECK(t.rows[1].count == 8);
    CHECK(t.rows[2].count == 26);
    // d1 = 3 exactly and the quotient is one-dimensional: bound is 3^n + 1
    CHECK(t.rows[0].bound == 4);
    CHECK(t.rows[1].bound == 10);
    CHECK(t.rows[2].bound == 28);

    CountTable fib = count_table(torus_endo(mat2(1, 1, 1, 0)), 5);
    BigInt expect[] = {1, 1, 4, 5, 11}; // |L_n - 1 - (-1)^n|
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(fib.rows[i].count == expect[i]);
        CHECK(fib.rows[i].count <= fib.rows[i].bound);
        CHECK(fib.rows[i].count > 0);
    }

    CHECK_THROWS_AS(count_table(torus_endo(diag2(2, 3)), 0), domain_error);
    CHECK_THROWS_AS(count_table(torus_endo(diag2(2, 3)), 65), resource_error);
}

TEST_CASE("maximal coset membership") {
    TorusEndo f = torus_endo(diag2(2, 3));
    CHECK(is_maximal_coset(f, tv({Rational(0), Rational(0)})));
    CHECK(is_maximal_coset(f, tv({Rational(0), Rational(1, 2)})));
    CHECK_FALSE(is_maximal_coset(f, tv({Rational(0), Rational(1, 3)})));
    // anything inside the subtorus direction qualifies
    CHECK(is_maximal_coset(f, tv({Rational(1, 5), Rational(0)})));
    CHECK_THROWS_AS(is_maximal_coset(f, tv({Rational(0)})), dimension_error);
}

TEST_CASE("enumeration of maximal cosets") {
    auto has = [](const std::vector<TorsionVector>& l, const TorsionVector& v) {
        for (const auto& w : l)
            if (w == v) return true;
        return false;
    };

    std::vector<TorsionVector> d23 = enumerate_sf(torus_endo(diag2(2, 3)), BigInt(100));
    REQUIRE(d23.size() == 2);
    CHECK(has(d23, tv({Rational(0), Rational(0)})));
    CHECK(has(d23, tv({Rational(0), Rational(1, 2)})));

    std::vector<TorsionVector> dbl = enumerate_sf(torus_endo(diag2(2, 2)), BigInt(100));
    REQUIRE(dbl.size() == 1);
    CHECK(has(dbl, tv({Rational(0), Rational(0)})));

    IntMatrix three(1, 1);
    three.at(0, 0) = 3;
    std::vector<TorsionVector> shifted =
        enumerate_sf(torus_endo(three, tv({Rational(1, 2)})), BigInt(100));
    REQUIRE(shifted.size() == 2);
    CHECK(has(shifted, tv({Rational(1, 4)})));
    CHECK(has(shifted, tv({Rational(3, 4)})));

    IntMatrix five(1, 1);
    five.at(0, 0) = 5;
    CHECK_THROWS_AS(enumerate_sf(torus_endo(five), BigInt(3)), enumeration_cap_error);
    CHECK_THROWS_AS(enumerate_sf(torus_endo(five), BigInt(0)), domain_error);
}

TEST_CASE("enumeration is sound, complete, and duplicate free") {
    std::mt19937 rng(10405u);
    int done = 0;
    while (done < 6) {
        TorusEndo f = torus_endo(random_expanding(2, rng).matrix, random_torsion(2, rng));
        SddSubgroup s = sdd_subgroup(f);
        BigInt total = count_sf(s, 1);
        if (total > 200) continue;
        ++done;
        std::vector<TorsionVector> reps = enumerate_sf(f, BigInt(200));
        CHECK(BigInt(reps.size()) == total);
        for (const auto& b : reps) CHECK(is_maximal_coset(f, s, b));
        for (std::size_t i = 0; i < reps.size(); ++i)
            for (std::size_t j = i + 1; j < reps.size(); ++j) CHECK_FALSE(reps[i] == reps[j]);
    }
}

TEST_CASE("counts ignore the translation") {
    std::mt19937 rng(11507u);
    for (int iter = 0; iter < 5; ++iter) {
        IntMatrix m = random_expanding(2, rng).matrix;
        TorusEndo plain = torus_endo(m);
        TorusEndo moved = torus_endo(m, random_torsion(2, rng));
        for (unsigned long n = 1; n <= 3; ++n) CHECK(count_sf(moved, n) == count_sf(plain, n));
    }
}
