#include <catch2/catch_amalgamated.hpp>

#include <latdyn/abelian.hpp>

#include <random>

using namespace latdyn;

namespace {

AbelianEndo minus_q_identity(long q, int g) {
    return abelian_endo(scale(IntMatrix::identity(2 * g), BigInt(-q)));
}

std::vector<WeilBlock> random_blocks(int g, std::mt19937& rng) {
    std::uniform_int_distribution<int> dn(1, 9);
    std::vector<WeilBlock> bs;
    for (int i = 0; i < g; ++i) {
        BigInt d(dn(rng));
        BigInt amax = isqrt_floor(4 * d);
        std::uniform_int_distribution<long> da(-amax.convert_to<long>(), amax.convert_to<long>());
        bs.push_back(weil_block(BigInt(da(rng)), d));
    }
    return bs;
}

} // namespace

TEST_CASE("weil block validation and companion shape") {
    WeilBlock b = weil_block(BigInt(1), BigInt(2));
    IntMatrix c = weil_companion(b);
    CHECK(charpoly(c) == IntPolynomial({2, -1, 1})); // t^2 - t + 2
    // boundary a^2 = 4d is a genuine endomorphism (multiplication by q)
    CHECK_NOTHROW(weil_block(BigInt(4), BigInt(4)));
    CHECK_THROWS_AS(weil_block(BigInt(3), BigInt(2)), domain_error);
    CHECK_THROWS_AS(weil_block(BigInt(0), BigInt(0)), domain_error);
}

TEST_CASE("abelian endo construction") {
    AbelianEndo f = abelian_endo({weil_block(BigInt(0), BigInt(2)), weil_block(BigInt(0), BigInt(3))});
    CHECK(f.g == 2);
    CHECK(f.dim() == 4);
    CHECK(f.weil_built);
    CHECK(charpoly(f.matrix) == mul(IntPolynomial({2, 0, 1}), IntPolynomial({3, 0, 1})));

    AbelianEndo raw = abelian_endo(scale(IntMatrix::identity(2), BigInt(-2)));
    CHECK_FALSE(raw.weil_built);
    CHECK(raw.g == 1);

    // odd sizes have no place in the H^1 model
    CHECK_THROWS_AS(abelian_endo(IntMatrix::identity(3)), dimension_error);
    CHECK_THROWS_AS(abelian_endo(IntMatrix(2, 2)), domain_error); // singular
}

TEST_CASE("abelian degree and dynamical degree") {
    CHECK(ab_degree(minus_q_identity(2, 1)) == 4);
    CHECK(ab_degree(abelian_endo({weil_block(BigInt(1), BigInt(2))})) == 2);
    CHECK(ab_degree(abelian_endo(IntMatrix::identity(2))) == 1);

    SpectralRadius four = ab_dyn_degree(minus_q_identity(2, 1));
    CHECK(four.exact);
    CHECK(four.lo == Rational(4));

    SpectralRadius three = ab_dyn_degree(abelian_endo({weil_block(BigInt(0), BigInt(3))}));
    CHECK(three.exact);
    CHECK(three.lo == Rational(3));

    SpectralRadius one = ab_dyn_degree(abelian_endo(IntMatrix::identity(2)));
    CHECK(one.exact);
    CHECK(one.lo == Rational(1));
}

TEST_CASE("dynamical degree is the squared radius") {
    std::mt19937 rng(12609u);
    for (int iter = 0; iter < 6; ++iter) {
        AbelianEndo f = abelian_endo(random_blocks(1 + static_cast<int>(rng() % 3), rng));
        SpectralRadius squared = pow_radius(spectral_radius(f.matrix), 2);
        CHECK(radius_compare(ab_dyn_degree(f), squared) == Ordering::equal);
    }
}

TEST_CASE("fixed point counts of iterates") {
    CHECK(ab_fix_count(minus_q_identity(2, 1), 1) == 9);
    CHECK(ab_fix_count(minus_q_identity(2, 1), 3) == 81);
    CHECK(ab_fix_count(abelian_endo({weil_block(BigInt(1), BigInt(2))}), 1) == 2);
    CHECK_THROWS_AS(ab_fix_count(abelian_endo(IntMatrix::identity(2)), 1), domain_error);
    CHECK_THROWS_AS(ab_fix_count(minus_q_identity(2, 1), 0), domain_error);
}

TEST_CASE("sdd abelian subvariety") {
    AbelianEndo f = abelian_endo({weil_block(BigInt(0), BigInt(2)), weil_block(BigInt(0), BigInt(3))});
    SddSubgroup s = ab_sdd_subgroup(f);
    IntMatrix plane(4, 2);
    plane.at(0, 0) = 1;
    plane.at(1, 1) = 1;
    CHECK(s.lattice == sublattice_from_generators(4, plane));
    CHECK(s.d1_quotient.exact);
    CHECK(s.d1_quotient.lo == Rational(3));
    CHECK(s.d1_restricted.lo == Rational(2));
    CHECK(s.d1_total.lo == Rational(3));

    CHECK(ab_sdd_subgroup(minus_q_identity(2, 2)).lattice.is_zero());
    CHECK_THROWS_AS(ab_sdd_subgroup(abelian_endo(IntMatrix::identity(4))),
                    no_positive_entropy_error);
}

TEST_CASE("weil built lattices have even rank") {
    std::mt19937 rng(13711u);
    int done = 0;
    while (done < 6) {
        AbelianEndo f = abelian_endo(random_blocks(2 + static_cast<int>(rng() % 2), rng));
        if (radius_compare(ab_dyn_degree(f), one_radius()) != Ordering::greater) continue;
        ++done;
        SddSubgroup s = ab_sdd_subgroup(f);
        CHECK(s.lattice.rank() % 2 == 0);
        CHECK(s.quotient.rows % 2 == 0);
    }
}

TEST_CASE("sdd counts with bounds") {
    AbelianCount c1 = ab_count_sf(minus_q_identity(2, 1), 1);
    CHECK(c1.count == 9);
    CHECK(c1.bound == 9); // the optimal case: bound attained

    AbelianCount c2 = ab_count_sf(abelian_endo({weil_block(BigInt(1), BigInt(2))}), 1);
    CHECK(c2.count == 2);
    CHECK(c2.bound == 6); // ceil((sqrt 2 + 1)^2)

    AbelianCount c3 = ab_count_sf(
        abelian_endo({weil_block(BigInt(0), BigInt(2)), weil_block(BigInt(0), BigInt(3))}), 1);
    CHECK(c3.count == 4);
    CHECK(c3.bound == 8); // ceil((sqrt 3 + 1)^2)
}

TEST_CASE("count stays under the bound across blocks and iterates") {
    std::mt19937 rng(14813u);
    int done = 0;
    while (done < 8) {
        AbelianEndo f = abelian_endo(random_blocks(1 + static_cast<int>(rng() % 3), rng));
        if (radius_compare(ab_dyn_degree(f), one_radius()) != Ordering::greater) continue;
        ++done;
        SddSubgroup s = ab_sdd_subgroup(f);
        SpectralRadius rho = spectral_radius(f.matrix);
        for (unsigned long n = 1; n <= 4; ++n) {
            AbelianCount c = ab_count_sf(f, n);
            CHECK(c.count > 0);
            CHECK(c.count <= c.bound);
            // precomputed-parts form matches the one-shot form exactly
            AbelianCount c2 = ab_count_sf(s, rho, n);
            CHECK(c2.count == c.count);
            CHECK(c2.bound == c.bound);
        }
    }
}

TEST_CASE("full fixed counts respect the global bound") {
    std::mt19937 rng(15915u);
    int done = 0;
    while (done < 8) {
        int g = 1 + static_cast<int>(rng() % 3);
        AbelianEndo f = abelian_endo(random_blocks(g, rng));
        SpectralRadius rho = refined(spectral_radius(f.matrix), Rational(1, 1000000));
        for (unsigned long n = 1; n <= 3; ++n) {
            IntMatrix p = pow(f.matrix, n);
            if (determinant(sub(p, IntMatrix::identity(p.rows))) == 0) continue;
            Rational base = pow_rational(rho.hi, n) + 1;
            BigInt bound = ceil_r(pow_rational(base, static_cast<unsigned long>(2 * g)));
            CHECK(ab_fix_count(f, n) <= bound);
        }
        ++done;
    }
}

TEST_CASE("torsion count family for multiplication by minus q") {
    for (long q = 2; q <= 5; ++q)
        for (int g = 1; g <= 3; ++g)
            for (unsigned long n = 0; n <= 4; ++n) {
                BigInt expect = pow_int(pow_int(BigInt(q), 2 * n + 1) + 1,
                                        static_cast<unsigned long>(2 * g));
                CHECK(ab_fix_count(minus_q_identity(q, g), 2 * n + 1) == expect);
            }
}

TEST_CASE("fixed counts multiply over direct sums") {
    std::mt19937 rng(17017u);
    int done = 0;
    while (done < 6) {
        AbelianEndo f1 = abelian_endo(random_blocks(1, rng));
        AbelianEndo f2 = abelian_endo(random_blocks(1 + static_cast<int>(rng() % 2), rng));
        AbelianEndo sum = abelian_endo(block_diag({f1.matrix, f2.matrix}));
        for (unsigned long n = 1; n <= 3; ++n) {
            IntMatrix p1 = pow(f1.matrix, n), p2 = pow(f2.matrix, n);
            if (determinant(sub(p1, IntMatrix::identity(p1.rows))) == 0) continue;
            if (determinant(sub(p2, IntMatrix::identity(p2.rows))) == 0) continue;
            CHECK(ab_fix_count(sum, n) == ab_fix_count(f1, n) * ab_fix_count(f2, n));
        }
        ++done;
    }
}

TEST_CASE("genus one lefschetz bound") {
    CHECK(curve_lefschetz_check(weil_block(BigInt(1), BigInt(2))));
    CHECK(curve_lefschetz_check(weil_block(BigInt(-2), BigInt(2))));
    // degenerate boundary: multiplication by q
    CHECK(curve_lefschetz_check(weil_block(BigInt(4), BigInt(4))));
    CHECK_THROWS_AS(curve_lefschetz_check(weil_block(BigInt(0), BigInt(1))), domain_error);

    // exhaustive sweep over every valid block with 2 <= d <= 50
    for (long d = 2; d <= 50; ++d) {
        BigInt amax = isqrt_floor(BigInt(4 * d));
        for (BigInt a = -amax; a <= amax; ++a)
            CHECK(curve_lefschetz_check(weil_block(a, BigInt(d))));
    }
}

TEST_CASE("product divisor optimality family") {
    CHECK(product_divisor_example(BigInt(2), 0) == 9);
    CHECK(product_divisor_example(BigInt(2), 1) == 81);
    CHECK(product_divisor_example(BigInt(3), 1) == 784);
    CHECK_THROWS_AS(product_divisor_example(BigInt(1), 0), domain_error);
}

TEST_CASE("semi-abelian counts") {
    IntMatrix two(1, 1);
    two.at(0, 0) = 2;
    TorusEndo t = torus_endo(two);

    // torus part absorbed: global d1 = 4 comes from the abelian factor
    CHECK(semiabelian_count(t, minus_q_identity(2, 1), 1) == 9);

    // equal degrees: both factors contribute
    AbelianEndo w02 = abelian_endo({weil_block(BigInt(0), BigInt(2))});
    CHECK(semiabelian_count(t, w02, 1) == 3);

    // trivial abelian part: reduces to the torus count
    IntMatrix m23(2, 2);
    m23.at(0, 0) = 2;
    m23.at(1, 1) = 3;
    TorusEndo ft = torus_endo(m23);
    CHECK(semiabelian_count(ft, abelian_endo(IntMatrix::identity(2)), 1) == count_sf(ft, 1));

    // nothing expands anywhere
    IntMatrix one1(1, 1);
    one1.at(0, 0) = 1;
    CHECK_THROWS_AS(semiabelian_count(torus_endo(one1), abelian_endo(IntMatrix::identity(2)), 1),
                    no_positive_entropy_error);
    CHECK_THROWS_AS(semiabelian_count(t, minus_q_identity(2, 1), 0), domain_error);
}
