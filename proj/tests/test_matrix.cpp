#include <catch2/catch_amalgamated.hpp>

#include <latdyn/charpoly.hpp>
#include <latdyn/hnf.hpp>
#include <latdyn/matrix.hpp>

#include "t_random.hpp"

using namespace latdyn;

TEST_CASE("charpoly on small pinned cases") {
    // diag(2,3) -> t^2 - 5t + 6
    CHECK(charpoly(IntMatrix{{2, 0}, {0, 3}}) == IntPolynomial({6, -5, 1}));
    // [[0,1],[1,1]] -> t^2 - t - 1
    CHECK(charpoly(IntMatrix{{0, 1}, {1, 1}}) == IntPolynomial({-1, -1, 1}));
    // identity(3) -> (t-1)^3
    CHECK(charpoly(IntMatrix::identity(3)) == IntPolynomial({-1, 3, -3, 1}));
    // 0x0 -> 1
    CHECK(charpoly(IntMatrix(0, 0)) == IntPolynomial::one());
    // zero 2x2 -> t^2
    CHECK(charpoly(IntMatrix(2, 2)) == IntPolynomial({0, 0, 1}));
}

TEST_CASE("determinant agrees with charpoly at 0") {
    tgen::Rng rng(20260816u);
    for (int it = 0; it < 150; ++it) {
        int n = 1 + static_cast<int>(rng() % 5);
        IntMatrix m = tgen::random_matrix(rng, n, n, -4, 4);
        IntPolynomial p = charpoly(m);
        BigInt dete = determinant(m);
        BigInt from_cp = eval(p, BigInt(0));
        if (n % 2 == 1) from_cp = -from_cp;
        CHECK(dete == from_cp);
    }
}

TEST_CASE("charpoly is monic of degree n and similarity-invariant") {
    tgen::Rng rng(7u);
    for (int it = 0; it < 60; ++it) {
        int n = 1 + static_cast<int>(rng() % 4);
        IntMatrix m = tgen::random_matrix(rng, n, n, -3, 3);
        IntPolynomial p = charpoly(m);
        REQUIRE(p.degree() == n);
        CHECK(p.lc() == 1);
        IntMatrix u = tgen::random_unimodular(rng, n, 12);
        IntMatrix conj = mul(mul(u, m), inverse_unimodular(u));
        CHECK(charpoly(conj) == p);
    }
}

TEST_CASE("determinant is multiplicative") {
    tgen::Rng rng(99u);
    for (int it = 0; it < 80; ++it) {
        int n = 1 + static_cast<int>(rng() % 4);
        IntMatrix a = tgen::random_matrix(rng, n, n, -5, 5);
        IntMatrix b = tgen::random_matrix(rng, n, n, -5, 5);
        CHECK(determinant(mul(a, b)) == determinant(a) * determinant(b));
    }
}

TEST_CASE("matrix power and kron basics") {
    IntMatrix f{{1, 1}, {1, 0}};
    IntMatrix f5 = pow(f, 5);
    CHECK(f5.at(0, 0) == 8); // Fibonacci
    CHECK(f5.at(0, 1) == 5);
    CHECK(pow(f, 0) == IntMatrix::identity(2));

    IntMatrix a{{2, 0}, {0, 3}};
    IntMatrix k = kron(a, a);
    CHECK(k.rows == 4);
    CHECK(determinant(k) == 1296); // (2*2)*(2*3)*(3*2)*(3*3)
}

TEST_CASE("eval_at_matrix and Cayley-Hamilton") {
    tgen::Rng rng(1234u);
    for (int it = 0; it < 40; ++it) {
        int n = 1 + static_cast<int>(rng() % 4);
        IntMatrix m = tgen::random_matrix(rng, n, n, -3, 3);
        CHECK(eval_at_matrix(charpoly(m), m) == IntMatrix::zero(n, n));
    }
}

TEST_CASE("dimension errors") {
    CHECK_THROWS_AS(determinant(IntMatrix(2, 3)), dimension_error);
    CHECK_THROWS_AS(mul(IntMatrix(2, 3), IntMatrix(2, 3)), dimension_error);
    CHECK_THROWS_AS(charpoly(IntMatrix(1, 2)), dimension_error);
}

TEST_CASE("entry bit guard trips on runaway growth") {
    auto old = entry_bit_limit().load();
    entry_bit_limit().store(64);
    IntMatrix m{{1000000007, 0}, {0, 1000000007}};
    CHECK_THROWS_AS(pow(m, 16), resource_error);
    entry_bit_limit().store(old);
}
