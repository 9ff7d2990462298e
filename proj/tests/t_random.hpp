#pragma once

// Shared deterministic generators for the randomized suites. Every test file
// seeds its own engine with a fixed constant so runs are reproducible.

#include <random>

#include <latdyn/matrix.hpp>
#include <latdyn/polynomial.hpp>

namespace tgen {

using Rng = std::mt19937_64;

inline latdyn::IntMatrix random_matrix(Rng& rng, int rows, int cols, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    latdyn::IntMatrix m(rows, cols);
    for (auto& v : m.a) v = d(rng);
    return m;
}

inline latdyn::IntMatrix random_nonsingular(Rng& rng, int n, int lo, int hi) {
    for (;;) {
        latdyn::IntMatrix m = random_matrix(rng, n, n, lo, hi);
        if (latdyn::determinant(m) != 0) return m;
    }
}

inline latdyn::IntPolynomial random_poly(Rng& rng, int max_deg, int lo, int hi) {
    std::uniform_int_distribution<int> dd(0, max_deg);
    std::uniform_int_distribution<int> d(lo, hi);
    int deg = dd(rng);
    std::vector<latdyn::BigInt> c(static_cast<std::size_t>(deg) + 1);
    for (auto& v : c) v = d(rng);
    latdyn::IntPolynomial p(std::move(c));
    return p;
}

inline latdyn::IntPolynomial random_nonzero_poly(Rng& rng, int max_deg, int lo, int hi) {
    for (;;) {
        latdyn::IntPolynomial p = random_poly(rng, max_deg, lo, hi);
        if (!p.is_zero()) return p;
    }
}

// Unimodular matrix as a product of random elementary operations.
inline latdyn::IntMatrix random_unimodular(Rng& rng, int n, int ops) {
    using namespace latdyn;
    IntMatrix u = IntMatrix::identity(n);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::uniform_int_distribution<int> coef(-2, 2);
    std::uniform_int_distribution<int> kind(0, 2);
    for (int s = 0; s < ops; ++s) {
        int i = pick(rng), j = pick(rng);
        switch (kind(rng)) {
        case 0:
            if (i != j)
                for (int c = 0; c < n; ++c) std::swap(u.at(i, c), u.at(j, c));
            break;
        case 1:
            for (int c = 0; c < n; ++c) u.at(i, c) = -u.at(i, c);
            break;
        default:
            if (i != j) {
                BigInt f = coef(rng);
                for (int c = 0; c < n; ++c) u.at(i, c) += f * u.at(j, c);
            }
            break;
        }
    }
    return u;
}

} // namespace tgen
