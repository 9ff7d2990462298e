#pragma once

#include <vector>

#include "matrix.hpp"
#include "polynomial.hpp"

namespace latdyn {

// Characteristic polynomial det(t*I - m), monic, by the Berkowitz vector
// recurrence: division-free, so every intermediate value is an exact integer.
inline IntPolynomial charpoly(const IntMatrix& m) {
    if (!m.is_square()) throw dimension_error("charpoly: square matrix required");
    const int n = m.rows;
    if (n == 0) return IntPolynomial::one();

    // v holds the coefficients of det(t*I - A_r) for the r x r leading block,
    // descending by degree (v[0] = 1).
    std::vector<BigInt> v{BigInt(1), -m.at(0, 0)};
    for (int r = 2; r <= n; ++r) {
        // Toeplitz column for the r-th step: [1, -a_rr, -(R S), -(R B S), ...]
        // with B the (r-1) x (r-1) block, R the new row, S the new column.
        std::vector<BigInt> col(static_cast<std::size_t>(r) + 1);
        col[0] = 1;
        col[1] = -m.at(r - 1, r - 1);
        std::vector<BigInt> w(static_cast<std::size_t>(r - 1)); // B^k S
        for (int i = 0; i < r - 1; ++i) w[static_cast<std::size_t>(i)] = m.at(i, r - 1);
        for (int k = 0; k + 2 <= r; ++k) {
            BigInt dot = 0;
            for (int i = 0; i < r - 1; ++i) dot += m.at(r - 1, i) * w[static_cast<std::size_t>(i)];
            col[static_cast<std::size_t>(k) + 2] = -dot;
            guard_bits(dot);
            if (k + 3 <= r) {
                std::vector<BigInt> w2(static_cast<std::size_t>(r - 1));
                for (int i = 0; i < r - 1; ++i) {
                    BigInt s = 0;
                    for (int j = 0; j < r - 1; ++j) s += m.at(i, j) * w[static_cast<std::size_t>(j)];
                    w2[static_cast<std::size_t>(i)] = s;
                }
                w.swap(w2);
            }
        }
        // v <- T * v where T is the (r+1) x r lower-triangular Toeplitz matrix
        // built from col.
        std::vector<BigInt> nv(static_cast<std::size_t>(r) + 1);
        for (int i = 0; i <= r; ++i) {
            BigInt s = 0;
            for (int j = 0; j < r && j <= i; ++j) {
                if (i - j <= r) s += col[static_cast<std::size_t>(i - j)] * v[static_cast<std::size_t>(j)];
            }
            nv[static_cast<std::size_t>(i)] = s;
            guard_bits(s);
        }
        v.swap(nv);
    }
    // v is descending; IntPolynomial wants ascending.
    std::vector<BigInt> asc(v.rbegin(), v.rend());
    return IntPolynomial(std::move(asc));
}

// Evaluates a polynomial at a square matrix (Horner).
inline IntMatrix eval_at_matrix(const IntPolynomial& p, const IntMatrix& m) {
    if (!m.is_square()) throw dimension_error("eval_at_matrix: square matrix required");
    const int n = m.rows;
    IntMatrix acc = IntMatrix::zero(n, n);
    for (std::size_t i = p.coeffs.size(); i-- > 0;) {
        acc = mul(acc, m);
        for (int d = 0; d < n; ++d) acc.at(d, d) += p.coeffs[i];
    }
    return acc;
}

} // namespace latdyn
