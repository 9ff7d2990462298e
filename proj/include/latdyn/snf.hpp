#pragma once

#include <utility>

#include "matrix.hpp"

namespace latdyn {

// Smith normal form U * A * V = D with U, V unimodular and D diagonal,
// d_1 | d_2 | ... | d_r, all nonnegative.
struct SnfDecomposition {
    IntMatrix u; // rows x rows, unimodular
    IntMatrix v; // cols x cols, unimodular
    IntMatrix d; // rows x cols, diagonal
};

inline SnfDecomposition smith_normal_form(const IntMatrix& a) {
    IntMatrix d = a;
    IntMatrix u = IntMatrix::identity(a.rows);
    IntMatrix v = IntMatrix::identity(a.cols);

    auto swap_rows = [&](int i, int j) {
        if (i == j) return;
        for (int c = 0; c < d.cols; ++c) std::swap(d.at(i, c), d.at(j, c));
        for (int c = 0; c < u.cols; ++c) std::swap(u.at(i, c), u.at(j, c));
    };
    auto swap_cols = [&](int i, int j) {
        if (i == j) return;
        for (int r = 0; r < d.rows; ++r) std::swap(d.at(r, i), d.at(r, j));
        for (int r = 0; r < v.rows; ++r) std::swap(v.at(r, i), v.at(r, j));
    };
    auto add_row = [&](int dst, int src, const BigInt& f) { // row_dst += f * row_src
        if (f == 0) return;
        for (int c = 0; c < d.cols; ++c) d.at(dst, c) += f * d.at(src, c);
        for (int c = 0; c < u.cols; ++c) u.at(dst, c) += f * u.at(src, c);
    };
    auto add_col = [&](int dst, int src, const BigInt& f) { // col_dst += f * col_src
        if (f == 0) return;
        for (int r = 0; r < d.rows; ++r) d.at(r, dst) += f * d.at(r, src);
        for (int r = 0; r < v.rows; ++r) v.at(r, dst) += f * v.at(r, src);
    };
    auto negate_row = [&](int i) {
        for (int c = 0; c < d.cols; ++c) d.at(i, c) = -d.at(i, c);
        for (int c = 0; c < u.cols; ++c) u.at(i, c) = -u.at(i, c);
    };

    const int rank_bound = std::min(d.rows, d.cols);
    for (int t = 0; t < rank_bound; ++t) {
        // Find the entry of smallest absolute value in the remaining block.
        int pi = -1, pj = -1;
        for (int i = t; i < d.rows; ++i)
            for (int j = t; j < d.cols; ++j) {
                if (d.at(i, j) == 0) continue;
                if (pi < 0 || abs_int(d.at(i, j)) < abs_int(d.at(pi, pj))) { pi = i; pj = j; }
            }
        if (pi < 0) break; // remaining block is zero
        swap_rows(t, pi);
        swap_cols(t, pj);

        for (;;) {
            // Clear column t below and row t right of the pivot.
            bool dirty = false;
            for (int i = t + 1; i < d.rows; ++i) {
                if (d.at(i, t) == 0) continue;
                BigInt q = d.at(i, t) / d.at(t, t);
                add_row(i, t, -q);
                if (d.at(i, t) != 0) { swap_rows(t, i); dirty = true; }
            }
            if (dirty) continue;
            for (int j = t + 1; j < d.cols; ++j) {
                if (d.at(t, j) == 0) continue;
                BigInt q = d.at(t, j) / d.at(t, t);
                add_col(j, t, -q);
                if (d.at(t, j) != 0) { swap_cols(t, j); dirty = true; }
            }
            if (dirty) continue;
            // Pivot must divide every entry of the remaining block; absorb an
            // offender into row t and keep reducing. This is what produces the
            // divisibility chain d_t | d_{t+1} | ...
            int oi = -1;
            for (int i = t + 1; i < d.rows && oi < 0; ++i)
                for (int j = t + 1; j < d.cols; ++j)
                    if (d.at(i, j) % d.at(t, t) != 0) { oi = i; break; }
            if (oi < 0) break;
            add_row(t, oi, BigInt(1));
        }
        if (d.at(t, t) < 0) negate_row(t);
        for (const BigInt& x : d.a) guard_bits(x);
    }
    return {std::move(u), std::move(v), std::move(d)};
}

// Diagonal of the normal form, nonzero entries only (the invariant factors).
inline std::vector<BigInt> invariant_factors(const SnfDecomposition& s) {
    std::vector<BigInt> f;
    const int k = std::min(s.d.rows, s.d.cols);
    for (int i = 0; i < k; ++i)
        if (s.d.at(i, i) != 0) f.push_back(s.d.at(i, i));
    return f;
}

} // namespace latdyn
