#pragma once

#include <utility>
#include <vector>

#include "matrix.hpp"

namespace latdyn {

struct HnfResult {
    IntMatrix h;         // the normal form
    IntMatrix transform; // unimodular, transform * input = h (row form)
    std::vector<int> pivot_cols;
};

// Row-style Hermite normal form by integer row operations.
// Pivots positive, zeros below each pivot, entries above reduced into
// [0, pivot). The form is the canonical representative of the row space.
inline HnfResult row_hnf(const IntMatrix& a) {
    IntMatrix h = a;
    IntMatrix u = IntMatrix::identity(a.rows);
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < h.cols && row < h.rows; ++col) {
        // Euclidean elimination below position (row, col).
        for (;;) {
            int best = -1;
            for (int i = row; i < h.rows; ++i) {
                if (h.at(i, col) == 0) continue;
                if (best < 0 || abs_int(h.at(i, col)) < abs_int(h.at(best, col))) best = i;
            }
            if (best < 0) break;
            if (best != row) {
                for (int j = 0; j < h.cols; ++j) std::swap(h.at(row, j), h.at(best, j));
                for (int j = 0; j < h.rows; ++j) std::swap(u.at(row, j), u.at(best, j));
            }
            bool any_left = false;
            for (int i = row + 1; i < h.rows; ++i) {
                if (h.at(i, col) == 0) continue;
                BigInt q = h.at(i, col) / h.at(row, col); // truncated; remainder shrinks
                if (q != 0) {
                    for (int j = 0; j < h.cols; ++j) h.at(i, j) -= q * h.at(row, j);
                    for (int j = 0; j < h.rows; ++j) u.at(i, j) -= q * u.at(row, j);
                }
                if (h.at(i, col) != 0) any_left = true;
            }
            if (!any_left) break;
        }
        if (h.at(row, col) == 0) continue;
        if (h.at(row, col) < 0) {
            for (int j = 0; j < h.cols; ++j) h.at(row, j) = -h.at(row, j);
            for (int j = 0; j < h.rows; ++j) u.at(row, j) = -u.at(row, j);
        }
        // Reduce entries above the pivot into [0, pivot).
        for (int i = 0; i < row; ++i) {
            BigInt q = h.at(i, col) / h.at(row, col);
            if (h.at(i, col) - q * h.at(row, col) < 0) q -= 1; // floor division
            if (q != 0) {
                for (int j = 0; j < h.cols; ++j) h.at(i, j) -= q * h.at(row, j);
                for (int j = 0; j < h.rows; ++j) u.at(i, j) -= q * u.at(row, j);
            }
        }
        for (const BigInt& v : h.a) guard_bits(v);
        pivots.push_back(col);
        ++row;
    }
    return {std::move(h), std::move(u), std::move(pivots)};
}

// Column-style HNF: input * transform = h, canonical for the column span.
// Zero columns (beyond the rank) are dropped from h.
struct ColHnfResult {
    IntMatrix h;         // ambient x rank
    std::vector<int> pivot_rows;
};

inline ColHnfResult col_hnf(const IntMatrix& a) {
    HnfResult r = row_hnf(transpose(a));
    IntMatrix ht = transpose(r.h);
    // Keep only the rank many leading columns (the rest are zero).
    int rank = static_cast<int>(r.pivot_cols.size());
    IntMatrix b(ht.rows, rank);
    for (int i = 0; i < ht.rows; ++i)
        for (int j = 0; j < rank; ++j) b.at(i, j) = ht.at(i, j);
    return {std::move(b), r.pivot_cols};
}

// Inverse of a unimodular integer matrix: row-reduce [U | I] to [I | U^-1].
inline IntMatrix inverse_unimodular(const IntMatrix& u) {
    if (!u.is_square()) throw dimension_error("inverse_unimodular: square matrix required");
    HnfResult r = row_hnf(u);
    if (r.h != IntMatrix::identity(u.rows))
        throw domain_error("inverse_unimodular: matrix is not unimodular");
    return r.transform;
}

} // namespace latdyn
