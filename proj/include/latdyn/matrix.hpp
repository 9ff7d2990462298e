#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "errors.hpp"

namespace latdyn {

// Dense integer matrix with arbitrary-precision entries, row-major storage.
// Everything here is a value; operations return fresh matrices.
struct IntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<BigInt> a; // rows * cols entries, row-major

    IntMatrix() = default;

    IntMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c)) {
        if (r < 0 || c < 0) throw dimension_error("negative matrix dimension");
    }

    // Row-major nested initializer, e.g. IntMatrix{{2, 0}, {0, 3}}.
    IntMatrix(std::initializer_list<std::initializer_list<BigInt>> init) {
        rows = static_cast<int>(init.size());
        cols = rows ? static_cast<int>(init.begin()->size()) : 0;
        a.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
        for (const auto& row : init) {
            if (static_cast<int>(row.size()) != cols)
                throw dimension_error("ragged matrix initializer");
            for (const auto& v : row) a.push_back(v);
        }
    }

    BigInt& at(int i, int j) {
        return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)];
    }
    const BigInt& at(int i, int j) const {
        return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)];
    }

    bool is_square() const { return rows == cols; }

    bool operator==(const IntMatrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }

    static IntMatrix identity(int n) {
        IntMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static IntMatrix zero(int r, int c) { return IntMatrix(r, c); }
};

inline IntMatrix transpose(const IntMatrix& m) {
    IntMatrix t(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
    return t;
}

inline IntMatrix add(const IntMatrix& x, const IntMatrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw dimension_error("matrix add: shape mismatch");
    IntMatrix r(x.rows, x.cols);
    for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
}

inline IntMatrix sub(const IntMatrix& x, const IntMatrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw dimension_error("matrix sub: shape mismatch");
    IntMatrix r(x.rows, x.cols);
    for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}

inline IntMatrix neg(const IntMatrix& x) {
    IntMatrix r(x.rows, x.cols);
    for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = -x.a[i];
    return r;
}

inline IntMatrix mul(const IntMatrix& x, const IntMatrix& y) {
    if (x.cols != y.rows) throw dimension_error("matrix mul: shape mismatch");
    IntMatrix r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const BigInt& xik = x.at(i, k);
            if (xik == 0) continue;
            for (int j = 0; j < y.cols; ++j) {
                r.at(i, j) += xik * y.at(k, j);
            }
        }
    for (const BigInt& v : r.a) guard_bits(v);
    return r;
}

inline IntMatrix scale(const IntMatrix& x, const BigInt& c) {
    IntMatrix r(x.rows, x.cols);
    for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] * c;
    return r;
}

inline std::vector<BigInt> mul_vec(const IntMatrix& x, const std::vector<BigInt>& v) {
    if (x.cols != static_cast<int>(v.size())) throw dimension_error("matrix-vector mul: shape mismatch");
    std::vector<BigInt> r(static_cast<std::size_t>(x.rows));
    for (int i = 0; i < x.rows; ++i) {
        BigInt s = 0;
        for (int j = 0; j < x.cols; ++j) s += x.at(i, j) * v[static_cast<std::size_t>(j)];
        r[static_cast<std::size_t>(i)] = s;
    }
    return r;
}

inline std::vector<Rational> mul_vec_rat(const IntMatrix& x, const std::vector<Rational>& v) {
    if (x.cols != static_cast<int>(v.size())) throw dimension_error("matrix-vector mul: shape mismatch");
    std::vector<Rational> r(static_cast<std::size_t>(x.rows));
    for (int i = 0; i < x.rows; ++i) {
        Rational s = 0;
        for (int j = 0; j < x.cols; ++j) s += Rational(x.at(i, j)) * v[static_cast<std::size_t>(j)];
        r[static_cast<std::size_t>(i)] = s;
    }
    return r;
}

inline IntMatrix pow(const IntMatrix& m, unsigned long e) {
    if (!m.is_square()) throw dimension_error("matrix pow: square matrix required");
    IntMatrix acc = IntMatrix::identity(m.rows);
    IntMatrix base = m;
    unsigned long k = e;
    while (k) {
        if (k & 1) acc = mul(acc, base);
        k >>= 1;
        if (k) base = mul(base, base);
    }
    return acc;
}

// Kronecker product; eigenvalues multiply pairwise. Used as an independent
// cross-check of the composed-product machinery in the test suite.
inline IntMatrix kron(const IntMatrix& x, const IntMatrix& y) {
    IntMatrix r(x.rows * y.rows, x.cols * y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) {
            if (x.at(i, j) == 0) continue;
            for (int k = 0; k < y.rows; ++k)
                for (int l = 0; l < y.cols; ++l)
                    r.at(i * y.rows + k, j * y.cols + l) = x.at(i, j) * y.at(k, l);
        }
    return r;
}

inline IntMatrix block_diag(const std::vector<IntMatrix>& blocks) {
    int n = 0, m = 0;
    for (const IntMatrix& b : blocks) {
        n += b.rows;
        m += b.cols;
    }
    IntMatrix r(n, m);
    int oi = 0, oj = 0;
    for (const IntMatrix& b : blocks) {
        for (int i = 0; i < b.rows; ++i)
            for (int j = 0; j < b.cols; ++j) r.at(oi + i, oj + j) = b.at(i, j);
        oi += b.rows;
        oj += b.cols;
    }
    return r;
}

// Exact determinant by fraction-free (Bareiss) elimination. All intermediate
// divisions are exact in Z; no rounding anywhere.
inline BigInt determinant(const IntMatrix& m) {
    if (!m.is_square()) throw dimension_error("determinant: square matrix required");
    int n = m.rows;
    if (n == 0) return BigInt(1);
    IntMatrix w = m;
    BigInt prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (w.at(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (w.at(i, k) != 0) { p = i; break; }
            if (p < 0) return BigInt(0);
            for (int j = 0; j < n; ++j) std::swap(w.at(k, j), w.at(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                BigInt num = w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j);
                w.at(i, j) = num / prev; // exact by Bareiss
                guard_bits(w.at(i, j));
            }
            w.at(i, k) = 0;
        }
        prev = w.at(k, k);
    }
    return sign > 0 ? w.at(n - 1, n - 1) : -w.at(n - 1, n - 1);
}

// Builds the matrix with the given columns (each of length rows).
inline IntMatrix from_columns(int rows, const std::vector<std::vector<BigInt>>& cols) {
    IntMatrix m(rows, static_cast<int>(cols.size()));
    for (int j = 0; j < m.cols; ++j) {
        if (static_cast<int>(cols[static_cast<std::size_t>(j)].size()) != rows)
            throw dimension_error("from_columns: column length mismatch");
        for (int i = 0; i < rows; ++i) m.at(i, j) = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    }
    return m;
}

inline std::vector<BigInt> column_of(const IntMatrix& m, int j) {
    std::vector<BigInt> c(static_cast<std::size_t>(m.rows));
    for (int i = 0; i < m.rows; ++i) c[static_cast<std::size_t>(i)] = m.at(i, j);
    return c;
}

inline std::string matrix_str(const IntMatrix& m) {
    std::string s;
    for (int i = 0; i < m.rows; ++i) {
        s += "[";
        for (int j = 0; j < m.cols; ++j) {
            s += " " + m.at(i, j).str();
        }
        s += " ]";
        if (i + 1 < m.rows) s += "\n";
    }
    if (m.rows == 0) s = "[]";
    return s;
}

} // namespace latdyn
