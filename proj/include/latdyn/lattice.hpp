#pragma once

#include <optional>
#include <vector>

#include "charpoly.hpp"
#include "hnf.hpp"
#include "matrix.hpp"
#include "snf.hpp"

namespace latdyn {

// Sublattice of Z^ambient_rank. The basis is kept in column Hermite normal
// form, which is the unique representative of the column span, so equal
// lattices compare equal. `saturated` records whether span_Q(L) meets Z^n in
// exactly L (equivalently: all invariant factors of the basis are 1).
struct Sublattice {
    int ambient_rank = 0;
    IntMatrix basis; // ambient_rank x rank, column HNF
    bool saturated = true;

    int rank() const { return basis.cols; }
    bool is_zero() const { return basis.cols == 0; }

    bool operator==(const Sublattice& o) const {
        return ambient_rank == o.ambient_rank && basis == o.basis;
    }
    bool operator!=(const Sublattice& o) const { return !(*this == o); }
};

namespace detail {
inline bool all_invariant_factors_one(const IntMatrix& basis) {
    if (basis.cols == 0) return true;
    SnfDecomposition s = smith_normal_form(basis);
    for (const BigInt& f : invariant_factors(s))
        if (f != 1) return false;
    return true;
}
} // namespace detail

// Canonicalizes an arbitrary generating set (columns of `gens`) into a
// Sublattice. Dependent/zero generators are fine; the HNF drops them.
inline Sublattice sublattice_from_generators(int ambient_rank, const IntMatrix& gens) {
    if (gens.rows != ambient_rank) throw dimension_error("sublattice generators: ambient rank mismatch");
    ColHnfResult h = col_hnf(gens);
    Sublattice l;
    l.ambient_rank = ambient_rank;
    l.basis = h.h;
    l.saturated = detail::all_invariant_factors_one(l.basis);
    return l;
}

inline Sublattice zero_sublattice(int ambient_rank) {
    Sublattice l;
    l.ambient_rank = ambient_rank;
    l.basis = IntMatrix(ambient_rank, 0);
    l.saturated = true;
    return l;
}

inline Sublattice full_sublattice(int ambient_rank) {
    Sublattice l;
    l.ambient_rank = ambient_rank;
    l.basis = IntMatrix::identity(ambient_rank);
    l.saturated = true;
    return l;
}

// First nonzero row of each basis column; strictly increasing by the echelon
// shape of the column HNF.
inline std::vector<int> pivot_rows(const IntMatrix& basis) {
    std::vector<int> p;
    for (int j = 0; j < basis.cols; ++j) {
        int r = 0;
        while (r < basis.rows && basis.at(r, j) == 0) ++r;
        if (r == basis.rows) throw domain_error("zero column in a lattice basis");
        p.push_back(r);
    }
    return p;
}

// Solves basis * x = c over Q by forward substitution along pivot rows.
// Returns nullopt when c is outside span_Q(basis).
inline std::optional<std::vector<Rational>> solve_in_span(const IntMatrix& basis,
                                                          const std::vector<Rational>& c) {
    if (static_cast<int>(c.size()) != basis.rows) throw dimension_error("solve_in_span: length mismatch");
    std::vector<int> piv = pivot_rows(basis);
    const int k = basis.cols;
    std::vector<Rational> x(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        Rational acc = c[static_cast<std::size_t>(piv[static_cast<std::size_t>(j)])];
        for (int i = 0; i < j; ++i)
            acc -= Rational(basis.at(piv[static_cast<std::size_t>(j)], i)) * x[static_cast<std::size_t>(i)];
        x[static_cast<std::size_t>(j)] = acc / Rational(basis.at(piv[static_cast<std::size_t>(j)], j));
    }
    // Verify on all rows (the pivot rows only constrain, they do not certify).
    for (int r = 0; r < basis.rows; ++r) {
        Rational acc = 0;
        for (int j = 0; j < k; ++j) acc += Rational(basis.at(r, j)) * x[static_cast<std::size_t>(j)];
        if (acc != c[static_cast<std::size_t>(r)]) return std::nullopt;
    }
    return x;
}

// Membership of an integer vector in span_Z(basis).
inline bool in_span_z(const IntMatrix& basis, const std::vector<BigInt>& v) {
    std::vector<Rational> c(v.begin(), v.end());
    auto x = solve_in_span(basis, c);
    if (!x) return false;
    for (const Rational& xi : *x)
        if (denominator_of(xi) != 1) return false;
    return true;
}

// Kernel of m as a saturated sublattice of Z^cols: the trailing columns of V
// in U m V = D are a basis, already part of a unimodular matrix.
inline Sublattice kernel_lattice(const IntMatrix& m) {
    SnfDecomposition s = smith_normal_form(m);
    int r = static_cast<int>(invariant_factors(s).size());
    IntMatrix gens(m.cols, m.cols - r);
    for (int j = r; j < m.cols; ++j)
        for (int i = 0; i < m.cols; ++i) gens.at(i, j - r) = s.v.at(i, j);
    Sublattice l = sublattice_from_generators(m.cols, gens);
    l.saturated = true; // columns of a unimodular matrix span a saturated lattice
    return l;
}

// Saturation: span_Q(l) intersected with Z^n, computed by a double kernel.
// Idempotent; the result always has the saturated flag set.
inline Sublattice saturate(const Sublattice& l) {
    if (l.is_zero() || l.saturated) {
        Sublattice r = l;
        r.saturated = true;
        return r;
    }
    // Annihilator of the span: kernel of basis^T. Then the saturation is the
    // kernel of (annihilator basis)^T.
    Sublattice ann = kernel_lattice(transpose(l.basis));
    if (ann.is_zero()) return full_sublattice(l.ambient_rank);
    return kernel_lattice(transpose(ann.basis));
}

// Does m map the lattice into itself (m * span_Z(l) inside span_Z(l))?
inline bool is_invariant(const IntMatrix& m, const Sublattice& l) {
    if (!m.is_square() || m.rows != l.ambient_rank)
        throw dimension_error("is_invariant: ambient rank mismatch");
    for (int j = 0; j < l.basis.cols; ++j) {
        std::vector<BigInt> img = mul_vec(m, column_of(l.basis, j));
        if (!in_span_z(l.basis, img)) return false;
    }
    return true;
}

// Matrix of m restricted to l, in the basis of l: basis * R = m * basis.
// Requires invariance at the Z level (automatic for saturated invariant l).
inline IntMatrix restrict_matrix(const IntMatrix& m, const Sublattice& l) {
    if (!m.is_square() || m.rows != l.ambient_rank)
        throw dimension_error("restrict_matrix: ambient rank mismatch");
    const int k = l.basis.cols;
    IntMatrix r(k, k);
    for (int j = 0; j < k; ++j) {
        std::vector<BigInt> img = mul_vec(m, column_of(l.basis, j));
        std::vector<Rational> c(img.begin(), img.end());
        auto x = solve_in_span(l.basis, c);
        if (!x) throw invariance_error("restrict: lattice is not invariant under the matrix");
        for (int i = 0; i < k; ++i) {
            if (denominator_of((*x)[static_cast<std::size_t>(i)]) != 1)
                throw invariance_error("restrict: image leaves the integer span (lattice not invariant or not saturated)");
            r.at(i, j) = numerator_of((*x)[static_cast<std::size_t>(i)]);
        }
    }
    return r;
}

// Unimodular P whose first rank() columns are exactly l.basis. Exists iff l
// is saturated: with U basis V = [I; 0], the first columns of U^-1 are
// basis*V, so P = U^-1 * diag(V^-1, I) works.
inline IntMatrix extend_to_unimodular(const Sublattice& l) {
    if (!l.saturated) throw invariance_error("extend: saturated sublattice required");
    const int n = l.ambient_rank;
    const int k = l.basis.cols;
    if (k == 0) return IntMatrix::identity(n);
    SnfDecomposition s = smith_normal_form(l.basis);
    for (const BigInt& f : invariant_factors(s))
        if (f != 1) throw invariance_error("extend: basis is not saturated");
    IntMatrix uinv = inverse_unimodular(s.u);
    IntMatrix vinv = inverse_unimodular(s.v);
    IntMatrix w = IntMatrix::identity(n);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) w.at(i, j) = vinv.at(i, j);
    return mul(uinv, w);
}

// Matrix induced by m on Z^n / l. In the P-basis of extend_to_unimodular,
// m becomes [[R, S], [0, Q]] with R = restrict_matrix(m, l); this returns Q.
// charpoly(m) = charpoly(restrict) * charpoly(quotient) by the block shape.
inline IntMatrix quotient_matrix(const IntMatrix& m, const Sublattice& l) {
    if (!m.is_square() || m.rows != l.ambient_rank)
        throw dimension_error("quotient_matrix: ambient rank mismatch");
    if (!l.saturated) throw invariance_error("quotient: saturated sublattice required");
    IntMatrix p = extend_to_unimodular(l);
    IntMatrix pinv = inverse_unimodular(p);
    IntMatrix conj = mul(pinv, mul(m, p));
    const int k = l.basis.cols;
    const int q = l.ambient_rank - k;
    // The lower-left block must vanish, otherwise l was not invariant.
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < k; ++j)
            if (conj.at(k + i, j) != 0)
                throw invariance_error("quotient: lattice is not invariant under the matrix");
    IntMatrix out(q, q);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) out.at(i, j) = conj.at(k + i, k + j);
    return out;
}

} // namespace latdyn
