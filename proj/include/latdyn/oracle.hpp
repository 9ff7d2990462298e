#pragma once

#include <set>
#include <vector>

#include "bigint.hpp"
#include "errors.hpp"
#include "hnf.hpp"
#include "lattice.hpp"
#include "matrix.hpp"
#include "snf.hpp"
#include "torus.hpp"

namespace latdyn {

// Brute-force recounts on finite torsion grids. Everything here is
// deliberately the slow, obvious computation: these functions are the
// ground truth the fast determinant and enumeration paths are checked
// against, so they must not share code with them.

constexpr long torsion_grid_cap = 10000000;

// The subgroup (1/N)Z^n / Z^n with N^n elements.
struct TorsionGrid {
    BigInt modulus = 1;
    int dim = 1;
};

inline TorsionGrid torsion_grid(const BigInt& modulus, int dim, long cap = torsion_grid_cap) {
    if (modulus <= 0 || dim <= 0)
        throw domain_error("torsion grid needs a positive modulus and dimension");
    if (pow_int(modulus, static_cast<unsigned long>(dim)) > cap)
        throw resource_error("torsion grid exceeds the enumeration cap");
    TorsionGrid g;
    g.modulus = modulus;
    g.dim = dim;
    return g;
}

namespace detail {

// Mixed-radix sweep over all digit vectors in [0, N)^n. The visitor gets
// the digits; points are digits / N.
template <typename Visit>
inline void sweep_grid(const TorsionGrid& grid, Visit visit) {
    const long n = grid.modulus.convert_to<long>();
    std::vector<long> digits(static_cast<std::size_t>(grid.dim), 0);
    for (;;) {
        visit(digits);
        int pos = 0;
        while (pos < grid.dim) {
            if (++digits[static_cast<std::size_t>(pos)] < n) break;
            digits[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == grid.dim) return;
    }
}

} // namespace detail

struct BfFixedPoints {
    BigInt count = 0;
    std::vector<TorsionVector> points;
};

// Exhaustive fixed point count of x -> Mx + a over the grid. Each grid
// point x = d/N is tested by the integer congruence
//   sum_j (M - I)_ij d_j + N a_i = 0 (mod N)
// per coordinate, so the sweep never leaves exact arithmetic. When N is a
// multiple of |det(M - I)| den(a) and M - I is nonsingular this finds every
// fixed point of the full torus map.
inline BfFixedPoints bf_fixed_points(const IntMatrix& m, const TorsionVector& a,
                                     const TorsionGrid& grid) {
    if (!m.is_square() || m.rows != grid.dim || a.size() != m.rows)
        throw dimension_error("oracle: matrix, translation and grid sizes must agree");
    if (grid.modulus % a.denominator != 0)
        throw domain_error("grid modulus must absorb the translation denominator");
    const int n = m.rows;
    std::vector<BigInt> a_scaled(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        a_scaled[static_cast<std::size_t>(i)] =
            numerator_of(Rational(grid.modulus) * a.coords[static_cast<std::size_t>(i)]);

    BfFixedPoints out;
    detail::sweep_grid(grid, [&](const std::vector<long>& d) {
        for (int i = 0; i < n; ++i) {
            BigInt acc = a_scaled[static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j) {
                BigInt c = m.at(i, j);
                if (i == j) c -= 1;
                acc += c * d[static_cast<std::size_t>(j)];
            }
            if (acc % grid.modulus != 0) return;
        }
        std::vector<Rational> coords(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j)
            coords[static_cast<std::size_t>(j)] = Rational(d[static_cast<std::size_t>(j)], grid.modulus);
        out.points.push_back(torsion_vector(std::move(coords)));
        out.count += 1;
    });
    return out;
}

// Counts the cosets of the subgroup spanned by `lattice` that are fixed as
// sets: grid points b with (M - I)b + a inside the subgroup, de-duplicated
// by their coordinates transverse to the lattice. With lattice taken from
// sdd_subgroup(f) and a large enough grid this recounts count_sf(f, 1).
inline BigInt bf_sdd_cosets(const TorusEndo& f, const Sublattice& lattice,
                            const TorsionGrid& grid) {
    const int n = f.dim();
    if (n != grid.dim || lattice.ambient_rank != n)
        throw dimension_error("oracle: system, lattice and grid sizes must agree");
    if (grid.modulus % f.translation.denominator != 0)
        throw domain_error("grid modulus must absorb the translation denominator");
    IntMatrix pinv = inverse_unimodular(extend_to_unimodular(lattice));
    const int k = lattice.rank();

    std::set<std::vector<Rational>> cosets;
    detail::sweep_grid(grid, [&](const std::vector<long>& d) {
        // c = (M - I) b + a, then both tests only look at the quotient
        // rows of pinv: membership needs them integral, identity of the
        // coset is their value at b itself.
        std::vector<Rational> c(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            BigInt acc = 0;
            for (int j = 0; j < n; ++j) {
                BigInt e = f.matrix.at(i, j);
                if (i == j) e -= 1;
                acc += e * d[static_cast<std::size_t>(j)];
            }
            c[static_cast<std::size_t>(i)] =
                Rational(acc, grid.modulus) + f.translation.coords[static_cast<std::size_t>(i)];
        }
        for (int r = k; r < n; ++r) {
            Rational y = 0;
            for (int j = 0; j < n; ++j) y += Rational(pinv.at(r, j)) * c[static_cast<std::size_t>(j)];
            if (mod1(y) != 0) return;
        }
        std::vector<Rational> key(static_cast<std::size_t>(n - k));
        for (int r = k; r < n; ++r) {
            BigInt acc = 0;
            for (int j = 0; j < n; ++j) acc += pinv.at(r, j) * d[static_cast<std::size_t>(j)];
            key[static_cast<std::size_t>(r - k)] = mod1(Rational(acc, grid.modulus));
        }
        cosets.insert(std::move(key));
    });
    return BigInt(cosets.size());
}

// Second independent recount of fixed points: Smith invariants of M - I
// instead of a determinant or a sweep. Writing x = Vz turns
// (M - I)x = -a (mod 1) into d_i z_i = c_i (mod 1) with c = U(-a), and a
// nonzero d_i admits exactly |d_i| residues z_i regardless of c_i, namely
// (c_i + t)/d_i for t = 0..|d_i|-1. The adjustment for incompatible
// coordinates can only fire when some d_i vanishes, which the
// nonsingularity precondition rules out.
inline BigInt snf_count_crosscheck(const IntMatrix& m, const TorsionVector& a) {
    if (!m.is_square() || a.size() != m.rows)
        throw dimension_error("oracle: matrix and translation sizes must agree");
    IntMatrix mi = sub(m, IntMatrix::identity(m.rows));
    SnfDecomposition s = smith_normal_form(mi);
    std::vector<BigInt> divs = invariant_factors(s);
    if (static_cast<int>(divs.size()) != m.rows)
        throw domain_error("infinite fixed locus: det(M - I) = 0");
    BigInt total = 1;
    for (const BigInt& d : divs) total *= d;
    return total;
}

} // namespace latdyn
