#pragma once

#include <latdyn/lattice.hpp>
#include <latdyn/spectral.hpp>

#include <vector>

namespace latdyn {

// Affine monomial dynamics on the n-torus: f = (translation by a) o g where
// g is the isogeny induced by an integer matrix M with det(M) != 0.  Points
// are modeled by their torsion coordinates in (Q/Z)^n, which keeps every
// computation in exact rational arithmetic.  All counting quantities are
// independent of the translation, so non-torsion translations lose nothing.

struct TorsionVector {
    std::vector<Rational> coords; // each reduced to [0, 1)
    BigInt denominator = 1;       // least common denominator, positive

    int size() const { return static_cast<int>(coords.size()); }

    friend bool operator==(const TorsionVector& a, const TorsionVector& b) {
        return a.coords == b.coords;
    }
};

inline TorsionVector torsion_vector(std::vector<Rational> coords) {
    TorsionVector v;
    v.denominator = 1;
    for (Rational& c : coords) {
        c = mod1(c);
        BigInt d = denominator_of(c);
        v.denominator = v.denominator / gcd_int(v.denominator, d) * d;
    }
    v.coords = std::move(coords);
    return v;
}

inline TorsionVector zero_torsion(int n) {
    return torsion_vector(std::vector<Rational>(static_cast<std::size_t>(n), Rational(0)));
}

struct TorusEndo {
    IntMatrix matrix;
    TorsionVector translation;

    int dim() const { return matrix.rows; }
};

inline TorusEndo torus_endo(const IntMatrix& m, const TorsionVector& a) {
    if (m.rows != m.cols) throw dimension_error("torus endomorphism needs a square matrix");
    if (a.size() != m.rows) throw dimension_error("translation length must match the matrix size");
    if (determinant(m) == 0) throw domain_error("dominance requires det(M) != 0");
    return TorusEndo{m, a};
}

inline TorusEndo torus_endo(const IntMatrix& m) { return torus_endo(m, zero_torsion(m.rows)); }

// d1(f) = rho(M); the translation never enters.
inline SpectralRadius dyn_degree(const TorusEndo& f) { return spectral_radius(f.matrix); }

// The maximal small-dynamical-degree subtorus T(f), as a saturated
// M-invariant sublattice, together with the induced systems on it and on
// the quotient.
struct SddSubgroup {
    Sublattice lattice;       // lattice of T(f), saturated, M-invariant
    IntMatrix restricted;     // M acting on the lattice (k x k)
    IntMatrix quotient;       // M acting on Z^n / lattice (m x m)
    SpectralRadius d1_restricted;
    SpectralRadius d1_quotient;
    SpectralRadius d1_total;
};

// T(f) is the primary-component sum for the characteristic factors whose
// root modulus stays strictly below rho(M): the saturation of
// ker(q(M)^n) with q the product of those factors.  Maximality: any
// M-invariant saturated sublattice whose restriction avoids modulus rho
// has a restricted characteristic polynomial made of small factors only,
// so it sits inside that kernel.  The quotient then carries exactly the
// attaining factors, which is the no-further-quotient witness.
inline SddSubgroup sdd_subgroup(const TorusEndo& f) {
    SpectralRadius d1 = dyn_degree(f);
    if (radius_compare(d1, one_radius()) != Ordering::greater)
        throw no_positive_entropy_error("sdd analysis needs d1 > 1");
    IntPolynomial cp = charpoly(f.matrix);
    FactoredPolynomial fac = factor_over_rationals(cp);
    IntPolynomial q = IntPolynomial::one();
    for (const auto& p : fac.factors)
        if (radius_compare(poly_radius(p.first), d1) == Ordering::less) q = mul(q, p.first);
    const int n = f.dim();
    IntMatrix kn = pow(eval_at_matrix(q, f.matrix), static_cast<unsigned long>(n));
    SddSubgroup s;
    s.lattice = kernel_lattice(kn); // already saturated
    s.restricted = restrict_matrix(f.matrix, s.lattice);
    s.quotient = quotient_matrix(f.matrix, s.lattice);
    s.d1_restricted = spectral_radius(s.restricted);
    s.d1_quotient = spectral_radius(s.quotient);
    s.d1_total = d1;
    return s;
}

// Quotient system on G / T(f).  The translation image is taken in the
// complement coordinates of the deterministic unimodular extension, the
// same basis quotient_matrix conjugates by.
inline TorusEndo quotient_endo(const TorusEndo& f, const SddSubgroup& s) {
    if (s.lattice.ambient_rank != f.dim())
        throw dimension_error("quotient_endo: subgroup does not match the system");
    const int n = f.dim();
    const int k = s.lattice.rank();
    const int m = n - k;
    IntMatrix pinv = inverse_unimodular(extend_to_unimodular(s.lattice));
    std::vector<Rational> tr(static_cast<std::size_t>(m), Rational(0));
    for (int i = 0; i < m; ++i) {
        Rational v(0);
        for (int j = 0; j < n; ++j)
            v += Rational(pinv.at(k + i, j)) * f.translation.coords[static_cast<std::size_t>(j)];
        tr[static_cast<std::size_t>(i)] = v;
    }
    return torus_endo(s.quotient, torsion_vector(std::move(tr)));
}

// #S_{f^n} = |det(Mbar^n - I)| on the quotient by T(f); positive since
// every quotient eigenvalue has modulus rho > 1.
inline BigInt count_sf(const SddSubgroup& s, unsigned long n) {
    if (n == 0) throw domain_error("count_sf: the iterate must be >= 1");
    IntMatrix p = pow(s.quotient, n);
    return abs_int(determinant(sub(p, IntMatrix::identity(p.rows))));
}

inline BigInt count_sf(const TorusEndo& f, unsigned long n) {
    return count_sf(sdd_subgroup(f), n);
}

struct CountTable {
    struct Row {
        unsigned long n;
        BigInt count;
        BigInt bound;
    };
    std::vector<Row> rows;
};

inline constexpr unsigned long count_table_default_cap = 64;

// Rows (n, #S_{f^n}, ceil((d1_hi^n + 1)^m)) for 1 <= n <= n_max, with
// d1_hi a rational upper enclosure of d1 refined to 1e-6 (the bound is the
// exact integer (d1^n + 1)^m whenever d1 is an integer).  The count never
// exceeds the bound: |det(Mbar^n - I)| <= prod(|lambda|^n + 1) and every
// |lambda| <= d1 <= d1_hi.
inline CountTable count_table(const TorusEndo& f, unsigned long n_max,
                              unsigned long n_cap = count_table_default_cap) {
    if (n_max == 0) throw domain_error("count_table: n_max must be >= 1");
    if (n_max > n_cap) throw resource_error("count_table: n_max exceeds the table cap");
    SddSubgroup s = sdd_subgroup(f);
    const int m = s.quotient.rows;
    SpectralRadius r = refined(s.d1_total, Rational(1, 1000000));
    CountTable t;
    t.rows.reserve(n_max);
    for (unsigned long n = 1; n <= n_max; ++n) {
        Rational base = pow_rational(r.hi, n) + 1;
        t.rows.push_back({n, count_sf(s, n),
                          ceil_r(pow_rational(base, static_cast<unsigned long>(m)))});
    }
    return t;
}

// A coset T(f)b is maximal SDD iff f moves b by an element of T(f), i.e.
// (M - I)b + a lies in (lattice tensor Q/Z).  In the extension basis that
// reads: the complement coordinates of (M - I)b + a are integers.
inline bool is_maximal_coset(const TorusEndo& f, const SddSubgroup& s, const TorsionVector& b) {
    if (b.size() != f.dim()) throw dimension_error("coset representative has the wrong length");
    if (s.lattice.ambient_rank != f.dim())
        throw dimension_error("is_maximal_coset: subgroup does not match the system");
    const int n = f.dim();
    const int k = s.lattice.rank();
    std::vector<Rational> c(static_cast<std::size_t>(n), Rational(0));
    for (int i = 0; i < n; ++i) {
        Rational v = f.translation.coords[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) {
            BigInt mij = f.matrix.at(i, j) - (i == j ? 1 : 0);
            v += Rational(mij) * b.coords[static_cast<std::size_t>(j)];
        }
        c[static_cast<std::size_t>(i)] = v;
    }
    IntMatrix pinv = inverse_unimodular(extend_to_unimodular(s.lattice));
    std::vector<Rational> pc = mul_vec_rat(pinv, c);
    for (int i = k; i < n; ++i)
        if (mod1(pc[static_cast<std::size_t>(i)]) != 0) return false;
    return true;
}

inline bool is_maximal_coset(const TorusEndo& f, const TorsionVector& b) {
    return is_maximal_coset(f, sdd_subgroup(f), b);
}

// One torsion representative per maximal SDD coset: solve
// (Mbar - I) x = -abar over (Q/Z)^m through the Smith form (invariant d_i
// contributes d_i branches), then lift through the complement basis.  The
// list has exactly count_sf(f, 1) members.
inline std::vector<TorsionVector> enumerate_sf(const TorusEndo& f, const BigInt& cap) {
    if (cap <= 0) throw domain_error("enumerate_sf: cap must be positive");
    SddSubgroup s = sdd_subgroup(f);
    BigInt total = count_sf(s, 1);
    if (total > cap) throw enumeration_cap_error("enumerate_sf: count exceeds the cap");
    const int n = f.dim();
    const int k = s.lattice.rank();
    const int m = n - k;
    IntMatrix p = extend_to_unimodular(s.lattice);
    IntMatrix pinv = inverse_unimodular(p);
    // abar: complement coordinates of the translation
    std::vector<Rational> pa = mul_vec_rat(pinv, f.translation.coords);
    std::vector<Rational> rhs(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) rhs[static_cast<std::size_t>(i)] = -pa[static_cast<std::size_t>(k + i)];
    if (total > BigInt(1) << 31)
        throw resource_error("enumerate_sf: too many cosets to materialize");
    SnfDecomposition d = smith_normal_form(sub(s.quotient, IntMatrix::identity(m)));
    std::vector<Rational> c = mul_vec_rat(d.u, rhs);
    std::vector<BigInt> divs = invariant_factors(d);
    // det != 0 on the quotient, so all m invariant factors are present
    std::vector<unsigned long> radix(divs.size()), idx(divs.size(), 0);
    for (std::size_t i = 0; i < divs.size(); ++i)
        radix[i] = divs[i].convert_to<unsigned long>(); // product == total <= 2^31
    std::vector<TorsionVector> out;
    out.reserve(total.convert_to<std::size_t>());
    for (;;) {
        std::vector<Rational> z(static_cast<std::size_t>(m));
        for (std::size_t i = 0; i < z.size(); ++i)
            z[i] = (c[i] + Rational(idx[i])) / Rational(divs[i]);
        std::vector<Rational> x = mul_vec_rat(d.v, z);
        std::vector<Rational> full(static_cast<std::size_t>(n), Rational(0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j)
                full[static_cast<std::size_t>(i)] +=
                    Rational(p.at(i, k + j)) * x[static_cast<std::size_t>(j)];
        out.push_back(torsion_vector(std::move(full)));
        std::size_t carry = 0;
        while (carry < idx.size() && ++idx[carry] == radix[carry]) {
            idx[carry] = 0;
            ++carry;
        }
        if (carry == idx.size()) break;
    }
    return out;
}

} // namespace latdyn
