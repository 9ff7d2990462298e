#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"
#include "matrix.hpp"
#include "spectral.hpp"
#include "torus.hpp"

namespace latdyn {

// Desk-scale caps: the cone machinery enumerates ray subsets and facet
// subsets, which is fine for the fans these tools are meant for and
// hopeless beyond them.
constexpr int fan_dim_cap = 6;
constexpr int fan_cone_cap = 200;

// A rational polyhedral cone inside the fan's lattice, stored with its dual
// description so membership tests are pure sign checks.
//
// span_lattice is the saturation of the ray span; coordinates in its basis
// are the chart in which facet_normals live. rays_in_span has one column per
// generating ray (dim x k). For the zero cone all three are empty.
struct Cone {
    std::vector<int> ray_indices; // sorted indices into Fan::rays
    Sublattice span_lattice;
    IntMatrix rays_in_span;
    IntMatrix facet_normals; // one covector per row, >= 0 on the cone
    int dim = 0;
};

struct Fan {
    int dim = 0;
    std::vector<std::vector<BigInt>> rays;
    std::vector<Cone> cones;
};

namespace detail {

inline Cone build_cone(int n, const std::vector<std::vector<BigInt>>& rays,
                       std::vector<int> idx) {
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());

    Cone c;
    c.ray_indices = idx;
    const int k = static_cast<int>(idx.size());
    IntMatrix gens(n, k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < n; ++i)
            gens.at(i, j) = rays[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])]
                                [static_cast<std::size_t>(i)];
    c.span_lattice = saturate(sublattice_from_generators(n, gens));
    c.dim = c.span_lattice.rank();
    const int d = c.dim;

    // Ray coordinates in the span basis are integral because the span
    // lattice is saturated.
    c.rays_in_span = IntMatrix(d, k);
    for (int j = 0; j < k; ++j) {
        std::vector<Rational> col(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = Rational(gens.at(i, j));
        auto x = solve_in_span(c.span_lattice.basis, col);
        for (int i = 0; i < d; ++i)
            c.rays_in_span.at(i, j) = numerator_of((*x)[static_cast<std::size_t>(i)]);
    }

    // Facet normals: every facet of a pointed d-cone is spanned by rays, so
    // each arises from a (d-1)-subset of rank d-1 whose kernel covector has
    // a constant sign on the remaining rays. Mixed signs mean the subset
    // spans an interior hyperplane, not a facet.
    std::set<std::vector<BigInt>> normals;
    if (d > 0) {
        auto try_subset = [&](const std::vector<int>& s) {
            IntMatrix st(static_cast<int>(s.size()), d);
            for (int r = 0; r < st.rows; ++r)
                for (int i = 0; i < d; ++i)
                    st.at(r, i) = c.rays_in_span.at(i, s[static_cast<std::size_t>(r)]);
            Sublattice ker = kernel_lattice(st);
            if (ker.rank() != 1) return;
            std::vector<BigInt> w(static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i) w[static_cast<std::size_t>(i)] = ker.basis.at(i, 0);
            int pos = 0, neg = 0;
            for (int j = 0; j < k; ++j) {
                BigInt acc = 0;
                for (int i = 0; i < d; ++i) acc += w[static_cast<std::size_t>(i)] * c.rays_in_span.at(i, j);
                if (acc > 0) ++pos;
                if (acc < 0) ++neg;
            }
            if (pos > 0 && neg > 0) return;
            if (neg > 0)
                for (BigInt& wi : w) wi = -wi;
            normals.insert(w);
        };
        // Enumerate (d-1)-subsets of the k rays.
        std::vector<int> stack;
        std::function<void(int)> rec = [&](int start) {
            if (static_cast<int>(stack.size()) == d - 1) {
                try_subset(stack);
                return;
            }
            for (int j = start; j < k; ++j) {
                stack.push_back(j);
                rec(j + 1);
                stack.pop_back();
            }
        };
        rec(0);
    }
    c.facet_normals = IntMatrix(static_cast<int>(normals.size()), d);
    int r = 0;
    for (const auto& w : normals) {
        for (int i = 0; i < d; ++i) c.facet_normals.at(r, i) = w[static_cast<std::size_t>(i)];
        ++r;
    }
    return c;
}

} // namespace detail

inline Fan make_fan(int n, std::vector<std::vector<BigInt>> rays,
                    const std::vector<std::vector<int>>& cone_rays) {
    if (n < 0) throw dimension_error("fan dimension must be nonnegative");
    if (n > fan_dim_cap) throw capability_error("fan dimension cap is 6");
    if (static_cast<int>(cone_rays.size()) > fan_cone_cap)
        throw capability_error("fan cone cap is 200");
    for (const auto& r : rays)
        if (static_cast<int>(r.size()) != n)
            throw dimension_error("ray length does not match fan dimension");
    Fan f;
    f.dim = n;
    f.rays = std::move(rays);
    for (const auto& cr : cone_rays) {
        for (int i : cr)
            if (i < 0 || i >= static_cast<int>(f.rays.size()))
                throw dimension_error("cone ray index out of range");
        f.cones.push_back(detail::build_cone(n, f.rays, cr));
    }
    return f;
}

// Membership is a span check followed by facet sign checks. Points off the
// span are rejected by solve_in_span's verification pass.
inline bool cone_contains(const Cone& c, const std::vector<BigInt>& x) {
    std::vector<Rational> xr(x.begin(), x.end());
    auto sol = solve_in_span(c.span_lattice.basis, xr);
    if (!sol) return false;
    for (int r = 0; r < c.facet_normals.rows; ++r) {
        Rational acc = 0;
        for (int i = 0; i < c.dim; ++i)
            acc += Rational(c.facet_normals.at(r, i)) * (*sol)[static_cast<std::size_t>(i)];
        if (acc < 0) return false;
    }
    return true;
}

namespace detail {

// Ray-index sets of all faces of c: facets first, then closure under
// pairwise intersection. For pointed cones every proper face is an
// intersection of facets, so this is the full face lattice.
inline std::set<std::vector<int>> face_ray_sets(const Cone& c) {
    std::set<std::vector<int>> faces;
    faces.insert(c.ray_indices);
    const int k = static_cast<int>(c.ray_indices.size());
    for (int r = 0; r < c.facet_normals.rows; ++r) {
        std::vector<int> fs;
        for (int j = 0; j < k; ++j) {
            BigInt acc = 0;
            for (int i = 0; i < c.dim; ++i)
                acc += c.facet_normals.at(r, i) * c.rays_in_span.at(i, j);
            if (acc == 0) fs.push_back(c.ray_indices[static_cast<std::size_t>(j)]);
        }
        faces.insert(fs);
    }
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::vector<int>> cur(faces.begin(), faces.end());
        for (std::size_t a = 0; a < cur.size(); ++a)
            for (std::size_t b = a + 1; b < cur.size(); ++b) {
                std::vector<int> meet;
                std::set_intersection(cur[a].begin(), cur[a].end(), cur[b].begin(),
                                      cur[b].end(), std::back_inserter(meet));
                if (faces.insert(meet).second) grew = true;
            }
    }
    return faces;
}

// Equation rows cutting out span_Q(l) inside the ambient lattice.
inline IntMatrix span_equations(const Sublattice& l) {
    Sublattice ker = kernel_lattice(transpose(l.basis));
    return transpose(ker.basis);
}

// Matrix rank over Q.
inline int rank_of(const IntMatrix& m) {
    return sublattice_from_generators(m.rows, m).rank();
}

// Extreme rays of {y : g y >= 0} assuming the cone is pointed: each lies on
// a rank m-1 subset of active constraints, so enumerate those kernels.
inline std::vector<std::vector<BigInt>> pointed_extreme_rays(const IntMatrix& g) {
    const int m = g.cols;
    std::vector<std::vector<BigInt>> out;
    std::set<std::vector<BigInt>> seen;
    auto try_subset = [&](const std::vector<int>& s) {
        IntMatrix st(static_cast<int>(s.size()), m);
        for (int r = 0; r < st.rows; ++r)
            for (int i = 0; i < m; ++i) st.at(r, i) = g.at(s[static_cast<std::size_t>(r)], i);
        Sublattice ker = kernel_lattice(st);
        if (ker.rank() != 1) return;
        std::vector<BigInt> w(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) w[static_cast<std::size_t>(i)] = ker.basis.at(i, 0);
        int pos = 0, neg = 0;
        for (int r = 0; r < g.rows; ++r) {
            BigInt acc = 0;
            for (int i = 0; i < m; ++i) acc += g.at(r, i) * w[static_cast<std::size_t>(i)];
            if (acc > 0) ++pos;
            if (acc < 0) ++neg;
        }
        if (pos > 0 && neg > 0) return;
        if (neg > 0)
            for (BigInt& wi : w) wi = -wi;
        if (seen.insert(w).second) out.push_back(w);
    };
    if (m == 0) return out;
    std::vector<int> stack;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(stack.size()) == m - 1) {
            try_subset(stack);
            return;
        }
        for (int r = start; r < g.rows; ++r) {
            stack.push_back(r);
            rec(r + 1);
            stack.pop_back();
        }
    };
    rec(0);
    return out;
}

} // namespace detail

// Index of the smallest listed cone containing every point, smallest by
// dimension with lexicographic ray order breaking ties. Returns -1 when no
// cone contains them all.
inline int minimal_containing_cone(const Fan& f, const std::vector<std::vector<BigInt>>& pts) {
    int best = -1;
    for (int i = 0; i < static_cast<int>(f.cones.size()); ++i) {
        const Cone& c = f.cones[static_cast<std::size_t>(i)];
        bool all = true;
        for (const auto& p : pts)
            if (!cone_contains(c, p)) {
                all = false;
                break;
            }
        if (!all) continue;
        if (best < 0) {
            best = i;
            continue;
        }
        const Cone& bc = f.cones[static_cast<std::size_t>(best)];
        if (c.dim < bc.dim || (c.dim == bc.dim && c.ray_indices < bc.ray_indices)) best = i;
    }
    return best;
}

// Structural diagnostics, one string per violation. An empty list is the
// validity certificate; nothing here throws so broken inputs can be
// reported in full.
inline std::vector<std::string> validate_fan(const Fan& f) {
    std::vector<std::string> out;
    auto ray_name = [](int i) { return "ray #" + std::to_string(i); };
    auto cone_name = [&](int i) {
        std::string s = "cone #" + std::to_string(i) + " {";
        const auto& idx = f.cones[static_cast<std::size_t>(i)].ray_indices;
        for (std::size_t j = 0; j < idx.size(); ++j) {
            if (j) s += ",";
            s += std::to_string(idx[j]);
        }
        return s + "}";
    };

    for (int i = 0; i < static_cast<int>(f.rays.size()); ++i) {
        const auto& r = f.rays[static_cast<std::size_t>(i)];
        BigInt g = 0;
        for (const BigInt& e : r) g = gcd_int(g, e);
        if (g == 0)
            out.push_back(ray_name(i) + " is zero");
        else if (g != 1)
            out.push_back(ray_name(i) + " is not primitive");
    }
    for (int i = 0; i < static_cast<int>(f.rays.size()); ++i)
        for (int j = i + 1; j < static_cast<int>(f.rays.size()); ++j)
            if (f.rays[static_cast<std::size_t>(i)] == f.rays[static_cast<std::size_t>(j)])
                out.push_back(ray_name(i) + " and " + ray_name(j) + " coincide");

    std::set<std::vector<int>> listed;
    bool has_zero_cone = false;
    for (int i = 0; i < static_cast<int>(f.cones.size()); ++i) {
        const auto& idx = f.cones[static_cast<std::size_t>(i)].ray_indices;
        if (!listed.insert(idx).second) out.push_back(cone_name(i) + " is listed twice");
        if (idx.empty()) has_zero_cone = true;
    }
    if (!has_zero_cone) out.push_back("zero cone missing from fan");

    // Strong convexity: the facet normals of a pointed cone cut out a single
    // point, so their rank equals the cone dimension.
    for (int i = 0; i < static_cast<int>(f.cones.size()); ++i) {
        const Cone& c = f.cones[static_cast<std::size_t>(i)];
        if (c.dim > 0 && detail::rank_of(transpose(c.facet_normals)) != c.dim)
            out.push_back(cone_name(i) + " is not strongly convex");
    }

    // Face closure: every face of a listed cone must be listed.
    for (int i = 0; i < static_cast<int>(f.cones.size()); ++i) {
        for (const auto& fs : detail::face_ray_sets(f.cones[static_cast<std::size_t>(i)]))
            if (listed.find(fs) == listed.end()) {
                std::string s = "face {";
                for (std::size_t j = 0; j < fs.size(); ++j) {
                    if (j) s += ",";
                    s += std::to_string(fs[j]);
                }
                out.push_back(s + "} of " + cone_name(i) + " missing from fan");
            }
    }

    // Pairwise intersections must be listed common faces. The intersection
    // of two pointed cones is pointed, so its extreme rays sit on rank
    // deficient subsets of the stacked facet constraints.
    for (int i = 0; i < static_cast<int>(f.cones.size()); ++i) {
        auto faces_i = detail::face_ray_sets(f.cones[static_cast<std::size_t>(i)]);
        for (int j = i + 1; j < static_cast<int>(f.cones.size()); ++j) {
            const Cone& a = f.cones[static_cast<std::size_t>(i)];
            const Cone& b = f.cones[static_cast<std::size_t>(j)];
            auto faces_j = detail::face_ray_sets(f.cones[static_cast<std::size_t>(j)]);

            // Common span: kernel of the stacked span equations.
            IntMatrix ea = detail::span_equations(a.span_lattice);
            IntMatrix eb = detail::span_equations(b.span_lattice);
            IntMatrix e(ea.rows + eb.rows, f.dim);
            for (int r = 0; r < ea.rows; ++r)
                for (int cidx = 0; cidx < f.dim; ++cidx) e.at(r, cidx) = ea.at(r, cidx);
            for (int r = 0; r < eb.rows; ++r)
                for (int cidx = 0; cidx < f.dim; ++cidx) e.at(ea.rows + r, cidx) = eb.at(r, cidx);
            Sublattice common = kernel_lattice(e);
            const int m = common.rank();

            // Facet constraints of both cones pulled back to common span
            // coordinates.
            auto pulled = [&](const Cone& c) {
                IntMatrix mc(c.dim, m);
                for (int col = 0; col < m; ++col) {
                    std::vector<Rational> v(static_cast<std::size_t>(f.dim));
                    for (int r = 0; r < f.dim; ++r) v[static_cast<std::size_t>(r)] = Rational(common.basis.at(r, col));
                    auto sol = solve_in_span(c.span_lattice.basis, v);
                    for (int r = 0; r < c.dim; ++r)
                        mc.at(r, col) = numerator_of((*sol)[static_cast<std::size_t>(r)]);
                }
                return mul(c.facet_normals, mc);
            };
            IntMatrix ga = pulled(a);
            IntMatrix gb = pulled(b);
            IntMatrix g(ga.rows + gb.rows, m);
            for (int r = 0; r < ga.rows; ++r)
                for (int cidx = 0; cidx < m; ++cidx) g.at(r, cidx) = ga.at(r, cidx);
            for (int r = 0; r < gb.rows; ++r)
                for (int cidx = 0; cidx < m; ++cidx) g.at(ga.rows + r, cidx) = gb.at(r, cidx);

            std::vector<std::vector<BigInt>> ext;
            for (const auto& y : detail::pointed_extreme_rays(g)) {
                std::vector<BigInt> x(static_cast<std::size_t>(f.dim), BigInt(0));
                for (int r = 0; r < f.dim; ++r)
                    for (int col = 0; col < m; ++col)
                        x[static_cast<std::size_t>(r)] += common.basis.at(r, col) * y[static_cast<std::size_t>(col)];
                ext.push_back(x);
            }
            int gi = minimal_containing_cone(f, ext);
            bool ok = gi >= 0;
            if (ok) {
                const auto& gset = f.cones[static_cast<std::size_t>(gi)].ray_indices;
                ok = faces_i.count(gset) > 0 && faces_j.count(gset) > 0;
            }
            if (!ok)
                out.push_back(cone_name(i) + " and " + cone_name(j) +
                              " do not intersect in a common face");
        }
    }
    return out;
}

// Cone map induced by m: each cone's ray images must land in a common cone,
// and the minimal such cone is the image. Failure means the monomial map
// does not extend to this toric variety.
inline std::vector<int> check_compatibility(const IntMatrix& m, const Fan& fan) {
    if (!m.is_square() || m.rows != fan.dim)
        throw dimension_error("compatibility: matrix size does not match fan dimension");
    if (determinant(m) == 0) throw domain_error("dominance requires det(M) != 0");
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(fan.cones.size()); ++i) {
        const Cone& c = fan.cones[static_cast<std::size_t>(i)];
        std::vector<std::vector<BigInt>> images;
        for (int ri : c.ray_indices)
            images.push_back(mul_vec(m, fan.rays[static_cast<std::size_t>(ri)]));
        int j = minimal_containing_cone(fan, images);
        if (j < 0) {
            std::string s = "no cone contains the image of cone {";
            for (std::size_t p = 0; p < c.ray_indices.size(); ++p) {
                if (p) s += ",";
                s += std::to_string(c.ray_indices[p]);
            }
            throw non_extendable_error(s + "}");
        }
        out.push_back(j);
    }
    return out;
}

// Per-cone orbit record. The orbit of cone s has dimension n - dim s;
// period is set when the cone lies on a cycle of the cone map, and then the
// induced matrix is the along-cycle composite acting on the quotient
// lattice N / (N meet span s).
struct OrbitData {
    int cone = 0;
    int orbit_dim = 0;
    int image_cone = 0;
    std::optional<unsigned long> period;
    std::optional<IntMatrix> induced_matrix;
    std::optional<SpectralRadius> induced_d1;
};

inline std::vector<OrbitData> orbit_census(const TorusEndo& f, const Fan& fan) {
    std::vector<int> cmap = check_compatibility(f.matrix, fan);
    std::vector<OrbitData> out;
    for (int i = 0; i < static_cast<int>(fan.cones.size()); ++i) {
        const Cone& c = fan.cones[static_cast<std::size_t>(i)];
        OrbitData o;
        o.cone = i;
        o.orbit_dim = fan.dim - c.dim;
        o.image_cone = cmap[static_cast<std::size_t>(i)];
        int pos = cmap[static_cast<std::size_t>(i)];
        unsigned long s = 1;
        while (pos != i && s <= fan.cones.size()) {
            pos = cmap[static_cast<std::size_t>(pos)];
            ++s;
        }
        if (pos == i) {
            o.period = s;
            o.induced_matrix = quotient_matrix(pow(f.matrix, s), c.span_lattice);
            o.induced_d1 = spectral_radius(*o.induced_matrix);
        }
        out.push_back(std::move(o));
    }
    return out;
}

// Orbit-sum fixed point bound: each orbit of dimension e contributes at
// most (d1 + 1)^e. Computed from the refined upper enclosure, so the value
// is exact whenever d1 is an integer and an overcount by at most one unit
// per orbit otherwise.
inline BigInt toric_bound(const TorusEndo& f, const Fan& fan) {
    check_compatibility(f.matrix, fan);
    SpectralRadius d1 = refined(dyn_degree(f), Rational(1, 1000000));
    BigInt total = 0;
    for (const Cone& c : fan.cones)
        total += ceil_r(pow_rational(d1.hi + 1, static_cast<unsigned long>(fan.dim - c.dim)));
    return total;
}

// One line of the maximality report. Invariant orbits either carry their
// own small-degree count (induced degree equals the global one) or are
// collapsed to a single candidate, their closure (induced degree strictly
// smaller). A closure is absorbed when a candidate closure of a larger
// invariant orbit already contains it. Transient cones move off themselves
// and contribute nothing.
struct ToricOrbitEntry {
    enum class Kind { orbit_count, closure_candidate, absorbed_closure, transient };
    int cone = 0;
    int orbit_dim = 0;
    unsigned long period = 0; // 0 when the cone is not on a cycle
    Kind kind = Kind::transient;
    BigInt contribution = 0;
};

struct ToricSddReport {
    std::vector<ToricOrbitEntry> entries; // one per cone, fan order
    BigInt candidate_total = 0;
    BigInt bound = 0;
    SpectralRadius d1;
};

inline ToricSddReport toric_sdd_report(const TorusEndo& f, const Fan& fan) {
    std::vector<OrbitData> census = orbit_census(f, fan);
    ToricSddReport rep;
    rep.d1 = dyn_degree(f);
    if (radius_compare(rep.d1, one_radius()) != Ordering::greater)
        throw no_positive_entropy_error("toric analysis needs d1 > 1");

    std::vector<int> closures;
    for (const OrbitData& o : census) {
        ToricOrbitEntry e;
        e.cone = o.cone;
        e.orbit_dim = o.orbit_dim;
        e.period = o.period ? *o.period : 0;
        if (o.period && *o.period == 1) {
            Ordering cmp = radius_compare(*o.induced_d1, rep.d1);
            if (cmp == Ordering::greater)
                throw error("induced degree exceeds the global degree");
            if (cmp == Ordering::equal) {
                e.kind = ToricOrbitEntry::Kind::orbit_count;
                e.contribution = count_sf(torus_endo(*o.induced_matrix), 1);
            } else {
                e.kind = ToricOrbitEntry::Kind::closure_candidate;
                e.contribution = 1;
                closures.push_back(o.cone);
            }
        }
        rep.entries.push_back(std::move(e));
    }

    // Absorption: candidate closures are nested exactly when their cones
    // are, and only the largest closure in a nest stays.
    for (int ci : closures) {
        const Cone& big = fan.cones[static_cast<std::size_t>(ci)];
        for (int cj : closures) {
            if (cj == ci) continue;
            const Cone& small = fan.cones[static_cast<std::size_t>(cj)];
            if (small.ray_indices == big.ray_indices) continue;
            bool inside = true;
            for (int ri : small.ray_indices)
                if (!cone_contains(big, fan.rays[static_cast<std::size_t>(ri)])) {
                    inside = false;
                    break;
                }
            if (inside) {
                // small's cone sits inside big's cone, so big's closure is
                // part of small's closure and is not maximal.
                ToricOrbitEntry& e = rep.entries[static_cast<std::size_t>(ci)];
                e.kind = ToricOrbitEntry::Kind::absorbed_closure;
                e.contribution = 0;
                break;
            }
        }
    }

    for (const ToricOrbitEntry& e : rep.entries) rep.candidate_total += e.contribution;
    rep.bound = toric_bound(f, fan);
    return rep;
}

} // namespace latdyn
