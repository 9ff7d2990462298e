#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "oracle.hpp"
#include "serialize.hpp"

namespace latdyn {

// Command layer shared by the command line tool and the test suite. Each
// command maps a parsed config to a human-readable text block plus a machine
// report. Report numbers are exact decimal strings; every approximate value
// sits under a field carrying "approx": true.

struct CommandOutput {
    std::string text;
    Json report;
    int exit_code = 0; // 0, or 4 when a verification disagrees
};

// Flag overrides applied on top of the config's options block.
struct CliOverrides {
    std::optional<unsigned long> n_max;
    std::optional<BigInt> enumeration_cap;
    std::optional<BigInt> oracle_modulus;
    std::optional<int> precision;
};

namespace detail {

inline void apply_overrides(SystemOptions& o, const CliOverrides& ov) {
    if (ov.n_max) {
        if (*ov.n_max < 1) throw parse_error("--n-max must be >= 1");
        o.n_max = *ov.n_max;
    }
    if (ov.enumeration_cap) {
        if (*ov.enumeration_cap < 1) throw parse_error("--cap must be >= 1");
        o.enumeration_cap = *ov.enumeration_cap;
    }
    if (ov.oracle_modulus) {
        if (*ov.oracle_modulus < 1) throw parse_error("--modulus must be >= 1");
        o.oracle_modulus = *ov.oracle_modulus;
    }
    if (ov.precision) {
        if (*ov.precision < 1 || *ov.precision > 50)
            throw parse_error("--precision must be between 1 and 50");
        o.precision = *ov.precision;
    }
}

// Irreducible factor of the stored squarefree polynomial that carries the
// largest real root, for display. The stored polynomial is a composed
// product and usually has spurious small factors (the golden mean system
// stores (t + 1)(t^2 - 3t + 1)). Past the factor degree cap the full
// polynomial is shown instead.
inline IntPolynomial degree_witness(const SpectralRadius& r) {
    const IntPolynomial& msq = r.modsq_minpoly;
    if (msq.degree() >= 2 && msq.degree() <= factor_degree_cap) {
        FactoredPolynomial fac = factor_over_rationals(msq);
        for (const auto& pf : fac.factors)
            if (top_root_in(msq, pf.first)) return pf.first;
    }
    return msq;
}

inline std::string decimal_range_str(const SpectralRadius& r, int precision) {
    SpectralRadius fine =
        refined(r, Rational(1, pow_int(10, static_cast<unsigned long>(precision + 2))));
    return "[" + decimal_floor_str(fine.lo, precision) + ", " +
           decimal_ceil_str(fine.hi, precision) + "]";
}

// "name = 3" when the value is exact, otherwise the defining polynomial of
// its square together with a decimal enclosure.
inline std::string degree_line(const std::string& name, const SpectralRadius& r,
                               int precision) {
    if (auto k = radius_integer_value(r)) return name + " = " + int_str(*k);
    if (r.exact) return name + " = " + rational_str(r.lo);
    return name + "^2 is the largest real root of " + poly_str(degree_witness(r)) +
           "; " + name + " in " + decimal_range_str(r, precision);
}

inline std::string torsion_str(const TorsionVector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.coords.size(); ++i) {
        if (i > 0) s += ", ";
        s += rational_str(v.coords[i]);
    }
    return s + ")";
}

inline std::string approx_str(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return std::string(buf);
}

inline double radius_double(const SpectralRadius& r) {
    SpectralRadius fine = refined(r, Rational(1, 1000000));
    return ((fine.lo + fine.hi) / 2).convert_to<double>();
}

// d1 of the configured system; the toric kind reports the degree of the
// monomial map on the dense torus, checked to actually extend to the fan.
inline SpectralRadius config_degree(const SystemConfig& c) {
    if (c.kind == "torus") return dyn_degree(*c.torus_part);
    if (c.kind == "abelian") return ab_dyn_degree(*c.abelian_part);
    if (c.kind == "semiabelian") {
        SpectralRadius dt = dyn_degree(*c.torus_part);
        SpectralRadius da = ab_dyn_degree(*c.abelian_part);
        return radius_compare(dt, da) == Ordering::less ? da : dt;
    }
    check_compatibility(c.torus_part->matrix, *c.fan);
    return dyn_degree(*c.torus_part);
}

} // namespace detail

inline CommandOutput cmd_degree(const SystemConfig& c) {
    const int prec = c.options.precision;
    SpectralRadius d1 = detail::config_degree(c);
    CommandOutput out;
    out.text = "kind: " + c.kind + "\n" + detail::degree_line("d1", d1, prec) + "\n";
    out.report = Json{{"command", "degree"}, {"type", c.kind}, {"d1", radius_json(d1, prec)}};
    if (c.kind == "semiabelian") {
        SpectralRadius dt = dyn_degree(*c.torus_part);
        SpectralRadius da = ab_dyn_degree(*c.abelian_part);
        out.text += "torus part: " + detail::degree_line("d1", dt, prec) + "\n";
        out.text += "abelian part: " + detail::degree_line("d1", da, prec) + "\n";
        out.report["torus_d1"] = radius_json(dt, prec);
        out.report["abelian_d1"] = radius_json(da, prec);
    }
    return out;
}

inline CommandOutput cmd_sdd(const SystemConfig& c) {
    if (c.kind != "torus" && c.kind != "abelian")
        throw parse_error("the sdd command applies to torus and abelian systems");
    const int prec = c.options.precision;
    const bool ab = c.kind == "abelian";
    SddSubgroup s = ab ? ab_sdd_subgroup(*c.abelian_part) : sdd_subgroup(*c.torus_part);
    const int n = ab ? c.abelian_part->dim() : c.torus_part->dim();
    const int k = s.lattice.rank();

    CommandOutput out;
    out.text = "kind: " + c.kind + "\n" + detail::degree_line("d1", s.d1_total, prec) + "\n";
    out.text += "maximal small-degree subgroup: rank " + std::to_string(k) + " of " +
                std::to_string(n) + "\n";
    if (k == 0) {
        out.text += "basis columns: (none, the subgroup is trivial)\n";
    } else {
        out.text += "basis columns:\n" + matrix_str(s.lattice.basis) + "\n";
        out.text += "restricted matrix:\n" + matrix_str(s.restricted) + "\n";
        out.text += detail::degree_line("restricted d1", s.d1_restricted, prec) + "\n";
    }
    out.text += "quotient matrix:\n" + matrix_str(s.quotient) + "\n";
    out.text += detail::degree_line("quotient d1", s.d1_quotient, prec) + "\n";

    out.report = Json{{"command", "sdd"},
                      {"type", c.kind},
                      {"ambient_rank", n},
                      {"rank", k},
                      {"basis", detail::matrix_json(s.lattice.basis)},
                      {"restricted", detail::matrix_json(s.restricted)},
                      {"quotient", detail::matrix_json(s.quotient)},
                      {"d1", radius_json(s.d1_total, prec)},
                      {"d1_restricted", radius_json(s.d1_restricted, prec)},
                      {"d1_quotient", radius_json(s.d1_quotient, prec)}};
    if (ab) out.report["weil_built"] = c.abelian_part->weil_built;
    return out;
}

namespace detail {

// Asymptotic slope check appended to count tables: the n-th root of the
// last count against d1 raised to the quotient dimension (complex dimension
// for the abelian part). Equality in the limit needs every quotient
// eigenvalue on the maximal circle, so a persistent gap is informative, not
// an error. Display only, hence floating point.
inline Json growth_check_json(double count_root, double target, int digits,
                              std::string& text_line) {
    std::string r = approx_str(count_root, digits);
    std::string t = approx_str(target, digits);
    text_line = "growth check (approx): count^(1/n) = " + r + " against d1^m = " + t;
    return Json{{"count_root", r}, {"target", t}, {"approx", true}};
}

} // namespace detail

inline CommandOutput cmd_count(const SystemConfig& c) {
    if (c.kind == "toric")
        throw parse_error("the count command applies to torus, abelian and semiabelian "
                          "systems; use the toric command for fans");
    const int prec = c.options.precision;
    const unsigned long n_max = c.options.n_max;
    if (n_max > count_table_default_cap)
        throw resource_error("count table: n_max exceeds the table cap");

    SpectralRadius d1 = detail::config_degree(c);
    CommandOutput out;
    out.text = "kind: " + c.kind + "\n" + detail::degree_line("d1", d1, prec) + "\n";
    out.report = Json{{"command", "count"}, {"type", c.kind}, {"d1", radius_json(d1, prec)}};
    Json rows = Json::array();

    BigInt last_count = 0;
    double target = 1.0;
    const double d1d = detail::radius_double(d1);

    if (c.kind == "torus") {
        CountTable t = count_table(*c.torus_part, n_max);
        for (const auto& row : t.rows) {
            out.text += "n = " + std::to_string(row.n) + ": count = " + int_str(row.count) +
                        " (bound " + int_str(row.bound) + ")\n";
            rows.push_back(Json{{"n", row.n}, {"count", int_str(row.count)},
                                {"bound", int_str(row.bound)}});
            last_count = row.count;
        }
        target = std::pow(d1d, sdd_subgroup(*c.torus_part).quotient.rows);
    } else if (c.kind == "abelian") {
        SddSubgroup s = ab_sdd_subgroup(*c.abelian_part);
        SpectralRadius rho =
            refined(spectral_radius(c.abelian_part->matrix), Rational(1, 1000000));
        for (unsigned long n = 1; n <= n_max; ++n) {
            AbelianCount a = ab_count_sf(s, rho, n);
            out.text += "n = " + std::to_string(n) + ": count = " + int_str(a.count) +
                        " (bound " + int_str(a.bound) + ")\n";
            rows.push_back(
                Json{{"n", n}, {"count", int_str(a.count)}, {"bound", int_str(a.bound)}});
            last_count = a.count;
        }
        target = std::pow(d1d, s.quotient.rows / 2.0);
    } else {
        const TorusEndo& t = *c.torus_part;
        const AbelianEndo& a = *c.abelian_part;
        for (unsigned long n = 1; n <= n_max; ++n) {
            BigInt cnt = semiabelian_count(t, a, n);
            out.text += "n = " + std::to_string(n) + ": count = " + int_str(cnt) + "\n";
            rows.push_back(Json{{"n", n}, {"count", int_str(cnt)}});
            last_count = cnt;
        }
        Ordering cmp = radius_compare(dyn_degree(t), ab_dyn_degree(a));
        if (cmp != Ordering::less) target *= std::pow(d1d, sdd_subgroup(t).quotient.rows);
        if (cmp != Ordering::greater)
            target *= std::pow(d1d, ab_sdd_subgroup(a).quotient.rows / 2.0);
    }

    out.report["rows"] = std::move(rows);
    double root = std::pow(last_count.convert_to<double>(), 1.0 / static_cast<double>(n_max));
    std::string line;
    out.report["growth_check"] = detail::growth_check_json(root, target, prec, line);
    out.text += line + "\n";
    return out;
}

inline CommandOutput cmd_enumerate(const SystemConfig& c) {
    if (c.kind != "torus")
        throw parse_error("the enumerate command applies to torus systems");
    const int prec = c.options.precision;
    const TorusEndo& f = *c.torus_part;
    SpectralRadius d1 = dyn_degree(f);
    std::vector<TorsionVector> pts = enumerate_sf(f, c.options.enumeration_cap);

    CommandOutput out;
    out.text = "kind: torus\n" + detail::degree_line("d1", d1, prec) + "\n";
    out.text += std::to_string(pts.size()) + " maximal coset representatives:\n";
    Json arr = Json::array();
    for (const TorsionVector& p : pts) {
        out.text += detail::torsion_str(p) + "\n";
        Json coords = Json::array();
        for (const Rational& x : p.coords) coords.push_back(rational_str(x));
        arr.push_back(std::move(coords));
    }
    out.report = Json{{"command", "enumerate"},
                      {"type", "torus"},
                      {"d1", radius_json(d1, prec)},
                      {"count", int_str(BigInt(pts.size()))},
                      {"points", std::move(arr)}};
    return out;
}

namespace detail {

inline std::string ray_set_str(const std::vector<int>& idx) {
    std::string s = "{";
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i > 0) s += ", ";
        s += std::to_string(idx[i]);
    }
    return s + "}";
}

inline const char* toric_kind_str(ToricOrbitEntry::Kind k) {
    switch (k) {
    case ToricOrbitEntry::Kind::orbit_count: return "orbit_count";
    case ToricOrbitEntry::Kind::closure_candidate: return "closure_candidate";
    case ToricOrbitEntry::Kind::absorbed_closure: return "absorbed_closure";
    default: return "transient";
    }
}

} // namespace detail

inline CommandOutput cmd_toric(const SystemConfig& c) {
    if (c.kind != "toric")
        throw parse_error("the toric command applies to toric systems");
    const int prec = c.options.precision;
    const TorusEndo& f = *c.torus_part;
    const Fan& fan = *c.fan;
    std::vector<std::string> bad = validate_fan(fan);
    if (!bad.empty()) {
        std::string msg = "the fan is not valid";
        for (const std::string& b : bad) msg += "; " + b;
        throw domain_error(msg);
    }

    CommandOutput out;
    out.report = Json{{"command", "toric"}, {"type", "toric"}};
    Json orbits = Json::array();

    try {
        ToricSddReport rep = toric_sdd_report(f, fan);
        out.text = "kind: toric\n" + detail::degree_line("d1", rep.d1, prec) + "\n";
        for (const ToricOrbitEntry& e : rep.entries) {
            const Cone& cone = fan.cones[static_cast<std::size_t>(e.cone)];
            std::string line = "cone " + std::to_string(e.cone) + ", rays " +
                               detail::ray_set_str(cone.ray_indices) + ": orbit dim " +
                               std::to_string(e.orbit_dim);
            Json jo{{"cone", e.cone},
                    {"rays", cone.ray_indices},
                    {"orbit_dim", e.orbit_dim},
                    {"kind", detail::toric_kind_str(e.kind)},
                    {"contribution", int_str(e.contribution)}};
            if (e.period > 0) {
                line += ", period " + std::to_string(e.period);
                jo["period"] = e.period;
            }
            switch (e.kind) {
            case ToricOrbitEntry::Kind::orbit_count:
                line += ", orbit count " + int_str(e.contribution);
                break;
            case ToricOrbitEntry::Kind::closure_candidate:
                line += ", closure candidate";
                break;
            case ToricOrbitEntry::Kind::absorbed_closure:
                line += ", closure absorbed by a smaller invariant cone";
                break;
            default: line += ", transient";
            }
            out.text += line + "\n";
            orbits.push_back(std::move(jo));
        }
        out.text += "candidate total = " + int_str(rep.candidate_total) + "\n";
        out.text += "orbit-sum bound = " + int_str(rep.bound) + "\n";
        out.report["d1"] = radius_json(rep.d1, prec);
        out.report["orbits"] = std::move(orbits);
        out.report["candidates"] = int_str(rep.candidate_total);
        out.report["bound"] = int_str(rep.bound);
    } catch (const no_positive_entropy_error&) {
        // d1 = 1: the census still stands, the maximality split does not.
        std::vector<OrbitData> census = orbit_census(f, fan);
        SpectralRadius d1 = dyn_degree(f);
        BigInt bound = toric_bound(f, fan);
        out.text = "kind: toric\n" + detail::degree_line("d1", d1, prec) + "\n";
        for (const OrbitData& o : census) {
            const Cone& cone = fan.cones[static_cast<std::size_t>(o.cone)];
            std::string line = "cone " + std::to_string(o.cone) + ", rays " +
                               detail::ray_set_str(cone.ray_indices) + ": orbit dim " +
                               std::to_string(o.orbit_dim);
            Json jo{{"cone", o.cone}, {"rays", cone.ray_indices}, {"orbit_dim", o.orbit_dim}};
            if (o.period) {
                line += ", period " + std::to_string(*o.period);
                jo["period"] = *o.period;
            } else {
                line += ", transient";
            }
            out.text += line + "\n";
            orbits.push_back(std::move(jo));
        }
        out.text += "d1 = 1: every orbit already has small degree, the maximality "
                    "report is vacuous\n";
        out.text += "orbit-sum bound = " + int_str(bound) + "\n";
        out.report["d1"] = radius_json(d1, prec);
        out.report["orbits"] = std::move(orbits);
        out.report["vacuous"] = true;
        out.report["bound"] = int_str(bound);
    }
    return out;
}

namespace detail {

struct VerifyResult {
    BigInt modulus;
    BigInt formula;
    BigInt snf;
    BigInt oracle;
    bool agree = false;
};

// Three independent fixed point counts: the determinant formula, the Smith
// normal form recount, and the brute-force torsion grid sweep. The default
// modulus |det(M - I)| * den(a) is always complete: every fixed point is
// (M - I)^(-1)(k - a) for an integer vector k, so its denominator divides
// that product. A hand-picked smaller modulus can miss points, which the
// command reports as a disagreement on purpose.
inline VerifyResult verify_torus(const TorusEndo& f, const SystemOptions& opts) {
    const int n = f.dim();
    BigInt det = determinant(sub(f.matrix, IntMatrix::identity(n)));
    if (det == 0) throw domain_error("infinite fixed locus: det(M - I) = 0");
    VerifyResult r;
    r.formula = abs_int(det);
    r.snf = snf_count_crosscheck(f.matrix, f.translation);
    r.modulus = opts.oracle_modulus ? *opts.oracle_modulus
                                    : r.formula * f.translation.denominator;
    TorsionGrid grid = torsion_grid(r.modulus, n);
    r.oracle = bf_fixed_points(f.matrix, f.translation, grid).count;
    r.agree = r.formula == r.snf && r.snf == r.oracle;
    return r;
}

inline Json verify_json(const VerifyResult& r) {
    return Json{{"modulus", int_str(r.modulus)},
                {"formula_count", int_str(r.formula)},
                {"snf_count", int_str(r.snf)},
                {"oracle_count", int_str(r.oracle)},
                {"agree", r.agree}};
}

} // namespace detail

inline CommandOutput cmd_verify(const SystemConfig& c) {
    if (c.kind != "torus")
        throw parse_error("the verify command applies to torus systems");
    detail::VerifyResult r = detail::verify_torus(*c.torus_part, c.options);
    CommandOutput out;
    out.text = "kind: torus\n";
    out.text += "determinant formula count = " + int_str(r.formula) + "\n";
    out.text += "smith normal form count = " + int_str(r.snf) + "\n";
    out.text += "grid oracle count (modulus " + int_str(r.modulus) + ") = " +
                int_str(r.oracle) + "\n";
    out.text += std::string("agree: ") + (r.agree ? "yes" : "NO") + "\n";
    out.report = detail::verify_json(r);
    out.report["command"] = "verify";
    out.report["type"] = "torus";
    out.exit_code = r.agree ? 0 : 4;
    return out;
}

// Batch form of verify: a top-level JSON array of torus configs, checked
// one by one, with a k/k summary line.
inline CommandOutput cmd_verify_batch(const std::string& text, const CliOverrides& ov) {
    Json arr;
    try {
        arr = Json::parse(text);
    } catch (const Json::exception& e) {
        throw parse_error(std::string("config is not well-formed JSON: ") + e.what());
    }
    if (!arr.is_array() || arr.empty())
        throw parse_error("a verify batch must be a non-empty array of torus configs");

    CommandOutput out;
    Json systems = Json::array();
    int agreed = 0;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        SystemConfig c = parse_config(arr[i].dump());
        if (c.kind != "torus")
            throw parse_error("the verify command applies to torus systems (batch entry " +
                              std::to_string(i) + " is " + c.kind + ")");
        detail::apply_overrides(c.options, ov);
        detail::VerifyResult r = detail::verify_torus(*c.torus_part, c.options);
        out.text += "system " + std::to_string(i) + ": counts " + int_str(r.formula) + "/" +
                    int_str(r.snf) + "/" + int_str(r.oracle) +
                    (r.agree ? ", agree" : ", DISAGREE") + "\n";
        systems.push_back(detail::verify_json(r));
        if (r.agree) ++agreed;
    }
    const int total = static_cast<int>(arr.size());
    out.text += std::to_string(agreed) + "/" + std::to_string(total) + " agree\n";
    out.report = Json{{"command", "verify"},
                      {"systems", std::move(systems)},
                      {"agreed", agreed},
                      {"total", total},
                      {"agree", agreed == total}};
    out.exit_code = agreed == total ? 0 : 4;
    return out;
}

// Dispatch a subcommand on raw config text. Verify accepts both a single
// config object and a batch array; everything else takes one object.
inline CommandOutput run_command(const std::string& name, const std::string& config_text,
                                 const CliOverrides& ov = {}) {
    if (name == "verify") {
        std::size_t i = config_text.find_first_not_of(" \t\r\n");
        if (i != std::string::npos && config_text[i] == '[')
            return cmd_verify_batch(config_text, ov);
    }
    SystemConfig c = parse_config(config_text);
    detail::apply_overrides(c.options, ov);
    if (name == "degree") return cmd_degree(c);
    if (name == "sdd") return cmd_sdd(c);
    if (name == "count") return cmd_count(c);
    if (name == "enumerate") return cmd_enumerate(c);
    if (name == "toric") return cmd_toric(c);
    if (name == "verify") return cmd_verify(c);
    throw parse_error("unknown command: " + name);
}

// Exit code policy: 1 usage and malformed input, 2 mathematically
// meaningless request, 3 capability or resource ceiling, 4 verification
// disagreement (returned by the body, not thrown).
inline int run_guarded(const std::function<int()>& body, std::ostream& errs) {
    try {
        return body();
    } catch (const parse_error& e) {
        errs << "error: " << e.what() << "\n";
        return 1;
    } catch (const dimension_error& e) {
        errs << "error: " << e.what() << "\n";
        return 1;
    } catch (const capability_error& e) {
        errs << "error: " << e.what() << "\n";
        return 3;
    } catch (const resource_error& e) {
        errs << "error: " << e.what() << "\n";
        return 3;
    } catch (const domain_error& e) {
        errs << "error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        errs << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        errs << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace latdyn
