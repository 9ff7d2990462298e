#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "abelian.hpp"
#include "errors.hpp"
#include "spectral.hpp"
#include "toric.hpp"
#include "torus.hpp"

namespace latdyn {

using Json = nlohmann::json;

// Config and report serialization. Numbers that must survive a round trip
// (matrix entries, rationals, counts) travel as decimal strings; plain JSON
// numbers are accepted on input for convenience but floats are rejected,
// since 0.5 parsed as binary floating point is not 1/2.

struct SystemOptions {
    unsigned long n_max = 5;
    BigInt enumeration_cap = 10000;
    int precision = 4;
    std::optional<BigInt> oracle_modulus;
};

struct SystemConfig {
    std::string kind; // torus | abelian | semiabelian | toric
    std::optional<TorusEndo> torus_part;
    std::optional<AbelianEndo> abelian_part;
    std::optional<std::vector<WeilBlock>> blocks; // abelian given as Weil blocks
    std::optional<Fan> fan;
    SystemOptions options;
};

namespace detail {

inline BigInt json_int(const Json& v, const std::string& where) {
    if (v.is_string()) {
        try {
            return parse_bigint(v.get<std::string>());
        } catch (const parse_error& e) {
            throw parse_error(where + ": " + e.what());
        }
    }
    if (v.is_number_integer()) return BigInt(v.get<long long>());
    throw parse_error(where + ": expected an integer or a decimal string");
}

inline Rational json_rational(const Json& v, const std::string& where) {
    if (v.is_string()) {
        try {
            return parse_rational(v.get<std::string>());
        } catch (const parse_error& e) {
            throw parse_error(where + ": " + e.what());
        }
    }
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number_float())
        throw parse_error(where + ": write rationals as strings like \"1/2\", not floats");
    throw parse_error(where + ": expected a rational string");
}

inline IntMatrix json_matrix(const Json& v, const std::string& where) {
    if (!v.is_array() || v.empty())
        throw parse_error(where + ": expected a non-empty array of rows");
    const int rows = static_cast<int>(v.size());
    if (!v[0].is_array()) throw parse_error(where + ": rows must be arrays");
    const int cols = static_cast<int>(v[0].size());
    IntMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const Json& row = v[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw parse_error(where + ": row " + std::to_string(i) + " has the wrong length");
        for (int j = 0; j < cols; ++j)
            m.at(i, j) = json_int(row[static_cast<std::size_t>(j)],
                                  where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
    return m;
}

inline Json matrix_json(const IntMatrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows; ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(int_str(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline TorsionVector json_translation(const Json& v, int n, const std::string& where) {
    if (!v.is_array() || static_cast<int>(v.size()) != n)
        throw parse_error(where + ": expected " + std::to_string(n) + " rational entries");
    std::vector<Rational> coords(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        coords[static_cast<std::size_t>(i)] =
            json_rational(v[static_cast<std::size_t>(i)], where + "[" + std::to_string(i) + "]");
    return torsion_vector(std::move(coords));
}

inline Json translation_json(const TorsionVector& a) {
    Json out = Json::array();
    for (const Rational& c : a.coords) out.push_back(rational_str(c));
    return out;
}

inline void require_keys(const Json& j, const std::vector<std::string>& allowed,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const auto& k : allowed)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok) throw parse_error(where + ": unknown field \"" + it.key() + "\"");
    }
}

// Constructor rejections caused by config shape (non-square matrices, odd
// abelian sizes, length mismatches) are usage problems, not math failures.
template <typename F> auto shape_checked(const std::string& where, F f) {
    try {
        return f();
    } catch (const dimension_error& e) {
        throw parse_error(where + ": " + e.what());
    }
}

inline TorusEndo parse_torus_body(const Json& j, const std::string& where) {
    if (!j.is_object()) throw parse_error(where + ": expected an object");
    if (!j.contains("matrix")) throw parse_error(where + ": missing \"matrix\"");
    IntMatrix m = json_matrix(j["matrix"], where + ".matrix");
    TorsionVector a = j.contains("translation")
                          ? json_translation(j["translation"], m.rows, where + ".translation")
                          : zero_torsion(m.rows);
    return shape_checked(where, [&] { return torus_endo(m, a); });
}

inline Fan parse_fan(const Json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("rays") || !j.contains("cones"))
        throw parse_error(where + ": expected {\"rays\": ..., \"cones\": ...}");
    require_keys(j, {"rays", "cones"}, where);
    if (!j["rays"].is_array()) throw parse_error(where + ".rays: expected an array");
    std::vector<std::vector<BigInt>> rays;
    int dim = -1;
    for (std::size_t i = 0; i < j["rays"].size(); ++i) {
        const Json& rv = j["rays"][i];
        if (!rv.is_array())
            throw parse_error(where + ".rays[" + std::to_string(i) + "]: expected an array");
        std::vector<BigInt> r;
        for (std::size_t k = 0; k < rv.size(); ++k)
            r.push_back(json_int(rv[k], where + ".rays[" + std::to_string(i) + "]"));
        if (dim < 0) dim = static_cast<int>(r.size());
        rays.push_back(std::move(r));
    }
    if (dim < 0) throw parse_error(where + ".rays: a fan needs at least one ray");
    if (!j["cones"].is_array()) throw parse_error(where + ".cones: expected an array");
    std::vector<std::vector<int>> cones;
    for (std::size_t i = 0; i < j["cones"].size(); ++i) {
        const Json& cv = j["cones"][i];
        if (!cv.is_array())
            throw parse_error(where + ".cones[" + std::to_string(i) + "]: expected an array");
        std::vector<int> c;
        for (std::size_t k = 0; k < cv.size(); ++k) {
            BigInt idx = json_int(cv[k], where + ".cones[" + std::to_string(i) + "]");
            if (idx < 0 || idx >= BigInt(rays.size()))
                throw parse_error(where + ".cones[" + std::to_string(i) +
                                  "]: ray index out of range");
            c.push_back(static_cast<int>(idx.convert_to<long>()));
        }
        cones.push_back(std::move(c));
    }
    return shape_checked(where, [&] { return make_fan(dim, std::move(rays), cones); });
}

inline Json fan_json(const Fan& f) {
    Json rays = Json::array();
    for (const auto& r : f.rays) {
        Json rv = Json::array();
        for (const BigInt& e : r) rv.push_back(int_str(e));
        rays.push_back(std::move(rv));
    }
    Json cones = Json::array();
    for (const Cone& c : f.cones) {
        Json cv = Json::array();
        for (int i : c.ray_indices) cv.push_back(i);
        cones.push_back(std::move(cv));
    }
    return Json{{"rays", std::move(rays)}, {"cones", std::move(cones)}};
}

inline void parse_abelian_body(const Json& j, const std::string& where, SystemConfig& c) {
    const bool has_matrix = j.contains("matrix");
    const bool has_blocks = j.contains("blocks");
    if (has_matrix == has_blocks)
        throw parse_error(where + ": give exactly one of \"matrix\" or \"blocks\"");
    if (has_matrix) {
        IntMatrix m = json_matrix(j["matrix"], where + ".matrix");
        if (j.contains("g")) {
            BigInt g = json_int(j["g"], where + ".g");
            if (g * 2 != m.rows)
                throw parse_error(where + ": g = " + int_str(g) + " does not match a " +
                                  std::to_string(m.rows) + "-row matrix");
        }
        c.abelian_part = shape_checked(where, [&] { return abelian_endo(m); });
        return;
    }
    if (!j["blocks"].is_array() || j["blocks"].empty())
        throw parse_error(where + ".blocks: expected a non-empty array");
    std::vector<WeilBlock> blocks;
    for (std::size_t i = 0; i < j["blocks"].size(); ++i) {
        const Json& bv = j["blocks"][i];
        const std::string bw = where + ".blocks[" + std::to_string(i) + "]";
        if (!bv.is_object() || !bv.contains("a") || !bv.contains("d"))
            throw parse_error(bw + ": expected {\"a\": ..., \"d\": ...}");
        require_keys(bv, {"a", "d"}, bw);
        blocks.push_back(weil_block(json_int(bv["a"], bw + ".a"), json_int(bv["d"], bw + ".d")));
    }
    c.abelian_part = shape_checked(where, [&] { return abelian_endo(blocks); });
    c.blocks = std::move(blocks);
}

inline SystemOptions parse_options(const Json& j, const std::string& where) {
    SystemOptions o;
    if (!j.is_object()) throw parse_error(where + ": expected an object");
    require_keys(j, {"n_max", "enumeration_cap", "precision", "oracle_modulus"}, where);
    if (j.contains("n_max")) {
        BigInt v = json_int(j["n_max"], where + ".n_max");
        if (v < 1 || v > 1000000) throw parse_error(where + ".n_max: out of range");
        o.n_max = v.convert_to<unsigned long>();
    }
    if (j.contains("enumeration_cap"))
        o.enumeration_cap = json_int(j["enumeration_cap"], where + ".enumeration_cap");
    if (j.contains("precision")) {
        BigInt v = json_int(j["precision"], where + ".precision");
        if (v < 1 || v > 50) throw parse_error(where + ".precision: expected 1..50");
        o.precision = static_cast<int>(v.convert_to<long>());
    }
    if (j.contains("oracle_modulus"))
        o.oracle_modulus = json_int(j["oracle_modulus"], where + ".oracle_modulus");
    return o;
}

inline Json options_json(const SystemOptions& o) {
    Json j{{"n_max", o.n_max},
           {"enumeration_cap", int_str(o.enumeration_cap)},
           {"precision", o.precision}};
    if (o.oracle_modulus) j["oracle_modulus"] = int_str(*o.oracle_modulus);
    return j;
}

} // namespace detail

inline SystemConfig parse_config(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw parse_error(std::string("config is not well-formed JSON: ") + e.what());
    }
    if (!j.is_object()) throw parse_error("config: expected a JSON object");
    if (!j.contains("type") || !j["type"].is_string())
        throw parse_error("config: missing \"type\" (torus | abelian | semiabelian | toric)");

    SystemConfig c;
    c.kind = j["type"].get<std::string>();
    if (c.kind == "torus") {
        detail::require_keys(j, {"type", "matrix", "translation", "options"}, "config");
        c.torus_part = detail::parse_torus_body(j, "config");
    } else if (c.kind == "abelian") {
        detail::require_keys(j, {"type", "g", "matrix", "blocks", "options"}, "config");
        detail::parse_abelian_body(j, "config", c);
    } else if (c.kind == "semiabelian") {
        detail::require_keys(j, {"type", "torus", "abelian", "options"}, "config");
        if (!j.contains("torus") || !j.contains("abelian"))
            throw parse_error("config: semiabelian needs \"torus\" and \"abelian\" parts");
        if (!j["torus"].is_object() || !j["abelian"].is_object())
            throw parse_error("config: semiabelian parts must be objects");
        detail::require_keys(j["torus"], {"matrix", "translation"}, "config.torus");
        c.torus_part = detail::parse_torus_body(j["torus"], "config.torus");
        detail::require_keys(j["abelian"], {"g", "matrix", "blocks"}, "config.abelian");
        detail::parse_abelian_body(j["abelian"], "config.abelian", c);
    } else if (c.kind == "toric") {
        detail::require_keys(j, {"type", "matrix", "translation", "fan", "options"}, "config");
        if (!j.contains("fan")) throw parse_error("config: toric needs a \"fan\"");
        c.torus_part = detail::parse_torus_body(j, "config");
        c.fan = detail::parse_fan(j["fan"], "config.fan");
        if (c.fan->dim != c.torus_part->dim())
            throw parse_error("config: fan dimension does not match the matrix");
    } else {
        throw parse_error("config: unknown system type \"" + c.kind + "\"");
    }
    if (j.contains("options")) c.options = detail::parse_options(j["options"], "config.options");
    return c;
}

inline std::string serialize_config(const SystemConfig& c) {
    Json j;
    j["type"] = c.kind;
    if (c.kind == "torus") {
        j["matrix"] = detail::matrix_json(c.torus_part->matrix);
        j["translation"] = detail::translation_json(c.torus_part->translation);
    } else if (c.kind == "abelian") {
        if (c.blocks) {
            Json arr = Json::array();
            for (const WeilBlock& b : *c.blocks)
                arr.push_back(Json{{"a", int_str(b.a)}, {"d", int_str(b.d)}});
            j["blocks"] = std::move(arr);
        } else {
            j["g"] = c.abelian_part->g;
            j["matrix"] = detail::matrix_json(c.abelian_part->matrix);
        }
    } else if (c.kind == "semiabelian") {
        j["torus"] = Json{{"matrix", detail::matrix_json(c.torus_part->matrix)},
                          {"translation", detail::translation_json(c.torus_part->translation)}};
        if (c.blocks) {
            Json arr = Json::array();
            for (const WeilBlock& b : *c.blocks)
                arr.push_back(Json{{"a", int_str(b.a)}, {"d", int_str(b.d)}});
            j["abelian"] = Json{{"blocks", std::move(arr)}};
        } else {
            j["abelian"] = Json{{"g", c.abelian_part->g},
                                {"matrix", detail::matrix_json(c.abelian_part->matrix)}};
        }
    } else if (c.kind == "toric") {
        j["matrix"] = detail::matrix_json(c.torus_part->matrix);
        j["translation"] = detail::translation_json(c.torus_part->translation);
        j["fan"] = detail::fan_json(*c.fan);
    } else {
        throw parse_error("serialize: unknown system type \"" + c.kind + "\"");
    }
    j["options"] = detail::options_json(c.options);
    return j.dump(2) + "\n";
}

// Spectral radius report: the defining polynomial and the exact enclosure,
// plus a display-only decimal rendering that is explicitly approximate.
inline Json radius_json(const SpectralRadius& r, int precision = 4) {
    Json poly = Json::array();
    for (const BigInt& c : r.modsq_minpoly.coeffs) poly.push_back(int_str(c));
    Json j{{"modsq_minpoly", std::move(poly)},
           {"interval", Json::array({rational_str(r.lo), rational_str(r.hi)})}};
    if (auto k = radius_integer_value(r)) j["is_integer"] = int_str(*k);
    SpectralRadius fine = refined(r, Rational(1, pow_int(10, static_cast<unsigned long>(precision + 2))));
    j["approx_decimal"] = Json{{"lo", decimal_floor_str(fine.lo, precision)},
                               {"hi", decimal_ceil_str(fine.hi, precision)},
                               {"approx", true}};
    return j;
}

} // namespace latdyn
