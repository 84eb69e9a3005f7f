#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mahlerlab/convex_body.hpp"
#include "mahlerlab/polarity.hpp"
#include "mahlerlab/polygon.hpp"
#include "mahlerlab/symmetry.hpp"

namespace mahler {

using Json = nlohmann::json;

inline constexpr const char* k_tool_version = "1.0.0";

namespace detail {

inline double json_number(const Json& j, const char* what) {
    if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
    return j.get<double>();
}

} // namespace detail

/* Polytope files carry vertices only; the facet structure is recomputed on
   load so every deserialized body satisfies the hull invariants. */
inline Json body_to_json(const ConvexBody3& K) {
    Json verts = Json::array();
    for (const Vec3& v : K.vertices) verts.push_back({v.x, v.y, v.z});
    return Json{{"vertices", std::move(verts)}};
}

inline ConvexBody3 body_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j.at("vertices").is_array())
        throw ParseError("body JSON needs a \"vertices\" array");
    std::vector<Vec3> pts;
    for (const Json& row : j.at("vertices")) {
        if (!row.is_array() || row.size() != 3)
            throw ParseError("body vertices must be [x, y, z] rows");
        pts.push_back({detail::json_number(row[0], "vertex coordinate"),
                       detail::json_number(row[1], "vertex coordinate"),
                       detail::json_number(row[2], "vertex coordinate")});
    }
    return convex_hull_3d(pts);
}

inline Json polygon_to_json(const Polygon2& P) {
    Json verts = Json::array();
    for (const Vec2& v : P.vertices) verts.push_back({v.x, v.y});
    return Json{{"vertices", std::move(verts)}};
}

inline Polygon2 polygon_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j.at("vertices").is_array())
        throw ParseError("polygon JSON needs a \"vertices\" array");
    std::vector<Vec2> pts;
    for (const Json& row : j.at("vertices")) {
        if (!row.is_array() || row.size() != 2)
            throw ParseError("polygon vertices must be [x, y] rows");
        pts.push_back({detail::json_number(row[0], "vertex coordinate"),
                       detail::json_number(row[1], "vertex coordinate")});
    }
    return polygon_hull(std::move(pts));
}

/* Group files are either a bare catalog name or a name plus explicit
   generators as row-major 3x3 blocks; the closure is regenerated on load. */
inline Json group_to_json(const PointGroup& G) {
    Json gens = Json::array();
    for (const Mat3& g : G.generators) {
        Json row = Json::array();
        for (double x : g.m) row.push_back(x);
        gens.push_back(std::move(row));
    }
    return Json{{"name", G.name}, {"generators", std::move(gens)}};
}

inline PointGroup group_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("name") || !j.at("name").is_string())
        throw ParseError("group JSON needs a \"name\" string");
    std::string name = j.at("name").get<std::string>();
    if (!j.contains("generators")) return schoenflies(name);

    PointGroup G;
    G.name = name;
    for (const Json& row : j.at("generators")) {
        if (!row.is_array() || row.size() != 9)
            throw ParseError("group generators must be row-major arrays of 9 reals");
        Mat3 g;
        for (int i = 0; i < 9; ++i) g.m[i] = detail::json_number(row[i], "generator entry");
        G.generators.push_back(g);
    }
    G.elements = generate_group(G.generators);
    try {
        G.order_param = detail::parse_group_name(name, 0).l;
    } catch (const Error&) {
        G.order_param = 0;  // custom name outside the catalog grammar
    }
    return G;
}

inline EqualityClass equality_class_from_string(const std::string& s) {
    if (s == "primal_minimizer") return EqualityClass::primal_minimizer;
    if (s == "dual_minimizer") return EqualityClass::dual_minimizer;
    if (s == "strict") return EqualityClass::strict;
    if (s == "unknown") return EqualityClass::unknown;
    throw ParseError("unknown equality class \"" + s + "\"");
}

inline Json report_to_json(const BoundReport& r) {
    Json j{{"body_id", r.body_id},
           {"group_name", r.group_name},
           {"order", r.order},
           {"volume", r.volume},
           {"polar_volume", r.polar_volume},
           {"santalo_point", {r.santalo.x, r.santalo.y, r.santalo.z}},
           {"product", r.product},
           {"equality_class", to_string(r.equality_class)}};
    if (r.reference_bound) j["reference_bound"] = *r.reference_bound;
    if (r.margin) j["margin"] = *r.margin;
    return j;
}

inline BoundReport report_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("report JSON must be an object");
    BoundReport r;
    r.body_id = j.at("body_id").get<std::string>();
    r.group_name = j.at("group_name").get<std::string>();
    r.order = j.at("order").get<int>();
    r.volume = detail::json_number(j.at("volume"), "volume");
    r.polar_volume = detail::json_number(j.at("polar_volume"), "polar_volume");
    const Json& s = j.at("santalo_point");
    if (!s.is_array() || s.size() != 3) throw ParseError("santalo_point must be [x, y, z]");
    r.santalo = {detail::json_number(s[0], "santalo_point"),
                 detail::json_number(s[1], "santalo_point"),
                 detail::json_number(s[2], "santalo_point")};
    r.product = detail::json_number(j.at("product"), "product");
    if (j.contains("reference_bound"))
        r.reference_bound = detail::json_number(j.at("reference_bound"), "reference_bound");
    if (j.contains("margin")) r.margin = detail::json_number(j.at("margin"), "margin");
    r.equality_class = equality_class_from_string(j.at("equality_class").get<std::string>());
    return r;
}

/* Provenance block embedded in every report the tool writes. */
struct RunManifest {
    std::string command;
    std::vector<std::string> arguments;
    std::uint64_t seed = 0;
    std::string tool_version = k_tool_version;
    double wall_time_ms = 0;
    std::vector<std::string> outputs;
};

inline Json manifest_to_json(const RunManifest& m) {
    return Json{{"command", m.command},      {"arguments", m.arguments},
                {"seed", m.seed},            {"tool_version", m.tool_version},
                {"wall_time_ms", m.wall_time_ms}, {"outputs", m.outputs}};
}

inline RunManifest manifest_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("manifest JSON must be an object");
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.arguments = j.at("arguments").get<std::vector<std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.wall_time_ms = detail::json_number(j.at("wall_time_ms"), "wall_time_ms");
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    return m;
}

inline std::string report_csv_header() {
    return "body_id,group_name,order,volume,polar_volume,product,reference_bound,margin,"
           "equality_class";
}

inline std::string report_csv_row(const BoundReport& r) {
    std::ostringstream out;
    out.precision(17);
    out << r.body_id << ',' << r.group_name << ',' << r.order << ',' << r.volume << ','
        << r.polar_volume << ',' << r.product << ',';
    if (r.reference_bound) out << *r.reference_bound;
    out << ',';
    if (r.margin) out << *r.margin;
    out << ',' << to_string(r.equality_class);
    return out.str();
}

inline Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed JSON in " + path);
    return j;
}

inline void save_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << '\n';
}

inline ConvexBody3 load_body(const std::string& path) { return body_from_json(load_json(path)); }

} // namespace mahler
