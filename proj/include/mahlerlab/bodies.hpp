#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mahlerlab/polarity.hpp"
#include "mahlerlab/polygon.hpp"
#include "mahlerlab/symmetry.hpp"

namespace mahler {

/* Sharp lower bound for the volume product over a symmetry class, together
   with the catalog names of the bodies attaining it. */
struct ProvenBound {
    double value = 0;
    std::vector<std::string> minimizers;
};

inline double prism_product_bound(int l) {
    if (l < 3) throw BadOrder("prism bound needs l >= 3");
    return (2.0 * l * l / 3.0) * (1.0 - std::cos(2.0 * M_PI / l));
}

inline double simplex_product_bound() { return 64.0 / 9.0; }
inline double hanner_product_bound() { return 32.0 / 3.0; }
inline double icosahedral_product_bound() { return (80.0 / 3.0) * (5.0 - 2.0 * std::sqrt(5.0)); }

namespace detail {

inline std::pair<std::string, int> split_suffix(const std::string& name, int l) {
    auto us = name.rfind('_');
    if (us != std::string::npos && us + 1 < name.size() &&
        std::isdigit(static_cast<unsigned char>(name[us + 1]))) {
        int embedded = std::stoi(name.substr(us + 1));
        if (l > 0 && l != embedded) throw BadOrder("conflicting order for body " + name);
        return {name.substr(0, us), embedded};
    }
    return {name, l};
}

} // namespace detail

/* Construction of the named reference bodies in the coordinates the group
   catalog uses.  Parametric families accept either ("prism", 6) or
   ("prism_6", 0). */
inline ConvexBody3 reference_body(const std::string& name, int l = 0) {
    auto [base, order] = detail::split_suffix(name, l);
    const double s3 = std::sqrt(3.0);

    if (base == "simplex" || base == "simplex_polar") {
        std::vector<Vec3> v = {{1 / s3, 1 / s3, 1 / s3},
                               {1 / s3, -1 / s3, -1 / s3},
                               {-1 / s3, 1 / s3, -1 / s3},
                               {-1 / s3, -1 / s3, 1 / s3}};
        if (base == "simplex_polar")
            for (Vec3& p : v) p = p * -3.0;
        return convex_hull_3d(v);
    }
    if (base == "octahedron" || base == "hanner_octa") {
        return convex_hull_3d({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}});
    }
    if (base == "cube" || base == "hanner_box") {
        std::vector<Vec3> v;
        for (int sx : {-1, 1})
            for (int sy : {-1, 1})
                for (int sz : {-1, 1}) v.push_back({double(sx), double(sy), double(sz)});
        return convex_hull_3d(v);
    }
    if (base == "icosahedron") {
        const double phi = 0.5 * (1.0 + std::sqrt(5.0));
        std::vector<Vec3> v;
        for (int s1 : {-1, 1})
            for (int s2 : {-1, 1}) {
                v.push_back({0, double(s1), s2 * phi});
                v.push_back({s2 * phi, 0, double(s1)});
                v.push_back({double(s1), s2 * phi, 0});
            }
        return convex_hull_3d(v);
    }
    if (base == "dodecahedron") return polar(reference_body("icosahedron"));
    if (base == "prism") {
        if (order < 3) throw BadOrder("prism needs l >= 3");
        std::vector<Vec3> v;
        for (int k = 0; k < order; ++k) {
            double t = 2.0 * M_PI * k / order;
            v.push_back({std::cos(t), std::sin(t), 1});
            v.push_back({std::cos(t), std::sin(t), -1});
        }
        return convex_hull_3d(v);
    }
    if (base == "bipyramid") {
        /* Polar of the unit prism: equator l-gon of circumradius sec(pi/l)
           offset by half a step, apexes at +-e3. */
        if (order < 3) throw BadOrder("bipyramid needs l >= 3");
        double r = 1.0 / std::cos(M_PI / order);
        std::vector<Vec3> v = {{0, 0, 1}, {0, 0, -1}};
        for (int k = 0; k < order; ++k) {
            double t = M_PI * (2 * k + 1) / order;
            v.push_back({r * std::cos(t), r * std::sin(t), 0});
        }
        return convex_hull_3d(v);
    }
    throw UnknownName("unknown reference body: " + name);
}

/* Sharp bound lookup by Schoenflies name.  Groups whose minimal volume
   product is not settled return nullopt. */
inline std::optional<ProvenBound> proven_bound(const std::string& group_name, int l = 0) {
    detail::GroupKey key = detail::parse_group_name(group_name, l);
    const std::vector<std::string> simplex_pair{"simplex", "simplex_polar"};
    const std::vector<std::string> hanner_pair{"octahedron", "cube"};
    const std::vector<std::string> icosa_pair{"icosahedron", "dodecahedron"};
    const std::vector<std::string> prism_pair{"prism", "bipyramid"};

    switch (key.family) {
        case 'T':
            if (key.variant == 'h') return ProvenBound{hanner_product_bound(), hanner_pair};
            return ProvenBound{simplex_product_bound(), simplex_pair};
        case 'O':
            return ProvenBound{hanner_product_bound(), hanner_pair};
        case 'I':
            return ProvenBound{icosahedral_product_bound(), icosa_pair};
        case 'C':
            if (key.variant != 'h') return std::nullopt;
            if (key.l == 2) return ProvenBound{hanner_product_bound(), hanner_pair};
            if (key.l >= 3) return ProvenBound{prism_product_bound(key.l), prism_pair};
            return std::nullopt;
        case 'S':
            /* Even subscript: the rotary-reflection groups proper; S_2 and
               S_6 contain -E and inherit the central-symmetry bound.  Odd
               subscript generates the same set as C_lh. */
            if (key.l == 2 || key.l == 6) return ProvenBound{hanner_product_bound(), hanner_pair};
            if (key.l % 2 == 1 && key.l >= 3)
                return ProvenBound{prism_product_bound(key.l), prism_pair};
            return std::nullopt;
        case 'D':
            if (key.variant == ' ') {
                if (key.l >= 3) return ProvenBound{prism_product_bound(key.l), prism_pair};
                return std::nullopt;
            }
            if (key.variant == 'h') {
                if (key.l == 2) return ProvenBound{hanner_product_bound(), hanner_pair};
                if (key.l >= 3) return ProvenBound{prism_product_bound(key.l), prism_pair};
                return std::nullopt;
            }
            /* D_ld: l = 3 contains -E with a compatible Hanner pair; l = 1
               generates the same set as C_2h.  Larger l remains open. */
            if (key.l == 3 || key.l == 1) return ProvenBound{hanner_product_bound(), hanner_pair};
            return std::nullopt;
        default:
            return std::nullopt;
    }
}

struct CatalogEntry {
    std::string name;
    std::string group_name;   // largest catalog symmetry of the body
    int order = 0;            // l for parametric families
    std::optional<double> closed_form_product;
};

/* Catalog rows backing `catalog list` and the bound-reproduction table. */
inline std::vector<CatalogEntry> catalog(int l_max = 8) {
    std::vector<CatalogEntry> rows = {
        {"simplex", "T_d", 0, simplex_product_bound()},
        {"simplex_polar", "T_d", 0, simplex_product_bound()},
        {"octahedron", "O_h", 0, hanner_product_bound()},
        {"cube", "O_h", 0, hanner_product_bound()},
        {"icosahedron", "I_h", 0, icosahedral_product_bound()},
        {"dodecahedron", "I_h", 0, icosahedral_product_bound()},
        {"hanner_octa", "D_2h", 0, hanner_product_bound()},
        {"hanner_box", "D_2h", 0, hanner_product_bound()},
    };
    for (int l = 3; l <= l_max; ++l) {
        rows.push_back({"prism_" + std::to_string(l), "D_" + std::to_string(l) + "h", l,
                        prism_product_bound(l)});
        rows.push_back({"bipyramid_" + std::to_string(l), "D_" + std::to_string(l) + "h", l,
                        prism_product_bound(l)});
    }
    return rows;
}

namespace detail {

/* Scale-and-phase canonical form for bodies in the prism normalization
   class: unit z gauge, unit equator circumradius, first maximal equator
   vertex at angle zero.  Every scaled-rotated image of a reference prism or
   bipyramid collapses to the same canonical body. */
inline ConvexBody3 canonical_zbody(const ConvexBody3& K) {
    double gz = gauge(K, {0, 0, 1});
    ConvexBody3 K1 = transform(K, diag3(1, 1, gz));
    Polygon2 eq = plane_section(K1, {1, 0, 0}, {0, 1, 0});
    size_t best = 0;
    for (size_t i = 1; i < eq.vertices.size(); ++i)
        if (norm(eq.vertices[i]) > norm(eq.vertices[best]) + 1e-12) best = i;
    double alpha = norm(eq.vertices[best]);
    double theta = std::atan2(eq.vertices[best].y, eq.vertices[best].x);
    return transform(K1, rotation_z(-theta) * diag3(1 / alpha, 1 / alpha, 1));
}

/* The rotation carrying the standard cube diagonal onto the z axis; the
   S_6 and D_3d chains see the Hanner pair through this conjugation. */
inline Mat3 diagonal_frame() {
    const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
    Mat3 g;
    g.m = {s2 / s3, -1 / s6, -1 / s6, 0, 1 / s2, -1 / s2, 1 / s3, 1 / s3, 1 / s3};
    return g;
}

} // namespace detail

/* Equality classification against the proven minimizers of a symmetry
   class: primal/dual when the body matches a minimizer (vertex Hausdorff
   below 1e-4 after normalization), strict when the product clears the bound
   by more than 1e-4, unknown otherwise or when no bound is proven. */
inline EqualityClass classify_equality_class(const ConvexBody3& K, const std::string& group_name,
                                             int l, double product) {
    auto bound = proven_bound(group_name, l);
    if (!bound) return EqualityClass::unknown;
    const double match_tol = 1e-4, margin_tol = 1e-4;
    detail::GroupKey key = detail::parse_group_name(group_name, l);

    bool prism_class = bound->minimizers.front() == "prism";
    auto match = [&](const ConvexBody3& A, const ConvexBody3& B) {
        if (prism_class)
            return vertex_hausdorff(detail::canonical_zbody(A), detail::canonical_zbody(B)) <
                   match_tol;
        double s = std::cbrt(volume(B) / volume(A));
        return vertex_hausdorff(dilate(A, s), B) < match_tol;
    };

    std::vector<ConvexBody3> primal, dual;
    int order = prism_class ? key.l : 0;
    primal.push_back(reference_body(bound->minimizers[0], order));
    dual.push_back(reference_body(bound->minimizers[1], order));
    bool diagonal_axis = (key.family == 'S' && key.l == 6) || (key.family == 'D' && key.variant == 'd' && key.l == 3);
    if (diagonal_axis) {
        primal.push_back(transform(primal[0], detail::diagonal_frame()));
        dual.push_back(transform(dual[0], detail::diagonal_frame()));
    }

    for (const ConvexBody3& M : primal)
        if (match(K, M)) return EqualityClass::primal_minimizer;
    for (const ConvexBody3& M : dual)
        if (match(K, M)) return EqualityClass::dual_minimizer;
    if (product - bound->value > margin_tol) return EqualityClass::strict;
    return EqualityClass::unknown;
}

} // namespace mahler
