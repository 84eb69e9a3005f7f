#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mahlerlab/convex_body.hpp"
#include "mahlerlab/optim.hpp"
#include "mahlerlab/polygon.hpp"

namespace mahler {

inline constexpr double k_interior_slack = 1e-9;  // strict-interior margin for polar centers

/* Polar body (K - z)^o: each facet (n, c) of K contributes the dual vertex
   n / (c - n . z).  The result is centered at the origin; taking the polar
   again returns K - z. */
inline ConvexBody3 polar(const ConvexBody3& K, const Vec3& z = {0, 0, 0}) {
    std::vector<Vec3> duals;
    duals.reserve(K.facets.size());
    for (const Facet& f : K.facets) {
        double slack = f.offset - dot(f.normal, z);
        if (slack <= k_interior_slack)
            throw PointNotInterior("polar center is not strictly interior");
        duals.push_back(f.normal / slack);
    }
    return convex_hull_3d(duals);
}

/* |(K - z)^o| as a function of z; +infinity outside the shrunk interior.
   This is the objective whose minimizer is the Santalo point. */
inline double polar_volume_at(const ConvexBody3& K, const Vec3& z) {
    if (inradius_about(K, z) <= k_interior_slack) return std::numeric_limits<double>::infinity();
    return volume(polar(K, z));
}

/* Santalo point: the unique interior z minimizing |(K - z)^o|.  Computed
   unconditionally by downhill simplex (no symmetry shortcuts), simplex seeded
   at the vertex centroid with step 0.1 * inradius. */
inline Vec3 santalo_point(const ConvexBody3& K) {
    Vec3 c = centroid(K);
    double inr = inradius_about(K, c);
    if (inr <= 0) throw DegenerateInput("santalo_point: body has empty interior");
    auto f = [&](const std::vector<double>& x) {
        return polar_volume_at(K, {x[0], x[1], x[2]});
    };
    NelderMeadOptions opt;  // diameter 1e-8, relative spread 1e-12, 10 restarts
    NelderMeadResult r = nelder_mead(f, {c.x, c.y, c.z}, 0.1 * inr, opt);
    return {r.x[0], r.x[1], r.x[2]};
}

/* How the volume product of a checked body compares with the sharp bound
   for its symmetry class. */
enum class EqualityClass { primal_minimizer, dual_minimizer, strict, unknown };

inline const char* to_string(EqualityClass c) {
    switch (c) {
        case EqualityClass::primal_minimizer: return "primal_minimizer";
        case EqualityClass::dual_minimizer: return "dual_minimizer";
        case EqualityClass::strict: return "strict";
        default: return "unknown";
    }
}

/* Volume product evaluation plus optional comparison against a bound. */
struct BoundReport {
    std::string body_id;
    std::string group_name;
    int order = 0;                          // cyclic order l for parametric families
    double volume = 0;
    double polar_volume = 0;                // at the Santalo point
    Vec3 santalo{0, 0, 0};
    double product = 0;
    std::optional<double> reference_bound;  // sharp lower bound, when proven
    std::optional<double> margin;           // product - reference_bound
    EqualityClass equality_class = EqualityClass::unknown;
};

/* P(K) = |K| * min_z |(K - z)^o|. */
inline BoundReport volume_product(const ConvexBody3& K) {
    BoundReport r;
    r.volume = volume(K);
    r.santalo = santalo_point(K);
    r.polar_volume = volume(polar(K, r.santalo));
    r.product = r.volume * r.polar_volume;
    return r;
}

/* 2D Santalo point of a polygon, same solver settings as in 3D. */
inline Vec2 santalo_point(const Polygon2& P) {
    Vec2 c{0, 0};
    for (const Vec2& v : P.vertices) c = c + v;
    c = c / static_cast<double>(P.vertices.size());
    double inr = std::numeric_limits<double>::infinity();
    for (const EdgeLine& e : edge_lines(P)) inr = std::min(inr, e.offset - dot(e.normal, c));
    if (inr <= 0) throw DegenerateInput("santalo_point: polygon has empty interior");
    auto f = [&](const std::vector<double>& x) -> double {
        Vec2 z{x[0], x[1]};
        double slack = std::numeric_limits<double>::infinity();
        for (const EdgeLine& e : edge_lines(P)) slack = std::min(slack, e.offset - dot(e.normal, z));
        if (slack <= k_interior_slack) return std::numeric_limits<double>::infinity();
        return area(polar2d(P, z));
    };
    NelderMeadResult r = nelder_mead(f, {c.x, c.y}, 0.1 * inr, NelderMeadOptions{});
    return {r.x[0], r.x[1]};
}

struct Product2 {
    double area = 0;
    double polar_area = 0;
    Vec2 santalo{0, 0};
    double product = 0;
};

inline Product2 volume_product(const Polygon2& P) {
    Product2 r;
    r.area = area(P);
    r.santalo = santalo_point(P);
    r.polar_area = area(polar2d(P, r.santalo));
    r.product = r.area * r.polar_area;
    return r;
}

} // namespace mahler
