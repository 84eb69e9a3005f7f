#pragma once

#include <cmath>

#include "mahlerlab/polarity.hpp"
#include "mahlerlab/polygon.hpp"

namespace mahler {

/* A sector L of a planar body between two boundary points a, b together with
   the matching sector of the polar body between the dual points.  The
   product |L| |L*| obeys the sharp sector inequality below. */
struct SectorPair {
    Polygon2 sector;       // L, the cone between rays o->a and o->b cut from P
    Polygon2 dual_sector;  // L*, the same cone construction on P* at a*, b*
    Vec2 a{0, 0}, b{0, 0};
    Vec2 a_dual{0, 0}, b_dual{0, 0};
    double xi = 0;         // angle between a and b, in (0, pi)
};

namespace detail {

inline Vec2 rot90(const Vec2& v) { return {-v.y, v.x}; }

inline void snap_origin_first(Polygon2& L) {
    const double eps = 1e-9 * poly_scale(L);
    size_t at = L.vertices.size();
    for (size_t i = 0; i < L.vertices.size(); ++i)
        if (norm(L.vertices[i]) <= eps) { at = i; break; }
    if (at == L.vertices.size())
        throw DegenerateInput("sector does not reach the origin");
    L.vertices[at] = {0, 0};
    std::rotate(L.vertices.begin(), L.vertices.begin() + at, L.vertices.end());
}

} // namespace detail

/* Cut the cone spanned by rays o->a and o->b out of P.  The endpoints must
   lie on the boundary of P and span an angle in (0, pi); the result starts
   at the origin and runs counterclockwise from a to b. */
inline Polygon2 sector(const Polygon2& P, Vec2 a, Vec2 b) {
    if (std::abs(gauge(P, a) - 1.0) > 1e-6 || std::abs(gauge(P, b) - 1.0) > 1e-6)
        throw NotOnBoundary("sector endpoints must lie on the boundary");
    a = radial_point(P, a);
    b = radial_point(P, b);
    if (cross(a, b) < 0) std::swap(a, b);
    double xi = std::atan2(cross(a, b), dot(a, b));
    if (xi < 1e-6 || xi > M_PI - 1e-6) throw BadAngle("sector angle must be in (0, pi)");

    Polygon2 L = clip_halfplane(P, Vec2{a.y, -a.x} / norm(a), 0.0);   // cross(a, x) >= 0
    L = clip_halfplane(L, Vec2{-b.y, b.x} / norm(b), 0.0);            // cross(x, b) >= 0
    if (L.vertices.size() < 3) throw DegenerateInput("sector collapsed");
    detail::snap_origin_first(L);
    return L;
}

/* Build the sector pair of P at boundary points a, b: the primal sector and
   the polar sector between the dual points.  Orientation is canonicalized so
   that a comes before b counterclockwise. */
inline SectorPair make_sector_pair(const Polygon2& P, Vec2 a, Vec2 b) {
    if (std::abs(gauge(P, a) - 1.0) > 1e-6 || std::abs(gauge(P, b) - 1.0) > 1e-6)
        throw NotOnBoundary("sector endpoints must lie on the boundary");
    a = radial_point(P, a);
    b = radial_point(P, b);
    if (cross(a, b) < 0) std::swap(a, b);

    SectorPair s;
    s.a = a;
    s.b = b;
    s.xi = std::atan2(cross(a, b), dot(a, b));
    if (s.xi < 1e-6 || s.xi > M_PI - 1e-6) throw BadAngle("sector angle must be in (0, pi)");
    s.a_dual = dual_point(P, a);
    s.b_dual = dual_point(P, b);
    /* The dual points can subtend an angle >= pi even when a, b do not (the
       dual arc is the primal one plus the exterior-angle turns); the sector
       construction only makes sense when both cones are proper. */
    if (cross(s.a_dual, s.b_dual) <= 0)
        throw BadAngle("dual sector angle must be in (0, pi)");
    s.sector = sector(P, a, b);
    s.dual_sector = sector(polar2d(P, {0, 0}), s.a_dual, s.b_dual);
    return s;
}

/* Same pair through a 3D body: intersect K with the plane spanned by A and B
   (both on the boundary of K) and work in that section. */
inline SectorPair make_sector_pair(const ConvexBody3& K, const Vec3& A, const Vec3& B) {
    Vec3 u1 = normalize(A);
    Vec3 rej = B - dot(B, u1) * u1;
    if (norm(rej) < 1e-12 * K.scale) throw BadAngle("section directions are collinear");
    Vec3 u2 = normalize(rej);
    Polygon2 P = plane_section(K, u1, u2);
    Vec2 a{dot(A, u1), 0};
    Vec2 b{dot(B, u1), dot(B, u2)};
    return make_sector_pair(P, a, b);
}

/* Orthogonal projection of K onto the plane spanned by u1, u2.  For a plane
   through the origin this equals the planar polar of the section of the
   polar body, which the tests exploit as an oracle. */
inline Polygon2 project_to_plane(const ConvexBody3& K, const Vec3& u1, const Vec3& u2) {
    if (std::abs(dot(u1, u2)) > 1e-12 || std::abs(norm(u1) - 1) > 1e-12 || std::abs(norm(u2) - 1) > 1e-12)
        throw NotOrthogonal("projection frame must be orthonormal");
    std::vector<Vec2> pts;
    pts.reserve(K.vertices.size());
    for (const Vec3& v : K.vertices) pts.push_back({dot(v, u1), dot(v, u2)});
    return polygon_hull(std::move(pts), u1, u2);
}

/* General sector inequality: |L| |L*| >= (a - b) . (a* - b*) / 4. */
inline double sector_lower_bound(const SectorPair& s) {
    return 0.25 * dot(s.a - s.b, s.a_dual - s.b_dual);
}

inline double sector_margin(const SectorPair& s) {
    return area(s.sector) * area(s.dual_sector) - sector_lower_bound(s);
}

/* The two witness points behind the inequality: t* lies in L*, t lies in L,
   and the bound is the product of the triangle areas they span. */
inline Vec2 dual_test_point(const SectorPair& s) {
    return detail::rot90(s.a - s.b) / (2.0 * area(s.sector));
}

inline Vec2 primal_test_point(const SectorPair& s) {
    return detail::rot90(s.a_dual - s.b_dual) / (2.0 * area(s.dual_sector));
}

/* Specialization under the rotation hypothesis b = R_xi a, b* = R_xi a*:
   the bound becomes (1 - cos xi) / 2, independent of the body. */
inline double rotation_sector_bound(double xi) { return 0.5 * (1.0 - std::cos(xi)); }

inline double rotation_sector_margin(const SectorPair& s, double tol = 1e-9) {
    if (dist(s.b, rotate(s.a, s.xi)) > tol * (1.0 + norm(s.a)) ||
        dist(s.b_dual, rotate(s.a_dual, s.xi)) > tol * (1.0 + norm(s.a_dual)))
        throw HypothesisViolated("sector endpoints are not a rotation pair");
    return area(s.sector) * area(s.dual_sector) - rotation_sector_bound(s.xi);
}

/* Equality cases of the rotation-hypothesis inequality.  In case_i the
   primal sector is the kite o, a, c, b with c = (a + b) / (1 + cos xi) and
   the dual sector is the triangle o, a*, b*; case_ii is the mirror image
   with the kite on the dual side. */
enum class SectorCase { case_i, case_ii, neither };

inline const char* to_string(SectorCase c) {
    switch (c) {
        case SectorCase::case_i: return "case_i";
        case SectorCase::case_ii: return "case_ii";
        default: return "neither";
    }
}

inline SectorCase classify_sector(const SectorPair& s, double tol = 1e-6) {
    auto matches = [&](const Polygon2& got, std::vector<Vec2> want) {
        Polygon2 W;
        try {
            W = polygon_hull(std::move(want));
        } catch (const DegenerateInput&) {
            return false;
        }
        return vertex_hausdorff(got, W) <= tol * std::max(1.0, poly_scale(got));
    };
    double denom = 1.0 + std::cos(s.xi);
    Vec2 c = (s.a + s.b) / denom;
    Vec2 c_dual = (s.a_dual + s.b_dual) / denom;
    if (matches(s.sector, {{0, 0}, s.a, c, s.b}) &&
        matches(s.dual_sector, {{0, 0}, s.a_dual, s.b_dual}))
        return SectorCase::case_i;
    if (matches(s.sector, {{0, 0}, s.a, s.b}) &&
        matches(s.dual_sector, {{0, 0}, s.a_dual, c_dual, s.b_dual}))
        return SectorCase::case_ii;
    return SectorCase::neither;
}

} // namespace mahler
