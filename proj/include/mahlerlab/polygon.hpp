#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "mahlerlab/convex_body.hpp"
#include "mahlerlab/error.hpp"
#include "mahlerlab/vec.hpp"

namespace mahler {

/* Convex polygon with a counterclockwise, strictly convex vertex ring.
   The orthonormal frame (u1, u2) records how the plane sits in 3-space so
   planar results can be compared against projected 3D data; standalone
   polygons use the xy frame. */
struct Polygon2 {
    std::vector<Vec2> vertices;
    Vec3 u1{1, 0, 0};
    Vec3 u2{0, 1, 0};
};

inline Vec3 embed(const Polygon2& P, const Vec2& p) { return P.u1 * p.x + P.u2 * p.y; }

inline double poly_scale(const Polygon2& P) {
    double s = 1.0;
    for (const Vec2& v : P.vertices) s = std::max({s, std::abs(v.x), std::abs(v.y)});
    return s;
}

/* Shoelace area; positive for counterclockwise rings. */
inline double area(const Polygon2& P) {
    double twice = 0;
    const size_t n = P.vertices.size();
    for (size_t i = 0; i < n; ++i) twice += cross(P.vertices[i], P.vertices[(i + 1) % n]);
    return 0.5 * twice;
}

/* Strictly convex counterclockwise hull of a 2D point cloud. */
inline Polygon2 polygon_hull(std::vector<Vec2> points, Vec3 u1 = {1, 0, 0}, Vec3 u2 = {0, 1, 0}) {
    if (points.size() < 3) throw DegenerateInput("polygon_hull needs at least 3 points");
    double s = 1.0;
    for (const Vec2& p : points) s = std::max({s, std::abs(p.x), std::abs(p.y)});
    std::vector<std::pair<Vec2, int>> tagged;
    tagged.reserve(points.size());
    for (size_t i = 0; i < points.size(); ++i) tagged.push_back({points[i], static_cast<int>(i)});
    std::vector<int> ring = detail::chain_hull_2d(std::move(tagged), 1e-12 * s * s);
    if (ring.size() < 3) throw DegenerateInput("points are (near) collinear");
    Polygon2 P;
    P.u1 = u1;
    P.u2 = u2;
    P.vertices.reserve(ring.size());
    for (int i : ring) P.vertices.push_back(points[i]);
    if (area(P) <= 0) throw DegenerateInput("hull ring has nonpositive area");
    return P;
}

struct EdgeLine {
    Vec2 normal;     // unit outward
    double offset;   // edge line is normal . x = offset
};

inline std::vector<EdgeLine> edge_lines(const Polygon2& P) {
    std::vector<EdgeLine> es;
    const size_t n = P.vertices.size();
    es.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        Vec2 d = P.vertices[(i + 1) % n] - P.vertices[i];
        Vec2 nrm = normalize(Vec2{d.y, -d.x});  // right of the travel direction = outward for ccw
        es.push_back({nrm, dot(nrm, P.vertices[i])});
    }
    return es;
}

inline double gauge(const Polygon2& P, const Vec2& x) {
    double g = 0;
    double s = poly_scale(P);
    for (const EdgeLine& e : edge_lines(P)) {
        if (e.offset <= 1e-12 * s)
            throw OriginNotInterior("2D gauge needs the origin strictly inside the polygon");
        g = std::max(g, dot(e.normal, x) / e.offset);
    }
    return g;
}

inline Vec2 radial_point(const Polygon2& P, const Vec2& d) {
    if (norm(d) < 1e-14 * poly_scale(P)) throw ZeroDirection("radial_point of the zero direction");
    return d / gauge(P, d);
}

inline bool contains(const Polygon2& P, const Vec2& x, double tol) {
    for (const EdgeLine& e : edge_lines(P))
        if (dot(e.normal, x) - e.offset > tol) return false;
    return true;
}

/* Symmetric vertex-set Hausdorff distance, blind to ring phase. */
inline double vertex_hausdorff(const Polygon2& A, const Polygon2& B) {
    double worst = 0;
    auto one_way = [&](const Polygon2& from, const Polygon2& to) {
        for (const Vec2& v : from.vertices) {
            double nearest = std::numeric_limits<double>::infinity();
            for (const Vec2& w : to.vertices) nearest = std::min(nearest, dist(v, w));
            worst = std::max(worst, nearest);
        }
    };
    one_way(A, B);
    one_way(B, A);
    return worst;
}

/* Keep the part of P with n . x <= c (Sutherland-Hodgman step). */
inline Polygon2 clip_halfplane(const Polygon2& P, const Vec2& n, double c) {
    const double eps = 1e-12 * poly_scale(P) * std::max(1.0, norm(n));
    std::vector<Vec2> out;
    const size_t m = P.vertices.size();
    for (size_t i = 0; i < m; ++i) {
        const Vec2& a = P.vertices[i];
        const Vec2& b = P.vertices[(i + 1) % m];
        double sa = dot(n, a) - c, sb = dot(n, b) - c;
        if (sa <= eps) out.push_back(a);
        if ((sa < -eps && sb > eps) || (sa > eps && sb < -eps)) {
            double t = sa / (sa - sb);
            out.push_back(a + (b - a) * t);
        }
    }
    /* Dedup consecutive near-equal corners. */
    std::vector<Vec2> ring;
    for (const Vec2& p : out) {
        if (ring.empty() || dist(ring.back(), p) > 1e-11 * poly_scale(P)) ring.push_back(p);
    }
    while (ring.size() > 1 && dist(ring.front(), ring.back()) <= 1e-11 * poly_scale(P))
        ring.pop_back();
    Polygon2 Q;
    Q.u1 = P.u1;
    Q.u2 = P.u2;
    Q.vertices = std::move(ring);
    return Q;
}

/* Polar polygon (P - z)^o.  Edges map to dual vertices in the same
   counterclockwise order; z must be strictly interior. */
inline Polygon2 polar2d(const Polygon2& P, const Vec2& z) {
    Polygon2 D;
    D.u1 = P.u1;
    D.u2 = P.u2;
    const double s = poly_scale(P);
    for (const EdgeLine& e : edge_lines(P)) {
        double slack = e.offset - dot(e.normal, z);
        if (slack <= 1e-9 * s)
            throw PointNotInterior("polar2d center is not strictly interior");
        D.vertices.push_back(e.normal / slack);
    }
    return D;
}

/* For a on the boundary of P, a point a* on the boundary of the polar at o
   with a . a* = 1: the dual vertex of the supporting edge, or the midpoint
   of the dual edge when a is itself a vertex. */
inline Vec2 dual_point(const Polygon2& P, const Vec2& a) {
    const double s = poly_scale(P);
    std::vector<Vec2> active;
    for (const EdgeLine& e : edge_lines(P)) {
        if (e.offset <= 1e-12 * s)
            throw OriginNotInterior("dual_point needs the origin strictly inside the polygon");
        if (std::abs(dot(e.normal, a) - e.offset) <= 1e-9 * s) active.push_back(e.normal / e.offset);
    }
    if (active.empty()) throw NotOnBoundary("dual_point argument is not on the boundary");
    Vec2 sum{0, 0};
    for (const Vec2& d : active) sum = sum + d;
    return sum / static_cast<double>(active.size());
}

/* Regular l-gon, circumradius r, first vertex at angle phase. */
inline Polygon2 regular_polygon(int l, double r = 1.0, double phase = 0.0) {
    if (l < 3) throw BadOrder("regular_polygon needs l >= 3");
    Polygon2 P;
    P.vertices.reserve(l);
    for (int k = 0; k < l; ++k) {
        double t = phase + 2.0 * M_PI * k / l;
        P.vertices.push_back({r * std::cos(t), r * std::sin(t)});
    }
    return P;
}

/* Section of a body by the plane spanned by the orthonormal pair (u1, u2).
   The plane passes through the origin, which must be interior, so the
   section is a full polygon whose extreme points are edge crossings plus
   any vertices lying in the plane. */
inline Polygon2 plane_section(const ConvexBody3& K, const Vec3& u1, const Vec3& u2) {
    Vec3 n = cross(u1, u2);
    if (std::abs(norm(n) - 1.0) > 1e-9 || std::abs(dot(u1, u2)) > 1e-9)
        throw Error("plane_section frame must be orthonormal");
    const double eps = 1e-9 * K.scale;
    std::vector<Vec2> flat;
    std::vector<double> h(K.vertices.size());
    for (size_t i = 0; i < K.vertices.size(); ++i) h[i] = dot(n, K.vertices[i]);
    for (size_t i = 0; i < K.vertices.size(); ++i)
        if (std::abs(h[i]) <= eps)
            flat.push_back({dot(u1, K.vertices[i]), dot(u2, K.vertices[i])});
    for (auto [a, b] : edges(K)) {
        if ((h[a] > eps && h[b] < -eps) || (h[a] < -eps && h[b] > eps)) {
            double t = h[a] / (h[a] - h[b]);
            Vec3 p = K.vertices[a] + (K.vertices[b] - K.vertices[a]) * t;
            flat.push_back({dot(u1, p), dot(u2, p)});
        }
    }
    if (flat.size() < 3) throw DegenerateInput("plane misses the body's interior");
    return polygon_hull(std::move(flat), u1, u2);
}

/* Hull of the orbit of seed points under the rotation by 2*pi/l; the result
   is invariant under that rotation by construction. */
inline Polygon2 cyclic_polygon(int l, const std::vector<Vec2>& seeds) {
    if (l < 1) throw BadOrder("cyclic_polygon needs l >= 1");
    if (seeds.empty()) throw DegenerateInput("cyclic_polygon needs at least one seed");
    std::vector<Vec2> pts;
    pts.reserve(seeds.size() * l);
    for (int k = 0; k < l; ++k)
        for (const Vec2& sd : seeds) pts.push_back(rotate(sd, 2.0 * M_PI * k / l));
    return polygon_hull(pts);
}

} // namespace mahler
