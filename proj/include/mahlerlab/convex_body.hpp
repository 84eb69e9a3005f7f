#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "mahlerlab/error.hpp"
#include "mahlerlab/vec.hpp"

namespace mahler {

/* One polygonal face of a convex polytope.  The ring lists vertex indices
   counterclockwise as seen from outside; every ring vertex satisfies
   normal . v = offset within the merge tolerance. */
struct Facet {
    Vec3 normal;            // unit outward normal
    double offset = 0.0;    // supporting plane is normal . x = offset
    std::vector<int> ring;
};

/* Convex polytope given by its extreme points plus derived facet structure.
   Instances come out of convex_hull_3d and are treated as immutable. */
struct ConvexBody3 {
    std::vector<Vec3> vertices;
    std::vector<Facet> facets;
    double scale = 1.0;     // max |coordinate|, >= 1, used for relative tolerances
};

namespace detail {

inline constexpr double k_hull_plane_eps = 1e-10;  // coplanarity threshold (relative)
inline constexpr double k_dedup_eps = 1e-9;        // vertex dedup distance

struct HullFace {
    int v[3];
    Vec3 n;          // unit outward normal
    double off;
    int nb[3];       // neighbor face across directed edge (v[i], v[i+1])
    std::vector<int> out;
    int far_pt = -1;
    double far_d = 0.0;
    bool alive = true;
};

inline void face_plane(HullFace& f, const std::vector<Vec3>& p) {
    Vec3 cr = cross(p[f.v[1]] - p[f.v[0]], p[f.v[2]] - p[f.v[0]]);
    double a = norm(cr);
    if (a < 1e-30) throw DegenerateInput("degenerate hull face");
    f.n = cr / a;
    f.off = (dot(f.n, p[f.v[0]]) + dot(f.n, p[f.v[1]]) + dot(f.n, p[f.v[2]])) / 3.0;
}

/* 2D monotone-chain hull over (index, point) pairs; collinear points are
   dropped so the output ring is strictly convex. */
inline std::vector<int> chain_hull_2d(std::vector<std::pair<Vec2, int>> pts, double eps_area) {
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        if (a.first.x != b.first.x) return a.first.x < b.first.x;
        return a.first.y < b.first.y;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const auto& a, const auto& b) {
                              return a.first.x == b.first.x && a.first.y == b.first.y;
                          }),
              pts.end());
    size_t n = pts.size();
    if (n < 3) {
        std::vector<int> ring;
        for (auto& q : pts) ring.push_back(q.second);
        return ring;
    }
    std::vector<int> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {  // lower chain
        while (k >= 2 && cross(pts[hull[k - 1]].first - pts[hull[k - 2]].first,
                               pts[i].first - pts[hull[k - 2]].first) <= eps_area)
            --k;
        hull[k++] = static_cast<int>(i);
    }
    for (size_t i = n - 1, lo = k + 1; i-- > 0;) {  // upper chain
        while (k >= lo && cross(pts[hull[k - 1]].first - pts[hull[k - 2]].first,
                                pts[i].first - pts[hull[k - 2]].first) <= eps_area)
            --k;
        hull[k++] = static_cast<int>(i);
    }
    std::vector<int> ring;
    ring.reserve(k - 1);
    for (size_t i = 0; i + 1 < k; ++i) ring.push_back(pts[hull[i]].second);
    return ring;
}

} // namespace detail

/* Convex hull of a 3D point cloud.  Quickhull with conflict lists, followed
   by a coplanar-merge pass so each face of the result is one polygon (a cube
   yields exactly 6 facets).  Throws DegenerateInput when the points do not
   span a full-dimensional body. */
inline ConvexBody3 convex_hull_3d(const std::vector<Vec3>& input) {
    using detail::HullFace;

    if (input.size() < 4) throw DegenerateInput("convex_hull_3d needs at least 4 points");

    double scale = 1.0;
    for (const Vec3& p : input)
        scale = std::max({scale, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
    const double eps_plane = detail::k_hull_plane_eps * scale;

    /* Dedup within the fixed vertex tolerance. */
    std::vector<Vec3> pts;
    pts.reserve(input.size());
    {
        std::vector<int> order(input.size());
        for (size_t i = 0; i < input.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (input[a].x != input[b].x) return input[a].x < input[b].x;
            if (input[a].y != input[b].y) return input[a].y < input[b].y;
            return input[a].z < input[b].z;
        });
        std::vector<char> dup(input.size(), 0);
        for (size_t i = 0; i < order.size(); ++i) {
            if (dup[order[i]]) continue;
            for (size_t j = i + 1; j < order.size(); ++j) {
                if (input[order[j]].x - input[order[i]].x > detail::k_dedup_eps) break;
                if (dist(input[order[i]], input[order[j]]) <= detail::k_dedup_eps) dup[order[j]] = 1;
            }
        }
        for (size_t i = 0; i < input.size(); ++i)
            if (!dup[i]) pts.push_back(input[i]);
    }
    const int n = static_cast<int>(pts.size());
    if (n < 4) throw DegenerateInput("fewer than 4 distinct points");

    /* Initial simplex: spread-maximizing choices keep the seed volume fat. */
    int i0 = 0;
    for (int i = 1; i < n; ++i) {
        const Vec3 &a = pts[i], &b = pts[i0];
        if (a.x < b.x || (a.x == b.x && (a.y < b.y || (a.y == b.y && a.z < b.z)))) i0 = i;
    }
    int i1 = -1;
    double best = 0;
    for (int i = 0; i < n; ++i) {
        double d = dist(pts[i], pts[i0]);
        if (d > best) { best = d; i1 = i; }
    }
    if (best <= detail::k_dedup_eps) throw DegenerateInput("all points coincide");
    Vec3 axis = (pts[i1] - pts[i0]) / best;
    int i2 = -1;
    best = 0;
    for (int i = 0; i < n; ++i) {
        double d = norm(cross(pts[i] - pts[i0], axis));
        if (d > best) { best = d; i2 = i; }
    }
    if (best <= eps_plane) throw DegenerateInput("points are collinear");
    Vec3 nrm = normalize(cross(pts[i1] - pts[i0], pts[i2] - pts[i0]));
    int i3 = -1;
    best = 0;
    for (int i = 0; i < n; ++i) {
        double d = std::abs(dot(pts[i] - pts[i0], nrm));
        if (d > best) { best = d; i3 = i; }
    }
    if (best <= eps_plane) throw DegenerateInput("points are coplanar");
    if (dot(pts[i3] - pts[i0], cross(pts[i1] - pts[i0], pts[i2] - pts[i0])) < 0) std::swap(i1, i2);

    std::vector<HullFace> faces;
    faces.reserve(4 * static_cast<size_t>(n));
    auto add_face = [&](int a, int b, int c) {
        HullFace f;
        f.v[0] = a; f.v[1] = b; f.v[2] = c;
        f.nb[0] = f.nb[1] = f.nb[2] = -1;
        detail::face_plane(f, pts);
        faces.push_back(std::move(f));
        return static_cast<int>(faces.size() - 1);
    };
    add_face(i0, i2, i1);
    add_face(i0, i1, i3);
    add_face(i0, i3, i2);
    add_face(i1, i2, i3);
    {
        std::map<std::pair<int, int>, std::pair<int, int>> half;  // directed edge -> (face, slot)
        for (int fi = 0; fi < 4; ++fi)
            for (int e = 0; e < 3; ++e)
                half[{faces[fi].v[e], faces[fi].v[(e + 1) % 3]}] = {fi, e};
        for (auto& [edge, fe] : half) {
            auto rev = half.find({edge.second, edge.first});
            if (rev == half.end()) throw Error("internal: open seed simplex");
            faces[fe.first].nb[fe.second] = rev->second.first;
        }
    }

    auto assign = [&](int pi) {
        for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi) {
            HullFace& f = faces[fi];
            if (!f.alive) continue;
            double d = dot(f.n, pts[pi]) - f.off;
            if (d > eps_plane) {
                f.out.push_back(pi);
                if (d > f.far_d) { f.far_d = d; f.far_pt = pi; }
                return;
            }
        }
    };
    for (int i = 0; i < n; ++i)
        if (i != i0 && i != i1 && i != i2 && i != i3) assign(i);

    std::vector<int> pending;
    for (int fi = 0; fi < 4; ++fi)
        if (!faces[fi].out.empty()) pending.push_back(fi);

    std::vector<int> visible, stack;
    std::vector<char> seen(faces.size(), 0);
    while (!pending.empty()) {
        int f0 = pending.back();
        pending.pop_back();
        if (!faces[f0].alive || faces[f0].out.empty()) continue;
        const int p = faces[f0].far_pt;

        /* Visible region: breadth-first over face adjacency. */
        visible.clear();
        stack.assign(1, f0);
        seen.assign(faces.size(), 0);
        seen[f0] = 1;
        while (!stack.empty()) {
            int fi = stack.back();
            stack.pop_back();
            visible.push_back(fi);
            for (int e = 0; e < 3; ++e) {
                int g = faces[fi].nb[e];
                if (g < 0 || seen[g] || !faces[g].alive) continue;
                if (dot(faces[g].n, pts[p]) - faces[g].off > eps_plane) {
                    seen[g] = 1;
                    stack.push_back(g);
                }
            }
        }

        /* Horizon: directed edges of visible faces whose neighbor survives. */
        struct HEdge { int a, b, outside; };
        std::vector<HEdge> horizon;
        for (int fi : visible)
            for (int e = 0; e < 3; ++e) {
                int g = faces[fi].nb[e];
                if (g >= 0 && !seen[g])
                    horizon.push_back({faces[fi].v[e], faces[fi].v[(e + 1) % 3], g});
            }
        if (horizon.empty()) throw Error("internal: empty horizon");

        std::vector<int> orphan;
        for (int fi : visible) {
            faces[fi].alive = false;
            for (int q : faces[fi].out)
                if (q != p) orphan.push_back(q);
            faces[fi].out.clear();
        }

        std::map<std::pair<int, int>, std::pair<int, int>> half;
        std::vector<int> fresh;
        fresh.reserve(horizon.size());
        for (const HEdge& h : horizon) {
            int nf = add_face(h.a, h.b, p);
            fresh.push_back(nf);
            faces[nf].nb[0] = h.outside;
            HullFace& g = faces[h.outside];
            for (int e = 0; e < 3; ++e)
                if (g.v[e] == h.b && g.v[(e + 1) % 3] == h.a) g.nb[e] = nf;
            half[{h.b, p}] = {nf, 1};
            half[{p, h.a}] = {nf, 2};
        }
        for (auto& [edge, fe] : half) {
            auto rev = half.find({edge.second, edge.first});
            if (rev == half.end()) throw Error("internal: torn horizon fan");
            faces[fe.first].nb[fe.second] = rev->second.first;
        }

        std::sort(orphan.begin(), orphan.end());
        orphan.erase(std::unique(orphan.begin(), orphan.end()), orphan.end());
        for (int q : orphan) {
            for (int nf : fresh) {
                HullFace& f = faces[nf];
                double d = dot(f.n, pts[q]) - f.off;
                if (d > eps_plane) {
                    f.out.push_back(q);
                    if (d > f.far_d) { f.far_d = d; f.far_pt = q; }
                    break;
                }
            }
        }
        for (int nf : fresh)
            if (!faces[nf].out.empty()) pending.push_back(nf);
        seen.resize(faces.size(), 0);
    }

    /* Coplanar merge: cluster triangles against the plane of the largest
       member so a flat face becomes one polygonal facet. */
    std::vector<int> alive_idx;
    for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi)
        if (faces[fi].alive) alive_idx.push_back(fi);
    auto tri_area = [&](int fi) {
        const HullFace& f = faces[fi];
        return 0.5 * norm(cross(pts[f.v[1]] - pts[f.v[0]], pts[f.v[2]] - pts[f.v[0]]));
    };
    std::sort(alive_idx.begin(), alive_idx.end(),
              [&](int a, int b) { return tri_area(a) > tri_area(b); });

    std::vector<char> clustered(faces.size(), 0);
    ConvexBody3 body;
    body.scale = scale;
    std::vector<int> remap(pts.size(), -1);

    for (int seed : alive_idx) {
        if (clustered[seed]) continue;
        const Vec3 n0 = faces[seed].n;
        const double off0 = faces[seed].off;
        auto coplanar = [&](int fi) {
            for (int e = 0; e < 3; ++e)
                if (std::abs(dot(n0, pts[faces[fi].v[e]]) - off0) > eps_plane) return false;
            return true;
        };
        std::vector<int> cluster;
        stack.assign(1, seed);
        clustered[seed] = 1;
        while (!stack.empty()) {
            int fi = stack.back();
            stack.pop_back();
            cluster.push_back(fi);
            for (int e = 0; e < 3; ++e) {
                int g = faces[fi].nb[e];
                if (g >= 0 && faces[g].alive && !clustered[g] && coplanar(g)) {
                    clustered[g] = 1;
                    stack.push_back(g);
                }
            }
        }

        /* Area-weighted plane refit, then the facet ring as a 2D hull. */
        Vec3 nsum{0, 0, 0};
        for (int fi : cluster)
            nsum += cross(pts[faces[fi].v[1]] - pts[faces[fi].v[0]],
                          pts[faces[fi].v[2]] - pts[faces[fi].v[0]]);
        Vec3 fn = normalize(nsum);
        std::vector<int> members;
        for (int fi : cluster)
            for (int e = 0; e < 3; ++e) members.push_back(faces[fi].v[e]);
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        double foff = 0;
        for (int vi : members) foff += dot(fn, pts[vi]);
        foff /= static_cast<double>(members.size());

        Vec3 ref = std::abs(fn.x) <= std::abs(fn.y) && std::abs(fn.x) <= std::abs(fn.z)
                       ? Vec3{1, 0, 0}
                       : (std::abs(fn.y) <= std::abs(fn.z) ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
        Vec3 u = normalize(cross(fn, ref));
        Vec3 w = cross(fn, u);
        std::vector<std::pair<Vec2, int>> flat;
        flat.reserve(members.size());
        for (int vi : members)
            flat.push_back({{dot(u, pts[vi]), dot(w, pts[vi])}, vi});
        /* Facets with edges between the coplanarity floor and ~1e-6 scale are
           legitimate but fall under the collinearity pruning; rebuild such a
           ring at the floor tolerance before giving up. */
        std::vector<int> ring = detail::chain_hull_2d(flat, 1e-12 * scale * scale);
        if (ring.size() < 3)
            ring = detail::chain_hull_2d(
                std::move(flat),
                detail::k_hull_plane_eps * detail::k_hull_plane_eps * scale * scale);
        if (ring.size() < 3) throw DegenerateInput("facet ring collapsed under clustering");

        /* chain_hull_2d returns counterclockwise order in the (u, w) frame,
           and cross(u, w) = fn, so the ring is outward counterclockwise. */
        int start = 0;
        for (size_t i = 1; i < ring.size(); ++i)
            if (ring[i] < ring[start]) start = static_cast<int>(i);
        std::rotate(ring.begin(), ring.begin() + start, ring.end());

        Facet facet;
        facet.normal = fn;
        facet.offset = foff;
        for (int vi : ring) {
            if (remap[vi] < 0) {
                remap[vi] = static_cast<int>(body.vertices.size());
                body.vertices.push_back(pts[vi]);
            }
            facet.ring.push_back(remap[vi]);
        }
        body.facets.push_back(std::move(facet));
    }

    if (body.vertices.size() < 4 || body.facets.size() < 4)
        throw DegenerateInput("hull collapsed below full dimension");

    for (const Facet& f : body.facets)
        for (const Vec3& v : body.vertices)
            if (dot(f.normal, v) - f.offset > 1e-9 * scale)
                throw Error("internal: hull facet plane violated");

    return body;
}

/* Mean of the vertex set; strictly interior for a full-dimensional body. */
inline Vec3 centroid(const ConvexBody3& K) {
    Vec3 c{0, 0, 0};
    for (const Vec3& v : K.vertices) c += v;
    return c / static_cast<double>(K.vertices.size());
}

/* Signed volume from an arbitrary apex via facet fans; the divergence
   theorem makes the result apex-independent. */
inline double volume_about(const ConvexBody3& K, const Vec3& apex) {
    double six_vol = 0;
    for (const Facet& f : K.facets) {
        const Vec3 r0 = K.vertices[f.ring[0]] - apex;
        for (size_t i = 1; i + 1 < f.ring.size(); ++i)
            six_vol += det3(r0, K.vertices[f.ring[i]] - apex, K.vertices[f.ring[i + 1]] - apex);
    }
    return six_vol / 6.0;
}

inline double volume(const ConvexBody3& K) { return volume_about(K, centroid(K)); }

/* Distance from p to the facet planes; positive when p is strictly inside. */
inline double inradius_about(const ConvexBody3& K, const Vec3& p) {
    double r = std::numeric_limits<double>::infinity();
    for (const Facet& f : K.facets) r = std::min(r, f.offset - dot(f.normal, p));
    return r;
}

/* Minkowski gauge ||x||_K = min {t > 0 : x in tK}; requires o interior. */
inline double gauge(const ConvexBody3& K, const Vec3& x) {
    double g = 0;
    for (const Facet& f : K.facets) {
        if (f.offset <= 1e-12 * K.scale)
            throw OriginNotInterior("gauge needs the origin strictly inside the body");
        g = std::max(g, dot(f.normal, x) / f.offset);
    }
    return g;
}

/* Boundary point of K along direction d. */
inline Vec3 radial_point(const ConvexBody3& K, const Vec3& d) {
    if (norm(d) < 1e-14 * K.scale) throw ZeroDirection("radial_point of the zero direction");
    double g = gauge(K, d);
    if (g <= 0) throw Error("internal: direction escapes every facet plane");
    return d / g;
}

inline bool contains(const ConvexBody3& K, const Vec3& x, double tol) {
    for (const Facet& f : K.facets)
        if (dot(f.normal, x) - f.offset > tol) return false;
    return true;
}

/* Support value h_K(d) = max_{x in K} d . x. */
inline double support(const ConvexBody3& K, const Vec3& d) {
    double h = -std::numeric_limits<double>::infinity();
    for (const Vec3& v : K.vertices) h = std::max(h, dot(d, v));
    return h;
}

inline ConvexBody3 transform(const ConvexBody3& K, const Mat3& g) {
    std::vector<Vec3> pts;
    pts.reserve(K.vertices.size());
    for (const Vec3& v : K.vertices) pts.push_back(g * v);
    return convex_hull_3d(pts);
}

inline ConvexBody3 translate(const ConvexBody3& K, const Vec3& t) {
    std::vector<Vec3> pts;
    pts.reserve(K.vertices.size());
    for (const Vec3& v : K.vertices) pts.push_back(v + t);
    return convex_hull_3d(pts);
}

/* Exact similarity: facet structure is preserved, so no hull rebuild. */
inline ConvexBody3 dilate(const ConvexBody3& K, double s) {
    if (!(s > 0)) throw DegenerateInput("dilation factor must be positive");
    ConvexBody3 r = K;
    for (Vec3& v : r.vertices) v *= s;
    for (Facet& f : r.facets) f.offset *= s;
    r.scale *= s;
    return r;
}

/* Undirected edge list from the facet rings. */
inline std::vector<std::pair<int, int>> edges(const ConvexBody3& K) {
    std::vector<std::pair<int, int>> es;
    for (const Facet& f : K.facets)
        for (size_t i = 0; i < f.ring.size(); ++i) {
            int a = f.ring[i], b = f.ring[(i + 1) % f.ring.size()];
            es.emplace_back(std::min(a, b), std::max(a, b));
        }
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());
    return es;
}

/* Symmetric max-min distance between the two vertex sets. */
inline double vertex_hausdorff(const ConvexBody3& A, const ConvexBody3& B) {
    auto one_sided = [](const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
        double worst = 0;
        for (const Vec3& v : from) {
            double nearest = std::numeric_limits<double>::infinity();
            for (const Vec3& w : to) nearest = std::min(nearest, dist(v, w));
            worst = std::max(worst, nearest);
        }
        return worst;
    };
    return std::max(one_sided(A.vertices, B.vertices), one_sided(B.vertices, A.vertices));
}

/* K cut by the halfspace n . x <= c; nullopt when the intersection is not
   full-dimensional. */
inline std::optional<ConvexBody3> clip_halfspace(const ConvexBody3& K, const Vec3& n, double c) {
    const double eps = 1e-12 * K.scale * std::max(1.0, norm(n));
    std::vector<double> side(K.vertices.size());
    bool any_out = false, any_in = false;
    for (size_t i = 0; i < K.vertices.size(); ++i) {
        side[i] = dot(n, K.vertices[i]) - c;
        any_out |= side[i] > eps;
        any_in |= side[i] < -eps;
    }
    if (!any_out) return K;
    if (!any_in) return std::nullopt;

    std::vector<Vec3> pts;
    for (size_t i = 0; i < K.vertices.size(); ++i)
        if (side[i] <= eps) pts.push_back(K.vertices[i]);
    for (auto [a, b] : edges(K)) {
        if ((side[a] > eps && side[b] < -eps) || (side[a] < -eps && side[b] > eps)) {
            double t = side[a] / (side[a] - side[b]);
            pts.push_back(K.vertices[a] + (K.vertices[b] - K.vertices[a]) * t);
        }
    }
    if (pts.size() < 4) return std::nullopt;
    try {
        return convex_hull_3d(pts);
    } catch (const DegenerateInput&) {
        return std::nullopt;
    }
}

/* Volume of K intersected with {x : n . x >= 0 for every n in inward_normals}.
   Degenerate intersections count as zero. */
inline double clipped_cone_volume(const ConvexBody3& K, const std::vector<Vec3>& inward_normals) {
    std::optional<ConvexBody3> cut = K;
    for (const Vec3& n : inward_normals) {
        cut = clip_halfspace(*cut, -n, 0.0);
        if (!cut) return 0.0;
    }
    return volume(*cut);
}

} // namespace mahler
