#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mahlerlab/bodies.hpp"
#include "mahlerlab/polarity.hpp"
#include "mahlerlab/symmetry.hpp"

namespace mahler {

inline constexpr double k_tile_rel_tol = 1e-7;        // primal patch additivity
inline constexpr double k_dual_tile_rel_tol = 1e-6;   // dual patch additivity
inline constexpr double k_patch_product_tol = 1e-6;   // patch product inequality
inline constexpr double k_pairing_tol = 1e-6;         // curve pairing inequality
inline constexpr double k_support_margin_tol = 1e-8;  // cone volume inequality

/* Closed polyline on the boundary of a body.  Consecutive anchors are joined
   by the radial projection of their chord, which runs along the boundary of
   the planar section spanned by the two anchors. */
struct BoundaryCurve {
    std::vector<Vec3> samples;  // closed: samples.back() connects to samples.front()
    std::vector<Vec3> anchors;
};

/* C-bar = (1/2) sum r_i x r_{i+1}: the vector area of any surface capping
   the curve.  Radial segments through the origin contribute nothing. */
inline Vec3 curve_vector(const BoundaryCurve& C) {
    Vec3 s{0, 0, 0};
    const size_t n = C.samples.size();
    for (size_t i = 0; i < n; ++i) s = s + cross(C.samples[i], C.samples[(i + 1) % n]);
    return 0.5 * s;
}

inline BoundaryCurve boundary_curve(const ConvexBody3& K, const std::vector<Vec3>& anchors,
                                    int samples_per_arc = 64) {
    if (anchors.size() < 2) throw DegenerateInput("boundary_curve needs at least two anchors");
    if (samples_per_arc < 1) throw DegenerateInput("samples_per_arc must be positive");

    BoundaryCurve curve;
    for (const Vec3& d : anchors) curve.anchors.push_back(radial_point(K, d));

    const size_t m = curve.anchors.size();
    for (size_t arc = 0; arc < m; ++arc) {
        const Vec3& A = curve.anchors[arc];
        const Vec3& B = curve.anchors[(arc + 1) % m];
        Vec3 u1 = normalize(A);
        Vec3 rej = B - dot(B, u1) * u1;
        if (norm(rej) < 1e-9 * K.scale)
            throw BadAngle("consecutive anchors are radially collinear");
        Vec3 u2 = normalize(rej);
        Polygon2 S = plane_section(K, u1, u2);
        Vec2 a{dot(A, u1), 0};
        Vec2 b{dot(B, u1), dot(B, u2)};

        /* Chord parameters of the section vertices strictly inside the cone
           spanned by a and b: v = p a + q b with p, q > 0 projects radially
           from chord parameter t = q / (p + q).  These are the kinks of the
           boundary path and make the polyline exact for polytopes. */
        std::vector<std::pair<double, Vec2>> kinks;
        double det = a.x * b.y - a.y * b.x;
        for (const Vec2& v : S.vertices) {
            double p = (v.x * b.y - v.y * b.x) / det;
            double q = (a.x * v.y - a.y * v.x) / det;
            if (p > 1e-9 && q > 1e-9) kinks.push_back({q / (p + q), v});
        }
        std::sort(kinks.begin(), kinks.end(),
                  [](const auto& lhs, const auto& rhs) { return lhs.first < rhs.first; });

        std::vector<std::pair<double, Vec2>> stops;
        stops.push_back({0.0, a});
        for (int i = 1; i < samples_per_arc; ++i) {
            double t = double(i) / samples_per_arc;
            stops.push_back({t, radial_point(S, a * (1.0 - t) + b * t)});
        }
        for (const auto& k : kinks) stops.push_back(k);
        std::sort(stops.begin(), stops.end(),
                  [](const auto& lhs, const auto& rhs) { return lhs.first < rhs.first; });

        for (const auto& [t, w] : stops) {
            Vec3 x = w.x * u1 + w.y * u2;
            if (curve.samples.empty() || dist(curve.samples.back(), x) > 1e-12 * K.scale)
                curve.samples.push_back(x);
        }
    }
    while (curve.samples.size() > 1 &&
           dist(curve.samples.front(), curve.samples.back()) <= 1e-12 * K.scale)
        curve.samples.pop_back();
    if (curve.samples.size() < 3) throw DegenerateInput("boundary curve collapsed");
    return curve;
}

/* Surrogate for the dual map at x on the boundary of K: the average of the
   dual vertices of all facets active at x, radially normalized onto the
   boundary of the polar.  The query is projected radially onto the boundary
   first.  On a facet interior the result is the facet's dual vertex; on an
   edge or at a vertex it is a point of the dual face, so
   x . contact_point(x) = 1 always holds. */
inline Vec3 contact_point(const ConvexBody3& K, const ConvexBody3& polar_K, const Vec3& x_raw) {
    if (norm(x_raw) < 1e-14 * K.scale) throw ZeroDirection("contact point of the zero direction");
    Vec3 x = x_raw / gauge(K, x_raw);
    Vec3 acc{0, 0, 0};
    int active = 0;
    for (const Facet& f : K.facets) {
        if (std::abs(dot(f.normal, x) - f.offset) <= 1e-9 * K.scale) {
            acc = acc + f.normal / f.offset;
            ++active;
        }
    }
    if (active == 0) throw NotOnBoundary("contact_point argument misses every facet");
    Vec3 y = acc / double(active);
    return y / gauge(polar_K, y);
}

/* Image of a boundary curve under the dual map, as a closed polyline on the
   boundary of the polar body.  Runs of samples on one facet collapse to the
   facet's dual vertex; edge and vertex crossings contribute the averaged
   points, which is what makes the patch decompositions below tile. */
inline BoundaryCurve image_curve(const ConvexBody3& K, const ConvexBody3& polar_K,
                                 const BoundaryCurve& C) {
    BoundaryCurve img;
    for (const Vec3& x : C.samples) {
        Vec3 y = contact_point(K, polar_K, x);
        if (img.samples.empty() || dist(img.samples.back(), y) > 1e-9 * polar_K.scale)
            img.samples.push_back(y);
    }
    while (img.samples.size() > 1 &&
           dist(img.samples.front(), img.samples.back()) <= 1e-9 * polar_K.scale)
        img.samples.pop_back();
    for (const Vec3& a : C.anchors) img.anchors.push_back(contact_point(K, polar_K, a));
    if (img.samples.size() < 3) throw DegenerateInput("image curve collapsed");
    return img;
}

/* |o * S_K(C)|: volume of the radial cone over the boundary patch enclosed
   by C on the side its curve vector points to.  Computed as a signed fan of
   clipped cones from w = C-bar / |C-bar|.  The fan is exact when C winds
   once around w with positive orientation; local backtracks cancel, but a
   curve that multi-winds or excludes w from its patch sweeps other volume.
   Chain curves wind once by construction and their fan values are pinned
   against the tiling identities in group_bound_check. */
inline double patch_volume(const ConvexBody3& K, const BoundaryCurve& C) {
    Vec3 cbar = curve_vector(C);
    if (norm(cbar) < 1e-14 * K.scale * K.scale)
        throw DegenerateInput("patch_volume needs a curve with nonzero curve vector");
    Vec3 w = normalize(cbar);

    double total = 0;
    const size_t n = C.samples.size();
    for (size_t i = 0; i < n; ++i) {
        Vec3 s = C.samples[i];
        Vec3 t = C.samples[(i + 1) % n];
        double orient = det3(w, s, t);
        double sliver = norm(cross(s, t));
        if (std::abs(orient) < 1e-14 * K.scale * K.scale || sliver < 1e-14 * K.scale * K.scale)
            continue;  // radial or w-coplanar step sweeps no volume
        if (orient > 0)
            total += clipped_cone_volume(K, {cross(w, s), cross(s, t), cross(t, w)});
        else
            total -= clipped_cone_volume(K, {cross(w, t), cross(t, s), cross(s, w)});
    }
    return total;
}

/* Cone volume estimate: |o * S_K(C)| >= x . C-bar / 3 for every x in K. */
inline double support_margin(const ConvexBody3& K, const BoundaryCurve& C, const Vec3& x) {
    return patch_volume(K, C) - dot(x, curve_vector(C)) / 3.0;
}

/* The margin minimized over K, attained at a vertex: the patch volume minus
   h_K(C-bar) / 3.  Zero exactly when the patch is the cone over a flat face
   orthogonal to the curve vector. */
inline double min_support_margin(const ConvexBody3& K, const BoundaryCurve& C) {
    return patch_volume(K, C) - support(K, curve_vector(C)) / 3.0;
}

inline bool is_cone_tight(const ConvexBody3& K, const BoundaryCurve& C, double tol = k_support_margin_tol) {
    double h = support(K, curve_vector(C)) / 3.0;
    return std::abs(patch_volume(K, C) - h) <= tol * std::max(1.0, std::abs(h));
}

/* Patch product estimate: the product of the primal and dual patch volumes
   dominates the pairing of the two curve vectors. */
struct PatchProduct {
    double primal_patch = 0;  // |o * S_K(C)|
    double dual_patch = 0;    // |o * S_K*(image of C)|
    Vec3 curve_vec{0, 0, 0};
    Vec3 dual_curve_vec{0, 0, 0};
    double lhs = 0;           // primal_patch * dual_patch
    double rhs = 0;           // curve_vec . dual_curve_vec / 9
    double margin = 0;        // lhs - rhs
};

inline PatchProduct patch_product_check(const ConvexBody3& K, const ConvexBody3& polar_K,
                                        const BoundaryCurve& C) {
    PatchProduct r;
    BoundaryCurve img = image_curve(K, polar_K, C);
    r.primal_patch = patch_volume(K, C);
    r.dual_patch = patch_volume(polar_K, img);
    r.curve_vec = curve_vector(C);
    r.dual_curve_vec = curve_vector(img);
    r.lhs = r.primal_patch * r.dual_patch;
    r.rhs = dot(r.curve_vec, r.dual_curve_vec) / 9.0;
    r.margin = r.lhs - r.rhs;
    return r;
}

/* One verified link of a bound certificate: either an equality that must
   hold to within tolerance or an inequality whose margin must be
   nonnegative up to tolerance. */
struct ChainLink {
    std::string label;
    double lhs = 0;
    double rhs = 0;
    double margin = 0;     // lhs - rhs
    bool equality = false;
    bool passed = false;
};

struct GroupBoundReport {
    BoundReport report;
    std::vector<ChainLink> links;
    bool certified = false;
};

namespace detail {

struct ChainSpec {
    std::vector<Vec3> anchor_dirs;  // cycle, oriented so the curve vector points into the patch
    int tile_index = 0;             // orbit size of the patch cone
    double pairing_const = 0;       // sharp lower bound for curve_vec . dual_curve_vec
    bool axis_normalize = false;    // true: scale xy and z separately (prism families)
};

inline ChainSpec chain_spec_for(const GroupKey& key) {
    const double s3 = std::sqrt(3.0);
    switch (key.family) {
        case 'T':
            return {{{1 / s3, 1 / s3, 1 / s3}, {1 / s3, -1 / s3, -1 / s3}, {-1 / s3, 1 / s3, -1 / s3}},
                    4,
                    4.0,
                    false};
        case 'O':
            return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 8, 1.5, false};
        case 'I': {
            const double phi = 0.5 * (1.0 + std::sqrt(5.0));
            double r = std::sqrt(2.0 + phi);
            return {{{0, 1 / r, phi / r}, {phi / r, 0, 1 / r}, {1 / r, phi / r, 0}},
                    20,
                    9.0 * icosahedral_product_bound() / 400.0,
                    false};
        }
        default: {  // prism wedge for the l-fold families
            double xi = 2.0 * M_PI / key.l;
            return {{{0, 0, 1}, {1, 0, 0}, {std::cos(xi), std::sin(xi), 0}},
                    2 * key.l,
                    1.5 * (1.0 - std::cos(xi)),
                    true};
        }
    }
}

/* Which certification route a group takes: a full patch decomposition, a
   plain margin comparison against the centrally symmetric bound (for groups
   containing -E whose sharp bound is inherited), or none. */
enum class BoundRoute { patch_chain, central_margin, open };

inline BoundRoute bound_route(const GroupKey& key) {
    switch (key.family) {
        case 'T': return key.variant == 'h' ? BoundRoute::central_margin : BoundRoute::patch_chain;
        case 'O':
        case 'I': return BoundRoute::patch_chain;
        case 'C':
            if (key.variant != 'h') return BoundRoute::open;
            if (key.l == 2) return BoundRoute::central_margin;
            return key.l >= 3 ? BoundRoute::patch_chain : BoundRoute::open;
        case 'S':
            if (key.l == 2 || key.l == 6) return BoundRoute::central_margin;
            return (key.l % 2 == 1 && key.l >= 3) ? BoundRoute::patch_chain : BoundRoute::open;
        case 'D':
            if (key.variant == ' ') return key.l >= 3 ? BoundRoute::patch_chain : BoundRoute::open;
            if (key.variant == 'h') {
                if (key.l == 2) return BoundRoute::central_margin;
                return key.l >= 3 ? BoundRoute::patch_chain : BoundRoute::open;
            }
            return (key.l == 1 || key.l == 3) ? BoundRoute::central_margin : BoundRoute::open;
        default: return BoundRoute::open;
    }
}

} // namespace detail

/* Certify the sharp volume product bound for a G-invariant body by walking
   the inequality chain: normalize, decompose both bodies into patch-cone
   orbits, and compare the patch product with the curve pairing and the
   pairing with its sharp constant.  Groups whose bound follows from central
   symmetry get a direct margin check instead.  Throws NotInvariant when the
   body lacks the symmetry and UnsupportedGroup when no bound is proven. */
inline GroupBoundReport group_bound_check(const ConvexBody3& K, const std::string& group_name,
                                          int l = 0) {
    detail::GroupKey key = detail::parse_group_name(group_name, l);
    PointGroup G = schoenflies(group_name, l);
    if (!is_invariant(G, K, 1e-6 * K.scale))
        throw NotInvariant("body is not invariant under " + G.name);

    detail::BoundRoute route = detail::bound_route(key);
    if (route == detail::BoundRoute::open)
        throw UnsupportedGroup("no proven volume product bound for " + G.name);
    auto bound = proven_bound(group_name, l);

    GroupBoundReport out;
    out.report.group_name = G.name;
    out.report.order = key.l;
    out.report.volume = volume(K);
    out.report.polar_volume = volume(polar(K));  // the Santalo point of an invariant body is o
    out.report.product = out.report.volume * out.report.polar_volume;
    out.report.reference_bound = bound->value;
    out.report.margin = out.report.product - bound->value;
    out.report.equality_class = classify_equality_class(K, group_name, l, out.report.product);

    auto push = [&](const std::string& label, double lhs, double rhs, bool equality, double tol) {
        ChainLink link{label, lhs, rhs, lhs - rhs, equality, false};
        if (equality)
            link.passed = std::abs(link.margin) <= tol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
        else
            link.passed = link.margin >= -tol;
        out.links.push_back(link);
    };

    if (route == detail::BoundRoute::central_margin) {
        push("product above central-symmetry bound", out.report.product, bound->value, false,
             k_pairing_tol);
    } else {
        detail::ChainSpec spec = detail::chain_spec_for(key);
        ConvexBody3 K1 = spec.axis_normalize
                             ? transform(K, diag3(gauge(K, {1, 0, 0}), gauge(K, {1, 0, 0}),
                                                  gauge(K, {0, 0, 1})))
                             : dilate(K, gauge(K, spec.anchor_dirs.front()));
        ConvexBody3 Kp = polar(K1);

        BoundaryCurve C = boundary_curve(K1, spec.anchor_dirs);
        PatchProduct pp = patch_product_check(K1, Kp, C);

        push("primal patch cones tile the body", spec.tile_index * pp.primal_patch, volume(K1),
             true, k_tile_rel_tol);
        push("dual patch cones tile the polar", spec.tile_index * pp.dual_patch, volume(Kp), true,
             k_dual_tile_rel_tol);
        push("patch product dominates the curve pairing", pp.lhs, pp.rhs, false,
             k_patch_product_tol);
        push("curve pairing meets its sharp constant", dot(pp.curve_vec, pp.dual_curve_vec),
             spec.pairing_const, false, k_pairing_tol);
    }

    out.certified = true;
    for (const ChainLink& link : out.links) out.certified = out.certified && link.passed;
    return out;
}

} // namespace mahler
