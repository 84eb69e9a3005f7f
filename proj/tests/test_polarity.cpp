#include <catch2/catch_amalgamated.hpp>

#include "mahlerlab/bodies.hpp"
#include "mahlerlab/polarity.hpp"
#include "test_support.hpp"

using namespace mahler;
using testsupport::rand_cloud;
using testsupport::rand_rotation;
using testsupport::rand_unit_vec;
using testsupport::uniform;

namespace {

// facet planes by exhaustive triple enumeration, usable as an oracle for tiny bodies
std::vector<std::pair<Vec3, double>> brute_facet_planes(const std::vector<Vec3>& pts) {
    std::vector<std::pair<Vec3, double>> planes;
    const int n = static_cast<int>(pts.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                Vec3 nrm = cross(pts[j] - pts[i], pts[k] - pts[i]);
                if (norm(nrm) < 1e-12) continue;
                nrm = normalize(nrm);
                double c = dot(nrm, pts[i]);
                bool above = false, below = false;
                for (const Vec3& p : pts) {
                    double s = dot(nrm, p) - c;
                    if (s > 1e-10) above = true;
                    if (s < -1e-10) below = true;
                }
                if (above && below) continue;
                if (above) { nrm = -1.0 * nrm; c = -c; }
                bool dup = false;
                for (const auto& [m, d] : planes)
                    if (norm(m - nrm) < 1e-9 && std::abs(d - c) < 1e-9) dup = true;
                if (!dup) planes.push_back({nrm, c});
            }
    return planes;
}

double nearest_vertex_dist(const ConvexBody3& K, const Vec3& p) {
    double best = 1e300;
    for (const Vec3& v : K.vertices) best = std::min(best, dist(v, p));
    return best;
}

}  // namespace

TEST_CASE("polar of the cube is the octahedron", "[polar]") {
    ConvexBody3 cube = reference_body("cube");
    ConvexBody3 P = polar(cube);
    REQUIRE(P.vertices.size() == 6);
    REQUIRE(P.facets.size() == 8);
    for (int s : {-1, 1})
        for (int axis = 0; axis < 3; ++axis) {
            Vec3 e{axis == 0 ? double(s) : 0.0, axis == 1 ? double(s) : 0.0, axis == 2 ? double(s) : 0.0};
            CHECK(nearest_vertex_dist(P, e) < 1e-12);
        }
    CHECK_THAT(volume(P), Catch::Matchers::WithinRel(4.0 / 3.0, 1e-13));
}

TEST_CASE("polar of the simplex is minus three times the simplex", "[polar]") {
    ConvexBody3 T = reference_body("simplex");
    ConvexBody3 P = polar(T);
    REQUIRE(P.vertices.size() == 4);

    auto planes = brute_facet_planes(T.vertices);
    REQUIRE(planes.size() == 4);
    for (const auto& [n, c] : planes) {
        REQUIRE(c > 0);
        CHECK(nearest_vertex_dist(P, n / c) < 1e-12);  // dual vertex of each facet
    }
    for (const Vec3& v : T.vertices) CHECK(nearest_vertex_dist(P, -3.0 * v) < 1e-12);
}

TEST_CASE("bipolar is the identity", "[polar][property]") {
    auto g = testsupport::rng(777);
    for (int trial = 0; trial < 120; ++trial) {
        ConvexBody3 K = convex_hull_3d(rand_cloud(g, 3 + trial % 7));
        ConvexBody3 KK = polar(polar(K));
        REQUIRE(vertex_hausdorff(K, KK) < 1e-7);
    }
}

TEST_CASE("polarity reverses inclusion", "[polar][property]") {
    auto g = testsupport::rng(778);
    for (int trial = 0; trial < 80; ++trial) {
        auto cloud = rand_cloud(g, 4);
        ConvexBody3 K = convex_hull_3d(cloud);
        for (int i = 0; i < 4; ++i) cloud.push_back(rand_unit_vec(g) * uniform(g, 0.4, 1.8));
        ConvexBody3 L = convex_hull_3d(cloud);
        ConvexBody3 Kp = polar(K), Lp = polar(L);
        for (const Vec3& v : Lp.vertices) REQUIRE(gauge(Kp, v) <= 1.0 + 1e-9);
    }
}

TEST_CASE("polar volume is a convex barrier around the santalo point", "[polar][santalo]") {
    ConvexBody3 cube = reference_body("cube");
    BoundReport r = volume_product(cube);
    CHECK_THAT(norm(r.santalo), Catch::Matchers::WithinAbs(0.0, 1e-7));
    CHECK_THAT(r.product, Catch::Matchers::WithinRel(32.0 / 3.0, 1e-10));

    ConvexBody3 shifted = translate(cube, {0.3, 0, 0});
    BoundReport rs = volume_product(shifted);
    CHECK_THAT(dist(rs.santalo, {0.3, 0, 0}), Catch::Matchers::WithinAbs(0.0, 1e-7));
    CHECK_THAT(rs.product, Catch::Matchers::WithinRel(32.0 / 3.0, 1e-10));

    // probe optimality of the reported point
    double at_min = polar_volume_at(shifted, rs.santalo);
    for (int axis = 0; axis < 3; ++axis)
        for (double s : {-1e-4, 1e-4}) {
            Vec3 z = rs.santalo;
            (axis == 0 ? z.x : axis == 1 ? z.y : z.z) += s;
            REQUIRE(polar_volume_at(shifted, z) >= at_min - 1e-12);
        }
}

TEST_CASE("volume products of the reference bodies", "[polar][santalo]") {
    auto check = [](const char* name, double expect) {
        BoundReport r = volume_product(reference_body(name));
        CAPTURE(name);
        CHECK_THAT(r.product, Catch::Matchers::WithinRel(expect, 1e-9));
    };
    check("simplex", 64.0 / 9.0);
    check("cube", 32.0 / 3.0);
    check("octahedron", 32.0 / 3.0);
    double icosa = (80.0 / 3.0) * (5.0 - 2.0 * std::sqrt(5.0));
    check("icosahedron", icosa);
    check("dodecahedron", icosa);
}

TEST_CASE("volume product is invariant under invertible affine maps", "[polar][property]") {
    auto g = testsupport::rng(779);
    ConvexBody3 K = convex_hull_3d(rand_cloud(g, 6));
    double base = volume_product(K).product;
    CHECK(base <= std::pow(4.0 * M_PI / 3.0, 2) + 1e-6);  // ball is the upper bound
    for (int trial = 0; trial < 6; ++trial) {
        Mat3 A = rand_rotation(g) * diag3(uniform(g, 0.5, 2.0), uniform(g, 0.5, 2.0), uniform(g, 0.5, 2.0)) *
                 rand_rotation(g);
        ConvexBody3 M = translate(transform(K, A), rand_unit_vec(g) * 0.2);
        REQUIRE_THAT(volume_product(M).product, Catch::Matchers::WithinRel(base, 1e-8));
    }
}

TEST_CASE("planar volume product of regular polygons", "[polar][planar]") {
    for (int l = 3; l <= 12; ++l) {
        Product2 r = volume_product(regular_polygon(l));
        double expect = l * l * std::sin(M_PI / l) * std::sin(M_PI / l);
        CAPTURE(l);
        REQUIRE_THAT(r.product, Catch::Matchers::WithinRel(expect, 1e-9));
    }
    // squares: P = 8 at the santalo point, area * polar area
    Product2 sq = volume_product(polygon_hull({{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}));
    CHECK_THAT(sq.product, Catch::Matchers::WithinAbs(8.0, 1e-9));
    CHECK_THAT(norm(sq.santalo), Catch::Matchers::WithinAbs(0.0, 1e-7));
}
