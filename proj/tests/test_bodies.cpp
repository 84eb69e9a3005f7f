#include <catch2/catch_amalgamated.hpp>

#include "mahlerlab/bodies.hpp"
#include "test_support.hpp"

using namespace mahler;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("reference body volumes", "[bodies]") {
    const double s3 = std::sqrt(3.0), s5 = std::sqrt(5.0);
    CHECK_THAT(volume(reference_body("simplex")), WithinRel(8.0 * s3 / 27.0, 1e-13));
    CHECK_THAT(volume(reference_body("simplex_polar")), WithinRel(8.0 * s3, 1e-13));
    CHECK_THAT(volume(reference_body("octahedron")), WithinRel(4.0 / 3.0, 1e-13));
    CHECK_THAT(volume(reference_body("cube")), WithinRel(8.0, 1e-13));
    CHECK_THAT(volume(reference_body("icosahedron")), WithinRel(10.0 * (3.0 + s5) / 3.0, 1e-13));
    CHECK_THAT(volume(reference_body("dodecahedron")), WithinRel(2.0 * (25.0 - 11.0 * s5), 1e-12));
    for (int l = 3; l <= 10; ++l) {
        CAPTURE(l);
        CHECK_THAT(volume(reference_body("prism", l)), WithinRel(l * std::sin(2.0 * M_PI / l), 1e-12));
        double r2 = 1.0 / std::pow(std::cos(M_PI / l), 2);
        CHECK_THAT(volume(reference_body("bipyramid", l)),
                   WithinRel(l / 3.0 * r2 * std::sin(2.0 * M_PI / l), 1e-12));
    }
}

TEST_CASE("bipyramid is the polar of the prism", "[bodies][polar]") {
    for (int l = 3; l <= 8; ++l) {
        CAPTURE(l);
        CHECK(vertex_hausdorff(reference_body("bipyramid", l), polar(reference_body("prism", l))) < 1e-12);
    }
}

TEST_CASE("body names with embedded order", "[bodies]") {
    CHECK(vertex_hausdorff(reference_body("prism_6"), reference_body("prism", 6)) < 1e-15);
    CHECK_THROWS_AS(reference_body("prism"), BadOrder);
    CHECK_THROWS_AS(reference_body("prism_6", 5), BadOrder);
    CHECK_THROWS_AS(reference_body("gyroid"), UnknownName);
}

TEST_CASE("sharp bound table", "[bodies]") {
    auto value = [](const char* name, int l = 0) {
        auto b = proven_bound(name, l);
        REQUIRE(b.has_value());
        return b->value;
    };
    CHECK_THAT(value("T"), WithinRel(64.0 / 9.0, 1e-15));
    CHECK_THAT(value("T_d"), WithinRel(64.0 / 9.0, 1e-15));
    CHECK_THAT(value("T_h"), WithinRel(32.0 / 3.0, 1e-15));
    CHECK_THAT(value("O"), WithinRel(32.0 / 3.0, 1e-15));
    CHECK_THAT(value("O_h"), WithinRel(32.0 / 3.0, 1e-15));
    double icosa = (80.0 / 3.0) * (5.0 - 2.0 * std::sqrt(5.0));
    CHECK_THAT(value("I"), WithinRel(icosa, 1e-15));
    CHECK_THAT(value("I_h"), WithinRel(icosa, 1e-15));
    CHECK_THAT(value("C_2h"), WithinRel(32.0 / 3.0, 1e-15));
    CHECK_THAT(value("C_3h"), WithinRel(9.0, 1e-13));
    CHECK_THAT(value("C_4h"), WithinRel(32.0 / 3.0, 1e-13));
    CHECK_THAT(value("D", 6), WithinRel(12.0, 1e-13));
    CHECK_THAT(value("D_2h"), WithinRel(32.0 / 3.0, 1e-15));
    CHECK_THAT(value("D_3h"), WithinRel(9.0, 1e-13));
    CHECK_THAT(value("S", 2), WithinRel(32.0 / 3.0, 1e-15));
    CHECK_THAT(value("S", 6), WithinRel(32.0 / 3.0, 1e-15));
    CHECK_THAT(value("S", 3), WithinRel(9.0, 1e-13));
    CHECK_THAT(value("S", 5), WithinRel(prism_product_bound(5), 1e-15));
    CHECK_THAT(value("D_1d"), WithinRel(32.0 / 3.0, 1e-15));
    CHECK_THAT(value("D_3d"), WithinRel(32.0 / 3.0, 1e-15));

    for (const char* open_name : {"C_5", "C_3v", "S_4", "S_8", "D_2", "D_1", "D_1h", "D_2d", "D_4d", "C_1h"}) {
        CAPTURE(open_name);
        CHECK_FALSE(proven_bound(open_name).has_value());
    }

    CHECK(proven_bound("T")->minimizers == std::vector<std::string>{"simplex", "simplex_polar"});
    CHECK(proven_bound("O")->minimizers == std::vector<std::string>{"octahedron", "cube"});
    CHECK(proven_bound("D", 5)->minimizers == std::vector<std::string>{"prism", "bipyramid"});
}

TEST_CASE("prism bound grows toward the centrally symmetric limit", "[bodies]") {
    double prev = prism_product_bound(3);
    CHECK_THAT(prev, WithinRel(9.0, 1e-13));
    CHECK_THAT(prism_product_bound(4), WithinRel(32.0 / 3.0, 1e-13));
    for (int l = 4; l <= 24; ++l) {
        double cur = prism_product_bound(l);
        REQUIRE(cur > prev);
        prev = cur;
    }
    CHECK(prev < 4.0 * M_PI * M_PI / 3.0);
    CHECK_THROWS_AS(prism_product_bound(2), BadOrder);
}

TEST_CASE("catalog bodies attain their closed form products", "[bodies][santalo]") {
    for (const CatalogEntry& row : catalog(8)) {
        CAPTURE(row.name);
        ConvexBody3 K = reference_body(row.name, row.order);
        REQUIRE(is_invariant(schoenflies(row.group_name, row.order), K, 1e-9));
        REQUIRE(row.closed_form_product.has_value());
        BoundReport r = volume_product(K);
        REQUIRE_THAT(r.product, WithinRel(*row.closed_form_product, 1e-8));
    }
}

TEST_CASE("equality classification recognizes the minimizers", "[bodies][classify]") {
    using EC = EqualityClass;
    ConvexBody3 simplex = reference_body("simplex");
    CHECK(classify_equality_class(simplex, "T", 0, 64.0 / 9.0) == EC::primal_minimizer);
    CHECK(classify_equality_class(dilate(simplex, 2.5), "T_d", 0, 64.0 / 9.0) == EC::primal_minimizer);
    CHECK(classify_equality_class(reference_body("simplex_polar"), "T", 0, 64.0 / 9.0) == EC::dual_minimizer);

    ConvexBody3 octa = reference_body("octahedron");
    ConvexBody3 cube = reference_body("cube");
    CHECK(classify_equality_class(octa, "O_h", 0, 32.0 / 3.0) == EC::primal_minimizer);
    CHECK(classify_equality_class(cube, "O_h", 0, 32.0 / 3.0) == EC::dual_minimizer);

    // cube is T-invariant but far from the simplex pair
    CHECK(classify_equality_class(cube, "T", 0, 32.0 / 3.0) == EC::strict);
    // no bound proven: always unknown
    CHECK(classify_equality_class(cube, "C_5", 0, 32.0 / 3.0) == EC::unknown);
    // below-bound products without a shape match stay unclassified
    CHECK(classify_equality_class(cube, "I_h", 0, 32.0 / 3.0) == EC::unknown);
}

TEST_CASE("prism class classification is scale and phase blind", "[bodies][classify]") {
    using EC = EqualityClass;
    auto g = testsupport::rng(99);
    for (int l : {3, 5, 6}) {
        double bound = prism_product_bound(l);
        for (int trial = 0; trial < 10; ++trial) {
            double a = testsupport::uniform(g, 0.4, 2.0);
            double b = testsupport::uniform(g, 0.4, 2.0);
            Mat3 M = rotation_z(testsupport::uniform(g, 0, 6.28)) * diag3(a, a, b);
            CAPTURE(l, trial);
            ConvexBody3 P = transform(reference_body("prism", l), M);
            ConvexBody3 B = transform(reference_body("bipyramid", l), M);
            REQUIRE(classify_equality_class(P, "C_h", l, bound) == EC::primal_minimizer);
            REQUIRE(classify_equality_class(B, "D", l, bound) == EC::dual_minimizer);
        }
    }
    // hexagonal prism also clears the pentagonal bound strictly
    ConvexBody3 hexa = reference_body("prism", 6);
    CHECK(classify_equality_class(hexa, "C_h", 5, 12.0) == EC::strict);
}

TEST_CASE("classification sees the hanner pair along the diagonal axis", "[bodies][classify]") {
    using EC = EqualityClass;
    Mat3 g = mahler::detail::diagonal_frame();
    REQUIRE(is_orthogonal(g, 1e-12));
    CHECK(norm(g * Vec3{1, 1, 1} - Vec3{0, 0, std::sqrt(3.0)}) < 1e-12);

    ConvexBody3 octa_diag = transform(reference_body("octahedron"), g);
    ConvexBody3 cube_diag = transform(reference_body("cube"), g);
    REQUIRE(is_invariant(schoenflies("S", 6), octa_diag, 1e-9));
    REQUIRE(is_invariant(schoenflies("D_3d"), cube_diag, 1e-9));
    CHECK(classify_equality_class(octa_diag, "S_6", 0, 32.0 / 3.0) == EC::primal_minimizer);
    CHECK(classify_equality_class(cube_diag, "D_3d", 0, 32.0 / 3.0) == EC::dual_minimizer);
}
