#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "mahlerlab/search.hpp"
#include "test_support.hpp"

using namespace mahler;

namespace {

InvariantFamily one_seed(const std::string& group, const Vec3& dir, double radius = 1.0) {
    InvariantFamily F;
    F.group = schoenflies(group);
    F.seed_directions = {normalize(dir)};
    F.radii = {radius};
    return F;
}

} // namespace

TEST_CASE("fixed space dimensions of the group catalog") {
    CHECK(fixed_space_dimension(schoenflies("T")) == 0);
    CHECK(fixed_space_dimension(schoenflies("O_h")) == 0);
    CHECK(fixed_space_dimension(schoenflies("I")) == 0);
    CHECK(fixed_space_dimension(schoenflies("S_2")) == 0);
    CHECK(fixed_space_dimension(schoenflies("D_4")) == 0);
    CHECK(fixed_space_dimension(schoenflies("C_6h")) == 0);
    CHECK(fixed_space_dimension(schoenflies("C_5")) == 1);
    CHECK(fixed_space_dimension(schoenflies("C_3v")) == 1);
    CHECK(fixed_space_dimension(schoenflies("C_1h")) == 2);
}

TEST_CASE("family bodies are invariant and deterministic") {
    InvariantFamily F = one_seed("T", {0.9, 0.5, 0.2});
    std::vector<double> p = family_start(F);
    ConvexBody3 K = family_body(F, p);
    CHECK(is_invariant(F.group, K, 1e-9 * K.scale));
    CHECK(vertex_hausdorff(K, family_body(F, p)) == 0.0);

    /* Tilt parameters move the seed off the reference direction. */
    p[1] = 0.3;
    p[2] = -0.2;
    ConvexBody3 K2 = family_body(F, p);
    CHECK(is_invariant(F.group, K2, 1e-9 * K2.scale));
    CHECK(vertex_hausdorff(K, K2) > 0.05);

    InvariantFamily bad = F;
    bad.radii = {1.0, 2.0};
    CHECK_THROWS_AS(family_body(bad, p), DegenerateInput);
    CHECK_THROWS_AS(family_body(F, {0.0, 0.0}), DegenerateInput);
    bad = F;
    bad.radii = {-1.0};
    CHECK_THROWS_AS(family_start(bad), DegenerateInput);
    bad = F;
    bad.seed_directions.clear();
    bad.radii.clear();
    CHECK_THROWS_AS(family_body(bad, {}), DegenerateInput);
}

TEST_CASE("one-seed tetrahedral family reaches the simplex product") {
    InvariantFamily F = one_seed("T", {0.9, 0.5, 0.2});
    SearchConfig cfg;
    cfg.seed = 11;
    SearchResult r = minimize_product(F, cfg);

    CHECK(r.best_product == Catch::Approx(simplex_product_bound()).margin(1e-5));
    /* Both simplex orientations are one-orbit minimizers of the family. */
    bool minimizer = r.classified == EqualityClass::primal_minimizer ||
                     r.classified == EqualityClass::dual_minimizer;
    CHECK(minimizer);
    CHECK(r.evaluations > 0);
    CHECK(r.restarts == cfg.restarts);
    CHECK(is_invariant(F.group, r.best_body, 1e-9 * r.best_body.scale));
}

TEST_CASE("one-seed octahedral family reaches the Hanner product") {
    InvariantFamily F = one_seed("O", {0.8, 0.45, 0.3});
    SearchConfig cfg;
    cfg.seed = 3;
    cfg.max_evals = 1500;
    cfg.restarts = 4;
    SearchResult r = minimize_product(F, cfg);

    CHECK(r.best_product == Catch::Approx(hanner_product_bound()).margin(1e-5));
    bool minimizer = r.classified == EqualityClass::primal_minimizer ||
                     r.classified == EqualityClass::dual_minimizer;
    CHECK(minimizer);
}

TEST_CASE("search on a proven group never dips below its bound") {
    InvariantFamily F;
    F.group = schoenflies("C_4h");
    F.seed_directions = {normalize(Vec3{1, 0.2, 0.6}), normalize(Vec3{0.3, 1, -0.4})};
    F.radii = {1.0, 1.1};

    SearchConfig cfg;
    cfg.seed = 7;
    cfg.max_evals = 400;
    cfg.restarts = 3;
    double worst = std::numeric_limits<double>::infinity();
    cfg.on_evaluation = [&](long, double value) {
        if (std::isfinite(value)) worst = std::min(worst, value);
    };
    SearchResult r = minimize_product(F, cfg);

    CHECK(r.best_product >= hanner_product_bound() - 1e-6);
    CHECK(worst >= hanner_product_bound() - 1e-6);
    CHECK(worst <= r.best_product + 1e-12);
}

TEST_CASE("open-group exploration records a result and claims nothing") {
    InvariantFamily F;
    F.group = schoenflies("C_5");
    F.seed_directions = {normalize(Vec3{1, 0, 0.4}), normalize(Vec3{0.2, 0.9, -0.5}),
                         normalize(Vec3{-0.6, 0.3, 0.9})};
    F.radii = {1.0, 1.2, 0.9};

    SearchConfig cfg;
    cfg.seed = 5;
    cfg.max_evals = 150;
    cfg.restarts = 2;
    SearchResult r = minimize_product(F, cfg);

    CHECK(std::isfinite(r.best_product));
    CHECK(r.best_product > 0);
    CHECK(r.classified == EqualityClass::unknown);
    CHECK(!proven_bound(F.group.name, F.group.order_param).has_value());
}

TEST_CASE("identical seeds reproduce identical search results") {
    InvariantFamily F = one_seed("T", {0.7, 0.6, 0.4});
    SearchConfig cfg;
    cfg.seed = 42;
    cfg.max_evals = 300;
    cfg.restarts = 3;

    SearchResult a = minimize_product(F, cfg);
    SearchResult b = minimize_product(F, cfg);
    CHECK(a.best_product == b.best_product);
    CHECK(a.evaluations == b.evaluations);
    REQUIRE(a.best_params.size() == b.best_params.size());
    for (size_t i = 0; i < a.best_params.size(); ++i)
        CHECK(a.best_params[i] == b.best_params[i]);

    SearchConfig other = cfg;
    other.seed = 43;
    SearchResult c = minimize_product(F, other);
    CHECK(c.best_product == Catch::Approx(a.best_product).margin(1e-6));
}

TEST_CASE("zero perturbation certifies with margin zero") {
    ConvexBody3 cube = reference_body("cube");
    double margin = certify_local_min(cube, schoenflies("O"), 0.0, 1, 9);
    CHECK(margin == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("catalog minimizers certify as local minima") {
    struct Row {
        const char* body;
        const char* group;
    };
    const Row rows[] = {
        {"simplex", "T"},
        {"octahedron", "O"},
        {"prism_6", "C_6h"},
    };
    for (const Row& row : rows) {
        ConvexBody3 K = reference_body(row.body, 6);
        double margin = certify_local_min(K, schoenflies(row.group), 0.05, 50, 13);
        INFO(row.body << " under " << row.group);
        CHECK(margin >= -1e-6);
    }

    CHECK_THROWS_AS(certify_local_min(reference_body("simplex"), schoenflies("O"), 0.05, 10, 1),
                    NotInvariant);
    CHECK_THROWS_AS(certify_local_min(reference_body("cube"), schoenflies("O"), 0.05, 0, 1),
                    DegenerateInput);
}

TEST_CASE("commuting linear maps are exact flat directions of the product") {
    ConvexBody3 P6 = reference_body("prism_6");
    PointGroup G = schoenflies("C_6h");
    double base = detail::invariant_product(G, P6);

    /* Axis-respecting dilations and rotations about z keep the body in the
       invariant class and leave the product unchanged. */
    ConvexBody3 stretched = transform(P6, diag3(1.1, 1.1, 0.8));
    REQUIRE(is_invariant(G, stretched, 1e-9 * stretched.scale));
    CHECK(detail::invariant_product(G, stretched) ==
          Catch::Approx(base).epsilon(1e-8));

    ConvexBody3 turned = transform(P6, rotation_z(0.37));
    REQUIRE(is_invariant(G, turned, 1e-9 * turned.scale));
    CHECK(detail::invariant_product(G, turned) == Catch::Approx(base).epsilon(1e-8));
}
