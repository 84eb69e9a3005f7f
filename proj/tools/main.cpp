#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mahlerlab/bodies.hpp"
#include "mahlerlab/io.hpp"
#include "mahlerlab/search.hpp"
#include "mahlerlab/section_lemmas.hpp"
#include "mahlerlab/signed_volume.hpp"

using namespace mahler;

namespace {

/* Everything here is serial; the environment variable is honored by
   clamping the requested worker count to one. */
int thread_cap() {
    const char* raw = std::getenv("MAHLERLAB_THREADS");
    if (!raw) return 1;
    char* end = nullptr;
    long n = std::strtol(raw, &end, 10);
    if (end == raw || *end != '\0' || n < 1) return 1;
    return 1;
}

std::vector<double> parse_numbers(const std::string& text, std::size_t want, const char* what) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(cell, &used));
            while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
            if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw ParseError(std::string("bad number in ") + what + ": '" + cell + "'");
        }
    }
    if (out.size() != want)
        throw ParseError(std::string(what) + " needs " + std::to_string(want) + " comma separated numbers");
    return out;
}

Vec2 parse_vec2(const std::string& text, const char* what) {
    std::vector<double> v = parse_numbers(text, 2, what);
    return {v[0], v[1]};
}

Vec3 parse_vec3(const std::string& text, const char* what) {
    std::vector<double> v = parse_numbers(text, 3, what);
    return {v[0], v[1], v[2]};
}

std::vector<Vec3> parse_anchor_list(const std::string& text) {
    std::vector<Vec3> out;
    std::stringstream in(text);
    std::string triple;
    while (std::getline(in, triple, ';'))
        if (!triple.empty()) out.push_back(parse_vec3(triple, "--anchors"));
    if (out.size() < 3) throw ParseError("--anchors needs at least three x,y,z triples");
    return out;
}

bool looks_like_path(const std::string& name) {
    return name.find('/') != std::string::npos || name.find(".json") != std::string::npos;
}

ConvexBody3 resolve_body(const std::string& name, int order) {
    if (looks_like_path(name)) return load_body(name);
    return reference_body(name, order);
}

Polygon2 resolve_polygon(const std::string& name, int l) {
    if (looks_like_path(name)) return polygon_from_json(load_json(name));
    if (name == "square") return polygon_hull({{1, 1}, {-1, 1}, {-1, -1}, {1, -1}});
    if (name == "diamond") return polygon_hull({{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
    if (name == "triangle") return regular_polygon(3);
    if (name == "disc") return regular_polygon(256);
    if (name == "gon") {
        if (l < 3) throw ParseError("--body gon needs --l >= 3");
        return regular_polygon(l);
    }
    throw UnknownName("unknown polygon '" + name + "'; use square, diamond, triangle, gon, disc or a JSON path");
}

std::string file_stem(const std::string& path) {
    std::size_t slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

/* Every report embeds the manifest of the run that produced it. */
struct Run {
    RunManifest manifest;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    Run(const std::string& command, int argc, char** argv, std::uint64_t seed) {
        manifest.command = command;
        for (int i = 1; i < argc; ++i) manifest.arguments.emplace_back(argv[i]);
        manifest.seed = seed;
    }

    void emit(Json j, const std::string& out_path) {
        manifest.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        if (!out_path.empty()) manifest.outputs.push_back(out_path);
        j["manifest"] = manifest_to_json(manifest);
        if (out_path.empty()) {
            std::cout << j.dump(2) << '\n';
        } else {
            save_json(out_path, j);
            std::printf("wrote %s\n", out_path.c_str());
        }
    }
};

Json link_to_json(const ChainLink& link) {
    return Json{{"label", link.label},   {"lhs", link.lhs},
                {"rhs", link.rhs},       {"margin", link.margin},
                {"equality", link.equality}, {"passed", link.passed}};
}

/* The catalog minimizers all pin the Santalo point at the origin, so the
   product needs no inner minimization; anything else gets the full search. */
double product_under(const PointGroup& G, const ConvexBody3& K) {
    if (fixed_space_dimension(G) == 0) return volume(K) * volume(polar(K));
    return volume_product(K).product;
}

int run_verify_bounds(int l_max, const std::string& fixture, int argc, char** argv) {
    Run run("verify-bounds", argc, argv, 0);
    std::string fixture_name, fixture_path;
    if (!fixture.empty()) {
        std::size_t eq = fixture.find('=');
        if (eq == std::string::npos) throw ParseError("--fixture needs name=path");
        fixture_name = fixture.substr(0, eq);
        fixture_path = fixture.substr(eq + 1);
    }

    std::printf("%-14s %-10s %22s %22s %10s  %s\n", "body", "group", "product", "closed form",
                "rel err", "status");
    bool all_pass = true;
    for (const CatalogEntry& row : catalog(l_max)) {
        if (!row.closed_form_product) continue;
        ConvexBody3 K = row.name == fixture_name ? load_body(fixture_path)
                                                 : reference_body(row.name, row.order);
        PointGroup G = schoenflies(row.group_name, row.order);
        double product = product_under(G, K);
        double rel = std::abs(product - *row.closed_form_product) / *row.closed_form_product;
        bool ok = is_invariant(G, K, 1e-9 * K.scale) && rel < 1e-8;
        all_pass = all_pass && ok;
        std::printf("%-14s %-10s %22.15f %22.15f %10.2e  %s\n", row.name.c_str(),
                    row.group_name.c_str(), product, *row.closed_form_product, rel,
                    ok ? "ok" : "FAIL");
    }
    std::printf("%s\n", all_pass ? "all bounds reproduced" : "BOUND MISMATCH");
    return all_pass ? 0 : 1;
}

int run_compute(const std::string& body_path, const std::string& group, int l,
                const std::string& out_path, int argc, char** argv) {
    Run run("compute", argc, argv, 0);
    ConvexBody3 K = load_body(body_path);
    BoundReport r = volume_product(K);
    r.body_id = file_stem(body_path);
    if (!group.empty()) {
        PointGroup G = schoenflies(group, l);
        if (!is_invariant(G, K, 1e-6 * K.scale))
            throw NotInvariant("body is not invariant under " + G.name);
        r.group_name = G.name;
        r.order = static_cast<int>(G.elements.size());
        if (auto bound = proven_bound(group, l)) {
            r.reference_bound = bound->value;
            r.margin = r.product - bound->value;
            r.equality_class = classify_equality_class(K, group, l, r.product);
        }
    }
    run.emit(report_to_json(r), out_path);
    return r.margin && *r.margin < -1e-6 ? 1 : 0;
}

int run_catalog_list(int l_max) {
    std::printf("name,group_name,order,closed_form_product\n");
    for (const CatalogEntry& row : catalog(l_max))
        if (row.closed_form_product)
            std::printf("%s,%s,%d,%.17g\n", row.name.c_str(), row.group_name.c_str(), row.order,
                        *row.closed_form_product);
        else
            std::printf("%s,%s,%d,\n", row.name.c_str(), row.group_name.c_str(), row.order);
    return 0;
}

int run_lemma(const std::string& which, const std::string& body, int l, const std::string& a_text,
              const std::string& b_text, double xi, double tol, const std::string& out_path,
              int argc, char** argv) {
    Run run(std::string("lemma ") + which, argc, argv, 0);
    Polygon2 P = resolve_polygon(body, l);
    /* Endpoint inputs are directions; they are projected radially onto the
       boundary, so interior or exterior test points are accepted as is. */
    Vec2 a = radial_point(P, a_text.empty() ? Vec2{1, 0} : parse_vec2(a_text, "--a"));
    Vec2 b;
    if (!b_text.empty()) {
        b = radial_point(P, parse_vec2(b_text, "--b"));
    } else if (xi > 0) {
        b = radial_point(P, rotate(a, xi));
    } else {
        throw ParseError("lemma needs --b or --xi to fix the second endpoint");
    }

    SectorPair s = make_sector_pair(P, a, b);
    Json j{{"lemma", which},
           {"body", body},
           {"a", {s.a.x, s.a.y}},
           {"b", {s.b.x, s.b.y}},
           {"xi", s.xi},
           {"sector_area", area(s.sector)},
           {"dual_sector_area", area(s.dual_sector)},
           {"product", area(s.sector) * area(s.dual_sector)},
           {"case", to_string(classify_sector(s))}};

    double margin = 0;
    if (which == "l1") {
        margin = sector_margin(s);
        j["lower_bound"] = sector_lower_bound(s);
        j["margin"] = margin;
    } else if (which == "l2") {
        margin = rotation_sector_margin(s, tol);
        j["lower_bound"] = rotation_sector_bound(s.xi);
        j["margin"] = margin;
    } else {  // classify reports both margins and never fails on them
        j["sector_lemma_margin"] = sector_margin(s);
        try {
            j["rotation_margin"] = rotation_sector_margin(s, tol);
        } catch (const HypothesisViolated&) {
            j["rotation_margin"] = nullptr;  // endpoints are not a rotation pair
        }
    }
    run.emit(j, out_path);
    return margin < -1e-9 ? 1 : 0;
}

int run_signed_volume(const std::string& body, int order, const std::string& group, int l,
                      const std::string& cycle, const std::string& anchors_text,
                      const std::string& x_text, int samples, const std::string& out_path,
                      int argc, char** argv) {
    Run run("signed-volume check", argc, argv, 0);
    ConvexBody3 K = resolve_body(body, order);

    if (cycle == "fundamental") {
        if (group.empty()) throw ParseError("--cycle fundamental needs --group");
        GroupBoundReport r = group_bound_check(K, group, l);
        Json links = Json::array();
        for (const ChainLink& link : r.links) links.push_back(link_to_json(link));
        Json j{{"body", body},
               {"cycle", cycle},
               {"report", report_to_json(r.report)},
               {"links", links},
               {"certified", r.certified}};
        run.emit(j, out_path);
        return r.certified ? 0 : 1;
    }

    std::vector<Vec3> anchors;
    if (!anchors_text.empty()) {
        anchors = parse_anchor_list(anchors_text);
    } else if (cycle == "octant") {
        anchors = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    } else if (cycle == "top") {
        const Facet* top = nullptr;
        for (const Facet& f : K.facets)
            if (!top || f.normal.z > top->normal.z) top = &f;
        for (int i : top->ring) anchors.push_back(K.vertices[i]);
    } else {
        throw ParseError("--cycle must be top, octant or fundamental, or pass --anchors");
    }

    BoundaryCurve C = boundary_curve(K, anchors, samples);
    ConvexBody3 Kp = polar(K);
    PatchProduct p = patch_product_check(K, Kp, C);
    Json j{{"body", body},
           {"cycle", anchors_text.empty() ? cycle : "anchors"},
           {"samples_per_arc", samples},
           {"curve_vector", {p.curve_vec.x, p.curve_vec.y, p.curve_vec.z}},
           {"dual_curve_vector", {p.dual_curve_vec.x, p.dual_curve_vec.y, p.dual_curve_vec.z}},
           {"patch_volume", p.primal_patch},
           {"dual_patch_volume", p.dual_patch},
           {"product_lhs", p.lhs},
           {"pairing_rhs", p.rhs},
           {"patch_margin", p.margin},
           {"min_support_margin", min_support_margin(K, C)},
           {"cone_tight", is_cone_tight(K, C)}};
    if (!x_text.empty()) j["support_margin_at_x"] = support_margin(K, C, parse_vec3(x_text, "--x"));
    run.emit(j, out_path);
    return p.margin < -k_patch_product_tol ? 1 : 0;
}

int run_search(const std::string& group, int l, int k, std::uint64_t seed, int budget,
               int restarts, double perturbation, const std::string& out_path,
               const std::string& trace_path, int argc, char** argv) {
    Run run("search", argc, argv, seed);
    PointGroup G = schoenflies(group, l);
    if (k < 1 || k > k_max_family_seeds)
        throw ParseError("--k must be between 1 and " + std::to_string(k_max_family_seeds));

    /* Seed directions are drawn from the run seed, so the whole search is a
       pure function of the command line.  Alternate them across the equator:
       a single C_l orbit is flat and same-side orbits exclude the origin, so
       straddling starts keep rotation families feasible for every seed. */
    std::mt19937_64 g(seed);
    InvariantFamily F;
    F.group = G;
    for (int i = 0; i < k; ++i) {
        Vec3 d = detail::ball_point(g);
        while (norm(d) < 0.1) d = detail::ball_point(g);
        if ((i % 2 == 0) != (d.z > 0)) d.z = -d.z;
        F.seed_directions.push_back(normalize(d));
        F.radii.push_back(1.0);
    }

    std::FILE* trace = nullptr;
    if (!trace_path.empty()) {
        trace = std::fopen(trace_path.c_str(), "w");
        if (!trace) throw Error("cannot open trace file " + trace_path);
        std::fprintf(trace, "evaluation,product\n");
    }
    SearchConfig cfg;
    cfg.max_evals = budget;
    cfg.restarts = restarts;
    cfg.perturbation = perturbation;
    cfg.seed = seed;
    if (trace)
        cfg.on_evaluation = [trace](long i, double v) { std::fprintf(trace, "%ld,%.17g\n", i, v); };

    SearchResult res = minimize_product(F, cfg);
    if (trace) std::fclose(trace);

    Json j{{"group", G.name},
           {"order", static_cast<int>(G.elements.size())},
           {"k", k},
           {"seed", seed},
           {"best_product", res.best_product},
           {"best_params", res.best_params},
           {"evaluations", res.evaluations},
           {"restarts", res.restarts},
           {"equality_class", to_string(res.classified)},
           {"body", body_to_json(res.best_body)}};
    auto bound = proven_bound(group, l);
    if (bound) {
        j["proven_bound"] = bound->value;
        j["margin"] = res.best_product - bound->value;
    }
    if (trace) run.manifest.outputs.push_back(trace_path);
    run.emit(j, out_path);
    return bound && res.best_product < bound->value - 1e-6 ? 1 : 0;
}

int run_certify(const std::string& body, int order, const std::string& group, int l, double eps,
                int trials, std::uint64_t seed, const std::string& out_path, int argc,
                char** argv) {
    Run run("certify", argc, argv, seed);
    ConvexBody3 K = resolve_body(body, order);
    PointGroup G = schoenflies(group, l);
    double base = product_under(G, K);
    double margin = certify_local_min(K, G, eps, trials, seed);
    bool certified = margin >= -1e-6;
    Json j{{"body", body},
           {"group", G.name},
           {"eps", eps},
           {"trials", trials},
           {"seed", seed},
           {"base_product", base},
           {"min_margin", margin},
           {"certified", certified}};
    run.emit(j, out_path);
    return certified ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    (void)thread_cap();
    CLI::App app{"mahlerlab: volume products of symmetric convex bodies"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify-bounds", "reproduce the catalog of sharp bounds");
    int verify_l_max = 8;
    std::string fixture;
    verify->add_option("--l-max", verify_l_max, "largest prism order to check")
        ->check(CLI::Range(3, 64));
    verify->add_option("--fixture", fixture, "replace one catalog body, as name=path")
        ->group("");  // negative control hook, hidden from help

    auto* compute = app.add_subcommand("compute", "volume product of a body from JSON");
    std::string compute_body, compute_group, compute_out;
    int compute_l = 0;
    compute->add_option("body", compute_body, "path to a body JSON file")->required();
    compute->add_option("--group", compute_group, "claimed symmetry group");
    compute->add_option("--l", compute_l, "cyclic order for parametric groups");
    compute->add_option("--out", compute_out, "write the report here instead of stdout");

    auto* catalog_cmd = app.add_subcommand("catalog", "extremal body catalog");
    auto* catalog_list = catalog_cmd->add_subcommand("list", "print the catalog as CSV");
    int catalog_l_max = 8;
    catalog_list->add_option("--l-max", catalog_l_max, "largest prism order to list")
        ->check(CLI::Range(3, 64));
    catalog_cmd->require_subcommand(1);

    auto* lemma = app.add_subcommand("lemma", "two dimensional sector inequalities");
    std::string lemma_body = "square", lemma_a, lemma_b, lemma_out;
    double lemma_xi = 0, lemma_tol = 1e-6;
    int lemma_l = 0;
    for (const char* name : {"l1", "l2", "classify"}) {
        auto* sub = lemma->add_subcommand(name);
        sub->add_option("--body", lemma_body, "square, diamond, triangle, gon, disc or JSON path");
        sub->add_option("--l", lemma_l, "vertex count for --body gon");
        sub->add_option("--a", lemma_a, "first endpoint direction, as x,y");
        sub->add_option("--b", lemma_b, "second endpoint direction, as x,y");
        sub->add_option("--xi", lemma_xi, "rotation angle fixing b from a");
        sub->add_option("--tol", lemma_tol, "rotation pair acceptance tolerance");
        sub->add_option("--out", lemma_out, "write the report here instead of stdout");
    }
    lemma->require_subcommand(1);

    auto* signed_volume = app.add_subcommand("signed-volume", "signed patch volume estimates");
    auto* sv_check = signed_volume->add_subcommand("check", "evaluate a boundary cycle");
    std::string sv_body, sv_group, sv_cycle, sv_anchors, sv_x, sv_out;
    int sv_l = 0, sv_order = 0, sv_samples = 64;
    sv_check->add_option("--body", sv_body, "catalog body name or JSON path")->required();
    sv_check->add_option("--order", sv_order, "order for parametric catalog bodies");
    sv_check->add_option("--group", sv_group, "group for the fundamental cycle");
    sv_check->add_option("--l", sv_l, "cyclic order for parametric groups");
    sv_check->add_option("--cycle", sv_cycle, "top, octant or fundamental");
    sv_check->add_option("--anchors", sv_anchors, "explicit cycle, as x,y,z;x,y,z;...");
    sv_check->add_option("--x", sv_x, "extra test point for the support margin");
    sv_check->add_option("--samples", sv_samples, "samples per boundary arc")
        ->check(CLI::Range(4, 4096));
    sv_check->add_option("--out", sv_out, "write the report here instead of stdout");
    signed_volume->require_subcommand(1);

    auto* search = app.add_subcommand("search", "minimize the product over invariant families");
    std::string search_group, search_out, search_trace;
    int search_l = 0, search_k = 1, search_budget = 2000, search_restarts = 8;
    double search_perturbation = 0.25;
    std::uint64_t search_seed = 0;
    search->add_option("--group", search_group, "symmetry group of the family")->required();
    search->add_option("--l", search_l, "cyclic order for parametric groups");
    search->add_option("--k", search_k, "number of seed orbits");
    search->add_option("--seed", search_seed, "RNG seed, required for reproducibility")->required();
    search->add_option("--budget", search_budget, "evaluations per start")->check(CLI::Range(10, 2000000));
    search->add_option("--restarts", search_restarts, "multistart count")->check(CLI::Range(0, 1000));
    search->add_option("--perturbation", search_perturbation, "restart jitter size");
    search->add_option("--out", search_out, "write the result here instead of stdout");
    search->add_option("--trace", search_trace, "write an evaluation,product CSV here");

    auto* certify = app.add_subcommand("certify", "perturbation test for local minimality");
    std::string certify_body, certify_group, certify_out;
    int certify_l = 0, certify_order = 0, certify_trials = 200;
    double certify_eps = 0.05;
    std::uint64_t certify_seed = 0;
    certify->add_option("--body", certify_body, "catalog body name or JSON path")->required();
    certify->add_option("--order", certify_order, "order for parametric catalog bodies");
    certify->add_option("--group", certify_group, "symmetry group to perturb within")->required();
    certify->add_option("--l", certify_l, "cyclic order for parametric groups");
    certify->add_option("--eps", certify_eps, "perturbation radius")->check(CLI::PositiveNumber);
    certify->add_option("--trials", certify_trials, "perturbation count")->check(CLI::Range(1, 1000000));
    certify->add_option("--seed", certify_seed, "RNG seed, required for reproducibility")->required();
    certify->add_option("--out", certify_out, "write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) return run_verify_bounds(verify_l_max, fixture, argc, argv);
        if (compute->parsed())
            return run_compute(compute_body, compute_group, compute_l, compute_out, argc, argv);
        if (catalog_list->parsed()) return run_catalog_list(catalog_l_max);
        if (lemma->parsed())
            return run_lemma(lemma->get_subcommands().front()->get_name(), lemma_body, lemma_l,
                             lemma_a, lemma_b, lemma_xi, lemma_tol, lemma_out, argc, argv);
        if (sv_check->parsed())
            return run_signed_volume(sv_body, sv_order, sv_group, sv_l, sv_cycle, sv_anchors, sv_x,
                                     sv_samples, sv_out, argc, argv);
        if (search->parsed())
            return run_search(search_group, search_l, search_k, search_seed, search_budget,
                              search_restarts, search_perturbation, search_out, search_trace, argc,
                              argv);
        if (certify->parsed())
            return run_certify(certify_body, certify_order, certify_group, certify_l, certify_eps,
                               certify_trials, certify_seed, certify_out, argc, argv);
    } catch (const Error& e) {
        std::fprintf(stderr, "mahlerlab: %s\n", e.what());
        return 2;
    }
    return 2;
}
