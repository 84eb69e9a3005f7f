#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "mahlerlab/io.hpp"

using namespace mahler;
using Catch::Approx;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

/* Every test drives the installed binary through the shell, the same way a
   user would; MAHLERLAB_CLI is injected by the test harness. */
CliResult run_cli(const std::string& args) {
    const char* bin = std::getenv("MAHLERLAB_CLI");
    REQUIRE(bin != nullptr);
    std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
    std::FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult r;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string write_temp(const std::string& name, const std::string& text) {
    std::string path = "/tmp/mahler_cli_" + name;
    std::ofstream out(path);
    out << text;
    return path;
}

const std::string k_cube_json =
    R"({"vertices":[[1,1,1],[1,-1,-1],[-1,1,-1],[-1,-1,1],[1,1,-1],[1,-1,1],[-1,1,1],[-1,-1,-1]]})";

}  // namespace

TEST_CASE("verify-bounds reproduces the whole catalog", "[cli]") {
    CliResult r = run_cli("verify-bounds");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("simplex        T_d") != std::string::npos);
    CHECK(r.out.find("prism_8") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("all bounds reproduced") != std::string::npos);
}

TEST_CASE("verify-bounds flags a corrupted fixture", "[cli]") {
    std::string bad = write_temp(
        "bad_cube.json",
        R"({"vertices":[[1,1,1],[1,-1,-1],[-1,1,-1],[-1,-1,1],[1,1,-1],[1,-1,1],[-1,1,1],[-0.8,-0.8,-0.8]]})");
    CliResult r = run_cli("verify-bounds --fixture cube=" + bad);
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("FAIL") != std::string::npos);
}

TEST_CASE("compute emits a report that round trips", "[cli]") {
    std::string cube = write_temp("cube.json", k_cube_json);
    std::string out_path = "/tmp/mahler_cli_cube_report.json";
    CliResult r = run_cli("compute " + cube + " --group O_h --out " + out_path);
    REQUIRE(r.exit_code == 0);

    Json j = load_json(out_path);
    BoundReport report = report_from_json(j);
    CHECK(report.product == Approx(32.0 / 3.0).epsilon(1e-9));
    CHECK(report.volume == Approx(8.0).epsilon(1e-12));
    CHECK(report.group_name == "O_h");
    CHECK(report.order == 48);
    REQUIRE(report.reference_bound);
    CHECK(*report.reference_bound == Approx(32.0 / 3.0).epsilon(1e-15));
    REQUIRE(report.margin);
    CHECK(std::abs(*report.margin) < 1e-9);
    CHECK(report.equality_class == EqualityClass::dual_minimizer);

    /* The manifest records how the report was made. */
    RunManifest m = manifest_from_json(j.at("manifest"));
    CHECK(m.command == "compute");
    CHECK(m.tool_version == k_tool_version);
    CHECK(m.outputs == std::vector<std::string>{out_path});
    CHECK(m.wall_time_ms > 0);

    /* Recomputing from the emitted report's own inputs changes nothing. */
    CliResult again = run_cli("compute " + cube + " --group O_h --out " + out_path);
    REQUIRE(again.exit_code == 0);
    BoundReport reread = report_from_json(load_json(out_path));
    CHECK(reread.product == report.product);
}

TEST_CASE("compute rejects bad inputs with exit 2", "[cli]") {
    CHECK(run_cli("compute /tmp/mahler_cli_no_such_file.json").exit_code == 2);
    std::string garbage = write_temp("garbage.json", "{not json");
    CHECK(run_cli("compute " + garbage).exit_code == 2);
    std::string flat = write_temp("flat.json", R"({"vertices":[[0,0,0],[1,0,0],[0,1,0],[1,1,0]]})");
    CHECK(run_cli("compute " + flat).exit_code == 2);
    std::string cube = write_temp("cube.json", k_cube_json);
    CHECK(run_cli("compute " + cube + " --group I_h").exit_code == 2);  // wrong symmetry claim
}

TEST_CASE("catalog list prints aligned CSV", "[cli]") {
    CliResult r = run_cli("catalog list");
    CHECK(r.exit_code == 0);
    REQUIRE(r.out.rfind("name,group_name,order,closed_form_product\n", 0) == 0);
    int rows = 0;
    for (char c : r.out) rows += c == '\n';
    CHECK(rows == 21);  // header plus eight fixed rows plus prisms and bipyramids for l=3..8
    CHECK(r.out.find("octahedron,O_h,0,10.666666666666666") != std::string::npos);
}

TEST_CASE("lemma l2 sits on the bound for the square quarter", "[cli]") {
    CliResult r = run_cli("lemma l2 --body square --xi 1.5707963");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.out);
    CHECK(std::abs(j.at("margin").get<double>()) < 1e-6);
    CHECK(j.at("case").get<std::string>() == "case_i");
    CHECK(j.at("lower_bound").get<double>() == Approx(0.5).epsilon(1e-7));
}

TEST_CASE("lemma l1 reports the diamond mirror case", "[cli]") {
    CliResult r = run_cli("lemma l1 --body diamond --a 1,0 --b 0,1");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.out);
    CHECK(std::abs(j.at("margin").get<double>()) < 1e-12);
    CHECK(j.at("case").get<std::string>() == "case_ii");
    CHECK(j.at("sector_area").get<double>() == Approx(0.5).epsilon(1e-12));
}

TEST_CASE("signed-volume octant cycle tiles the cube", "[cli]") {
    CliResult r = run_cli("signed-volume check --body cube --cycle octant");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.out);
    CHECK(j.at("patch_volume").get<double>() == Approx(1.0).epsilon(1e-9));
    CHECK(j.at("patch_margin").get<double>() >= -1e-6);
    CHECK(j.at("cone_tight").get<bool>());
}

TEST_CASE("signed-volume fundamental cycle certifies the octahedron", "[cli]") {
    CliResult r = run_cli("signed-volume check --body octahedron --cycle fundamental --group O");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.out);
    CHECK(j.at("certified").get<bool>());
    REQUIRE(j.at("links").size() >= 4);
    for (const Json& link : j.at("links")) CHECK(link.at("passed").get<bool>());
}

TEST_CASE("search is a pure function of its seed", "[cli]") {
    const std::string args = "search --group T --seed 11 --budget 400 --restarts 2";
    CliResult a = run_cli(args);
    CliResult b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    Json ja = Json::parse(a.out), jb = Json::parse(b.out);
    CHECK(ja.at("best_product").get<double>() == jb.at("best_product").get<double>());
    CHECK(ja.at("best_params") == jb.at("best_params"));
    CHECK(ja.at("evaluations") == jb.at("evaluations"));
    CHECK(ja.at("proven_bound").get<double>() == Approx(64.0 / 9.0).epsilon(1e-15));
    CHECK(ja.at("best_product").get<double>() >= 64.0 / 9.0 - 1e-6);
}

TEST_CASE("search on an open group claims nothing", "[cli]") {
    CliResult r = run_cli("search --group C_5 --k 2 --seed 4 --budget 200 --restarts 1");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.out);
    CHECK(!j.contains("proven_bound"));
    CHECK(!j.contains("margin"));
    CHECK(j.at("equality_class").get<std::string>() == "unknown");
    CHECK(j.at("best_product").get<double>() > 0);
}

TEST_CASE("randomized commands insist on a seed", "[cli]") {
    CHECK(run_cli("search --group T").exit_code == 2);
    CHECK(run_cli("certify --body cube --group O_h").exit_code == 2);
}

TEST_CASE("certify confirms the octahedron locally", "[cli]") {
    CliResult r = run_cli("certify --body octahedron --group O --seed 5 --trials 40");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.out);
    CHECK(j.at("certified").get<bool>());
    CHECK(j.at("min_margin").get<double>() >= -1e-6);
    CHECK(j.at("base_product").get<double>() == Approx(32.0 / 3.0).epsilon(1e-9));
    CHECK(j.at("manifest").at("seed").get<std::uint64_t>() == 5);
}
