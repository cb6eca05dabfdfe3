#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "quadsurf/io.hpp"
#include "quadsurf/measures.hpp"

namespace fs = std::filesystem;
using namespace quadsurf;

namespace {

int run_cli(const std::string& args) {
    std::string cmd = std::string(QUADSURF_BIN) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    REQUIRE(WIFEXITED(rc));
    return WEXITSTATUS(rc);
}

std::string fresh_dir(const std::string& name) {
    fs::path p = fs::path("cli_test_tmp") / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p.string();
}

std::string ring_measure_file(const std::string& dir, double mass) {
    measures::MeasureSpec spec;
    spec.uniform_circles.push_back({{0.0, 0.0}, 0.25, mass});
    std::string path = dir + "/ring.json";
    io::write_text_file(path, measures::measure_to_json(spec));
    return path;
}

} // namespace

TEST_CASE("oracle runs write the advertised artifact set") {
    std::string out = fresh_dir("oracle") + "/run";
    CHECK(run_cli("oracle --rho 0.25 --R 1 --grid 32 --out " + out) == 0);
    for (const char* f : {"field.bin", "field.json", "mask.bin", "mask.json",
                          "body.json", "manifest.json"})
        CHECK(fs::exists(fs::path(out) / f));
    std::string manifest = io::read_text_file(out + "/manifest.json");
    CHECK(manifest.find("\"max_u\":") != std::string::npos);
    CHECK(manifest.find("\"kind\":\"oracle\"") != std::string::npos);
    CHECK(!fs::exists(fs::path(out) / ".quadsurf.lock"));
}

TEST_CASE("scenario verification emits report, table and contours") {
    std::string out = fresh_dir("verify") + "/run";
    CHECK(run_cli("verify --scenario oracle-annulus --grids 32,48 --out " + out) == 0);
    CHECK(fs::exists(fs::path(out) / "report.json"));
    CHECK(fs::exists(fs::path(out) / "thickness.csv"));
    CHECK(fs::exists(fs::path(out) / "contours.svg"));
    std::string report = io::read_text_file(out + "/report.json");
    CHECK(report.find("\"scenario\":\"oracle-annulus\"") != std::string::npos);
    CHECK(report.find("REFUTED") != std::string::npos);
    CHECK(report.find("VERIFIED") != std::string::npos);
    std::string table = io::read_text_file(out + "/thickness.csv");
    CHECK(table.rfind("c_index,cx,cy,nux,nuy,t,d_t,flag\n", 0) == 0);
}

TEST_CASE("solver runs can be verified from their output directory") {
    std::string dir = fresh_dir("solve");
    std::string measure = ring_measure_file(dir, 2.0 * 3.14159265358979324);
    std::string out = dir + "/run";
    CHECK(run_cli("solve --measure " + measure +
                  " --grid 32 --init-circle 0,0,1.15 --stop-residual 0.1"
                  " --max-iter 120 --out " + out) == 0);
    for (const char* f : {"field.bin", "mask.bin", "history.csv", "measure.json",
                          "summary.json"})
        CHECK(fs::exists(fs::path(out) / f));
    std::string summary = io::read_text_file(out + "/summary.json");
    CHECK(summary.find("\"status\":\"converged\"") != std::string::npos);

    std::string vout = dir + "/check";
    CHECK(run_cli("verify --run-dir " + out + " --out " + vout) == 0);
    CHECK(fs::exists(fs::path(vout) / "report.json"));
    std::string report = io::read_text_file(vout + "/report.json");
    CHECK(report.find("prop2.1-radial-monotonicity") != std::string::npos);
}

TEST_CASE("an exhausted iteration budget exits with the solver code") {
    std::string dir = fresh_dir("budget");
    std::string measure = ring_measure_file(dir, 2.0 * 3.14159265358979324);
    std::string out = dir + "/run";
    CHECK(run_cli("solve --measure " + measure +
                  " --grid 32 --init-circle 0,0,1.15 --max-iter 2 --out " + out) == 3);
    std::string summary = io::read_text_file(out + "/summary.json");
    CHECK(summary.find("\"status\":\"max-iterations\"") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
    std::string dir = fresh_dir("usage");
    CHECK(run_cli("") == 2);
    CHECK(run_cli("oracle --rho 0.25 --R 1 --grid 32") == 2);
    CHECK(run_cli("oracle --rho 1 --R 0.25 --grid 32 --out " + dir + "/a") == 2);
    CHECK(run_cli("verify --out " + dir + "/b") == 2);
    CHECK(run_cli("verify --scenario oracle-annulus --run-dir " + dir +
                  " --out " + dir + "/c") == 2);
    CHECK(run_cli("verify --scenario moebius-strip --out " + dir + "/d") == 2);
    CHECK(run_cli("solve --measure " + dir + "/absent.json --grid 32"
                  " --init-circle 0,0,1 --out " + dir + "/e") == 2);
    CHECK(run_cli("sweep --rho 0.25 --out " + dir + "/f") == 2);
}

TEST_CASE("parameter sweeps write one csv row per claim and cell") {
    std::string out = fresh_dir("sweep") + "/run";
    CHECK(run_cli("sweep --rho 0.25 --R 1 --grids 32 --out " + out) == 0);
    std::string csv = io::read_text_file(out + "/sweep.csv");
    CHECK(csv.rfind("claim_id,rho,R,grid,residual_max,residual_mean,"
                    "res_level_0.1,res_level_0.2,res_level_0.5\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 11);
    CHECK(csv.find("\nprop2.1-radial-monotonicity,0.25,1,32,") != std::string::npos);
}

TEST_CASE("a garbled thread override is rejected") {
    std::string out = fresh_dir("env") + "/run";
    CHECK(run_cli("oracle --rho 0.25 --R 1 --grid 32 --out " + out) == 0);
    std::string cmd = std::string("QUADSURF_THREADS=abc ") + QUADSURF_BIN +
                      " oracle --rho 0.25 --R 1 --grid 32 --out " + out +
                      "2 >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    CHECK(WEXITSTATUS(rc) == 2);
}
