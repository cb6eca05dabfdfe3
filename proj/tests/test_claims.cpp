#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "quadsurf/claims.hpp"
#include "quadsurf/fields.hpp"
#include "quadsurf/geometry.hpp"
#include "test_support.hpp"

using namespace quadsurf;
using quadsurf::test::thrown_code;

namespace {
const std::vector<std::string> kClaimOrder = {
    "prop2.1-radial-monotonicity", "prop2.2-level-parametrisation",
    "prop2.3-differential-relation", "prop3.1-unique-decomposition",
    "eq6-subharmonicity", "lemma4.1-rigidity", "cor4.2-dt-slope",
    "thm5.1-parallel-levels", "eq9-ray-linearity", "thm6.1-gnp"};

int level_index(const claims::ClaimReport& r, double t) {
    for (std::size_t i = 0; i < r.levels.size(); ++i)
        if (std::abs(r.levels[i] - t) < 1e-12) return static_cast<int>(i);
    return -1;
}

const claims::ClaimReport& by_id(const std::vector<claims::ClaimReport>& reports,
                                 const std::string& id) {
    for (const auto& r : reports)
        if (r.claim_id == id) return r;
    REQUIRE(false);
    return reports.front();
}

// Radially oscillating profile on the unit disk: decreasing on average but
// with genuine local rises, so monotonicity along rays fails.
claims::Instance oscillating_instance() {
    fields::Grid g = fields::make_centered_grid(1.125, 1.0 / 64.0);
    claims::Instance inst;
    inst.field = fields::field_from_function(g, [](Vec2 p) {
        double r = norm(p);
        return (1.0 - r) * (1.0 + 0.5 * std::sin(12.0 * r));
    });
    inst.mask = fields::disk_mask(g, {0.0, 0.0}, 1.0);
    inst.body = geometry::ConvexBody::disk({0.0, 0.0}, 0.25);
    inst.resolution = 64;
    inst.max_u = 1.0;
    inst.moll_radius = 0.0;
    return inst;
}
} // namespace

TEST_CASE("the annulus scenario reproduces the expected verdict pattern") {
    auto reports = claims::run_all("oracle-annulus", {64, 48});

    REQUIRE(reports.size() == kClaimOrder.size());
    for (std::size_t i = 0; i < reports.size(); ++i) {
        CAPTURE(i);
        CHECK(reports[i].claim_id == kClaimOrder[i]);
        CHECK(!reports[i].paper_ref.empty());
        REQUIRE(reports[i].resolutions == std::vector<int>{48, 64});
        REQUIRE(reports[i].residual_max.size() == 2);
    }

    CHECK(by_id(reports, "prop2.1-radial-monotonicity").verdict == "VERIFIED");
    CHECK(by_id(reports, "prop2.2-level-parametrisation").verdict == "VERIFIED");
    CHECK(by_id(reports, "prop2.3-differential-relation").verdict == "VERIFIED");
    CHECK(by_id(reports, "prop3.1-unique-decomposition").verdict == "VERIFIED");
    CHECK(by_id(reports, "eq6-subharmonicity").verdict == "VERIFIED");
    CHECK(by_id(reports, "thm6.1-gnp").verdict == "VERIFIED");
    CHECK(by_id(reports, "lemma4.1-rigidity").verdict == "REFUTED");
    CHECK(by_id(reports, "cor4.2-dt-slope").verdict == "REFUTED");
    CHECK(by_id(reports, "thm5.1-parallel-levels").verdict == "REFUTED");
    CHECK(by_id(reports, "eq9-ray-linearity").verdict == "REFUTED");

    // The refuted claims settle on the closed-form residuals, not on zero.
    const auto& rigidity = by_id(reports, "lemma4.1-rigidity");
    int i02 = level_index(rigidity, 0.2);
    REQUIRE(i02 >= 0);
    CHECK(std::abs(rigidity.level_residuals[i02] - 0.22140275816016985) < 0.015);

    const auto& slope = by_id(reports, "cor4.2-dt-slope");
    int s02 = level_index(slope, 0.2);
    REQUIRE(s02 >= 0);
    CHECK(std::abs(slope.level_values[s02] - (-0.8187307530779818)) < 0.015);

    const auto& parallel = by_id(reports, "thm5.1-parallel-levels");
    int p02 = level_index(parallel, 0.2);
    REQUIRE(p02 >= 0);
    CHECK(std::abs(parallel.level_residuals[p02] - 0.018730753077981787) < 0.003);

    const auto& rays = by_id(reports, "eq9-ray-linearity");
    int r00 = level_index(rays, 0.0);
    int r02 = level_index(rays, 0.2);
    REQUIRE(r00 >= 0);
    REQUIRE(r02 >= 0);
    CHECK(std::abs(rays.level_residuals[r00] - 0.6362943611198906) < 0.025);
    CHECK(std::abs(rays.level_residuals[r02] - 0.24850769621777164) < 0.015);

    // Prop 2.3: the measured thickness slope matches -1/|grad u| per level.
    const auto& diff = by_id(reports, "prop2.3-differential-relation");
    for (double t : {0.1, 0.2, 0.5}) {
        int k = level_index(diff, t);
        REQUIRE(k >= 0);
        CHECK(std::abs(diff.level_values[k] - (-std::exp(-t))) < 0.05);
    }
}

TEST_CASE("an oscillating profile defeats radial monotonicity") {
    claims::Instance inst = oscillating_instance();
    claims::ClaimReport r = claims::check_radial_monotonicity(inst);
    CHECK(r.claim_id == "prop2.1-radial-monotonicity");
    REQUIRE(r.residual_max.size() == 1);
    CHECK(r.residual_max[0] > r.tau_fail);
    CHECK(r.verdict == "INCONCLUSIVE");
}

TEST_CASE("the ellipse control fails the gnp normal-ray property") {
    claims::Instance inst = claims::build_instance("ellipse-control", 64);
    claims::ClaimReport r = claims::check_gnp(inst);
    CHECK(r.residual_max[0] > r.tau_fail);
    CHECK(r.verdict == "INCONCLUSIVE");
    CHECK(r.note.find("P3") != std::string::npos);
}

TEST_CASE("unknown scenarios are rejected") {
    CHECK(thrown_code([] { claims::build_instance("moebius-strip", 64); }) ==
          Errc::validation);
    CHECK(thrown_code([] { claims::run_all("moebius-strip", {32}); }) ==
          Errc::validation);
}

TEST_CASE("report json is deterministic and carries the claim ids") {
    auto reports = claims::run_all("oracle-annulus", {32});
    std::string a = claims::report_json(reports, "oracle-annulus");
    std::string b = claims::report_json(reports, "oracle-annulus");
    CHECK(a == b);
    CHECK(a.find("thm5.1-parallel-levels") != std::string::npos);
    CHECK(a.find("\"scenario\":\"oracle-annulus\"") != std::string::npos);
    CHECK(a.find("INCONCLUSIVE") != std::string::npos);
}
