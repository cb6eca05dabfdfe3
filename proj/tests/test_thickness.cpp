#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>

#include "quadsurf/field_eval.hpp"
#include "quadsurf/fields.hpp"
#include "quadsurf/geometry.hpp"
#include "quadsurf/oracle.hpp"
#include "quadsurf/thickness.hpp"
#include "test_support.hpp"

using namespace quadsurf;
using namespace quadsurf::thickness;
using quadsurf::test::thrown_code;

namespace {

geometry::NormalSample east_sample() { return {{0.25, 0.0}, {1.0, 0.0}, 0}; }

// Radially oscillating control field: many roots per level, so profiles are
// deliberately non-monotone.
class WavyField final : public FieldEval {
public:
    double value(Vec2 x) const override { return std::cos(4.0 * norm(x)); }
    Vec2 grad(Vec2 x) const override {
        double r = norm(x);
        if (r == 0.0) return {0.0, 0.0};
        return (-4.0 * std::sin(4.0 * r) / r) * x;
    }
    double max_u() const override { return 1.0; }
    double scan_step() const override { return 0.01; }
};

} // namespace

TEST_CASE("outer extent finds the boundary distance of the annulus") {
    AnalyticDiskMask mask({0.0, 0.0}, 1.0);
    CHECK(outer_extent(mask, east_sample(), 2.0) == doctest::Approx(0.75).epsilon(1e-9));

    geometry::NormalSample diag{{0.25 * std::cos(1.1), 0.25 * std::sin(1.1)},
                                {std::cos(1.1), std::sin(1.1)},
                                7};
    CHECK(outer_extent(mask, diag, 2.0) == doctest::Approx(0.75).epsilon(1e-9));

    CHECK(thrown_code([&] { outer_extent(mask, east_sample(), 0.5); }) ==
          Errc::unbounded_ray);
    geometry::NormalSample outside{{1.5, 0.0}, {1.0, 0.0}, 0};
    CHECK(thrown_code([&] { outer_extent(mask, outside, 2.0); }) == Errc::precondition);
}

TEST_CASE("ray profiles record the field until the boundary") {
    oracle::RadialSolution sol = oracle::annulus_solution(2, 0.25, 1.0);
    AnalyticField field(sol);
    AnalyticDiskMask mask({0.0, 0.0}, 1.0);

    RayProfile p = ray_profile(field, mask, east_sample(), 0.01, 2.0);
    REQUIRE(p.values.size() > 10);
    CHECK(p.reached_boundary);
    CHECK(p.radii.front() == 0.0);
    CHECK(p.values.front() == doctest::Approx(sol.max_u()).epsilon(1e-12));
    CHECK(p.values.back() <= 0.0);
    for (std::size_t i = 1; i < p.radii.size(); ++i) CHECK(p.radii[i] > p.radii[i - 1]);
}

TEST_CASE("level thickness matches the exponential closed form") {
    oracle::RadialSolution sol = oracle::annulus_solution(2, 0.25, 1.0);
    AnalyticField field(sol);

    LevelRoot r02 = level_thickness(field, east_sample(), 0.2, 1.0);
    CHECK(r02.d_t == doctest::Approx(0.5687307530779818).epsilon(1e-8));
    CHECK(r02.extra_crossings == 0);

    LevelRoot r05 = level_thickness(field, east_sample(), 0.5, 1.0);
    CHECK(r05.d_t == doctest::Approx(0.3565306597126334).epsilon(1e-8));

    CHECK(thrown_code([&] { level_thickness(field, east_sample(), 1.5, 1.0); }) ==
          Errc::level_above_ray);
}

TEST_CASE("non-monotone profiles report extra crossings") {
    WavyField field;
    LevelRoot root = level_thickness(field, east_sample(), 0.3, 2.0);
    CHECK(root.d_t == doctest::Approx(std::acos(0.3) / 4.0 - 0.25).epsilon(1e-7));
    CHECK(root.extra_crossings == 2);
}

TEST_CASE("thickness derivative reproduces the analytic slope, not minus one") {
    oracle::RadialSolution sol = oracle::annulus_solution(2, 0.25, 1.0);
    AnalyticField field(sol);
    double dt = 1e-3 * sol.max_u();

    double slope = thickness_derivative(field, east_sample(), 0.2, 1.0, dt);
    CHECK(slope == doctest::Approx(-0.8187307530779818).epsilon(1e-6));
    // Gap to the claimed universal slope -1.
    CHECK(std::abs(slope + 1.0) == doctest::Approx(0.18126924692201815).epsilon(1e-4));

    double slope05 = thickness_derivative(field, east_sample(), 0.5, 1.0, dt);
    CHECK(slope05 == doctest::Approx(sol.level_slope(0.5)).epsilon(1e-6));
}

TEST_CASE("predicted slope is minus the reciprocal gradient norm") {
    oracle::RadialSolution sol = oracle::annulus_solution(2, 0.25, 1.0);
    AnalyticField field(sol);
    CHECK(predicted_slope(field, {0.8187307530779818, 0.0}) ==
          doctest::Approx(-0.8187307530779818).epsilon(1e-12));
    // The gradient vanishes on the plateau inside the source circle.
    CHECK(thrown_code([&] { predicted_slope(field, {0.1, 0.0}); }) == Errc::precondition);
}

TEST_CASE("chain rule identity holds even on the oscillating control") {
    WavyField field;
    double t = 0.3;
    double measured = thickness_derivative(field, east_sample(), t, 0.5, 1e-4);
    double root = level_thickness(field, east_sample(), t, 0.5).d_t;
    double predicted = predicted_slope(field, east_sample().point + root * Vec2{1.0, 0.0});
    CHECK(measured == doctest::Approx(predicted).epsilon(1e-5));
    CHECK(predicted == doctest::Approx(-1.0 / (4.0 * std::sin(std::acos(0.3)))).epsilon(1e-9));
}

TEST_CASE("thickness tables cover all samples and levels on the analytic annulus") {
    oracle::RadialSolution sol = oracle::annulus_solution(2, 0.25, 1.0);
    AnalyticField field(sol);
    AnalyticDiskMask mask({0.0, 0.0}, 1.0);
    geometry::ConvexBody body = geometry::ConvexBody::disk({0.0, 0.0}, 0.25);

    ThicknessTable table = build_table(field, mask, body, 32, {0.1, 0.2, 0.5}, 2.0);
    REQUIRE(table.samples.size() == 32);
    REQUIRE(table.levels.size() == 4);
    CHECK(table.levels[0] == 0.0);
    for (std::size_t i = 0; i < table.samples.size(); ++i) {
        CHECK(table.d[i][0] == doctest::Approx(0.75).epsilon(1e-8));
        CHECK(table.d[i][2] == doctest::Approx(0.5687307530779818).epsilon(1e-8));
        for (int flag : table.flags[i]) CHECK(flag == 0);
    }

    std::string csv = table_csv(table);
    CHECK(csv.rfind("c_index,cx,cy,nux,nuy,t,d_t,flag", 0) == 0);
    CHECK(csv.find("\n0,0.25,0,1,0,0,0.75,0\n") != std::string::npos);
    std::size_t rows = 0;
    for (char ch : csv)
        if (ch == '\n') ++rows;
    CHECK(rows == 1 + 32 * 4);
}

TEST_CASE("unreachable levels are flagged instead of failing the table") {
    oracle::RadialSolution sol = oracle::annulus_solution(2, 0.25, 1.0);
    AnalyticField field(sol);
    AnalyticDiskMask mask({0.0, 0.0}, 1.0);
    geometry::ConvexBody body = geometry::ConvexBody::disk({0.0, 0.0}, 0.25);

    ThicknessTable table = build_table(field, mask, body, 16, {1.5}, 2.0);
    for (std::size_t i = 0; i < table.samples.size(); ++i) {
        CHECK(table.flags[i][1] == 2);
        CHECK(table.d[i][1] == 0.0);
    }
}

TEST_CASE("grid-backed evaluations track the closed form") {
    oracle::RadialSolution sol = oracle::annulus_solution(2, 0.25, 1.0);
    fields::Grid g = fields::make_centered_grid(1.125, 1.0 / 64.0);
    fields::ScalarField f = oracle::sample_to_grid(sol, g);
    fields::DomainMask m = fields::disk_mask(g, {0.0, 0.0}, 1.0);
    GridField field(f, sol.max_u());
    GridMask mask(m);
    geometry::ConvexBody body = geometry::ConvexBody::disk({0.0, 0.0}, 0.25);

    ThicknessTable table = build_table(field, mask, body, 24, {0.2}, 3.0);
    for (std::size_t i = 0; i < table.samples.size(); ++i) {
        CHECK(table.d[i][0] == doctest::Approx(0.75).epsilon(2e-3));
        CHECK(table.d[i][1] == doctest::Approx(0.5687307530779818).epsilon(2e-3));
    }
}
