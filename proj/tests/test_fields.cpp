#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "quadsurf/fields.hpp"
#include "test_support.hpp"

using namespace quadsurf;
using namespace quadsurf::fields;
using quadsurf::test::thrown_code;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("centered grids are symmetric with a node at the origin") {
    Grid g = make_centered_grid(1.125, 1.0 / 64.0);
    CHECK(g.nx == 145);
    CHECK(g.ny == 145);
    CHECK(g.nx % 2 == 1);
    CHECK(g.origin.x == doctest::Approx(-1.125).epsilon(1e-15));
    Vec2 mid = g.node((g.nx - 1) / 2, (g.ny - 1) / 2);
    CHECK(std::abs(mid.x) < 1e-15);
    CHECK(std::abs(mid.y) < 1e-15);
    CHECK(g.max_corner().x == doctest::Approx(1.125).epsilon(1e-15));

    CHECK(thrown_code([] { make_centered_grid(1.0, 0.0); }) == Errc::validation);
    CHECK(thrown_code([] { make_centered_grid(0.05, 1.0 / 16.0); }) == Errc::validation);
}

TEST_CASE("bilinear interpolation is exact on affine fields") {
    Grid g = make_centered_grid(1.0, 1.0 / 32.0);
    ScalarField f = field_from_function(g, [](Vec2 p) { return 2.0 * p.x - 3.0 * p.y + 1.0; });
    CHECK(interpolate(f, {0.137, -0.358}) ==
          doctest::Approx(2.0 * 0.137 + 3.0 * 0.358 + 1.0).epsilon(1e-13));
    CHECK(interpolate(f, {-0.999, 0.999}) ==
          doctest::Approx(2.0 * -0.999 - 3.0 * 0.999 + 1.0).epsilon(1e-12));

    CHECK(thrown_code([&] { interpolate(f, {1.5, 0.0}); }) == Errc::outside_domain);
}

TEST_CASE("gradient and laplacian are exact on quadratics") {
    Grid g = make_centered_grid(1.0, 1.0 / 32.0);
    ScalarField f = field_from_function(g, [](Vec2 p) { return p.x * p.x + p.y * p.y; });
    Vec2 grad = gradient(f, {0.21, -0.33});
    CHECK(grad.x == doctest::Approx(0.42).epsilon(1e-9));
    CHECK(grad.y == doctest::Approx(-0.66).epsilon(1e-9));
    CHECK(laplacian(f, {0.21, -0.33}) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("disk masks carry the exact signed distance") {
    Grid g = make_centered_grid(1.125, 1.0 / 64.0);
    DomainMask m = disk_mask(g, {0.0, 0.0}, 1.0);
    int mid = (g.nx - 1) / 2;
    CHECK(m.at(mid, mid) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(m.inside(mid, mid));
    CHECK_FALSE(m.inside(0, 0));
    CHECK(interpolate_phi(m, {0.5, 0.0}) == doctest::Approx(-0.5).epsilon(1e-3));

    Vec2 n = mask_normal(m, {1.0, 0.0});
    CHECK(n.x == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(n.y) < 1e-6);
}

TEST_CASE("masks that touch the margin rings are rejected") {
    Grid g = make_centered_grid(1.125, 1.0 / 16.0);
    CHECK(thrown_code([&] { disk_mask(g, {0.0, 0.0}, 1.0); }) == Errc::validation);
    Grid fine = make_centered_grid(1.125, 1.0 / 64.0);
    CHECK(thrown_code([&] { disk_mask(fine, {0.0, 0.0}, 1.0); }) == std::nullopt);
}

TEST_CASE("redistancing rebuilds a signed distance without moving the interface") {
    Grid g = make_centered_grid(1.125, 1.0 / 64.0);
    // Deliberately non-metric level function with the unit-disk zero set.
    DomainMask m = mask_from_implicit(g, [](Vec2 p) { return 3.0 * (norm(p) - 0.8); });
    for (double theta : {0.1, 1.3, 2.7, 4.0, 5.5}) {
        Vec2 dir{std::cos(theta), std::sin(theta)};
        CHECK(std::abs(interpolate_phi(m, 0.8 * dir)) < 2e-3);
        CHECK(interpolate_phi(m, 0.9 * dir) == doctest::Approx(0.1).epsilon(0.05));
        CHECK(interpolate_phi(m, 0.6 * dir) == doctest::Approx(-0.2).epsilon(0.05));
    }
    // Gradient magnitude of the rebuilt phi is ~1 away from the center.
    for (int j = 2; j < g.ny - 2; j += 7) {
        for (int i = 2; i < g.nx - 2; i += 7) {
            Vec2 p = g.node(i, j);
            if (norm(p) < 0.15 || norm(p) > 1.0) continue;
            double gx = (m.at(i + 1, j) - m.at(i - 1, j)) / (2.0 * g.h);
            double gy = (m.at(i, j + 1) - m.at(i, j - 1)) / (2.0 * g.h);
            CHECK(std::sqrt(gx * gx + gy * gy) == doctest::Approx(1.0).epsilon(0.08));
        }
    }
}

TEST_CASE("max value scans interior nodes only") {
    Grid g = make_centered_grid(1.125, 1.0 / 64.0);
    DomainMask m = disk_mask(g, {0.0, 0.0}, 0.8);
    // Large exterior values must not leak into the maximum.
    ScalarField f = field_from_function(g, [](Vec2 p) {
        double r = norm(p);
        return r < 0.8 ? 1.0 - r * r : 50.0;
    });
    MaxValue mv = max_value(f, m);
    CHECK(mv.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(norm(mv.location) < 1e-12);
}

TEST_CASE("contour extraction recovers circles with length and area") {
    Grid g = make_centered_grid(1.125, 1.0 / 64.0);
    ScalarField f = field_from_function(g, [](Vec2 p) { return 1.0 - norm2(p); });
    LevelContour c = extract_contour(f, 0.75);
    REQUIRE(c.components.size() == 1);
    CHECK(c.closed[0]);
    CHECK(polyline_length(c.components[0], true) == doctest::Approx(kPi).epsilon(0.01));
    CHECK(polyline_signed_area(c.components[0]) ==
          doctest::Approx(kPi * 0.25).epsilon(0.01));

    LevelContour again = extract_contour(f, 0.75);
    REQUIRE(again.components.size() == 1);
    REQUIRE(again.components[0].size() == c.components[0].size());
    for (std::size_t i = 0; i < c.components[0].size(); ++i)
        CHECK(dist(again.components[0][i], c.components[0][i]) == 0.0);
}

TEST_CASE("mask contours resample to uniform arc length") {
    Grid g = make_centered_grid(1.125, 1.0 / 64.0);
    DomainMask m = disk_mask(g, {0.0, 0.0}, 0.8);
    LevelContour c = mask_contour(m);
    REQUIRE(!c.components.empty());

    std::vector<Vec2> pts = resample_closed(c, 256);
    REQUIRE(pts.size() == 256);
    double expected_gap = 2.0 * kPi * 0.8 / 256.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(norm(pts[i]) == doctest::Approx(0.8).epsilon(2e-3));
        double gap = dist(pts[i], pts[(i + 1) % pts.size()]);
        CHECK(gap == doctest::Approx(expected_gap).epsilon(0.25));
    }
}

TEST_CASE("hausdorff distance separates concentric circles") {
    Grid g = make_centered_grid(1.125, 1.0 / 64.0);
    DomainMask a = disk_mask(g, {0.0, 0.0}, 0.8);
    DomainMask b = disk_mask(g, {0.0, 0.0}, 0.85);
    auto ca = mask_contour(a).components[0];
    auto cb = mask_contour(b).components[0];
    CHECK(hausdorff_distance(ca, true, cb, true) == doctest::Approx(0.05).epsilon(0.05));
}

TEST_CASE("point to polyline distance handles closed chains") {
    std::vector<Vec2> square = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    CHECK(point_polyline_distance({2.0, 0.5}, square, true) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(point_polyline_distance({0.5, 0.5}, square, true) ==
          doctest::Approx(0.5).epsilon(1e-12));
    // Open chain: the closing edge is gone, so the nearest features are the
    // two endpoint corners.
    CHECK(point_polyline_distance({-0.5, 0.5}, square, false) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("grad norm squared is exact for linear fields including edges") {
    Grid g = make_centered_grid(1.0, 1.0 / 32.0);
    ScalarField f = field_from_function(g, [](Vec2 p) { return 3.0 * p.x + 4.0 * p.y; });
    ScalarField w = grad_norm_sq(f);
    for (int j = 0; j < g.ny; j += 5)
        for (int i = 0; i < g.nx; i += 5)
            CHECK(w.at(i, j) == doctest::Approx(25.0).epsilon(1e-10));
}

TEST_CASE("laplacian of grad norm squared matches the quadratic closed form") {
    Grid g = make_centered_grid(1.0, 1.0 / 32.0);
    ScalarField f = field_from_function(g, [](Vec2 p) { return p.x * p.x + p.y * p.y; });
    // w = 4 r^2 so laplace(w) = 16.
    CHECK(laplacian_of_w(f, {0.2, -0.15}) == doctest::Approx(16.0).epsilon(1e-6));
    CHECK(laplacian_of_w(f, {0.0, 0.0}) == doctest::Approx(16.0).epsilon(1e-6));
}
