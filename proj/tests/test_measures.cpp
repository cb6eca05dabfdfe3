#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "quadsurf/fields.hpp"
#include "quadsurf/geometry.hpp"
#include "quadsurf/measures.hpp"
#include "test_support.hpp"

using namespace quadsurf;
using namespace quadsurf::measures;
using quadsurf::test::thrown_code;

namespace {
const double kPi = std::numbers::pi;

MeasureSpec ring(double rho, double mass) {
    MeasureSpec spec;
    spec.uniform_circles.push_back({{0.0, 0.0}, rho, mass});
    return spec;
}

double nodal_mass(const DiscretizedMeasure& d) {
    double sum = 0.0;
    for (double v : d.density) sum += v;
    return sum * d.grid.h * d.grid.h;
}
} // namespace

TEST_CASE("validation rejects empty, nonpositive and non-planar measures") {
    CHECK(thrown_code([] { validate(MeasureSpec{}); }) == Errc::validation);

    MeasureSpec bad_mass;
    bad_mass.atoms.push_back({{0.0, 0.0}, -1.0});
    CHECK(thrown_code([&] { validate(bad_mass); }) == Errc::validation);

    MeasureSpec bad_dim = ring(0.25, 1.0);
    bad_dim.dim = 3;
    CHECK(thrown_code([&] { validate(bad_dim); }) == Errc::unsupported_dim);

    MeasureSpec zero_radius;
    zero_radius.uniform_circles.push_back({{0.0, 0.0}, 0.0, 1.0});
    CHECK(thrown_code([&] { validate(zero_radius); }) == Errc::validation);
}

TEST_CASE("total mass adds all components") {
    MeasureSpec spec = ring(0.25, 2.0);
    spec.atoms.push_back({{0.1, 0.0}, 0.5});
    spec.uniform_regions.push_back({geometry::ConvexBody::disk({0.0, 0.0}, 0.2), 0.25});
    CHECK(total_mass(spec) == doctest::Approx(2.75).epsilon(1e-15));
}

TEST_CASE("support hull picks the exact shape when one exists") {
    MeasureSpec circle = ring(0.25, 1.0);
    geometry::ConvexBody hull = support_hull(circle);
    CHECK(hull.kind == geometry::ConvexBody::Kind::disk);
    CHECK(hull.radius == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(norm(hull.center) < 1e-12);

    MeasureSpec atoms;
    atoms.atoms.push_back({{0.0, 0.0}, 1.0});
    atoms.atoms.push_back({{1.0, 0.0}, 1.0});
    atoms.atoms.push_back({{0.0, 1.0}, 1.0});
    geometry::ConvexBody tri = support_hull(atoms);
    CHECK(tri.kind == geometry::ConvexBody::Kind::polygon);
    CHECK(tri.vertices.size() == 3);
    for (const auto& a : atoms.atoms) CHECK(tri.contains(a.x, 1e-12));
}

TEST_CASE("mixed supports fall back to an enclosing disk") {
    MeasureSpec spec = ring(0.25, 1.0);
    spec.atoms.push_back({{0.5, 0.0}, 1.0});
    geometry::ConvexBody hull = support_hull(spec);
    CHECK(hull.kind == geometry::ConvexBody::Kind::disk);
    CHECK(hull.contains({0.5, 0.0}, 1e-9));
    for (double th : {0.0, 1.0, 2.0, 3.0, 4.5, 6.0})
        CHECK(hull.contains({0.25 * std::cos(th), 0.25 * std::sin(th)}, 1e-9));
}

TEST_CASE("degenerate supports are rejected") {
    MeasureSpec one_atom;
    one_atom.atoms.push_back({{0.3, 0.3}, 1.0});
    CHECK(thrown_code([&] { support_hull(one_atom); }) == Errc::degenerate_hull);

    MeasureSpec collinear;
    collinear.atoms.push_back({{0.0, 0.0}, 1.0});
    collinear.atoms.push_back({{0.5, 0.0}, 1.0});
    collinear.atoms.push_back({{1.0, 0.0}, 1.0});
    CHECK(thrown_code([&] { support_hull(collinear); }) == Errc::degenerate_hull);
}

TEST_CASE("ring deposits conserve mass to round-off") {
    fields::Grid g = fields::make_centered_grid(1.425, 1.0 / 64.0);
    DiscretizedMeasure d = deposit(ring(0.25, 2.0 * kPi), g, 2.0 * g.h);
    CHECK(nodal_mass(d) == doctest::Approx(2.0 * kPi).epsilon(1e-12));
    CHECK(d.mollification_radius == doctest::Approx(2.0 * g.h).epsilon(1e-15));
}

TEST_CASE("atom deposits are compact bumps with exact mass") {
    fields::Grid g = fields::make_centered_grid(1.0, 1.0 / 64.0);
    MeasureSpec spec;
    spec.atoms.push_back({{0.3, -0.2}, 1.5});
    double eps = 3.0 * g.h;
    DiscretizedMeasure d = deposit(spec, g, eps);
    CHECK(nodal_mass(d) == doctest::Approx(1.5).epsilon(1e-12));
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (dist(g.node(i, j), {0.3, -0.2}) >= eps)
                CHECK(d.at(i, j) == 0.0);
}

TEST_CASE("region deposits approach the uniform density") {
    fields::Grid g = fields::make_centered_grid(1.0, 1.0 / 64.0);
    MeasureSpec spec;
    spec.uniform_regions.push_back(
        {geometry::ConvexBody::polygon(
             {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}}),
         2.0});
    DiscretizedMeasure d = deposit(spec, g, 2.0 * g.h);
    CHECK(nodal_mass(d) == doctest::Approx(2.0).epsilon(1e-12));
    int mid = (g.nx - 1) / 2;
    CHECK(d.at(mid, mid) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("deposit rejects thin mollification and overflowing supports") {
    fields::Grid g = fields::make_centered_grid(1.0, 1.0 / 64.0);
    CHECK(thrown_code([&] { deposit(ring(0.25, 1.0), g, 0.5 * g.h); }) ==
          Errc::precondition);
    CHECK(thrown_code([&] { deposit(ring(1.5, 1.0), g, 2.0 * g.h); }) ==
          Errc::out_of_grid);

    MeasureSpec far_atom;
    far_atom.atoms.push_back({{2.0, 0.0}, 1.0});
    CHECK(thrown_code([&] { deposit(far_atom, g, 2.0 * g.h); }) == Errc::out_of_grid);
}

TEST_CASE("measure JSON round trips byte-identically") {
    MeasureSpec spec = ring(0.25, 2.0 * kPi);
    spec.atoms.push_back({{0.1, -0.7}, 0.25});
    spec.uniform_regions.push_back({geometry::ConvexBody::disk({0.2, 0.2}, 0.1), 0.5});
    spec.uniform_regions.push_back(
        {geometry::ConvexBody::polygon({{0.0, 0.0}, {0.3, 0.0}, {0.0, 0.3}}), 0.75});

    std::string once = measure_to_json(spec);
    MeasureSpec back = measure_from_json(once);
    CHECK(measure_to_json(back) == once);
    CHECK(back.dim == 2);
    CHECK(back.atoms.size() == 1);
    CHECK(back.uniform_circles.size() == 1);
    CHECK(back.uniform_regions.size() == 2);
    // Serialization rounds to 9 significant digits, so mass survives to that
    // precision rather than to machine epsilon.
    CHECK(total_mass(back) == doctest::Approx(total_mass(spec)).epsilon(1e-8));
}

TEST_CASE("malformed measure JSON reports validation errors") {
    CHECK(thrown_code([] { measure_from_json("{ not json"); }) == Errc::validation);
    CHECK(thrown_code([] { measure_from_json(R"({"atoms":[{"mass":1.0}]})"); }) ==
          Errc::validation);
    CHECK(thrown_code([] { load_measure("/nonexistent/measure.json"); }) ==
          Errc::io_failure);
}
