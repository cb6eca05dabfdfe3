#pragma once

#include "quadsurf/fields.hpp"
#include "quadsurf/vec2.hpp"

namespace quadsurf::oracle {

// Closed-form solution of the annulus configuration centered at the origin:
// the boundary flux is normalized to 1 on |x| = R and the source is the
// uniform circle measure on |x| = rho carrying the matching total mass.
// The profile is constant inside the source circle and extends smoothly past
// |x| = R, which keeps finite-difference stencils near the boundary clean.
struct RadialSolution {
    int dim = 2;
    double rho = 0.0;
    double R = 0.0;

    double u_radial(double r) const;
    double du_dr(double r) const;           // derivative of the annulus branch
    double value(Vec2 x) const;
    Vec2 grad(Vec2 x) const;
    double max_u() const { return u_radial(rho); }
    double total_mass() const;

    double d() const { return R - rho; }    // boundary distance along any normal
    double level_radius(double t) const;    // |x| with u = t
    double level_thickness(double t) const { return level_radius(t) - rho; }
    double grad_norm_on_level(double t) const;
    double level_slope(double t) const;     // d/dt of level_thickness
};

// Throws Errc::validation unless 0 < rho < R, Errc::unsupported_dim for N < 2.
RadialSolution annulus_solution(int dim, double rho, double R);

// Nodal samples of the closed form (dimension 2 only).
fields::ScalarField sample_to_grid(const RadialSolution& sol, const fields::Grid& grid);

} // namespace quadsurf::oracle
