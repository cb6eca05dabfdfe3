#include "quadsurf/oracle.hpp"

#include <cmath>

#include "quadsurf/error.hpp"

namespace quadsurf::oracle {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double RadialSolution::u_radial(double r) const {
    if (r <= rho) r = rho;
    if (dim == 2) return R * std::log(R / r);
    double p = 2.0 - dim;
    return std::pow(R, dim - 1) / (dim - 2.0) * (std::pow(r, p) - std::pow(R, p));
}

double RadialSolution::du_dr(double r) const {
    if (r <= rho) return 0.0;
    return -std::pow(R, dim - 1) * std::pow(r, 1 - dim);
}

double RadialSolution::value(Vec2 x) const {
    if (dim != 2) throw Error(Errc::unsupported_dim, "planar evaluation needs dim == 2");
    return u_radial(norm(x));
}

Vec2 RadialSolution::grad(Vec2 x) const {
    if (dim != 2) throw Error(Errc::unsupported_dim, "planar evaluation needs dim == 2");
    double r = norm(x);
    if (r <= rho || r == 0.0) return {0.0, 0.0};
    return du_dr(r) / r * x;
}

double RadialSolution::total_mass() const {
    // Flux of the unit normal derivative through the outer sphere.
    double omega = std::pow(kPi, dim / 2.0) / std::tgamma(dim / 2.0 + 1.0);
    return dim * omega * std::pow(R, dim - 1);
}

double RadialSolution::level_radius(double t) const {
    if (t < 0.0 || t > max_u())
        throw Error(Errc::precondition, "level outside [0, max u]");
    if (dim == 2) return R * std::exp(-t / R);
    double p = 2.0 - dim;
    return std::pow(t * (dim - 2.0) / std::pow(R, dim - 1) + std::pow(R, p), 1.0 / p);
}

double RadialSolution::grad_norm_on_level(double t) const {
    double r = level_radius(t);
    return std::abs(du_dr(r));
}

double RadialSolution::level_slope(double t) const {
    return -1.0 / grad_norm_on_level(t);
}

RadialSolution annulus_solution(int dim, double rho, double R) {
    if (dim < 2) throw Error(Errc::unsupported_dim, "dimension must be at least 2");
    if (!(rho > 0.0) || !(R > rho))
        throw Error(Errc::validation, "need 0 < rho < R");
    RadialSolution s;
    s.dim = dim;
    s.rho = rho;
    s.R = R;
    return s;
}

fields::ScalarField sample_to_grid(const RadialSolution& sol, const fields::Grid& grid) {
    if (sol.dim != 2)
        throw Error(Errc::unsupported_dim, "grid sampling is restricted to dimension 2");
    return fields::field_from_function(grid, [&](Vec2 p) { return sol.u_radial(norm(p)); });
}

} // namespace quadsurf::oracle
