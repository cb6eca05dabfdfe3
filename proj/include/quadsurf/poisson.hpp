#pragma once

#include <vector>

#include "quadsurf/fields.hpp"
#include "quadsurf/measures.hpp"
#include "quadsurf/vec2.hpp"

namespace quadsurf::poisson {

struct DirichletResult {
    fields::ScalarField u;
    int iterations = 0;
    double final_residual = 0.0;
    std::vector<double> history;   // relative residual per iteration
};

// Solve -laplace(u) = rhs.density with u = 0 on the zero level of mask.phi.
// Shortley-Weller cut-cell five-point stencil on interior nodes (phi < 0),
// Jacobi preconditioned BiCGStab, relative residual <= tol, cap 1e5.
// warm_start seeds the iteration when it shares the grid layout.
DirichletResult solve_dirichlet_detailed(const fields::DomainMask& mask,
                                         const measures::DiscretizedMeasure& rhs,
                                         double tol = 1e-10,
                                         const fields::ScalarField* warm_start = nullptr);

fields::ScalarField solve_dirichlet(const fields::DomainMask& mask,
                                    const measures::DiscretizedMeasure& rhs,
                                    double tol = 1e-10);

struct NormalDerivativeSample {
    Vec2 point;
    Vec2 normal;
    double dudn = 0.0;
    bool flagged = false;   // probes not fully interior, or no zero crossing
};

// One-sided second order normal derivative at n_samples points of the mask
// boundary, resampled uniformly by arc length. The field is probed at
// p - s*normal, p - 2s*normal and p - 3s*normal with s grown from 1.5h in
// h/2 steps until all probes sit in bilinear cells whose four nodes are
// interior; the reported slope is that of the fitted parabola at its own
// zero crossing, so a sub-cell offset between the contour and the discrete
// Dirichlet boundary does not contaminate the estimate. Samples whose
// crossing lands further than s from the contour are flagged.
std::vector<NormalDerivativeSample> boundary_normal_derivative(
    const fields::ScalarField& field, const fields::DomainMask& mask, int n_samples);

} // namespace quadsurf::poisson
