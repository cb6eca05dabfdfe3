#pragma once

#include <string>
#include <vector>

#include "quadsurf/fields.hpp"
#include "quadsurf/geometry.hpp"

namespace quadsurf::claims {

struct ClaimReport {
    std::string claim_id;
    std::string paper_ref;
    std::vector<int> resolutions;        // coarse to fine
    std::vector<double> residual_max;    // per resolution
    std::vector<double> residual_mean;
    std::vector<double> residual_l2;
    double tau_pass = 0.0;
    double tau_fail = 0.0;
    std::string verdict;                 // VERIFIED | REFUTED | INCONCLUSIVE

    // Sample metadata, taken at the finest resolution.
    int n_samples = 0;
    std::vector<double> levels;
    std::vector<double> level_residuals;
    std::vector<double> level_values;
    int flagged = 0;
    std::string note;
};

// One measured configuration: a field u on a masked domain with the convex
// support body C. Checkers never mutate an instance.
struct Instance {
    fields::ScalarField field;
    fields::DomainMask mask;
    geometry::ConvexBody body;
    int resolution = 0;          // nominal 1/h
    double max_u = 0.0;
    double moll_radius = 0.0;    // width of the deposited source band, 0 if none
};

struct CheckConfig {
    int n_samples = 360;
    std::vector<double> levels = {0.1, 0.2, 0.5};   // absolute u levels
};

ClaimReport check_radial_monotonicity(const Instance& inst, const CheckConfig& config = {});
ClaimReport check_level_parametrisation(const Instance& inst, const CheckConfig& config = {});
ClaimReport check_differential_relation(const Instance& inst, const CheckConfig& config = {});
ClaimReport check_unique_decomposition(const Instance& inst, const CheckConfig& config = {});
ClaimReport check_subharmonicity(const Instance& inst, const CheckConfig& config = {});
ClaimReport check_rigidity(const Instance& inst, const CheckConfig& config = {});
ClaimReport check_dt_slope(const Instance& inst, const CheckConfig& config = {});
ClaimReport check_parallel_levels(const Instance& inst, const CheckConfig& config = {});
ClaimReport check_ray_linearity(const Instance& inst, const CheckConfig& config = {});
ClaimReport check_gnp(const Instance& inst, const CheckConfig& config = {});

// Sampled closed form for arbitrary annulus parameters (0 < rho < R).
Instance build_oracle_instance(double rho, double R, int resolution);

// Builds the named configuration at h = 1/resolution. Known scenarios:
// "oracle-annulus" (sampled closed form on the exact disk mask),
// "solver-ring" (converged free-boundary run for the ring measure),
// "ellipse-control" (Dirichlet field on the ellipse a=2, b=0.5 with a small
// central source). Throws Errc::validation for other names.
Instance build_instance(const std::string& scenario, int resolution);

// Every checker at every resolution (sorted coarse to fine), merged into
// refinement-stable verdicts in fixed claim order.
std::vector<ClaimReport> run_all(const std::string& scenario,
                                 const std::vector<int>& resolutions = {64, 128},
                                 const CheckConfig& config = {});

// Same merge for externally built instances (e.g. a saved solver run).
std::vector<ClaimReport> run_all_instances(const std::vector<Instance>& instances,
                                           const CheckConfig& config = {});

std::string report_json(const std::vector<ClaimReport>& reports, const std::string& scenario);

} // namespace quadsurf::claims
