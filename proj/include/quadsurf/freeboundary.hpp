#pragma once

#include <string>
#include <vector>

#include "quadsurf/fields.hpp"
#include "quadsurf/measures.hpp"
#include "quadsurf/poisson.hpp"

namespace quadsurf::freeboundary {

struct ResidualStats {
    std::vector<poisson::NormalDerivativeSample> samples;
    std::vector<double> residual;   // |du/dnu| - 1 per sample
    double max_abs = 0.0;           // over unflagged samples
    double mean = 0.0;              // signed mean over unflagged samples
    double l2 = 0.0;                // root mean square over unflagged samples
    int flagged = 0;
};

// Deviation from the quadrature-surface condition |grad u| = 1 on the mask
// boundary, measured through the one-sided normal derivative.
ResidualStats overdetermined_residual(const fields::ScalarField& field,
                                      const fields::DomainMask& mask, int n_samples);

enum class SolveStatus { converged, max_iterations, collapse, divergence };

struct SolveParams {
    double step = 0.4;
    int max_iter = 200;
    double stop_residual = 0.02;
    double tol = 1e-10;     // inner Dirichlet tolerance
    int n_samples = 0;      // 0: one boundary sample per ~2h of arc
};

struct HistoryRow {
    int iter = 0;
    double max_res = 0.0;
    double mean_res = 0.0;
};

struct SolveResult {
    fields::DomainMask mask;
    fields::ScalarField field;
    std::vector<HistoryRow> history;
    SolveStatus status = SolveStatus::max_iterations;
    int iterations = 0;
    double final_max_res = 0.0;
};

// Fixed-point iteration for the overdetermined problem: solve the Dirichlet
// problem on the current mask, displace the boundary along its outward
// normal by step * (|grad u| - 1) * 8h clamped to half a cell and smoothed
// along the sample ring, redistance, and repeat until the max residual drops
// to stop_residual. Collapse (support
// hull clearance under 4h) and divergence (three consecutive max residual
// increases above the initial value) end the run with the matching status;
// the history is preserved in every outcome.
SolveResult solve_quadrature_surface(const measures::MeasureSpec& measure,
                                     const fields::DomainMask& init_mask,
                                     const SolveParams& params = {});

// Columns: iter,max_res,mean_res.
std::string history_csv(const std::vector<HistoryRow>& history);

} // namespace quadsurf::freeboundary
