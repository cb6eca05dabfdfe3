#include "quadsurf/freeboundary.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "quadsurf/error.hpp"
#include "quadsurf/geometry.hpp"
#include "quadsurf/io.hpp"

namespace quadsurf::freeboundary {

namespace {

int auto_sample_count(const fields::DomainMask& mask) {
    auto contour = fields::mask_contour(mask);
    double best = 0.0;
    for (std::size_t k = 0; k < contour.components.size(); ++k) {
        double len = fields::polyline_length(contour.components[k], contour.closed[k]);
        best = std::max(best, len);
    }
    int n = static_cast<int>(std::lround(best / (2.0 * mask.grid.h)));
    return std::max(128, n);
}

double hull_clearance(const fields::DomainMask& mask, const geometry::ConvexBody& hull) {
    auto probes = geometry::sample_outer_normals(hull, 64);
    double clearance = std::numeric_limits<double>::infinity();
    for (const auto& s : probes)
        clearance = std::min(clearance, -fields::interpolate_phi(mask, s.point));
    return clearance;
}

void displace_boundary(fields::DomainMask& mask,
                       const std::vector<poisson::NormalDerivativeSample>& samples,
                       const std::vector<double>& delta) {
    const auto& g = mask.grid;
    const double band = 3.0 * g.h;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            int idx = g.index(i, j);
            if (std::abs(mask.phi[idx]) > band) continue;
            Vec2 x = g.node(i, j);
            double d1 = std::numeric_limits<double>::infinity();
            double d2 = std::numeric_limits<double>::infinity();
            std::size_t k1 = 0, k2 = 0;
            for (std::size_t k = 0; k < samples.size(); ++k) {
                double d = dist(x, samples[k].point);
                if (d < d1) {
                    d2 = d1;
                    k2 = k1;
                    d1 = d;
                    k1 = k;
                } else if (d < d2) {
                    d2 = d;
                    k2 = k;
                }
            }
            double w1 = 1.0 / (d1 + 1e-12);
            double w2 = 1.0 / (d2 + 1e-12);
            mask.phi[idx] -= (w1 * delta[k1] + w2 * delta[k2]) / (w1 + w2);
        }
    }
}

} // namespace

ResidualStats overdetermined_residual(const fields::ScalarField& field,
                                      const fields::DomainMask& mask, int n_samples) {
    ResidualStats stats;
    stats.samples = poisson::boundary_normal_derivative(field, mask, n_samples);
    stats.residual.reserve(stats.samples.size());

    double sum = 0.0;
    double sum_sq = 0.0;
    int used = 0;
    for (const auto& s : stats.samples) {
        double res = std::abs(s.dudn) - 1.0;
        stats.residual.push_back(res);
        if (s.flagged) {
            ++stats.flagged;
            continue;
        }
        stats.max_abs = std::max(stats.max_abs, std::abs(res));
        sum += res;
        sum_sq += res * res;
        ++used;
    }
    if (used > 0) {
        stats.mean = sum / used;
        stats.l2 = std::sqrt(sum_sq / used);
    }
    return stats;
}

SolveResult solve_quadrature_surface(const measures::MeasureSpec& measure,
                                     const fields::DomainMask& init_mask,
                                     const SolveParams& params) {
    if (!(params.step > 0.0) || params.max_iter < 1 || !(params.stop_residual > 0.0))
        throw Error(Errc::precondition, "invalid solve parameters");

    geometry::ConvexBody hull = measures::support_hull(measure);
    for (const auto& s : geometry::sample_outer_normals(hull, 64))
        if (fields::interpolate_phi(init_mask, s.point) >= 0.0)
            throw Error(Errc::precondition, "support hull not strictly inside the initial mask");

    SolveResult out;
    out.mask = init_mask;
    const auto& g = out.mask.grid;
    const double h = g.h;
    const double clamp_disp = 0.5 * h;

    measures::DiscretizedMeasure rhs = measures::deposit(measure, g, 2.0 * h);

    int n_samples = params.n_samples > 0 ? params.n_samples : auto_sample_count(out.mask);
    const fields::ScalarField* warm = nullptr;

    double prev_max = 0.0;
    double initial_max = 0.0;
    int rising = 0;

    for (int iter = 1; iter <= params.max_iter; ++iter) {
        poisson::DirichletResult solve;
        try {
            solve = poisson::solve_dirichlet_detailed(out.mask, rhs, params.tol, warm);
        } catch (const Error& e) {
            // A boundary that has eaten into the source band is a collapse,
            // not a caller error; the history up to here stays available.
            if (e.code() != Errc::precondition || iter == 1) throw;
            out.status = SolveStatus::collapse;
            return out;
        }
        out.field = std::move(solve.u);
        warm = &out.field;

        ResidualStats stats = overdetermined_residual(out.field, out.mask, n_samples);
        out.history.push_back({iter, stats.max_abs, stats.mean});
        out.iterations = iter;
        out.final_max_res = stats.max_abs;

        if (stats.max_abs <= params.stop_residual) {
            out.status = SolveStatus::converged;
            return out;
        }
        if (iter == 1) {
            initial_max = stats.max_abs;
        } else {
            rising = (stats.max_abs > prev_max && stats.max_abs > initial_max) ? rising + 1 : 0;
            if (rising >= 3) {
                out.status = SolveStatus::divergence;
                return out;
            }
        }
        prev_max = stats.max_abs;
        if (iter == params.max_iter) break;

        // Displacements live on the mesh scale: a unit residual moves the
        // boundary a fixed number of cells, so the clamp binds only for gross
        // residuals while the approach to the fixed point stays proportional.
        const double h_scale = 8.0 * h;
        std::vector<double> delta(stats.samples.size(), 0.0);
        for (std::size_t k = 0; k < stats.samples.size(); ++k) {
            if (stats.samples[k].flagged) continue;
            delta[k] = std::clamp(params.step * stats.residual[k] * h_scale,
                                  -clamp_disp, clamp_disp);
        }
        // The samples sit in order around the boundary; binomial smoothing of
        // the displacement profile damps sample-scale corrugation that would
        // otherwise feed back into the next derivative measurement.
        for (int pass = 0; pass < 2; ++pass) {
            std::vector<double> smooth(delta.size());
            for (std::size_t k = 0; k < delta.size(); ++k) {
                std::size_t prev = (k + delta.size() - 1) % delta.size();
                std::size_t next = (k + 1) % delta.size();
                smooth[k] = 0.25 * delta[prev] + 0.5 * delta[k] + 0.25 * delta[next];
            }
            delta.swap(smooth);
        }
        displace_boundary(out.mask, stats.samples, delta);
        fields::redistance(out.mask);

        if (hull_clearance(out.mask, hull) < 4.0 * h) {
            out.status = SolveStatus::collapse;
            return out;
        }
    }
    out.status = SolveStatus::max_iterations;
    return out;
}

std::string history_csv(const std::vector<HistoryRow>& history) {
    std::string out = "iter,max_res,mean_res\n";
    for (const auto& row : history)
        out += std::to_string(row.iter) + "," + io::format_number(row.max_res) + "," +
               io::format_number(row.mean_res) + "\n";
    return out;
}

} // namespace quadsurf::freeboundary
