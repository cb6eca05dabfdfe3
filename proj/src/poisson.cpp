#include "quadsurf/poisson.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "quadsurf/error.hpp"
#include "quadsurf/io.hpp"

namespace quadsurf::poisson {

namespace {

constexpr double kThetaFloor = 1e-2;
constexpr int kIterationCap = 100000;

struct System {
    int n = 0;
    std::vector<int> node;                   // row -> grid index
    std::vector<double> diag;
    std::vector<std::array<int, 4>> nbr;     // row ids of E,W,N,S couplings, -1 when none
    std::vector<std::array<double, 4>> coef;
    std::vector<double> rhs;
};

System assemble(const fields::DomainMask& mask, const measures::DiscretizedMeasure& rhs) {
    const auto& g = mask.grid;
    std::vector<int> row_of(g.node_count(), -1);
    System sys;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (mask.inside(i, j)) {
                row_of[g.index(i, j)] = sys.n++;
                sys.node.push_back(g.index(i, j));
            }

    sys.diag.assign(sys.n, 0.0);
    sys.nbr.assign(sys.n, {-1, -1, -1, -1});
    sys.coef.assign(sys.n, {0.0, 0.0, 0.0, 0.0});
    sys.rhs.assign(sys.n, 0.0);

    const double inv_h2 = 1.0 / (g.h * g.h);
    const int di[4] = {1, -1, 0, 0};
    const int dj[4] = {0, 0, 1, -1};
    for (int r = 0; r < sys.n; ++r) {
        int idx = sys.node[r];
        int i = idx % g.nx;
        int j = idx / g.nx;
        double phi_p = mask.phi[idx];

        double theta[4];
        int neighbor_row[4];
        for (int k = 0; k < 4; ++k) {
            int ii = i + di[k];
            int jj = j + dj[k];
            bool in_grid = ii >= 0 && ii < g.nx && jj >= 0 && jj < g.ny;
            if (in_grid && mask.inside(ii, jj)) {
                theta[k] = 1.0;
                neighbor_row[k] = row_of[g.index(ii, jj)];
            } else {
                double phi_q = in_grid ? mask.at(ii, jj) : -phi_p;
                theta[k] = std::clamp(phi_p / (phi_p - phi_q), kThetaFloor, 1.0);
                neighbor_row[k] = -1;
            }
        }
        for (int axis = 0; axis < 2; ++axis) {
            int a = 2 * axis;
            int b = 2 * axis + 1;
            sys.diag[r] += 2.0 * inv_h2 / (theta[a] * theta[b]);
            if (neighbor_row[a] >= 0) {
                sys.nbr[r][a] = neighbor_row[a];
                sys.coef[r][a] = -2.0 * inv_h2 / (theta[a] * (theta[a] + theta[b]));
            }
            if (neighbor_row[b] >= 0) {
                sys.nbr[r][b] = neighbor_row[b];
                sys.coef[r][b] = -2.0 * inv_h2 / (theta[b] * (theta[a] + theta[b]));
            }
        }
        sys.rhs[r] = rhs.density[idx];
    }
    return sys;
}

void matvec(const System& s, const std::vector<double>& x, std::vector<double>& y) {
    for (int r = 0; r < s.n; ++r) {
        double v = s.diag[r] * x[r];
        for (int k = 0; k < 4; ++k)
            if (s.nbr[r][k] >= 0) v += s.coef[r][k] * x[s.nbr[r][k]];
        y[r] = v;
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

struct Krylov {
    std::vector<double> x;
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
    std::vector<double> history;
};

Krylov bicgstab(const System& sys, std::vector<double> x, double tol, int budget) {
    Krylov out;
    const int n = sys.n;
    const double norm_b = norm2(sys.rhs);

    std::vector<double> r(n), rhat(n), p(n, 0.0), v(n, 0.0), phat(n), shat(n), t(n), s(n);
    std::vector<double> ax(n);

    auto precondition = [&](const std::vector<double>& in, std::vector<double>& outv) {
        for (int i = 0; i < n; ++i) outv[i] = in[i] / sys.diag[i];
    };
    auto restart = [&]() {
        matvec(sys, x, ax);
        for (int i = 0; i < n; ++i) r[i] = sys.rhs[i] - ax[i];
        rhat = r;
        std::fill(p.begin(), p.end(), 0.0);
        std::fill(v.begin(), v.end(), 0.0);
    };

    restart();
    double rho_old = 1.0, alpha = 1.0, omega = 1.0;
    double res = norm2(r) / norm_b;
    out.relative_residual = res;
    if (res <= tol) {
        out.converged = true;
        out.x = std::move(x);
        return out;
    }

    while (out.iterations < budget) {
        ++out.iterations;
        double rho = dot(rhat, r);
        if (rho == 0.0) {
            restart();
            rho_old = alpha = omega = 1.0;
            rho = dot(rhat, r);
            if (rho == 0.0) break;
        }
        double beta = (rho / rho_old) * (alpha / omega);
        for (int i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        precondition(p, phat);
        matvec(sys, phat, v);
        double rhat_v = dot(rhat, v);
        if (rhat_v == 0.0) {
            restart();
            rho_old = alpha = omega = 1.0;
            continue;
        }
        alpha = rho / rhat_v;
        for (int i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        double norm_s = norm2(s);
        if (norm_s / norm_b <= tol) {
            for (int i = 0; i < n; ++i) x[i] += alpha * phat[i];
            out.history.push_back(norm_s / norm_b);
            out.relative_residual = norm_s / norm_b;
            out.converged = true;
            break;
        }
        precondition(s, shat);
        matvec(sys, shat, t);
        double tt = dot(t, t);
        if (tt == 0.0) {
            restart();
            rho_old = alpha = omega = 1.0;
            continue;
        }
        omega = dot(t, s) / tt;
        for (int i = 0; i < n; ++i) x[i] += alpha * phat[i] + omega * shat[i];
        for (int i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
        res = norm2(r) / norm_b;
        out.history.push_back(res);
        out.relative_residual = res;
        if (res <= tol) {
            out.converged = true;
            break;
        }
        if (omega == 0.0) {
            restart();
            rho_old = alpha = omega = 1.0;
            continue;
        }
        rho_old = rho;
    }

    // The recursive residual can drift; confirm against the true one and
    // keep iterating from the current state if it disagrees.
    if (out.converged) {
        matvec(sys, x, ax);
        for (int i = 0; i < n; ++i) ax[i] = sys.rhs[i] - ax[i];
        double true_res = norm2(ax) / norm_b;
        out.relative_residual = true_res;
        if (true_res > tol && out.iterations < budget) {
            out.converged = false;
            Krylov cont = bicgstab(sys, std::move(x), tol, budget - out.iterations);
            cont.iterations += out.iterations;
            out.history.insert(out.history.end(), cont.history.begin(), cont.history.end());
            cont.history = std::move(out.history);
            return cont;
        }
    }
    out.x = std::move(x);
    return out;
}

bool cell_fully_inside(const fields::DomainMask& mask, Vec2 p) {
    const auto& g = mask.grid;
    double fx = (p.x - g.origin.x) / g.h;
    double fy = (p.y - g.origin.y) / g.h;
    int i = static_cast<int>(std::floor(fx));
    int j = static_cast<int>(std::floor(fy));
    if (i < 0 || j < 0 || i + 1 >= g.nx || j + 1 >= g.ny) return false;
    return mask.inside(i, j) && mask.inside(i + 1, j) && mask.inside(i, j + 1) &&
           mask.inside(i + 1, j + 1);
}

} // namespace

DirichletResult solve_dirichlet_detailed(const fields::DomainMask& mask,
                                         const measures::DiscretizedMeasure& rhs,
                                         double tol,
                                         const fields::ScalarField* warm_start) {
    if (!(tol > 0.0)) throw Error(Errc::precondition, "tol must be positive");
    if (!mask.grid.same_layout(rhs.grid))
        throw Error(Errc::precondition, "mask and rhs grids differ");

    const auto& g = mask.grid;
    const double clearance = 2.0 * rhs.mollification_radius;
    for (int idx = 0; idx < g.node_count(); ++idx)
        if (rhs.density[idx] != 0.0 && !(mask.phi[idx] < 0.0 && mask.phi[idx] <= -clearance + 1e-12))
            throw Error(Errc::precondition, "rhs support touches the boundary");

    System sys = assemble(mask, rhs);

    DirichletResult result;
    result.u = fields::make_field(g, 0.0);
    if (sys.n == 0 || norm2(sys.rhs) == 0.0) return result;

    std::vector<double> x0(sys.n, 0.0);
    if (warm_start && warm_start->grid.same_layout(g))
        for (int r = 0; r < sys.n; ++r) x0[r] = warm_start->values[sys.node[r]];

    Krylov k = bicgstab(sys, std::move(x0), tol, kIterationCap);
    if (!k.converged) {
        std::string msg = "dirichlet solve stalled at relative residual " +
                          io::format_number(k.relative_residual) + " after " +
                          std::to_string(k.iterations) + " iterations; history tail:";
        std::size_t from = k.history.size() > 5 ? k.history.size() - 5 : 0;
        for (std::size_t i = from; i < k.history.size(); ++i)
            msg += " " + io::format_number(k.history[i]);
        throw Error(Errc::solver_failure, msg);
    }

    result.iterations = k.iterations;
    result.final_residual = k.relative_residual;
    result.history = std::move(k.history);
    for (int r = 0; r < sys.n; ++r) result.u.values[sys.node[r]] = k.x[r];
    return result;
}

fields::ScalarField solve_dirichlet(const fields::DomainMask& mask,
                                    const measures::DiscretizedMeasure& rhs, double tol) {
    return solve_dirichlet_detailed(mask, rhs, tol).u;
}

std::vector<NormalDerivativeSample> boundary_normal_derivative(
    const fields::ScalarField& field, const fields::DomainMask& mask, int n_samples) {
    if (!field.grid.same_layout(mask.grid))
        throw Error(Errc::precondition, "field and mask grids differ");
    if (n_samples < 8) throw Error(Errc::precondition, "need at least 8 samples");

    auto contour = fields::mask_contour(mask);
    auto pts = fields::resample_closed(contour, n_samples);
    const double h = mask.grid.h;

    std::vector<NormalDerivativeSample> out;
    out.reserve(pts.size());
    for (Vec2 p : pts) {
        NormalDerivativeSample s;
        s.point = p;
        s.normal = fields::mask_normal(mask, p);
        double step = 1.5 * h;
        bool resolved = false;
        for (; step <= 3.0 * h + 1e-12 * h; step += 0.5 * h) {
            if (cell_fully_inside(mask, p - step * s.normal) &&
                cell_fully_inside(mask, p - 2.0 * step * s.normal) &&
                cell_fully_inside(mask, p - 3.0 * step * s.normal)) {
                resolved = true;
                break;
            }
        }
        if (!resolved) {
            s.flagged = true;
            step = 3.0 * h;
        }
        try {
            // Fit a parabola through three probes along the inward normal and
            // read its slope at its own zero crossing. Anchoring at the root
            // instead of at p keeps the estimate immune to the sub-cell offset
            // between the contour and the discrete Dirichlet boundary.
            double f1 = fields::interpolate(field, p - step * s.normal);
            double f2 = fields::interpolate(field, p - 2.0 * step * s.normal);
            double f3 = fields::interpolate(field, p - 3.0 * step * s.normal);
            double d1 = f2 - f1;
            double d2 = f3 - 2.0 * f2 + f1;
            double a = d2 / (2.0 * step * step);
            double b = d1 / step - 3.0 * step * a;
            double c = f1 - d1 + 2.0 * step * step * a;
            double t0 = 0.0;
            bool have_root = false;
            if (std::abs(a) * step <= 1e-10 * std::abs(b)) {
                if (b != 0.0) {
                    t0 = -c / b;
                    have_root = true;
                }
            } else {
                double disc = b * b - 4.0 * a * c;
                if (disc >= 0.0) {
                    double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
                    double r1 = q / a;
                    double r2 = (q != 0.0) ? c / q : r1;
                    t0 = std::abs(r1) < std::abs(r2) ? r1 : r2;
                    have_root = true;
                }
            }
            if (!have_root || std::abs(t0) > step) {
                s.flagged = true;
                t0 = std::clamp(t0, -step, step);
            }
            s.dudn = -(b + 2.0 * a * t0);
        } catch (const Error&) {
            s.dudn = 0.0;
            s.flagged = true;
        }
        out.push_back(s);
    }
    return out;
}

} // namespace quadsurf::poisson
