#include "quadsurf/claims.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "quadsurf/error.hpp"
#include "quadsurf/field_eval.hpp"
#include "quadsurf/freeboundary.hpp"
#include "quadsurf/io.hpp"
#include "quadsurf/measures.hpp"
#include "quadsurf/oracle.hpp"
#include "quadsurf/poisson.hpp"
#include "quadsurf/thickness.hpp"

namespace quadsurf::claims {

namespace {

struct Measurement {
    double max = 0.0;
    double mean = 0.0;
    double l2 = 0.0;
    double tau_pass = 0.0;
    double tau_fail = 0.0;
    std::vector<double> levels;
    std::vector<double> level_residuals;
    std::vector<double> level_values;
    int n_samples = 0;
    int flagged = 0;
    std::string note;
};

struct Agg {
    double max = 0.0;
    double sum = 0.0;
    double sum_sq = 0.0;
    int n = 0;

    void add(double r) {
        max = std::max(max, r);
        sum += r;
        sum_sq += r * r;
        ++n;
    }
    double mean() const { return n > 0 ? sum / n : 0.0; }
    double l2() const { return n > 0 ? std::sqrt(sum_sq / n) : 0.0; }
};

void fill_stats(Measurement& m, const Agg& agg) {
    m.max = agg.max;
    m.mean = agg.mean();
    m.l2 = agg.l2();
}

double ray_limit(const Instance& inst) {
    const auto& g = inst.mask.grid;
    return g.h * std::max(g.nx, g.ny);
}

struct ContourRef {
    std::vector<Vec2> points;
    bool closed = false;
};

ContourRef largest_component(const fields::LevelContour& contour) {
    if (contour.components.empty())
        throw Error(Errc::validation, "contour has no components");
    double best_area = -1.0;
    std::size_t best = 0;
    for (std::size_t i = 0; i < contour.components.size(); ++i) {
        if (!contour.closed[i]) continue;
        double a = std::abs(fields::polyline_signed_area(contour.components[i]));
        if (a > best_area) {
            best_area = a;
            best = i;
        }
    }
    if (best_area < 0.0) {
        std::size_t longest = 0;
        for (std::size_t i = 1; i < contour.components.size(); ++i)
            if (contour.components[i].size() > contour.components[longest].size()) longest = i;
        best = longest;
    }
    return {contour.components[best], contour.closed[best]};
}

// Step for the thickness t-derivative on interpolated grids: wide enough to
// dominate bilinear noise in the level roots.
double derivative_dt(const Instance& inst, double t, double u_at_sample) {
    double dt = 0.025 * inst.max_u;
    dt = std::min(dt, 0.5 * t);
    dt = std::min(dt, 0.45 * (u_at_sample - t));
    return dt;
}

// --- checker cores ----------------------------------------------------------

Measurement measure_monotonicity(const Instance& inst, const CheckConfig& cfg) {
    thickness::GridField fe(inst.field, inst.max_u);
    thickness::GridMask me(inst.mask);
    auto samples = geometry::sample_outer_normals(inst.body, cfg.n_samples);
    const double rl = ray_limit(inst);
    const double dr = fe.scan_step();

    Measurement m;
    Agg agg;
    for (const auto& s : samples) {
        double d0 = thickness::outer_extent(me, s, rl);
        double running = fe.value(s.point);
        double rise = 0.0;
        for (double r = dr; r <= d0; r += dr) {
            double v = fe.value(s.point + r * s.normal);
            rise = std::max(rise, v - running);
            running = std::min(running, v);
        }
        agg.add(rise);
    }
    fill_stats(m, agg);
    m.tau_pass = 5e-3 * inst.max_u;
    m.tau_fail = 5e-2 * inst.max_u;
    m.n_samples = static_cast<int>(samples.size());
    return m;
}

Measurement measure_level_param(const Instance& inst, const CheckConfig& cfg) {
    thickness::GridField fe(inst.field, inst.max_u);
    thickness::GridMask me(inst.mask);
    auto samples = geometry::sample_outer_normals(inst.body, cfg.n_samples);
    const double rl = ray_limit(inst);
    const double h = inst.mask.grid.h;

    Measurement m;
    Agg agg;
    std::vector<double> d0(samples.size());
    std::vector<Vec2> recon;
    recon.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        d0[i] = thickness::outer_extent(me, samples[i], rl);
        recon.push_back(samples[i].point + d0[i] * samples[i].normal);
    }
    ContourRef boundary = largest_component(fields::mask_contour(inst.mask));
    double h0 = fields::hausdorff_distance(recon, true, boundary.points, boundary.closed);
    m.levels.push_back(0.0);
    m.level_residuals.push_back(h0);
    agg.add(h0);

    for (double t : cfg.levels) {
        recon.clear();
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (t >= fe.value(samples[i].point)) {
                ++m.flagged;
                continue;
            }
            try {
                thickness::LevelRoot root = thickness::level_thickness(fe, samples[i], t, d0[i]);
                if (root.extra_crossings > 0) ++m.flagged;
                recon.push_back(samples[i].point + root.d_t * samples[i].normal);
            } catch (const Error&) {
                ++m.flagged;
            }
        }
        if (recon.size() < 8) {
            m.note += (m.note.empty() ? "" : "; ") +
                      ("level " + io::format_number(t) + " under-resolved");
            continue;
        }
        ContourRef level_set = largest_component(fields::extract_contour(inst.field, t));
        double hd = fields::hausdorff_distance(recon, true, level_set.points, level_set.closed);
        m.levels.push_back(t);
        m.level_residuals.push_back(hd);
        agg.add(hd);
    }
    fill_stats(m, agg);
    m.tau_pass = 2.0 * h;
    m.tau_fail = 10.0 * h;
    m.n_samples = static_cast<int>(samples.size());
    return m;
}

Measurement measure_slope_identity(const Instance& inst, const CheckConfig& cfg) {
    thickness::GridField fe(inst.field, inst.max_u);
    thickness::GridMask me(inst.mask);
    auto samples = geometry::sample_outer_normals(inst.body, cfg.n_samples);
    const double rl = ray_limit(inst);

    Measurement m;
    Agg agg;
    for (double t : cfg.levels) {
        Agg level;
        Agg measured_mean;
        for (const auto& s : samples) {
            double u_c = fe.value(s.point);
            if (t >= u_c) {
                ++m.flagged;
                continue;
            }
            double d0 = thickness::outer_extent(me, s, rl);
            double dt = derivative_dt(inst, t, u_c);
            try {
                double measured = thickness::thickness_derivative(fe, s, t, d0, dt);
                double root = thickness::level_thickness(fe, s, t, d0).d_t;
                double predicted = thickness::predicted_slope(fe, s.point + root * s.normal);
                double res = std::abs(measured - predicted);
                level.add(res);
                agg.add(res);
                measured_mean.add(measured);
            } catch (const Error&) {
                ++m.flagged;
            }
        }
        m.levels.push_back(t);
        m.level_residuals.push_back(level.max);
        m.level_values.push_back(measured_mean.mean());
    }
    fill_stats(m, agg);
    m.tau_pass = 5e-3;
    m.tau_fail = 5e-2;
    m.n_samples = static_cast<int>(samples.size());
    return m;
}

double halton(int index, int base) {
    double f = 1.0;
    double r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * (index % base);
        index /= base;
    }
    return r;
}

Measurement measure_decomposition(const Instance& inst, const CheckConfig&) {
    thickness::GridMask me(inst.mask);
    const auto& g = inst.mask.grid;
    const double rl = ray_limit(inst);
    const double tol = 2.0 * g.h;
    const Vec2 lo = g.origin;
    const Vec2 hi = g.max_corner();

    Measurement m;
    Agg roundtrip;
    int coverage_fail = 0;
    int found = 0;
    for (int index = 1; found < 1000 && index < 2000000; ++index) {
        Vec2 p{lo.x + halton(index, 2) * (hi.x - lo.x), lo.y + halton(index, 3) * (hi.y - lo.y)};
        if (fields::interpolate_phi(inst.mask, p) >= 0.0) continue;
        geometry::RadialDecomposition rd;
        try {
            rd = geometry::radial_decompose(p, inst.body);
        } catch (const Error&) {
            continue;   // inside the body
        }
        ++found;
        Vec2 recon = rd.foot + rd.radius * rd.normal;
        roundtrip.add(dist(recon, p));
        geometry::NormalSample ns{rd.foot, rd.normal, 0};
        double d0 = thickness::outer_extent(me, ns, rl);
        if (rd.radius >= d0 + tol) ++coverage_fail;
    }
    double fraction = found > 0 ? static_cast<double>(coverage_fail) / found : 1.0;
    m.max = roundtrip.max + fraction;
    m.mean = roundtrip.mean() + fraction;
    m.l2 = roundtrip.l2() + fraction;
    m.tau_pass = 1e-9;
    m.tau_fail = 1e-2;
    m.n_samples = found;
    m.note = "coverage failures: " + std::to_string(coverage_fail) + " of " +
             std::to_string(found);
    return m;
}

Measurement measure_subharmonicity(const Instance& inst, const CheckConfig&) {
    const auto& g = inst.mask.grid;
    const double h = g.h;
    const double edge_band = 4.0 * h;
    const double core_band = std::max(4.0 * h, inst.moll_radius + 3.0 * h);

    Measurement m;
    Agg agg;
    double min_lap = std::numeric_limits<double>::infinity();
    double max_abs = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (inst.mask.phi[g.index(i, j)] >= -edge_band) continue;
            Vec2 x = g.node(i, j);
            double to_body;
            try {
                to_body = geometry::radial_decompose(x, inst.body).radius;
            } catch (const Error&) {
                continue;   // inside the body
            }
            if (to_body <= core_band) continue;
            double lap = fields::laplacian_of_w(inst.field, x);
            min_lap = std::min(min_lap, lap);
            max_abs = std::max(max_abs, std::abs(lap));
            agg.add(std::max(0.0, -lap));
        }
    }
    fill_stats(m, agg);
    double scale = std::max(1.0, max_abs);
    m.tau_pass = 5e-3 * scale;
    m.tau_fail = 5e-2 * scale;
    m.n_samples = agg.n;
    m.note = "min lap w = " + io::format_number(min_lap) +
             "; max |lap w| = " + io::format_number(max_abs);
    return m;
}

Measurement measure_rigidity(const Instance& inst, const CheckConfig& cfg) {
    thickness::GridField fe(inst.field, inst.max_u);
    thickness::GridMask me(inst.mask);
    auto samples = geometry::sample_outer_normals(inst.body, cfg.n_samples);
    const double rl = ray_limit(inst);

    Measurement m;
    Agg agg;

    Agg level0;
    Agg grad0;
    auto bnd = poisson::boundary_normal_derivative(inst.field, inst.mask, cfg.n_samples);
    for (const auto& b : bnd) {
        if (b.flagged) {
            ++m.flagged;
            continue;
        }
        double res = std::abs(std::abs(b.dudn) - 1.0);
        level0.add(res);
        grad0.add(std::abs(b.dudn));
        agg.add(res);
    }
    m.levels.push_back(0.0);
    m.level_residuals.push_back(level0.max);
    m.level_values.push_back(grad0.mean());

    for (double t : cfg.levels) {
        Agg level;
        Agg grads;
        for (const auto& s : samples) {
            if (t >= fe.value(s.point)) {
                ++m.flagged;
                continue;
            }
            double d0 = thickness::outer_extent(me, s, rl);
            try {
                double root = thickness::level_thickness(fe, s, t, d0).d_t;
                double gn = norm(fe.grad(s.point + root * s.normal));
                double res = std::abs(gn - 1.0);
                level.add(res);
                grads.add(gn);
                agg.add(res);
            } catch (const Error&) {
                ++m.flagged;
            }
        }
        m.levels.push_back(t);
        m.level_residuals.push_back(level.max);
        m.level_values.push_back(grads.mean());
    }
    fill_stats(m, agg);
    m.tau_pass = 5e-3;
    m.tau_fail = 5e-2;
    m.n_samples = static_cast<int>(samples.size());
    return m;
}

Measurement measure_dt_slope(const Instance& inst, const CheckConfig& cfg) {
    thickness::GridField fe(inst.field, inst.max_u);
    thickness::GridMask me(inst.mask);
    auto samples = geometry::sample_outer_normals(inst.body, cfg.n_samples);
    const double rl = ray_limit(inst);

    Measurement m;
    Agg agg;
    for (double t : cfg.levels) {
        Agg level;
        Agg measured_mean;
        for (const auto& s : samples) {
            double u_c = fe.value(s.point);
            if (t >= u_c) {
                ++m.flagged;
                continue;
            }
            double d0 = thickness::outer_extent(me, s, rl);
            double dt = derivative_dt(inst, t, u_c);
            try {
                double measured = thickness::thickness_derivative(fe, s, t, d0, dt);
                double res = std::abs(measured + 1.0);
                level.add(res);
                agg.add(res);
                measured_mean.add(measured);
            } catch (const Error&) {
                ++m.flagged;
            }
        }
        m.levels.push_back(t);
        m.level_residuals.push_back(level.max);
        m.level_values.push_back(measured_mean.mean());
    }
    fill_stats(m, agg);
    m.tau_pass = 5e-3;
    m.tau_fail = 5e-2;
    m.n_samples = static_cast<int>(samples.size());
    return m;
}

Measurement measure_parallel(const Instance& inst, const CheckConfig& cfg) {
    thickness::GridField fe(inst.field, inst.max_u);
    thickness::GridMask me(inst.mask);
    auto samples = geometry::sample_outer_normals(inst.body, cfg.n_samples);
    const double rl = ray_limit(inst);

    Measurement m;
    Agg agg;
    std::vector<double> levels;
    levels.push_back(0.0);
    levels.insert(levels.end(), cfg.levels.begin(), cfg.levels.end());

    std::vector<double> d0(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        d0[i] = thickness::outer_extent(me, samples[i], rl);

    for (double t : levels) {
        Agg level;
        Agg thick_mean;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (t >= fe.value(samples[i].point)) {
                ++m.flagged;
                continue;
            }
            try {
                double root =
                    thickness::level_thickness(fe, samples[i], t, d0[i] + 2.0 * fe.scan_step()).d_t;
                double res = std::abs(root - (d0[i] - t));
                level.add(res);
                thick_mean.add(root);
                agg.add(res);
            } catch (const Error&) {
                ++m.flagged;
            }
        }
        m.levels.push_back(t);
        m.level_residuals.push_back(level.max);
        m.level_values.push_back(thick_mean.mean());
    }
    fill_stats(m, agg);
    m.tau_pass = 5e-3 * inst.max_u;
    m.tau_fail = 5e-2 * inst.max_u;
    m.n_samples = static_cast<int>(samples.size());
    return m;
}

Measurement measure_ray_linearity(const Instance& inst, const CheckConfig& cfg) {
    thickness::GridField fe(inst.field, inst.max_u);
    thickness::GridMask me(inst.mask);
    auto samples = geometry::sample_outer_normals(inst.body, cfg.n_samples);
    const double rl = ray_limit(inst);
    const std::vector<double> probes = {0.0, 0.2, 0.5};

    Measurement m;
    Agg agg;
    std::vector<Agg> probe_res(probes.size());
    std::vector<Agg> probe_val(probes.size());
    for (const auto& s : samples) {
        double d0 = thickness::outer_extent(me, s, rl);
        for (int j = 0; j <= 32; ++j) {
            double r = d0 * j / 32.0;
            double v = fe.value(s.point + r * s.normal);
            agg.add(std::abs(v - (d0 - r)));
        }
        for (std::size_t k = 0; k < probes.size(); ++k) {
            if (probes[k] > d0) continue;
            double v = fe.value(s.point + probes[k] * s.normal);
            probe_res[k].add(std::abs(v - (d0 - probes[k])));
            probe_val[k].add(v);
        }
    }
    for (std::size_t k = 0; k < probes.size(); ++k) {
        if (probe_res[k].n == 0) continue;
        m.levels.push_back(probes[k]);
        m.level_residuals.push_back(probe_res[k].max);
        m.level_values.push_back(probe_val[k].mean());
    }
    fill_stats(m, agg);
    m.tau_pass = 5e-3 * inst.max_u;
    m.tau_fail = 5e-2 * inst.max_u;
    m.n_samples = static_cast<int>(samples.size());
    m.note = "levels are ray radii";
    (void)cfg;
    return m;
}

Measurement measure_gnp(const Instance& inst, const CheckConfig& cfg) {
    thickness::GridMask me(inst.mask);
    const double rl = ray_limit(inst);
    const double h = inst.mask.grid.h;

    Measurement m;
    auto csamples = geometry::sample_outer_normals(inst.body, cfg.n_samples);
    double p1 = 0.0;
    std::vector<geometry::BoundarySampleValue> thick;
    thick.reserve(csamples.size());
    for (const auto& s : csamples) {
        p1 = std::max(p1, std::max(0.0, fields::interpolate_phi(inst.mask, s.point)));
        thick.push_back({s.point, thickness::outer_extent(me, s, rl)});
    }
    geometry::LipschitzEstimate lip = geometry::lipschitz_estimate(thick);

    auto boundary = fields::resample_closed(fields::mask_contour(inst.mask), cfg.n_samples);
    double p3 = 0.0;
    int bad_interval = 0;
    for (Vec2 p : boundary) {
        Vec2 inward = -1.0 * fields::mask_normal(inst.mask, p);
        geometry::NormalRay ray{p, inward};
        double gap = geometry::ray_body_distance(ray, inst.body);
        p3 = std::max(p3, gap);
        if (gap == 0.0) {
            for (double s = 0.5 * h; s <= rl; s += 0.5 * h) {
                Vec2 q = p + s * inward;
                if (inst.body.contains(q)) break;
                if (fields::interpolate_phi(inst.mask, q) >= 0.0) {
                    ++bad_interval;
                    break;
                }
            }
        }
    }
    double p4 = boundary.empty() ? 0.0 : static_cast<double>(bad_interval) / boundary.size();

    m.max = std::max({p1, p3, p4});
    m.mean = (p1 + p3 + p4) / 3.0;
    m.l2 = std::sqrt((p1 * p1 + p3 * p3 + p4 * p4) / 3.0);
    m.tau_pass = 2.0 * h;
    m.tau_fail = 10.0 * h;
    m.n_samples = static_cast<int>(boundary.size());
    m.note = "P1 = " + io::format_number(p1) +
             "; lipschitz = " + io::format_number(lip.constant) +
             (lip.infinite ? " (unbounded)" : "") + "; P3 = " + io::format_number(p3) +
             "; P4 = " + io::format_number(p4);
    return m;
}

// --- assembly ---------------------------------------------------------------

using MeasureFn = Measurement (*)(const Instance&, const CheckConfig&);

struct ClaimDef {
    const char* id;
    const char* paper_ref;
    MeasureFn fn;
};

const ClaimDef kClaimDefs[] = {
    {"prop2.1-radial-monotonicity",
     R"qs(Prop 2.1, "is strictly decreasing on [0,d(c)]".)qs", &measure_monotonicity},
    {"prop2.2-level-parametrisation",
     R"qs(Prop 2.2 / Eq. (3), "Γ^t = {c + d_t(c)ν(c)".)qs", &measure_level_param},
    {"prop2.3-differential-relation",
     R"qs(Prop 2.3 / Eq. (5), "For almost every c ∈ ∂C".)qs", &measure_slope_identity},
    {"prop3.1-unique-decomposition",
     R"qs(Prop 3.1, "can be uniquely written as".)qs", &measure_decomposition},
    {"eq6-subharmonicity",
     R"qs(Lemma 4.1 Step 1 / Eq. (6), "Thus w is subharmonic in Ω∖C"; Appendix A item 1, "The function w=|∇u|² is subharmonic".)qs",
     &measure_subharmonicity},
    {"lemma4.1-rigidity",
     R"qs(Lemma 4.1, "|∇u|=1 on every level set Γ^t".)qs", &measure_rigidity},
    {"cor4.2-dt-slope",
     R"qs(Cor 4.2 / Eq. (7) (statement context: "For every c ∈ ∂C and every t ∈ [0, max u]").)qs",
     &measure_dt_slope},
    {"thm5.1-parallel-levels",
     R"qs(Thm 5.1 / Eq. (8), "d_t(c) = d(c) − t" / "are parallel surfaces to ∂C".)qs",
     &measure_parallel},
    {"eq9-ray-linearity",
     R"qs(Remark / Eq. (9), "u varies linearly along each ray".)qs", &measure_ray_linearity},
    {"thm6.1-gnp",
     R"qs(Thm 6.1, "satisfies the C-GNP property with C" (Step 2: "Normal rays meet C"; Step 3: "Lipschitz regularity"; Step 4: "intersects Ω in the open interval").)qs",
     &measure_gnp},
};

std::string verdict_for(const std::vector<double>& residual_max, double tau_pass,
                        double tau_fail) {
    if (residual_max.back() < tau_pass) return "VERIFIED";
    if (residual_max.size() >= 2) {
        double coarse = residual_max[residual_max.size() - 2];
        double fine = residual_max.back();
        if (coarse > tau_fail && fine > tau_fail) {
            double rel = std::abs(coarse - fine) / std::max(std::abs(coarse), std::abs(fine));
            if (rel <= 0.25) return "REFUTED";
        }
    }
    return "INCONCLUSIVE";
}

ClaimReport merge_reports(const ClaimDef& def, const std::vector<Instance>& instances,
                          const std::vector<Measurement>& ms) {
    ClaimReport r;
    r.claim_id = def.id;
    r.paper_ref = def.paper_ref;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        r.resolutions.push_back(instances[i].resolution);
        r.residual_max.push_back(ms[i].max);
        r.residual_mean.push_back(ms[i].mean);
        r.residual_l2.push_back(ms[i].l2);
    }
    const Measurement& finest = ms.back();
    r.tau_pass = finest.tau_pass;
    r.tau_fail = finest.tau_fail;
    r.n_samples = finest.n_samples;
    r.levels = finest.levels;
    r.level_residuals = finest.level_residuals;
    r.level_values = finest.level_values;
    r.flagged = finest.flagged;
    r.note = finest.note;
    r.verdict = verdict_for(r.residual_max, r.tau_pass, r.tau_fail);
    return r;
}

ClaimReport single_report(const ClaimDef& def, const Instance& inst, const CheckConfig& cfg) {
    std::vector<Measurement> ms;
    ms.push_back(def.fn(inst, cfg));
    ClaimReport r;
    r.claim_id = def.id;
    r.paper_ref = def.paper_ref;
    r.resolutions.push_back(inst.resolution);
    r.residual_max.push_back(ms[0].max);
    r.residual_mean.push_back(ms[0].mean);
    r.residual_l2.push_back(ms[0].l2);
    r.tau_pass = ms[0].tau_pass;
    r.tau_fail = ms[0].tau_fail;
    r.n_samples = ms[0].n_samples;
    r.levels = ms[0].levels;
    r.level_residuals = ms[0].level_residuals;
    r.level_values = ms[0].level_values;
    r.flagged = ms[0].flagged;
    r.note = ms[0].note;
    r.verdict = verdict_for(r.residual_max, r.tau_pass, r.tau_fail);
    return r;
}

measures::MeasureSpec ring_measure(double rho, double mass) {
    measures::MeasureSpec spec;
    spec.dim = 2;
    spec.uniform_circles.push_back({{0.0, 0.0}, rho, mass});
    return spec;
}

} // namespace

ClaimReport check_radial_monotonicity(const Instance& inst, const CheckConfig& cfg) {
    return single_report(kClaimDefs[0], inst, cfg);
}
ClaimReport check_level_parametrisation(const Instance& inst, const CheckConfig& cfg) {
    return single_report(kClaimDefs[1], inst, cfg);
}
ClaimReport check_differential_relation(const Instance& inst, const CheckConfig& cfg) {
    return single_report(kClaimDefs[2], inst, cfg);
}
ClaimReport check_unique_decomposition(const Instance& inst, const CheckConfig& cfg) {
    return single_report(kClaimDefs[3], inst, cfg);
}
ClaimReport check_subharmonicity(const Instance& inst, const CheckConfig& cfg) {
    return single_report(kClaimDefs[4], inst, cfg);
}
ClaimReport check_rigidity(const Instance& inst, const CheckConfig& cfg) {
    return single_report(kClaimDefs[5], inst, cfg);
}
ClaimReport check_dt_slope(const Instance& inst, const CheckConfig& cfg) {
    return single_report(kClaimDefs[6], inst, cfg);
}
ClaimReport check_parallel_levels(const Instance& inst, const CheckConfig& cfg) {
    return single_report(kClaimDefs[7], inst, cfg);
}
ClaimReport check_ray_linearity(const Instance& inst, const CheckConfig& cfg) {
    return single_report(kClaimDefs[8], inst, cfg);
}
ClaimReport check_gnp(const Instance& inst, const CheckConfig& cfg) {
    return single_report(kClaimDefs[9], inst, cfg);
}

Instance build_oracle_instance(double rho, double R, int resolution) {
    if (resolution < 16)
        throw Error(Errc::validation, "grid resolution must be at least 16");
    const double h = 1.0 / resolution;
    oracle::RadialSolution sol = oracle::annulus_solution(2, rho, R);
    fields::Grid grid = fields::make_centered_grid(sol.R + 0.125, h);

    Instance inst;
    inst.resolution = resolution;
    inst.field = oracle::sample_to_grid(sol, grid);
    inst.mask = fields::disk_mask(grid, {0.0, 0.0}, sol.R);
    inst.body = geometry::ConvexBody::disk({0.0, 0.0}, sol.rho);
    inst.max_u = fields::max_value(inst.field, inst.mask).value;
    return inst;
}

Instance build_instance(const std::string& scenario, int resolution) {
    if (resolution < 16)
        throw Error(Errc::validation, "grid resolution must be at least 16");
    const double h = 1.0 / resolution;
    const double pi = std::numbers::pi;

    Instance inst;
    inst.resolution = resolution;
    if (scenario == "oracle-annulus") {
        return build_oracle_instance(0.25, 1.0, resolution);
    } else if (scenario == "solver-ring") {
        measures::MeasureSpec spec = ring_measure(0.25, 2.0 * pi);
        fields::Grid grid = fields::make_centered_grid(1.3 + 0.125, h);
        fields::DomainMask init = fields::disk_mask(grid, {0.0, 0.0}, 1.3);
        freeboundary::SolveParams params;
        params.stop_residual = 0.015;
        freeboundary::SolveResult run = freeboundary::solve_quadrature_surface(spec, init, params);
        inst.field = std::move(run.field);
        inst.mask = std::move(run.mask);
        inst.body = measures::support_hull(spec);
        inst.moll_radius = 2.0 * h;
    } else if (scenario == "ellipse-control") {
        fields::Grid grid = fields::make_centered_grid(2.125, h);
        fields::DomainMask mask = fields::mask_from_implicit(grid, [](Vec2 p) {
            return std::sqrt(p.x * p.x / 4.0 + p.y * p.y / 0.25) - 1.0;
        });
        measures::MeasureSpec spec = ring_measure(0.05, 2.0 * pi);
        measures::DiscretizedMeasure rhs = measures::deposit(spec, grid, 2.0 * h);
        inst.field = poisson::solve_dirichlet(mask, rhs);
        inst.mask = std::move(mask);
        inst.body = geometry::ConvexBody::disk({0.0, 0.0}, 0.05);
        inst.moll_radius = 2.0 * h;
    } else {
        throw Error(Errc::validation, "unknown scenario: " + scenario);
    }
    inst.max_u = fields::max_value(inst.field, inst.mask).value;
    return inst;
}

std::vector<ClaimReport> run_all(const std::string& scenario,
                                 const std::vector<int>& resolutions,
                                 const CheckConfig& config) {
    if (resolutions.empty())
        throw Error(Errc::validation, "at least one resolution required");
    std::vector<int> sorted = resolutions;
    std::sort(sorted.begin(), sorted.end());
    std::vector<Instance> instances;
    instances.reserve(sorted.size());
    for (int n : sorted) instances.push_back(build_instance(scenario, n));
    return run_all_instances(instances, config);
}

std::vector<ClaimReport> run_all_instances(const std::vector<Instance>& instances,
                                           const CheckConfig& config) {
    if (instances.empty())
        throw Error(Errc::validation, "at least one instance required");
    std::vector<ClaimReport> reports;
    for (const ClaimDef& def : kClaimDefs) {
        std::vector<Measurement> ms;
        ms.reserve(instances.size());
        for (const Instance& inst : instances) ms.push_back(def.fn(inst, config));
        reports.push_back(merge_reports(def, instances, ms));
    }
    return reports;
}

std::string report_json(const std::vector<ClaimReport>& reports, const std::string& scenario) {
    io::JsonWriter w;
    w.begin_object();
    w.key("scenario").string(scenario);
    w.key("resolutions").begin_array();
    if (!reports.empty())
        for (int n : reports.front().resolutions) w.number(n);
    w.end_array();
    w.key("reports").begin_array();
    for (const auto& r : reports) {
        w.begin_object();
        w.key("claim_id").string(r.claim_id);
        w.key("paper_ref").string(r.paper_ref);
        w.key("resolutions").begin_array();
        for (int n : r.resolutions) w.number(n);
        w.end_array();
        w.key("residual_max").begin_array();
        for (double v : r.residual_max) w.number(v);
        w.end_array();
        w.key("residual_mean").begin_array();
        for (double v : r.residual_mean) w.number(v);
        w.end_array();
        w.key("residual_l2").begin_array();
        for (double v : r.residual_l2) w.number(v);
        w.end_array();
        w.key("tau_pass").number(r.tau_pass);
        w.key("tau_fail").number(r.tau_fail);
        w.key("verdict").string(r.verdict);
        w.key("samples").begin_object();
        w.key("n_samples").number(r.n_samples);
        w.key("levels").begin_array();
        for (double v : r.levels) w.number(v);
        w.end_array();
        w.key("level_residuals").begin_array();
        for (double v : r.level_residuals) w.number(v);
        w.end_array();
        w.key("level_values").begin_array();
        for (double v : r.level_values) w.number(v);
        w.end_array();
        w.key("flagged").number(r.flagged);
        w.key("note").string(r.note);
        w.end_object();
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

} // namespace quadsurf::claims
