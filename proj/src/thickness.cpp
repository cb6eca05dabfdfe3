#include "quadsurf/thickness.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "quadsurf/error.hpp"
#include "quadsurf/io.hpp"

namespace quadsurf::thickness {

namespace {

template <typename F>
double bisect(double lo, double hi, double flo, F&& f, double tol) {
    // flo and f(hi) straddle zero; keep the sign convention of flo.
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

RayProfile ray_profile(const FieldEval& field, const MaskEval& mask,
                       const geometry::NormalSample& sample, double dr, double r_limit) {
    if (dr <= 0.0) dr = field.scan_step();
    if (mask.phi(sample.point) > 0.0)
        throw Error(Errc::precondition, "ray origin lies outside the domain");

    RayProfile p;
    p.sample = sample;
    double v0 = field.value(sample.point);
    p.radii.push_back(0.0);
    p.values.push_back(v0);
    for (double r = dr; r <= r_limit; r += dr) {
        double v = field.value(sample.point + r * sample.normal);
        p.radii.push_back(r);
        p.values.push_back(v);
        if (v0 > 0.0 && v <= 0.0) {
            p.reached_boundary = true;
            break;
        }
    }
    return p;
}

double outer_extent(const MaskEval& mask, const geometry::NormalSample& sample,
                    double r_limit, double dr, double tol_scale) {
    if (dr <= 0.0) dr = mask.scan_step();
    double prev = mask.phi(sample.point);
    if (prev > 0.0)
        throw Error(Errc::precondition, "ray origin lies outside the domain");

    double r_prev = 0.0;
    for (double r = dr;; r += dr) {
        if (r > r_limit + dr)
            throw Error(Errc::unbounded_ray, "no boundary crossing before the ray limit");
        double v = mask.phi(sample.point + r * sample.normal);
        if (prev < 0.0 && v >= 0.0) {
            auto f = [&](double s) { return mask.phi(sample.point + s * sample.normal); };
            return bisect(r_prev, r, prev, f, tol_scale * dr);
        }
        prev = v;
        r_prev = r;
    }
}

LevelRoot level_thickness(const FieldEval& field, const geometry::NormalSample& sample,
                          double t, double r_max, double dr) {
    if (dr <= 0.0) dr = field.scan_step();
    double v0 = field.value(sample.point);
    if (t >= v0)
        throw Error(Errc::level_above_ray, "level is not below the profile start value");

    LevelRoot out;
    bool found = false;
    double prev = v0 - t;
    double r_prev = 0.0;
    for (double r = dr; r <= r_max + 0.5 * dr; r += dr) {
        double v = field.value(sample.point + r * sample.normal) - t;
        if (!found && prev > 0.0 && v <= 0.0) {
            auto f = [&](double s) { return field.value(sample.point + s * sample.normal) - t; };
            out.d_t = bisect(r_prev, r, prev, f, 1e-9 * dr);
            found = true;
        } else if (found && prev * v < 0.0) {
            ++out.extra_crossings;
        }
        prev = v;
        r_prev = r;
    }
    if (!found)
        throw Error(Errc::unbounded_ray, "level crossing not found on the ray");
    return out;
}

double thickness_derivative(const FieldEval& field, const geometry::NormalSample& sample,
                            double t, double r_max, double dt) {
    if (!(dt > 0.0)) throw Error(Errc::precondition, "dt must be positive");
    auto root = [&](double level) {
        return level_thickness(field, sample, level, r_max).d_t;
    };
    auto slope = [&](double step) {
        return (root(t + step) - root(t - step)) / (2.0 * step);
    };
    double s1 = slope(dt);
    double s2 = slope(0.5 * dt);
    return (4.0 * s2 - s1) / 3.0;
}

double predicted_slope(const FieldEval& field, Vec2 level_point) {
    double g = norm(field.grad(level_point));
    if (!(g > 0.0))
        throw Error(Errc::precondition, "vanishing gradient at the level point");
    return -1.0 / g;
}

ThicknessTable build_table(const FieldEval& field, const MaskEval& mask,
                           const geometry::ConvexBody& body, int n_samples,
                           const std::vector<double>& levels, double r_limit) {
    ThicknessTable table;
    table.samples = geometry::sample_outer_normals(body, n_samples);
    table.levels.push_back(0.0);
    for (double t : levels) table.levels.push_back(t);

    for (const auto& s : table.samples) {
        std::vector<double> row;
        std::vector<int> flag_row;
        double d0 = outer_extent(mask, s, r_limit);
        row.push_back(d0);
        flag_row.push_back(0);
        for (double t : levels) {
            try {
                LevelRoot r = level_thickness(field, s, t, d0);
                row.push_back(r.d_t);
                flag_row.push_back(r.extra_crossings > 0 ? 1 : 0);
            } catch (const Error&) {
                row.push_back(0.0);
                flag_row.push_back(2);
            }
        }
        table.d.push_back(std::move(row));
        table.flags.push_back(std::move(flag_row));
    }
    return table;
}

std::string table_csv(const ThicknessTable& table) {
    std::string out = "c_index,cx,cy,nux,nuy,t,d_t,flag\n";
    for (std::size_t i = 0; i < table.samples.size(); ++i) {
        const auto& s = table.samples[i];
        for (std::size_t l = 0; l < table.levels.size(); ++l) {
            out += std::to_string(i) + "," + io::format_number(s.point.x) + "," +
                   io::format_number(s.point.y) + "," + io::format_number(s.normal.x) + "," +
                   io::format_number(s.normal.y) + "," + io::format_number(table.levels[l]) +
                   "," + io::format_number(table.d[i][l]) + "," +
                   std::to_string(table.flags[i][l]) + "\n";
        }
    }
    return out;
}

} // namespace quadsurf::thickness
