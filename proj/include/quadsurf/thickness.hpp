#pragma once

#include <string>
#include <vector>

#include "quadsurf/field_eval.hpp"
#include "quadsurf/geometry.hpp"

namespace quadsurf::thickness {

// Profile of the field along c + r * normal, recorded until the first sign
// change of the field value (the domain boundary for well-posed fields).
struct RayProfile {
    geometry::NormalSample sample;
    std::vector<double> radii;
    std::vector<double> values;
    bool reached_boundary = false;
};

RayProfile ray_profile(const FieldEval& field, const MaskEval& mask,
                       const geometry::NormalSample& sample, double dr, double r_limit);

// First zero crossing of phi along the outward normal ray: the boundary
// distance d(c). Throws Errc::unbounded_ray when no crossing is found before
// r_limit and Errc::precondition when the ray starts outside the domain.
double outer_extent(const MaskEval& mask, const geometry::NormalSample& sample,
                    double r_limit, double dr = 0.0, double tol_scale = 1e-9);

struct LevelRoot {
    double d_t = 0.0;
    // Sign recrossings of (value - t) after the first root; nonzero counts
    // flag non-monotone profiles.
    int extra_crossings = 0;
};

// First root of value(c + r nu) = t on [0, r_max], bracketed at dr and
// polished by bisection.
LevelRoot level_thickness(const FieldEval& field, const geometry::NormalSample& sample,
                          double t, double r_max, double dr = 0.0);

// Central difference of d_t in t with Richardson extrapolation over dt, dt/2.
double thickness_derivative(const FieldEval& field, const geometry::NormalSample& sample,
                            double t, double r_max, double dt);

// Slope predicted from the spatial gradient at the level point: -1/|grad u|.
double predicted_slope(const FieldEval& field, Vec2 level_point);

struct ThicknessTable {
    std::vector<geometry::NormalSample> samples;
    std::vector<double> levels;            // includes the leading 0 column
    std::vector<std::vector<double>> d;    // [sample][level]
    std::vector<std::vector<int>> flags;   // 0 ok, 1 non-monotone, 2 level unreachable
};

ThicknessTable build_table(const FieldEval& field, const MaskEval& mask,
                           const geometry::ConvexBody& body, int n_samples,
                           const std::vector<double>& levels, double r_limit);

// Columns: c_index,cx,cy,nux,nuy,t,d_t,flag; rows ordered by (sample, level).
std::string table_csv(const ThicknessTable& table);

} // namespace quadsurf::thickness
