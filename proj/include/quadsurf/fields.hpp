#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "quadsurf/vec2.hpp"

namespace quadsurf::fields {

// Uniform node-centered grid. Node (i, j) sits at origin + (i*h, j*h);
// storage is row major with i fastest.
struct Grid {
    Vec2 origin;
    double h = 0.0;
    int nx = 0;
    int ny = 0;

    int index(int i, int j) const { return j * nx + i; }
    Vec2 node(int i, int j) const { return {origin.x + i * h, origin.y + j * h}; }
    Vec2 max_corner() const { return node(nx - 1, ny - 1); }
    int node_count() const { return nx * ny; }
    bool same_layout(const Grid& o) const {
        return nx == o.nx && ny == o.ny && h == o.h &&
               origin.x == o.origin.x && origin.y == o.origin.y;
    }
};

// Symmetric grid covering [-half_width, half_width]^2 with an odd node count,
// so the origin is always a node.
Grid make_centered_grid(double half_width, double h);

void validate_grid(const Grid& grid);

struct ScalarField {
    Grid grid;
    std::vector<double> values;

    double& at(int i, int j) { return values[grid.index(i, j)]; }
    double at(int i, int j) const { return values[grid.index(i, j)]; }
};

ScalarField make_field(const Grid& grid, double fill = 0.0);
ScalarField field_from_function(const Grid& grid, const std::function<double(Vec2)>& f);

// Signed distance representation of the domain: phi < 0 inside, |grad phi| ~ 1.
struct DomainMask {
    Grid grid;
    std::vector<double> phi;

    double& at(int i, int j) { return phi[grid.index(i, j)]; }
    double at(int i, int j) const { return phi[grid.index(i, j)]; }
    bool inside(int i, int j) const { return at(i, j) < 0.0; }
};

// Exact signed distance of a disk; no redistancing needed.
DomainMask disk_mask(const Grid& grid, Vec2 center, double radius);

// Arbitrary implicit description (negative inside). The level function is
// sampled and then redistanced so downstream code can rely on |grad phi| ~ 1.
DomainMask mask_from_implicit(const Grid& grid, const std::function<double(Vec2)>& level_fn);

// Rebuild phi as a signed distance to its own zero level set by Godunov
// fast sweeping; the zero crossing positions are preserved.
void redistance(DomainMask& mask, int sweep_rounds = 3);

// Throws Errc::validation unless phi > 0 on the outermost `margin` node rings.
void validate_mask_margin(const DomainMask& mask, int margin = 4);

double interpolate_phi(const DomainMask& mask, Vec2 x);
// Unit outward normal of the zero level set, from interpolated central differences.
Vec2 mask_normal(const DomainMask& mask, Vec2 x);

// --- point evaluation -------------------------------------------------------

// Bilinear interpolation. Throws Errc::outside_domain when x leaves the grid.
double interpolate(const ScalarField& field, Vec2 x);

// Central differences over interpolated stencils with arm length h; exact on
// quadratics because the interpolation error cancels between the two arms.
Vec2 gradient(const ScalarField& field, Vec2 x);
double laplacian(const ScalarField& field, Vec2 x);

// Nodewise |grad u|^2 (one-sided at the outermost ring so values stay finite).
ScalarField grad_norm_sq(const ScalarField& field);

// Laplacian of w = |grad u|^2 at a point, with w evaluated on the fly.
double laplacian_of_w(const ScalarField& field, Vec2 x);

struct MaxValue {
    double value = 0.0;
    Vec2 location;
};

// Maximum over nodes with phi < 0.
MaxValue max_value(const ScalarField& field, const DomainMask& mask);

// --- level contours ---------------------------------------------------------

struct LevelContour {
    double level = 0.0;
    // Each component is a vertex chain; closed components repeat no vertex and
    // are oriented counter-clockwise around {field > level}.
    std::vector<std::vector<Vec2>> components;
    std::vector<bool> closed;
};

// Marching squares on {field > level} with deterministic component order.
LevelContour extract_contour(const ScalarField& field, double level);

// Zero level set of the mask, oriented counter-clockwise around the domain.
LevelContour mask_contour(const DomainMask& mask);

double polyline_length(const std::vector<Vec2>& pts, bool closed);
double polyline_signed_area(const std::vector<Vec2>& pts);

// n points spaced uniformly in arc length along the component with the
// largest enclosed area (the outer boundary).
std::vector<Vec2> resample_closed(const LevelContour& contour, int n);

// Distance from a point to a polyline (closed or open).
double point_polyline_distance(Vec2 p, const std::vector<Vec2>& pts, bool closed);

// Symmetric Hausdorff distance between two polylines, vertex-to-segment.
double hausdorff_distance(const std::vector<Vec2>& a, bool a_closed,
                          const std::vector<Vec2>& b, bool b_closed);

} // namespace quadsurf::fields
