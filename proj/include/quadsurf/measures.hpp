#pragma once

#include <string>
#include <vector>

#include "quadsurf/fields.hpp"
#include "quadsurf/geometry.hpp"
#include "quadsurf/vec2.hpp"

namespace quadsurf::measures {

// Finite positive measure built from point atoms, uniform circle (curve)
// measures and uniform region measures.
struct MeasureSpec {
    struct Atom {
        Vec2 x;
        double mass = 0.0;
    };
    struct UniformCircle {
        Vec2 center;
        double radius = 0.0;
        double total_mass = 0.0;
    };
    struct UniformRegion {
        geometry::ConvexBody region; // polygon or disk
        double total_mass = 0.0;
    };

    int dim = 2;
    std::vector<Atom> atoms;
    std::vector<UniformCircle> uniform_circles;
    std::vector<UniformRegion> uniform_regions;
};

// Throws Errc::validation for empty measures, nonpositive masses or dim != 2.
void validate(const MeasureSpec& spec);

double total_mass(const MeasureSpec& spec);

// Convex hull of the union of supports. Atoms only give the exact hull
// polygon; a single circle gives its disk; any mixture involving circles or
// disk regions is covered by the smallest enclosing disk of the supports.
geometry::ConvexBody support_hull(const MeasureSpec& spec);

struct DiscretizedMeasure {
    fields::Grid grid;
    std::vector<double> density;
    double mollification_radius = 0.0;

    double& at(int i, int j) { return density[grid.index(i, j)]; }
    double at(int i, int j) const { return density[grid.index(i, j)]; }
};

// Grid density with sum(density) * h^2 equal to the total mass to round-off.
// Atoms and circle measures are spread with a compact C^1 bump of the given
// radius (>= 2h); region measures become cell-averaged densities.
DiscretizedMeasure deposit(const MeasureSpec& spec, const fields::Grid& grid,
                           double mollification_radius);

// JSON round trip. Field names are part of the persistence contract.
MeasureSpec measure_from_json(const std::string& text);
std::string measure_to_json(const MeasureSpec& spec);
MeasureSpec load_measure(const std::string& path);

} // namespace quadsurf::measures
