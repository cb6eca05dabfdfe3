#pragma once

#include <string>
#include <vector>

#include "quadsurf/vec2.hpp"

namespace quadsurf::geometry {

// Convex supports come in two shapes: a disk or a strictly convex polygon
// (counter-clockwise vertex order, no collinear triples).
struct ConvexBody {
    enum class Kind { disk, polygon };

    Kind kind = Kind::disk;
    Vec2 center;
    double radius = 0.0;
    std::vector<Vec2> vertices;

    static ConvexBody disk(Vec2 center, double radius);
    static ConvexBody polygon(std::vector<Vec2> vertices);

    double perimeter() const;
    // Signed test: negative strictly inside, ~0 on the boundary.
    bool contains(Vec2 p, double tol = 0.0) const;
};

// Throws Errc::invalid_body on degenerate input.
void validate_body(const ConvexBody& body);

struct NormalSample {
    Vec2 point;   // on the body boundary
    Vec2 normal;  // unit outward normal (a normal cone member at vertices)
    int arc_index = 0;
};

struct NormalRay {
    Vec2 origin;
    Vec2 direction; // unit
};

struct RadialDecomposition {
    Vec2 foot;    // nearest boundary point c
    double radius = 0.0;
    Vec2 normal;  // unit direction (x - foot) / radius
};

// Boundary samples ordered by arc position. Polygon vertices contribute a fan
// of normal directions with angular step <= 1 degree; edge samples are spaced
// at most perimeter / n_samples apart.
std::vector<NormalSample> sample_outer_normals(const ConvexBody& body, int n_samples);

// Metric projection of an exterior point: x = foot + radius * normal.
// Throws Errc::inside_body for interior points.
RadialDecomposition radial_decompose(Vec2 x, const ConvexBody& body);

// Euclidean distance between a closed half-line and the body (0 when they meet).
double ray_body_distance(const NormalRay& ray, const ConvexBody& body);

enum class PairMetric { chordal, geodesic };

struct BoundarySampleValue {
    Vec2 point;
    double value = 0.0;
};

struct LipschitzEstimate {
    double constant = 0.0;
    bool infinite = false;        // duplicate points carrying distinct values
    PairMetric metric = PairMetric::chordal;
};

// Pairwise max |v_i - v_j| / dist(p_i, p_j). Geodesic distance uses cumulative
// chord length along the sample order, treated as a closed loop.
LipschitzEstimate lipschitz_estimate(const std::vector<BoundarySampleValue>& samples,
                                     PairMetric metric = PairMetric::chordal);

} // namespace quadsurf::geometry
