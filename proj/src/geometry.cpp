#include "quadsurf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "quadsurf/error.hpp"

namespace quadsurf::geometry {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBoundaryTol = 1e-12;
constexpr double kFanStep = kPi / 180.0; // 1 degree

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b, Vec2* closest = nullptr) {
    Vec2 ab = b - a;
    double len2 = norm2(ab);
    double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    Vec2 q = a + t * ab;
    if (closest) *closest = q;
    return dist(p, q);
}

double point_ray_distance(Vec2 p, const NormalRay& ray) {
    double t = std::max(0.0, dot(p - ray.origin, ray.direction));
    return dist(p, ray.origin + t * ray.direction);
}

bool ray_hits_segment(const NormalRay& ray, Vec2 a, Vec2 b) {
    // Solve origin + t*dir = a + s*(b-a) with t >= 0, s in [0, 1].
    Vec2 ab = b - a;
    double denom = cross(ray.direction, ab);
    if (std::abs(denom) < 1e-15) return false; // parallel: endpoint candidates cover this
    Vec2 w = a - ray.origin;
    double t = cross(w, ab) / denom;
    double s = cross(w, ray.direction) / denom;
    return t >= 0.0 && s >= 0.0 && s <= 1.0;
}

bool polygon_contains(const std::vector<Vec2>& vs, Vec2 p, double tol) {
    size_t n = vs.size();
    for (size_t i = 0; i < n; ++i) {
        Vec2 a = vs[i], b = vs[(i + 1) % n];
        Vec2 e = b - a;
        // CCW order: interior points sit left of every edge.
        if (cross(e, p - a) < -tol * norm(e)) return false;
    }
    return true;
}

} // namespace

ConvexBody ConvexBody::disk(Vec2 center, double radius) {
    ConvexBody b;
    b.kind = Kind::disk;
    b.center = center;
    b.radius = radius;
    validate_body(b);
    return b;
}

ConvexBody ConvexBody::polygon(std::vector<Vec2> vertices) {
    ConvexBody b;
    b.kind = Kind::polygon;
    b.vertices = std::move(vertices);
    validate_body(b);
    return b;
}

double ConvexBody::perimeter() const {
    if (kind == Kind::disk) return 2.0 * kPi * radius;
    double p = 0.0;
    for (size_t i = 0; i < vertices.size(); ++i)
        p += dist(vertices[i], vertices[(i + 1) % vertices.size()]);
    return p;
}

bool ConvexBody::contains(Vec2 p, double tol) const {
    if (kind == Kind::disk) return dist(p, center) <= radius + tol;
    return polygon_contains(vertices, p, tol); // positive tol widens, as for disks
}

void validate_body(const ConvexBody& body) {
    if (body.kind == ConvexBody::Kind::disk) {
        if (!(body.radius > 0.0) || !std::isfinite(body.radius))
            throw Error(Errc::invalid_body, "disk radius must be positive");
        return;
    }
    const auto& vs = body.vertices;
    if (vs.size() < 3)
        throw Error(Errc::invalid_body, "polygon needs at least 3 vertices");
    double orientation = 0.0;
    for (size_t i = 0; i < vs.size(); ++i) {
        Vec2 a = vs[i];
        Vec2 b = vs[(i + 1) % vs.size()];
        Vec2 c = vs[(i + 2) % vs.size()];
        double turn = cross(b - a, c - b);
        if (std::abs(turn) < 1e-14)
            throw Error(Errc::invalid_body, "polygon has collinear vertices");
        if (orientation == 0.0) orientation = turn;
        if (turn * orientation < 0.0)
            throw Error(Errc::invalid_body, "polygon is not convex");
    }
    if (orientation < 0.0)
        throw Error(Errc::invalid_body, "polygon vertices must be counter-clockwise");
}

std::vector<NormalSample> sample_outer_normals(const ConvexBody& body, int n_samples) {
    validate_body(body);
    if (n_samples < 8)
        throw Error(Errc::precondition, "need at least 8 normal samples");

    std::vector<NormalSample> out;
    if (body.kind == ConvexBody::Kind::disk) {
        out.reserve(n_samples);
        for (int k = 0; k < n_samples; ++k) {
            double theta = 2.0 * kPi * k / n_samples;
            Vec2 u{std::cos(theta), std::sin(theta)};
            out.push_back({body.center + body.radius * u, u, k});
        }
        return out;
    }

    const auto& vs = body.vertices;
    size_t nv = vs.size();
    double spacing = body.perimeter() / n_samples;
    std::vector<Vec2> edge_normals(nv);
    for (size_t i = 0; i < nv; ++i) {
        Vec2 d = normalized(vs[(i + 1) % nv] - vs[i]);
        edge_normals[i] = {d.y, -d.x}; // outward for CCW order
    }

    int arc = 0;
    for (size_t i = 0; i < nv; ++i) {
        // Normal cone fan at vertex i, sweeping from the previous edge normal
        // to this edge's normal, endpoints included.
        Vec2 n_prev = edge_normals[(i + nv - 1) % nv];
        Vec2 n_next = edge_normals[i];
        double gamma = std::atan2(cross(n_prev, n_next), dot(n_prev, n_next));
        int steps = std::max(1, (int)std::ceil(std::abs(gamma) / kFanStep));
        for (int s = 0; s <= steps; ++s) {
            Vec2 dir = rotate(n_prev, gamma * s / steps);
            out.push_back({vs[i], normalized(dir), arc++});
        }
        // Interior samples of edge i, offset from both endpoints.
        Vec2 a = vs[i], b = vs[(i + 1) % nv];
        double len = dist(a, b);
        int m = std::max(1, (int)std::ceil(len / spacing));
        for (int k = 0; k < m; ++k) {
            double t = (k + 0.5) / m;
            out.push_back({a + t * (b - a), n_next, arc++});
        }
    }
    return out;
}

RadialDecomposition radial_decompose(Vec2 x, const ConvexBody& body) {
    validate_body(body);
    if (body.kind == ConvexBody::Kind::disk) {
        Vec2 v = x - body.center;
        double d = norm(v);
        if (d < body.radius - kBoundaryTol)
            throw Error(Errc::inside_body, "point lies inside the body");
        Vec2 u = d > 0.0 ? v / d : Vec2{1.0, 0.0};
        RadialDecomposition r;
        r.foot = body.center + body.radius * u;
        r.radius = std::max(0.0, d - body.radius);
        r.normal = u;
        return r;
    }

    const auto& vs = body.vertices;
    double best = std::numeric_limits<double>::infinity();
    Vec2 best_foot;
    size_t best_edge = 0;
    for (size_t i = 0; i < vs.size(); ++i) {
        Vec2 q;
        double d = point_segment_distance(x, vs[i], vs[(i + 1) % vs.size()], &q);
        if (d < best) {
            best = d;
            best_foot = q;
            best_edge = i;
        }
    }
    if (best < kBoundaryTol) {
        // On the boundary: report the outward normal of the owning feature.
        Vec2 d0 = normalized(vs[(best_edge + 1) % vs.size()] - vs[best_edge]);
        return {x, 0.0, Vec2{d0.y, -d0.x}};
    }
    if (polygon_contains(vs, x, kBoundaryTol))
        throw Error(Errc::inside_body, "point lies inside the body");
    RadialDecomposition r;
    r.foot = best_foot;
    r.radius = best;
    r.normal = (x - best_foot) / best;
    return r;
}

double ray_body_distance(const NormalRay& ray_in, const ConvexBody& body) {
    validate_body(body);
    NormalRay ray{ray_in.origin, normalized(ray_in.direction)};
    if (norm(ray.direction) == 0.0)
        throw Error(Errc::precondition, "ray direction must be nonzero");

    if (body.kind == ConvexBody::Kind::disk) {
        double d = point_ray_distance(body.center, ray);
        return std::max(0.0, d - body.radius);
    }

    const auto& vs = body.vertices;
    if (polygon_contains(vs, ray.origin, 0.0)) return 0.0;
    for (size_t i = 0; i < vs.size(); ++i)
        if (ray_hits_segment(ray, vs[i], vs[(i + 1) % vs.size()])) return 0.0;
    // Disjoint convex shapes: the minimum is attained at a vertex of one shape
    // projected onto the other.
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < vs.size(); ++i) {
        best = std::min(best, point_ray_distance(vs[i], ray));
        best = std::min(best, point_segment_distance(ray.origin, vs[i], vs[(i + 1) % vs.size()]));
    }
    return best;
}

LipschitzEstimate lipschitz_estimate(const std::vector<BoundarySampleValue>& samples,
                                     PairMetric metric) {
    if (samples.size() < 2)
        throw Error(Errc::precondition, "need at least 2 samples");

    LipschitzEstimate est;
    est.metric = metric;

    std::vector<double> arc;
    double total = 0.0;
    if (metric == PairMetric::geodesic) {
        arc.resize(samples.size(), 0.0);
        for (size_t i = 1; i < samples.size(); ++i)
            arc[i] = arc[i - 1] + dist(samples[i].point, samples[i - 1].point);
        total = arc.back() + dist(samples.front().point, samples.back().point);
    }

    for (size_t i = 0; i < samples.size(); ++i) {
        for (size_t j = i + 1; j < samples.size(); ++j) {
            double d;
            if (metric == PairMetric::chordal) {
                d = dist(samples[i].point, samples[j].point);
            } else {
                double along = std::abs(arc[j] - arc[i]);
                d = std::min(along, total - along);
            }
            double dv = std::abs(samples[i].value - samples[j].value);
            if (d < 1e-14) {
                if (dv > 1e-12) est.infinite = true;
                continue;
            }
            est.constant = std::max(est.constant, dv / d);
        }
    }
    return est;
}

} // namespace quadsurf::geometry
