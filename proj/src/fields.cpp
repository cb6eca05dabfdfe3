#include "quadsurf/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "quadsurf/error.hpp"

namespace quadsurf::fields {

namespace {

struct CellLocation {
    int i, j;
    double fx, fy; // fractions in [0, 1)
};

CellLocation locate(const Grid& g, Vec2 x) {
    double fx = (x.x - g.origin.x) / g.h;
    double fy = (x.y - g.origin.y) / g.h;
    int i = (int)std::floor(fx);
    int j = (int)std::floor(fy);
    // Points on the far edge still belong to the last cell.
    if (i == g.nx - 1 && fx <= g.nx - 1 + 1e-12) i = g.nx - 2;
    if (j == g.ny - 1 && fy <= g.ny - 1 + 1e-12) j = g.ny - 2;
    if (i < 0 || j < 0 || i > g.nx - 2 || j > g.ny - 2)
        throw Error(Errc::outside_domain, "point outside the grid");
    return {i, j, fx - i, fy - j};
}

double bilinear(const Grid& g, const std::vector<double>& v, Vec2 x) {
    CellLocation c = locate(g, x);
    double v00 = v[g.index(c.i, c.j)];
    double v10 = v[g.index(c.i + 1, c.j)];
    double v01 = v[g.index(c.i, c.j + 1)];
    double v11 = v[g.index(c.i + 1, c.j + 1)];
    return (1 - c.fx) * (1 - c.fy) * v00 + c.fx * (1 - c.fy) * v10 +
           (1 - c.fx) * c.fy * v01 + c.fx * c.fy * v11;
}

} // namespace

Grid make_centered_grid(double half_width, double h) {
    if (!(h > 0.0)) throw Error(Errc::validation, "grid spacing must be positive");
    int m = (int)std::lround(half_width / h);
    Grid g;
    g.h = h;
    g.nx = g.ny = 2 * m + 1;
    g.origin = {-m * h, -m * h};
    validate_grid(g);
    return g;
}

void validate_grid(const Grid& grid) {
    if (grid.nx < 16 || grid.ny < 16)
        throw Error(Errc::validation, "grid must have at least 16 nodes per side");
    if (!(grid.h > 0.0) || !std::isfinite(grid.h))
        throw Error(Errc::validation, "grid spacing must be positive");
}

ScalarField make_field(const Grid& grid, double fill) {
    validate_grid(grid);
    ScalarField f;
    f.grid = grid;
    f.values.assign(grid.node_count(), fill);
    return f;
}

ScalarField field_from_function(const Grid& grid, const std::function<double(Vec2)>& fn) {
    ScalarField f = make_field(grid);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            f.at(i, j) = fn(grid.node(i, j));
    return f;
}

DomainMask disk_mask(const Grid& grid, Vec2 center, double radius) {
    validate_grid(grid);
    DomainMask m;
    m.grid = grid;
    m.phi.resize(grid.node_count());
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            m.phi[grid.index(i, j)] = dist(grid.node(i, j), center) - radius;
    validate_mask_margin(m);
    return m;
}

DomainMask mask_from_implicit(const Grid& grid, const std::function<double(Vec2)>& level_fn) {
    validate_grid(grid);
    DomainMask m;
    m.grid = grid;
    m.phi.resize(grid.node_count());
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            m.phi[grid.index(i, j)] = level_fn(grid.node(i, j));
    redistance(m);
    validate_mask_margin(m);
    return m;
}

void redistance(DomainMask& mask, int sweep_rounds) {
    const Grid& g = mask.grid;
    const double h = g.h;
    const double big = 1e30;
    std::vector<double> dist_val(g.node_count(), big);
    std::vector<char> frozen(g.node_count(), 0);
    const std::vector<double>& p = mask.phi;

    // Seed nodes adjacent to the interface with their distance to the zero
    // crossing, estimated from the crossing fractions along both axes.
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            int id = g.index(i, j);
            double pc = p[id];
            double tx = big, ty = big;
            if (i + 1 < g.nx && pc * p[g.index(i + 1, j)] < 0.0)
                tx = std::min(tx, std::abs(pc) / (std::abs(pc) + std::abs(p[g.index(i + 1, j)])));
            if (i - 1 >= 0 && pc * p[g.index(i - 1, j)] < 0.0)
                tx = std::min(tx, std::abs(pc) / (std::abs(pc) + std::abs(p[g.index(i - 1, j)])));
            if (j + 1 < g.ny && pc * p[g.index(i, j + 1)] < 0.0)
                ty = std::min(ty, std::abs(pc) / (std::abs(pc) + std::abs(p[g.index(i, j + 1)])));
            if (j - 1 >= 0 && pc * p[g.index(i, j - 1)] < 0.0)
                ty = std::min(ty, std::abs(pc) / (std::abs(pc) + std::abs(p[g.index(i, j - 1)])));
            if (pc == 0.0) {
                dist_val[id] = 0.0;
                frozen[id] = 1;
            } else if (tx < big && ty < big) {
                dist_val[id] = h * tx * ty / std::sqrt(tx * tx + ty * ty);
                frozen[id] = 1;
            } else if (tx < big) {
                dist_val[id] = h * tx;
                frozen[id] = 1;
            } else if (ty < big) {
                dist_val[id] = h * ty;
                frozen[id] = 1;
            }
        }
    }

    auto godunov_update = [&](int i, int j) {
        int id = g.index(i, j);
        if (frozen[id]) return;
        double a = big, b = big;
        if (i - 1 >= 0) a = std::min(a, dist_val[g.index(i - 1, j)]);
        if (i + 1 < g.nx) a = std::min(a, dist_val[g.index(i + 1, j)]);
        if (j - 1 >= 0) b = std::min(b, dist_val[g.index(i, j - 1)]);
        if (j + 1 < g.ny) b = std::min(b, dist_val[g.index(i, j + 1)]);
        if (a >= big && b >= big) return;
        double d;
        if (std::abs(a - b) >= h) {
            d = std::min(a, b) + h;
        } else {
            double s = a + b;
            d = 0.5 * (s + std::sqrt(2.0 * h * h - (a - b) * (a - b)));
        }
        dist_val[id] = std::min(dist_val[id], d);
    };

    for (int round = 0; round < sweep_rounds; ++round) {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) godunov_update(i, j);
        for (int j = 0; j < g.ny; ++j)
            for (int i = g.nx - 1; i >= 0; --i) godunov_update(i, j);
        for (int j = g.ny - 1; j >= 0; --j)
            for (int i = 0; i < g.nx; ++i) godunov_update(i, j);
        for (int j = g.ny - 1; j >= 0; --j)
            for (int i = g.nx - 1; i >= 0; --i) godunov_update(i, j);
    }

    for (int id = 0; id < g.node_count(); ++id)
        mask.phi[id] = (p[id] < 0.0 ? -1.0 : 1.0) * dist_val[id];
}

void validate_mask_margin(const DomainMask& mask, int margin) {
    const Grid& g = mask.grid;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            bool on_ring = i < margin || j < margin || i >= g.nx - margin || j >= g.ny - margin;
            if (on_ring && mask.at(i, j) <= 0.0)
                throw Error(Errc::validation, "domain touches the grid margin");
        }
    }
}

double interpolate_phi(const DomainMask& mask, Vec2 x) {
    return bilinear(mask.grid, mask.phi, x);
}

Vec2 mask_normal(const DomainMask& mask, Vec2 x) {
    double h = mask.grid.h;
    double gx = (bilinear(mask.grid, mask.phi, {x.x + h, x.y}) -
                 bilinear(mask.grid, mask.phi, {x.x - h, x.y})) / (2.0 * h);
    double gy = (bilinear(mask.grid, mask.phi, {x.x, x.y + h}) -
                 bilinear(mask.grid, mask.phi, {x.x, x.y - h})) / (2.0 * h);
    return normalized({gx, gy});
}

double interpolate(const ScalarField& field, Vec2 x) {
    return bilinear(field.grid, field.values, x);
}

Vec2 gradient(const ScalarField& field, Vec2 x) {
    double h = field.grid.h;
    double gx = (interpolate(field, {x.x + h, x.y}) - interpolate(field, {x.x - h, x.y})) / (2 * h);
    double gy = (interpolate(field, {x.x, x.y + h}) - interpolate(field, {x.x, x.y - h})) / (2 * h);
    return {gx, gy};
}

double laplacian(const ScalarField& field, Vec2 x) {
    double h = field.grid.h;
    double c = interpolate(field, x);
    double sx = interpolate(field, {x.x + h, x.y}) + interpolate(field, {x.x - h, x.y});
    double sy = interpolate(field, {x.x, x.y + h}) + interpolate(field, {x.x, x.y - h});
    return (sx + sy - 4.0 * c) / (h * h);
}

ScalarField grad_norm_sq(const ScalarField& field) {
    const Grid& g = field.grid;
    ScalarField w = make_field(g);
    double h2 = 2.0 * g.h;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double gx, gy;
            if (i == 0)
                gx = (field.at(1, j) - field.at(0, j)) / g.h;
            else if (i == g.nx - 1)
                gx = (field.at(i, j) - field.at(i - 1, j)) / g.h;
            else
                gx = (field.at(i + 1, j) - field.at(i - 1, j)) / h2;
            if (j == 0)
                gy = (field.at(i, 1) - field.at(i, 0)) / g.h;
            else if (j == g.ny - 1)
                gy = (field.at(i, j) - field.at(i, j - 1)) / g.h;
            else
                gy = (field.at(i, j + 1) - field.at(i, j - 1)) / h2;
            w.at(i, j) = gx * gx + gy * gy;
        }
    }
    return w;
}

double laplacian_of_w(const ScalarField& field, Vec2 x) {
    double h = field.grid.h;
    auto w_at = [&](Vec2 p) {
        Vec2 gr = gradient(field, p);
        return norm2(gr);
    };
    double c = w_at(x);
    double sx = w_at({x.x + h, x.y}) + w_at({x.x - h, x.y});
    double sy = w_at({x.x, x.y + h}) + w_at({x.x, x.y - h});
    return (sx + sy - 4.0 * c) / (h * h);
}

MaxValue max_value(const ScalarField& field, const DomainMask& mask) {
    if (!field.grid.same_layout(mask.grid))
        throw Error(Errc::precondition, "field and mask grids differ");
    MaxValue best;
    best.value = -std::numeric_limits<double>::infinity();
    const Grid& g = field.grid;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (!mask.inside(i, j)) continue;
            double v = field.at(i, j);
            if (v > best.value) {
                best.value = v;
                best.location = g.node(i, j);
            }
        }
    }
    if (!std::isfinite(best.value))
        throw Error(Errc::precondition, "mask has no interior nodes");
    return best;
}

// --- marching squares -------------------------------------------------------

namespace {

// Edge keys identify interpolated crossing points uniquely: horizontal edge
// from node (i,j) to (i+1,j) gets key 2*index, vertical edge to (i,j+1) gets
// 2*index+1.
struct Segment {
    long long from_key, to_key;
    Vec2 from_pt, to_pt;
};

Vec2 edge_point(const Grid& g, const std::vector<double>& v, double t,
                int i0, int j0, int i1, int j1) {
    double a = v[g.index(i0, j0)] - t;
    double b = v[g.index(i1, j1)] - t;
    double s = a / (a - b);
    Vec2 p0 = g.node(i0, j0), p1 = g.node(i1, j1);
    return p0 + s * (p1 - p0);
}

} // namespace

LevelContour extract_contour(const ScalarField& field, double level) {
    const Grid& g = field.grid;
    const std::vector<double>& v = field.values;
    LevelContour out;
    out.level = level;

    std::vector<Segment> segments;
    auto hkey = [&](int i, int j) { return 2LL * g.index(i, j); };
    auto vkey = [&](int i, int j) { return 2LL * g.index(i, j) + 1; };

    for (int j = 0; j < g.ny - 1; ++j) {
        for (int i = 0; i < g.nx - 1; ++i) {
            bool b0 = v[g.index(i, j)] > level;         // bottom-left
            bool b1 = v[g.index(i + 1, j)] > level;     // bottom-right
            bool b2 = v[g.index(i + 1, j + 1)] > level; // top-right
            bool b3 = v[g.index(i, j + 1)] > level;     // top-left
            int code = (b0 ? 1 : 0) | (b1 ? 2 : 0) | (b2 ? 4 : 0) | (b3 ? 8 : 0);
            if (code == 0 || code == 15) continue;

            // Crossing points on the four cell edges (computed lazily below).
            auto bottom = [&] { return edge_point(g, v, level, i, j, i + 1, j); };
            auto right = [&] { return edge_point(g, v, level, i + 1, j, i + 1, j + 1); };
            auto top = [&] { return edge_point(g, v, level, i, j + 1, i + 1, j + 1); };
            auto left = [&] { return edge_point(g, v, level, i, j, i, j + 1); };
            long long kb = hkey(i, j), kr = vkey(i + 1, j), kt = hkey(i, j + 1), kl = vkey(i, j);

            // Each directed segment keeps {field > level} on its left.
            auto emit = [&](long long ka, Vec2 pa, long long kc, Vec2 pc) {
                segments.push_back({ka, kc, pa, pc});
            };
            switch (code) {
                case 1: emit(kb, bottom(), kl, left()); break;
                case 2: emit(kr, right(), kb, bottom()); break;
                case 3: emit(kr, right(), kl, left()); break;
                case 4: emit(kt, top(), kr, right()); break;
                case 6: emit(kt, top(), kb, bottom()); break;
                case 7: emit(kt, top(), kl, left()); break;
                case 8: emit(kl, left(), kt, top()); break;
                case 9: emit(kb, bottom(), kt, top()); break;
                case 11: emit(kr, right(), kt, top()); break;
                case 12: emit(kl, left(), kr, right()); break;
                case 13: emit(kb, bottom(), kr, right()); break;
                case 14: emit(kl, left(), kb, bottom()); break;
                case 5: { // saddle: corners b0 and b2 inside
                    double center = 0.25 * (v[g.index(i, j)] + v[g.index(i + 1, j)] +
                                            v[g.index(i + 1, j + 1)] + v[g.index(i, j + 1)]);
                    if (center > level) {
                        emit(kt, top(), kl, left());
                        emit(kb, bottom(), kr, right());
                    } else {
                        emit(kb, bottom(), kl, left());
                        emit(kt, top(), kr, right());
                    }
                    break;
                }
                case 10: { // saddle: corners b1 and b3 inside
                    double center = 0.25 * (v[g.index(i, j)] + v[g.index(i + 1, j)] +
                                            v[g.index(i + 1, j + 1)] + v[g.index(i, j + 1)]);
                    if (center > level) {
                        emit(kl, left(), kb, bottom());
                        emit(kr, right(), kt, top());
                    } else {
                        emit(kl, left(), kt, top());
                        emit(kr, right(), kb, bottom());
                    }
                    break;
                }
            }
        }
    }

    // Chain segments into polylines; traversal order is the creation order,
    // which makes component ids deterministic.
    std::unordered_map<long long, int> by_start;
    by_start.reserve(segments.size() * 2);
    for (size_t s = 0; s < segments.size(); ++s) by_start[segments[s].from_key] = (int)s;
    std::vector<char> used(segments.size(), 0);

    for (size_t s0 = 0; s0 < segments.size(); ++s0) {
        if (used[s0]) continue;
        std::vector<Vec2> chain;
        bool closed = false;
        size_t cur = s0;
        chain.push_back(segments[cur].from_pt);
        while (true) {
            used[cur] = 1;
            chain.push_back(segments[cur].to_pt);
            auto it = by_start.find(segments[cur].to_key);
            if (it == by_start.end() || used[it->second]) break;
            cur = it->second;
            if (segments[cur].from_key == segments[s0].from_key) break;
        }
        if (chain.size() > 2 && segments[cur].to_key == segments[s0].from_key) {
            closed = true;
            chain.pop_back(); // closing vertex duplicates the first
        }
        out.components.push_back(std::move(chain));
        out.closed.push_back(closed);
    }
    return out;
}

LevelContour mask_contour(const DomainMask& mask) {
    ScalarField neg = make_field(mask.grid);
    for (int id = 0; id < mask.grid.node_count(); ++id) neg.values[id] = -mask.phi[id];
    LevelContour c = extract_contour(neg, 0.0);
    c.level = 0.0;
    return c;
}

double polyline_length(const std::vector<Vec2>& pts, bool closed) {
    double len = 0.0;
    for (size_t i = 1; i < pts.size(); ++i) len += dist(pts[i], pts[i - 1]);
    if (closed && pts.size() > 1) len += dist(pts.front(), pts.back());
    return len;
}

double polyline_signed_area(const std::vector<Vec2>& pts) {
    double a = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        Vec2 p = pts[i], q = pts[(i + 1) % pts.size()];
        a += cross(p, q);
    }
    return 0.5 * a;
}

std::vector<Vec2> resample_closed(const LevelContour& contour, int n) {
    if (contour.components.empty())
        throw Error(Errc::precondition, "contour has no components");
    int best = -1;
    double best_area = -1.0;
    for (size_t c = 0; c < contour.components.size(); ++c) {
        if (!contour.closed[c]) continue;
        double a = std::abs(polyline_signed_area(contour.components[c]));
        if (a > best_area) {
            best_area = a;
            best = (int)c;
        }
    }
    if (best < 0)
        throw Error(Errc::precondition, "contour has no closed component");
    const auto& pts = contour.components[best];
    double total = polyline_length(pts, true);

    std::vector<Vec2> out;
    out.reserve(n);
    size_t seg = 0;
    double seg_start = 0.0;
    auto seg_len = [&](size_t k) { return dist(pts[(k + 1) % pts.size()], pts[k]); };
    for (int k = 0; k < n; ++k) {
        double target = total * k / n;
        while (seg_start + seg_len(seg) < target && seg + 1 < pts.size() + 1) {
            seg_start += seg_len(seg);
            ++seg;
            if (seg >= pts.size()) { seg = pts.size() - 1; break; }
        }
        double local = seg_len(seg) > 0.0 ? (target - seg_start) / seg_len(seg) : 0.0;
        local = std::clamp(local, 0.0, 1.0);
        Vec2 a = pts[seg], b = pts[(seg + 1) % pts.size()];
        out.push_back(a + local * (b - a));
    }
    return out;
}

double point_polyline_distance(Vec2 p, const std::vector<Vec2>& pts, bool closed) {
    double best = std::numeric_limits<double>::infinity();
    size_t n = pts.size();
    if (n == 1) return dist(p, pts[0]);
    size_t segs = closed ? n : n - 1;
    for (size_t k = 0; k < segs; ++k) {
        Vec2 a = pts[k], b = pts[(k + 1) % n];
        Vec2 ab = b - a;
        double len2 = norm2(ab);
        double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
        best = std::min(best, dist(p, a + t * ab));
    }
    return best;
}

double hausdorff_distance(const std::vector<Vec2>& a, bool a_closed,
                          const std::vector<Vec2>& b, bool b_closed) {
    double d = 0.0;
    for (const Vec2& p : a) d = std::max(d, point_polyline_distance(p, b, b_closed));
    for (const Vec2& p : b) d = std::max(d, point_polyline_distance(p, a, a_closed));
    return d;
}

} // namespace quadsurf::fields
