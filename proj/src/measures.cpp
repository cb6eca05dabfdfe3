#include "quadsurf/measures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "quadsurf/error.hpp"
#include "quadsurf/io.hpp"

namespace quadsurf::measures {

namespace {

constexpr double kPi = 3.14159265358979323846;

// C^1 compact bump, unit integral over the plane for radius eps.
double bump(double s, double eps) {
    if (s >= eps) return 0.0;
    double q = 1.0 - (s / eps) * (s / eps);
    return 3.0 / (kPi * eps * eps) * q * q;
}

void require_inside_grid(const fields::Grid& g, Vec2 p, double pad, const char* what) {
    Vec2 lo = g.origin, hi = g.max_corner();
    if (p.x - pad < lo.x || p.y - pad < lo.y || p.x + pad > hi.x || p.y + pad > hi.y)
        throw Error(Errc::out_of_grid, std::string(what) + " support does not fit on the grid");
}

// Stamp `mass` at `center` using the bump kernel; returns the deposited nodal sum.
void stamp(std::vector<double>& density, const fields::Grid& g, Vec2 center,
           double mass, double eps) {
    int i0 = std::max(0, (int)std::floor((center.x - eps - g.origin.x) / g.h));
    int j0 = std::max(0, (int)std::floor((center.y - eps - g.origin.y) / g.h));
    int i1 = std::min(g.nx - 1, (int)std::ceil((center.x + eps - g.origin.x) / g.h));
    int j1 = std::min(g.ny - 1, (int)std::ceil((center.y + eps - g.origin.y) / g.h));
    for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i)
            density[g.index(i, j)] += mass * bump(dist(g.node(i, j), center), eps);
}

// Exact renormalization of one component so its nodal sum * h^2 matches mass.
void renormalize(std::vector<double>& component, double h, double mass) {
    double sum = 0.0;
    for (double v : component) sum += v;
    sum *= h * h;
    if (!(sum > 0.0))
        throw Error(Errc::out_of_grid, "measure component deposits no mass on the grid");
    double scale = mass / sum;
    for (double& v : component) v *= scale;
}

std::vector<Vec2> enclosing_points(const MeasureSpec& spec) {
    std::vector<Vec2> pts;
    for (const auto& a : spec.atoms) pts.push_back(a.x);
    // Circles and disk regions are densely sampled; a slight inflation below
    // restores guaranteed containment.
    const int kArc = 256;
    auto add_circle = [&](Vec2 c, double r) {
        for (int k = 0; k < kArc; ++k) {
            double th = 2.0 * kPi * k / kArc;
            pts.push_back(c + r * Vec2{std::cos(th), std::sin(th)});
        }
    };
    for (const auto& c : spec.uniform_circles) add_circle(c.center, c.radius);
    for (const auto& r : spec.uniform_regions) {
        if (r.region.kind == geometry::ConvexBody::Kind::disk)
            add_circle(r.region.center, r.region.radius);
        else
            for (Vec2 v : r.region.vertices) pts.push_back(v);
    }
    return pts;
}

// Smallest enclosing disk, Welzl's move-to-front variant with deterministic
// input order.
struct Disk {
    Vec2 c;
    double r2 = -1.0;
    bool covers(Vec2 p) const { return norm2(p - c) <= r2 * (1.0 + 1e-12) + 1e-300; }
};

Disk disk_from(Vec2 a, Vec2 b) {
    Vec2 c = 0.5 * (a + b);
    return {c, norm2(a - c)};
}

Disk disk_from(Vec2 a, Vec2 b, Vec2 c) {
    double d = 2.0 * cross(b - a, c - a);
    if (std::abs(d) < 1e-30) {
        Disk best = disk_from(a, b);
        Disk d2 = disk_from(a, c), d3 = disk_from(b, c);
        if (d2.r2 > best.r2) best = d2;
        if (d3.r2 > best.r2) best = d3;
        return best;
    }
    double a2 = norm2(a), b2 = norm2(b), c2 = norm2(c);
    Vec2 ctr{(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
             (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
    return {ctr, norm2(a - ctr)};
}

Disk min_disk(std::vector<Vec2> pts) {
    Disk d{{0, 0}, -1.0};
    for (size_t i = 0; i < pts.size(); ++i) {
        if (d.r2 >= 0.0 && d.covers(pts[i])) continue;
        d = {pts[i], 0.0};
        for (size_t j = 0; j < i; ++j) {
            if (d.covers(pts[j])) continue;
            d = disk_from(pts[i], pts[j]);
            for (size_t k = 0; k < j; ++k) {
                if (d.covers(pts[k])) continue;
                d = disk_from(pts[i], pts[j], pts[k]);
            }
        }
    }
    return d;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
                  return a.x == b.x && a.y == b.y;
              }),
              pts.end());
    size_t n = pts.size();
    if (n < 3) return pts;
    std::vector<Vec2> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) { // lower
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 1e-14)
            --k;
        hull[k++] = pts[i];
    }
    for (size_t i = n - 1, t = k + 1; i-- > 0;) { // upper
        while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 1e-14)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

} // namespace

void validate(const MeasureSpec& spec) {
    if (spec.dim != 2)
        throw Error(Errc::unsupported_dim, "measures are restricted to dimension 2");
    if (spec.atoms.empty() && spec.uniform_circles.empty() && spec.uniform_regions.empty())
        throw Error(Errc::validation, "measure has no components");
    for (const auto& a : spec.atoms)
        if (!(a.mass > 0.0)) throw Error(Errc::validation, "atom mass must be positive");
    for (const auto& c : spec.uniform_circles) {
        if (!(c.total_mass > 0.0)) throw Error(Errc::validation, "circle mass must be positive");
        if (!(c.radius > 0.0)) throw Error(Errc::validation, "circle radius must be positive");
    }
    for (const auto& r : spec.uniform_regions) {
        if (!(r.total_mass > 0.0)) throw Error(Errc::validation, "region mass must be positive");
        geometry::validate_body(r.region);
    }
}

double total_mass(const MeasureSpec& spec) {
    validate(spec);
    double m = 0.0;
    for (const auto& a : spec.atoms) m += a.mass;
    for (const auto& c : spec.uniform_circles) m += c.total_mass;
    for (const auto& r : spec.uniform_regions) m += r.total_mass;
    return m;
}

geometry::ConvexBody support_hull(const MeasureSpec& spec) {
    validate(spec);
    bool has_round = !spec.uniform_circles.empty();
    for (const auto& r : spec.uniform_regions)
        if (r.region.kind == geometry::ConvexBody::Kind::disk) has_round = true;

    if (!has_round) {
        std::vector<Vec2> pts;
        for (const auto& a : spec.atoms) pts.push_back(a.x);
        for (const auto& r : spec.uniform_regions)
            for (Vec2 v : r.region.vertices) pts.push_back(v);
        std::vector<Vec2> hull = convex_hull(pts);
        if (hull.size() < 3)
            throw Error(Errc::degenerate_hull, "support hull has no 2-D extent");
        return geometry::ConvexBody::polygon(std::move(hull));
    }

    if (spec.uniform_circles.size() == 1 && spec.atoms.empty() && spec.uniform_regions.empty()) {
        const auto& c = spec.uniform_circles[0];
        return geometry::ConvexBody::disk(c.center, c.radius);
    }
    if (spec.uniform_circles.empty() && spec.atoms.empty() && spec.uniform_regions.size() == 1 &&
        spec.uniform_regions[0].region.kind == geometry::ConvexBody::Kind::disk) {
        return spec.uniform_regions[0].region;
    }

    // Mixed supports: smallest disk containing everything. Arc sampling of the
    // circles is compensated by the sagitta bound so containment is kept.
    Disk d = min_disk(enclosing_points(spec));
    double r = std::sqrt(std::max(0.0, d.r2));
    double sagitta = 1.0 - std::cos(kPi / 256.0);
    double max_circle_r = 0.0;
    for (const auto& c : spec.uniform_circles) max_circle_r = std::max(max_circle_r, c.radius);
    for (const auto& rg : spec.uniform_regions)
        if (rg.region.kind == geometry::ConvexBody::Kind::disk)
            max_circle_r = std::max(max_circle_r, rg.region.radius);
    return geometry::ConvexBody::disk(d.c, r + sagitta * max_circle_r + 1e-12);
}

DiscretizedMeasure deposit(const MeasureSpec& spec, const fields::Grid& grid,
                           double mollification_radius) {
    validate(spec);
    fields::validate_grid(grid);
    double eps = mollification_radius;
    if (!(eps >= 2.0 * grid.h))
        throw Error(Errc::precondition, "mollification radius must be at least 2h");

    DiscretizedMeasure out;
    out.grid = grid;
    out.mollification_radius = eps;
    out.density.assign(grid.node_count(), 0.0);
    std::vector<double> comp(grid.node_count());
    auto absorb = [&](double mass) {
        renormalize(comp, grid.h, mass);
        for (int id = 0; id < grid.node_count(); ++id) out.density[id] += comp[id];
    };

    for (const auto& a : spec.atoms) {
        require_inside_grid(grid, a.x, eps, "atom");
        std::fill(comp.begin(), comp.end(), 0.0);
        stamp(comp, grid, a.x, a.mass, eps);
        absorb(a.mass);
    }

    for (const auto& c : spec.uniform_circles) {
        require_inside_grid(grid, c.center, c.radius + eps, "circle");
        std::fill(comp.begin(), comp.end(), 0.0);
        // 16 arc points per crossed cell keeps the deposited band smooth.
        int m = std::max(64, (int)std::ceil(16.0 * 2.0 * kPi * c.radius / grid.h));
        for (int k = 0; k < m; ++k) {
            double th = 2.0 * kPi * k / m;
            Vec2 p = c.center + c.radius * Vec2{std::cos(th), std::sin(th)};
            stamp(comp, grid, p, c.total_mass / m, eps);
        }
        absorb(c.total_mass);
    }

    for (const auto& r : spec.uniform_regions) {
        Vec2 ref = r.region.kind == geometry::ConvexBody::Kind::disk ? r.region.center
                                                                     : r.region.vertices[0];
        double pad = r.region.kind == geometry::ConvexBody::Kind::disk ? r.region.radius : 0.0;
        require_inside_grid(grid, ref, pad + grid.h, "region");
        std::fill(comp.begin(), comp.end(), 0.0);
        // Cell-averaged coverage from a fixed 4x4 subsample per node cell.
        for (int j = 0; j < grid.ny; ++j) {
            for (int i = 0; i < grid.nx; ++i) {
                Vec2 c0 = grid.node(i, j);
                int hits = 0;
                for (int sy = 0; sy < 4; ++sy)
                    for (int sx = 0; sx < 4; ++sx) {
                        Vec2 p{c0.x + ((sx + 0.5) / 4.0 - 0.5) * grid.h,
                               c0.y + ((sy + 0.5) / 4.0 - 0.5) * grid.h};
                        if (r.region.contains(p)) ++hits;
                    }
                comp[grid.index(i, j)] = hits / 16.0;
            }
        }
        absorb(r.total_mass);
    }
    return out;
}

// --- JSON persistence --------------------------------------------------------

MeasureSpec measure_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::validation, std::string("measure JSON parse: ") + e.what());
    }
    MeasureSpec spec;
    try {
        spec.dim = j.value("dim", 2);
        if (j.contains("atoms"))
            for (const auto& a : j["atoms"]) {
                MeasureSpec::Atom atom;
                atom.x = {a["x"][0].get<double>(), a["x"][1].get<double>()};
                atom.mass = a["mass"].get<double>();
                spec.atoms.push_back(atom);
            }
        if (j.contains("uniform_circles"))
            for (const auto& c : j["uniform_circles"]) {
                MeasureSpec::UniformCircle uc;
                uc.center = {c["center"][0].get<double>(), c["center"][1].get<double>()};
                uc.radius = c["radius"].get<double>();
                uc.total_mass = c["total_mass"].get<double>();
                spec.uniform_circles.push_back(uc);
            }
        if (j.contains("uniform_regions"))
            for (const auto& r : j["uniform_regions"]) {
                MeasureSpec::UniformRegion ur;
                ur.total_mass = r["total_mass"].get<double>();
                if (r.contains("disk")) {
                    const auto& d = r["disk"];
                    ur.region = geometry::ConvexBody::disk(
                        {d["center"][0].get<double>(), d["center"][1].get<double>()},
                        d["radius"].get<double>());
                } else {
                    std::vector<Vec2> vs;
                    for (const auto& v : r["polygon"])
                        vs.push_back({v[0].get<double>(), v[1].get<double>()});
                    ur.region = geometry::ConvexBody::polygon(std::move(vs));
                }
                spec.uniform_regions.push_back(ur);
            }
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::validation, std::string("measure JSON schema: ") + e.what());
    }
    validate(spec);
    return spec;
}

std::string measure_to_json(const MeasureSpec& spec) {
    validate(spec);
    io::JsonWriter w;
    w.begin_object();
    w.key("dim").number(spec.dim);
    w.key("atoms").begin_array();
    for (const auto& a : spec.atoms) {
        w.begin_object();
        w.key("x").begin_array().number(a.x.x).number(a.x.y).end_array();
        w.key("mass").number(a.mass);
        w.end_object();
    }
    w.end_array();
    w.key("uniform_circles").begin_array();
    for (const auto& c : spec.uniform_circles) {
        w.begin_object();
        w.key("center").begin_array().number(c.center.x).number(c.center.y).end_array();
        w.key("radius").number(c.radius);
        w.key("total_mass").number(c.total_mass);
        w.end_object();
    }
    w.end_array();
    w.key("uniform_regions").begin_array();
    for (const auto& r : spec.uniform_regions) {
        w.begin_object();
        if (r.region.kind == geometry::ConvexBody::Kind::disk) {
            w.key("disk").begin_object();
            w.key("center").begin_array().number(r.region.center.x).number(r.region.center.y)
                .end_array();
            w.key("radius").number(r.region.radius);
            w.end_object();
        } else {
            w.key("polygon").begin_array();
            for (Vec2 v : r.region.vertices)
                w.begin_array().number(v.x).number(v.y).end_array();
            w.end_array();
        }
        w.key("total_mass").number(r.total_mass);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

MeasureSpec load_measure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_failure, "cannot open measure file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return measure_from_json(ss.str());
}

} // namespace quadsurf::measures
