#pragma once

#include "quadsurf/fields.hpp"
#include "quadsurf/oracle.hpp"
#include "quadsurf/vec2.hpp"

namespace quadsurf::thickness {

// Profile and root-finding code works against these two small interfaces so
// the same machinery runs on sampled grids and on closed-form solutions.
class FieldEval {
public:
    virtual ~FieldEval() = default;
    virtual double value(Vec2 x) const = 0;
    virtual Vec2 grad(Vec2 x) const = 0;
    virtual double max_u() const = 0;
    // Bracketing step for root scans; grids resolve at half a cell.
    virtual double scan_step() const = 0;
};

class MaskEval {
public:
    virtual ~MaskEval() = default;
    virtual double phi(Vec2 x) const = 0;
    virtual double scan_step() const = 0;
};

class GridField final : public FieldEval {
public:
    GridField(const fields::ScalarField& f, double max_u) : f_(&f), max_u_(max_u) {}
    double value(Vec2 x) const override { return fields::interpolate(*f_, x); }
    Vec2 grad(Vec2 x) const override { return fields::gradient(*f_, x); }
    double max_u() const override { return max_u_; }
    double scan_step() const override { return 0.5 * f_->grid.h; }

private:
    const fields::ScalarField* f_;
    double max_u_;
};

class GridMask final : public MaskEval {
public:
    explicit GridMask(const fields::DomainMask& m) : m_(&m) {}
    double phi(Vec2 x) const override { return fields::interpolate_phi(*m_, x); }
    double scan_step() const override { return 0.5 * m_->grid.h; }

private:
    const fields::DomainMask* m_;
};

class AnalyticField final : public FieldEval {
public:
    explicit AnalyticField(const oracle::RadialSolution& s) : s_(s) {}
    double value(Vec2 x) const override { return s_.value(x); }
    Vec2 grad(Vec2 x) const override { return s_.grad(x); }
    double max_u() const override { return s_.max_u(); }
    double scan_step() const override { return 1e-3 * s_.R; }

private:
    oracle::RadialSolution s_;
};

class AnalyticDiskMask final : public MaskEval {
public:
    AnalyticDiskMask(Vec2 center, double radius) : center_(center), radius_(radius) {}
    double phi(Vec2 x) const override { return dist(x, center_) - radius_; }
    double scan_step() const override { return 1e-3 * radius_; }

private:
    Vec2 center_;
    double radius_;
};

} // namespace quadsurf::thickness
