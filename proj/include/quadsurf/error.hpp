#pragma once

#include <stdexcept>
#include <string>

namespace quadsurf {

enum class Errc {
    invalid_body,     // degenerate or non strictly convex body
    inside_body,      // query point in the interior where the operation is undefined
    degenerate_hull,  // support hull has no 2-D extent
    validation,       // malformed input data (masses, schema, grid geometry)
    out_of_grid,      // requested object does not fit on the grid
    outside_domain,   // evaluation point outside the grid or mask
    unsupported_dim,  // operation restricted to dimension 2
    unbounded_ray,    // ray leaves the grid before the sought crossing
    level_above_ray,  // level exceeds the profile start value
    solver_failure,   // linear solver exceeded its iteration cap
    precondition,     // documented operation precondition violated
    io_failure,       // file read/write problem
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

} // namespace quadsurf
