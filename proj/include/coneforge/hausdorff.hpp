#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "coneforge/placements.hpp"

namespace coneforge {

// Hausdorff distance between finite placement sets over the same base space.
double hausdorff_distance(const PlacementSet& a, const PlacementSet& b);

// Directed distance sup_{p in a} dist(p, b).
double directed_hausdorff(const PlacementSet& a, const PlacementSet& b);

// True iff every sampled center has a placement within tol in the center
// component.
bool full_projection_check(const PlacementSet& k, const std::vector<Point2>& centers,
                           double tol);

struct NetBounds {
    // Axis-aligned center box (use z range only when ambient == 3).
    double x_lo = 0.0, x_hi = 0.0;
    double y_lo = 0.0, y_hi = 0.0;
    double z_lo = 0.0, z_hi = 0.0;
    double r_lo = 1.0, r_hi = 1.0;
    bool with_rotation = false;  // add an angular grid over [0, 2*pi)
};

// Finite eps-net of the product region in the Chebyshev product metric:
// every point of the region is within eps of some net point.
PlacementSet epsilon_net(const NetBounds& bounds, double eps, BaseSpace tag,
                         int ambient = 2);

}  // namespace coneforge
