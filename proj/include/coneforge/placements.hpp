#pragma once

#include <array>
#include <vector>

#include "coneforge/planar.hpp"

namespace coneforge {

// Base space of a placement set: centers with a scale, optionally with a
// rotation, optionally with scale 0 allowed.
enum class BaseSpace {
    kScaled,             // (x, r), r > 0
    kScaledRotated,      // (x, r, theta), r > 0
    kEveryScaleRotated,  // (x, r, theta), r >= 0
};

struct Placement {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    double r = 1.0;
    double theta = 0.0;  // planar rotation; ignored for kScaled

    Point2 xy() const { return {x[0], x[1]}; }
};

struct PlacementSet {
    BaseSpace tag = BaseSpace::kScaled;
    int ambient = 2;  // 2 or 3
    std::vector<Placement> items;
};

// Wrapped angular distance in [0, pi].
inline double angle_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), 2.0 * kPi);
    return d > kPi ? 2.0 * kPi - d : d;
}

// Chebyshev combination of the component metrics: Euclidean on centers,
// absolute difference on scales, wrapped angle on rotations.
double placement_distance(const Placement& a, const Placement& b, BaseSpace tag,
                          int ambient);

}  // namespace coneforge
