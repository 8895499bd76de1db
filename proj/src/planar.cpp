#include "coneforge/planar.hpp"

#include <algorithm>

namespace coneforge {

bool cone_contains(const DoubleCone& d, Point2 p, double tol) {
    // The double cone is the pair of opposite sectors where the signed
    // distances to the two boundary lines have opposite signs.
    const double d1 = signed_distance(p, boundary_line_lo(d));
    const double d2 = signed_distance(p, boundary_line_hi(d));
    return (d1 >= -tol && d2 <= tol) || (d1 <= tol && d2 >= -tol);
}

bool dual_contains(const DoubleCone& d, Point2 p, double tol) {
    const Vec2 w = p - d.vertex;
    // Sector [a, b] with width pi - (angle_hi - angle_lo) < pi, expressed as
    // the intersection of two half-planes through the vertex.
    const double a = d.angle_hi - kPi / 2.0;
    const double b = d.angle_lo + kPi / 2.0;
    return dot(w, left_normal(a)) <= tol && dot(w, left_normal(b)) >= -tol;
}

Interval distance_interval(const DoubleCone& d, Point2 p, double tol) {
    if (!dual_contains(d, p, tol)) {
        throw PointNotInDualCone("distance_interval: point outside the dual sector");
    }
    return {signed_distance(p, boundary_line_lo(d)),
            signed_distance(p, boundary_line_hi(d))};
}

DirectedLine line_at_distance(const DoubleCone& d, Point2 p, double t, double tol) {
    const Interval iv = distance_interval(d, p, tol);
    if (t < iv.lo - tol || t > iv.hi + tol) {
        throw DistanceOutOfRange("line_at_distance: distance outside attainable interval");
    }
    const Vec2 w = p - d.vertex;
    const double rho = norm(w);
    if (rho <= tol) {
        // All family lines pass through p; resolve like t == lo.
        return boundary_line_lo(d);
    }
    // With p - vertex = rho*direction(t_w), the signed distance to the family
    // line at angle theta is rho*sin(theta - t_w), and theta - t_w stays in
    // [-pi/2, pi/2] over the family, so the principal arcsine branch applies.
    const double t_w = std::atan2(w.x, w.y);
    const double s = std::clamp(t / rho, -1.0, 1.0);
    double theta = t_w + std::asin(s);
    theta = std::clamp(theta, d.angle_lo, d.angle_hi);
    return line_through(d.vertex, theta);
}

double distance_to_upper_nappe(const DoubleCone& d, Point2 q) {
    const Vec2 w = q - d.vertex;
    const double r = norm(w);
    if (r == 0.0) return 0.0;
    const double theta = std::atan2(w.x, w.y);
    if (theta >= d.angle_lo && theta <= d.angle_hi) return 0.0;
    const double bound = (theta < d.angle_lo) ? d.angle_lo : d.angle_hi;
    const Vec2 u = direction(bound);
    const double along = dot(w, u);
    if (along <= 0.0) return r;  // nearest point is the vertex
    return norm(w - u * along);
}

}  // namespace coneforge
