#pragma once

#include <cmath>
#include <utility>

#include "coneforge/errors.hpp"

namespace coneforge {

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

using Point2 = Vec2;

// Angles are in radians, measured clockwise from the positive y-axis. A line
// direction angle must lie in (-pi/2, pi/2); lines are never horizontal.
inline Vec2 direction(double theta) { return {std::sin(theta), std::cos(theta)}; }

// Left normal of direction(theta). A point p is left of an oriented line
// exactly when <p - q, normal> > 0 for q on the line.
inline Vec2 left_normal(double theta) { return {-std::cos(theta), std::sin(theta)}; }

// Oriented non-horizontal line {p : <p, n(theta)> = offset}.
struct DirectedLine {
    double theta = 0.0;
    double offset = 0.0;
};

inline DirectedLine line_through(Point2 p, double theta) {
    return {theta, dot(p, left_normal(theta))};
}

// Signed distance; positive iff p is left of the line, |value| is the
// Euclidean distance.
inline double signed_distance(Point2 p, const DirectedLine& ell) {
    return dot(p, left_normal(ell.theta)) - ell.offset;
}

// Double cone: vertex + {r*direction(theta) : r in R, theta in [angle_lo, angle_hi]},
// with -pi/2 < angle_lo < angle_hi < pi/2.
struct DoubleCone {
    Point2 vertex;
    double angle_lo = 0.0;
    double angle_hi = 0.0;

    double width() const { return angle_hi - angle_lo; }
};

inline DirectedLine boundary_line_lo(const DoubleCone& d) {
    return line_through(d.vertex, d.angle_lo);
}
inline DirectedLine boundary_line_hi(const DoubleCone& d) {
    return line_through(d.vertex, d.angle_hi);
}

bool cone_contains(const DoubleCone& d, Point2 p, double tol = kDefaultTol);

// Dual sector {vertex + r*direction(theta) : r >= 0,
// theta in [angle_hi - pi/2, angle_lo + pi/2]}. For p in it, the signed
// distance to the member lines of the cone varies monotonically with the
// line angle.
bool dual_contains(const DoubleCone& d, Point2 p, double tol = kDefaultTol);

// The full lines contained in the cone: exactly the lines through the vertex
// with angle in [angle_lo, angle_hi]. (A line not through the vertex leaves
// the cone near the vertex level; tested, not assumed.)
struct LineFamily {
    Point2 vertex;
    double angle_lo = 0.0;
    double angle_hi = 0.0;

    DirectedLine at(double theta) const { return line_through(vertex, theta); }
};

inline LineFamily lines_in_cone(const DoubleCone& d) {
    return {d.vertex, d.angle_lo, d.angle_hi};
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double t, double tol = 0.0) const {
        return t >= lo - tol && t <= hi + tol;
    }
};

// {signed_distance(p, ell) : ell in lines_in_cone(d)} as a closed interval.
// Requires dual_contains(d, p).
Interval distance_interval(const DoubleCone& d, Point2 p, double tol = kDefaultTol);

// The unique family line at signed distance t from p. Requires
// dual_contains(d, p) and t in distance_interval(d, p); values within tol of
// an endpoint resolve to the boundary line.
DirectedLine line_at_distance(const DoubleCone& d, Point2 p, double t,
                              double tol = kDefaultTol);

// Strip {y_lo <= y2 <= y_hi}.
struct Strip {
    double y_lo = 0.0;
    double y_hi = 0.0;
};

// Euclidean distance from q to the closed upper nappe
// {vertex + r*direction(theta) : r >= 0, theta in [angle_lo, angle_hi]}.
double distance_to_upper_nappe(const DoubleCone& d, Point2 q);

}  // namespace coneforge
