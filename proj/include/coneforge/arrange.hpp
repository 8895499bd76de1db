#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "coneforge/forest.hpp"
#include "coneforge/measure.hpp"
#include "coneforge/placements.hpp"

namespace coneforge {

using Vec3 = std::array<double, 3>;

inline double dot3(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline Vec3 add3(const Vec3& a, const Vec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 sub3(const Vec3& a, const Vec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 scale3(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
inline double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

// Affine subspace of R^2 or R^3 with an orthonormal direction basis and the
// orthogonal decomposition anchor = v + (component in the span), v
// perpendicular to the span.
struct AffineSubspace {
    int ambient = 2;  // 2 or 3
    int dim = 0;      // 0 <= dim < ambient
    Vec3 anchor{0.0, 0.0, 0.0};
    std::vector<Vec3> basis;  // dim orthonormal vectors

    Vec3 offset() const;           // v: the component of anchor orthogonal to the span
    bool contains_origin(double tol = 1e-12) const { return norm3(offset()) <= tol; }
    double distance_to(const Vec3& p) const;
    Vec3 project(const Vec3& p) const;
    bool contains(const Vec3& p, double tol = 1e-12) const {
        return distance_to(p) <= tol;
    }
};

AffineSubspace make_point_subspace(const Vec3& p, int ambient);
AffineSubspace make_line(const Vec3& anchor, const Vec3& dir, int ambient);
AffineSubspace make_plane3(const Vec3& anchor, const Vec3& unit_normal);

// Skeleton pieces: points and segments, each carried by a declared affine
// subspace (validated on construction).
struct SkeletonPiece {
    AffineSubspace host;
    std::vector<Vec3> vertices;  // 1 vertex: point, 2: segment, >2: polyline
};

struct SkeletonSpec {
    std::vector<SkeletonPiece> pieces;
};

SkeletonSpec square_skeleton_2d(double half_side, int k);  // k = 0 or 1
void validate(const SkeletonSpec& spec, double tol = 1e-12);

// Union of placed copies {x + r T(S)}: exact placed points/segments, plus
// sample points along segments at the given spacing.
Geometry assemble_union(const PlacementSet& k, const SkeletonSpec& s,
                        double resolution);

// The eps-Z snapping of the scaled-placements proof: keep (x, r) with
// proj x + r on the eps grid and |r - r'| <= eps for some (x, r') in l.
// proj x = <x, v/|v|> for the subspace offset v, or 0 when v = 0.
PlacementSet snap_scaled(const PlacementSet& l, const AffineSubspace& v, double eps);

// Distinct grid values {proj x + r} of a snapped set.
std::vector<double> snap_values(const PlacementSet& k, const AffineSubspace& v,
                                double eps);

struct CoverReport {
    int samples = 0;
    double worst_motion = 0.0;       // max product-metric move used
    double worst_line_error = 0.0;   // max residual distance to the chosen line
    bool pass = false;
};

// Line in Hessian form {p : <p, (cos alpha, sin alpha)> = c}; directions are
// unrestricted, unlike DirectedLine.
struct HessianLine {
    double alpha = 0.0;
    double c = 0.0;
};

inline double line_point_distance(const HessianLine& l, Point2 p) {
    return std::abs(p.x * std::cos(l.alpha) + p.y * std::sin(l.alpha) - l.c);
}

// Finite line family covering all placements x + r T(V) of a unit-distance
// line V over C_box x I x SO(2), up to an eps move of (r, T).
struct CoverFamily {
    std::vector<HessianLine> lines;
    double eps = 0.0;
    double base_angle = 0.0;  // direction of V's offset vector
    double angle_step = 0.0;
    double offset_step = 0.0;
    double offset_lo = 0.0;
    int n_angle = 0;
    int n_offset = 0;  // offsets per direction
    CoverReport report;
};

CoverFamily rotation_cover(const AffineSubspace& v, const Box2& c_box,
                           double i_lo, double i_hi, double eps, int verify_samples,
                           std::uint64_t seed);

// Snaps one placement of V onto a member line; returns (r', theta', index).
struct CoverSnap {
    double r = 0.0;
    double theta = 0.0;
    int line_index = -1;
};
std::optional<CoverSnap> snap_to_cover(const CoverFamily& family, Point2 x, double r,
                                       double theta, double i_lo, double i_hi);

// For each placement (x, r), a k-plane inside the first host W that meets the
// open ball B(x, r), tangent to the sphere W ∩ S(x, r); its distance to x is
// exactly r.
struct TangentResult {
    AffineSubspace plane;
    int host_index = -1;
};

std::vector<TangentResult> tangent_family(const std::vector<Placement>& placements,
                                          int k, int n,
                                          const std::vector<AffineSubspace>& hosts,
                                          double tol = 1e-12);

std::vector<AffineSubspace> default_host_family(int n, int dim, double box_half,
                                                int count, std::uint64_t seed);

// Rigid motion g(p) = rot(beta) p + shift with its inverse. A counterclockwise
// rotation by beta maps a line of clockwise-from-y angle alpha to one of angle
// alpha - beta.
struct Frame {
    double beta = 0.0;
    Vec2 shift{0.0, 0.0};

    Point2 apply(Point2 p) const;
    Point2 invert(Point2 p) const;
    double apply_angle(double theta) const { return theta - beta; }
    double invert_angle(double theta) const { return theta + beta; }
};

struct NormalizedConfig {
    Frame frame;
    Point2 x0;        // normalized center: (-r_signed, p_y)
    double r_signed = 0.0;  // witness target as a signed distance; |r_signed| = r0
    Disk ball;        // normalized ball
};

// Rigid normalization for the patch construction: rotation T0 becomes the
// identity, the point x0 + r0*T0(e1) lands on the positive y-axis, the ball
// avoids the closed upper y-axis and lies in {y2 >= -2 diam B}.
NormalizedConfig normalize_frame(Point2 x0, double r0, double theta0, const Disk& b);

struct PatchOptions {
    std::int64_t mc_samples = 1000000;
    std::uint64_t seed = 1;
    FinenessPolicy policy{};
    int max_aperture_halvings = 20;
    int max_generations = 24;
};

// Neighborhood descriptor: in the normalized frame, points y in the dual
// sector with d(y, l_lo) < r0 - rho and r0 + rho < d(y, l_hi), crossed with
// the scale window (r0 - rho, r0 + rho).
struct NikodymPatch {
    Frame frame;           // original -> normalized
    double phi = 0.0;      // cone half-aperture; below eta
    double rho = 0.0;      // distance margin
    Point2 x0_norm;        // normalized center
    double r_signed = 0.0; // witness target in the normalized frame
    Disk ball_norm;        // normalized ball
    ConeForest forest;     // built in the normalized frame
    DiskAreaResult ball_area;
    double requested_eps = 0.0;

    // y in the dual sector with d(y, l_lo) < r_signed - rho and
    // r_signed + rho < d(y, l_hi), and |r - r_signed| < rho.
    bool in_neighborhood(Point2 y_norm, double r) const;
};

NikodymPatch nikodym_patch(Point2 x0, double r0, double theta0, const Disk& b,
                           double eta, double eps, const PatchOptions& opts = {});

struct WitnessRow {
    Point2 x;        // original frame
    double r = 0.0;
    double achieved = 0.0;  // signed distance of x to the witness line
    double angle_to_hyperplane = 0.0;
    DirectedLine line_original_frame;
};

// Witness lines over a grid x grid sample of the neighborhood, mapped back to
// the original frame.
std::vector<WitnessRow> patch_witness_grid(const NikodymPatch& patch, int grid,
                                           double theta0, double tol = kDefaultTol);

}  // namespace coneforge
