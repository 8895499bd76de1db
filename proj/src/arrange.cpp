#include "coneforge/arrange.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "coneforge/errors.hpp"
#include "coneforge/hausdorff.hpp"
#include "coneforge/rng.hpp"

namespace coneforge {

// ---------------------------------------------------------------------------
// Affine subspaces
// ---------------------------------------------------------------------------

Vec3 AffineSubspace::offset() const {
    Vec3 v = anchor;
    for (const Vec3& b : basis) {
        v = sub3(v, scale3(b, dot3(anchor, b)));
    }
    return v;
}

Vec3 AffineSubspace::project(const Vec3& p) const {
    Vec3 q = anchor;
    const Vec3 w = sub3(p, anchor);
    for (const Vec3& b : basis) {
        q = add3(q, scale3(b, dot3(w, b)));
    }
    return q;
}

double AffineSubspace::distance_to(const Vec3& p) const {
    return norm3(sub3(p, project(p)));
}

AffineSubspace make_point_subspace(const Vec3& p, int ambient) {
    AffineSubspace s;
    s.ambient = ambient;
    s.dim = 0;
    s.anchor = p;
    return s;
}

AffineSubspace make_line(const Vec3& anchor, const Vec3& dir, int ambient) {
    const double n = norm3(dir);
    if (n <= 0.0) throw Error("make_line: zero direction");
    AffineSubspace s;
    s.ambient = ambient;
    s.dim = 1;
    s.anchor = anchor;
    s.basis = {scale3(dir, 1.0 / n)};
    return s;
}

AffineSubspace make_plane3(const Vec3& anchor, const Vec3& unit_normal) {
    const Vec3 n = scale3(unit_normal, 1.0 / norm3(unit_normal));
    const Vec3 seed = (std::abs(n[0]) < 0.9) ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    Vec3 b1 = sub3(seed, scale3(n, dot3(seed, n)));
    b1 = scale3(b1, 1.0 / norm3(b1));
    const Vec3 b2{n[1] * b1[2] - n[2] * b1[1], n[2] * b1[0] - n[0] * b1[2],
                  n[0] * b1[1] - n[1] * b1[0]};
    AffineSubspace s;
    s.ambient = 3;
    s.dim = 2;
    s.anchor = anchor;
    s.basis = {b1, b2};
    return s;
}

// ---------------------------------------------------------------------------
// Skeletons and assembled unions
// ---------------------------------------------------------------------------

SkeletonSpec square_skeleton_2d(double half_side, int k) {
    if (k != 0 && k != 1) throw Error("square_skeleton_2d: k must be 0 or 1");
    const double h = half_side;
    const Vec3 corners[4] = {{h, h, 0}, {-h, h, 0}, {-h, -h, 0}, {h, -h, 0}};
    SkeletonSpec spec;
    if (k == 0) {
        for (const Vec3& c : corners) {
            SkeletonPiece piece;
            piece.host = make_point_subspace(c, 2);
            piece.vertices = {c};
            spec.pieces.push_back(piece);
        }
    } else {
        for (int i = 0; i < 4; ++i) {
            const Vec3 a = corners[i], b = corners[(i + 1) % 4];
            SkeletonPiece piece;
            piece.host = make_line(a, sub3(b, a), 2);
            piece.vertices = {a, b};
            spec.pieces.push_back(piece);
        }
    }
    return spec;
}

void validate(const SkeletonSpec& spec, double tol) {
    for (const auto& piece : spec.pieces) {
        for (const Vec3& v : piece.vertices) {
            if (piece.host.distance_to(v) > tol) {
                throw Error("skeleton piece vertex lies off its declared subspace");
            }
        }
    }
}

namespace {

Point2 rotate2(Point2 p, double theta_ccw) {
    const double c = std::cos(theta_ccw), s = std::sin(theta_ccw);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

}  // namespace

Geometry assemble_union(const PlacementSet& k, const SkeletonSpec& s,
                        double resolution) {
    if (resolution <= 0.0) throw Error("assemble_union: resolution must be positive");
    validate(s);
    Geometry geo;
    for (const auto& pl : k.items) {
        if (k.tag == BaseSpace::kScaled && pl.theta != 0.0) {
            throw Error("assemble_union: rotation present in a scale-only placement set");
        }
        if (pl.r < 0.0 || (k.tag != BaseSpace::kEveryScaleRotated && pl.r <= 0.0)) {
            throw Error("assemble_union: scale out of range for the base space");
        }
        const Point2 x = pl.xy();
        auto place = [&](const Vec3& v) {
            Point2 q{v[0], v[1]};
            q = rotate2(q, pl.theta) * pl.r;
            return x + q;
        };
        for (const auto& piece : s.pieces) {
            if (piece.vertices.size() == 1) {
                geo.points.push_back(place(piece.vertices[0]));
                continue;
            }
            for (size_t i = 0; i + 1 < piece.vertices.size(); ++i) {
                const Point2 a = place(piece.vertices[i]);
                const Point2 b = place(piece.vertices[i + 1]);
                geo.segments.push_back({a, b});
                const double len = norm(b - a);
                const int steps = std::max(1, static_cast<int>(std::ceil(len / resolution)));
                for (int t = 0; t <= steps; ++t) {
                    const double u = static_cast<double>(t) / steps;
                    geo.points.push_back({a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)});
                }
            }
        }
    }
    return geo;
}

// ---------------------------------------------------------------------------
// Scaled-placement snapping
// ---------------------------------------------------------------------------

namespace {

double projection_scalar(const AffineSubspace& v, const Placement& p) {
    const Vec3 off = v.offset();
    const double n = norm3(off);
    if (n <= 1e-12) return 0.0;
    return dot3(p.x, off) / n;
}

}  // namespace

PlacementSet snap_scaled(const PlacementSet& l, const AffineSubspace& v, double eps) {
    if (eps <= 0.0) throw Error("snap_scaled: eps must be positive");
    if (l.tag != BaseSpace::kScaled) {
        throw Error("snap_scaled: expected a scale-only placement set");
    }
    PlacementSet out;
    out.tag = l.tag;
    out.ambient = l.ambient;
    std::set<std::pair<std::array<double, 3>, double>> seen;
    for (const auto& p : l.items) {
        const double proj = projection_scalar(v, p);
        const double center = proj + p.r;
        const auto g_lo = static_cast<long long>(std::ceil((center - eps) / eps - 1e-9));
        const auto g_hi = static_cast<long long>(std::floor((center + eps) / eps + 1e-9));
        for (long long g = g_lo; g <= g_hi; ++g) {
            const double r = static_cast<double>(g) * eps - proj;
            if (r <= 0.0) continue;
            if (std::abs(r - p.r) > eps * (1.0 + 1e-12)) continue;
            Placement q = p;
            q.r = r;
            if (seen.insert({q.x, q.r}).second) out.items.push_back(q);
        }
    }
    return out;
}

std::vector<double> snap_values(const PlacementSet& k, const AffineSubspace& v,
                                double eps) {
    std::set<long long> grid;
    for (const auto& p : k.items) {
        const double value = projection_scalar(v, p) + p.r;
        grid.insert(static_cast<long long>(std::llround(value / eps)));
    }
    std::vector<double> out;
    out.reserve(grid.size());
    for (long long g : grid) out.push_back(static_cast<double>(g) * eps);
    return out;
}

// ---------------------------------------------------------------------------
// Rotation covers
// ---------------------------------------------------------------------------

CoverFamily rotation_cover(const AffineSubspace& v, const Box2& c_box, double i_lo,
                           double i_hi, double eps, int verify_samples,
                           std::uint64_t seed) {
    if (v.ambient != 2 || v.dim != 1) {
        throw Error("rotation_cover: expected a line in the plane");
    }
    const double dist0 = norm3(v.offset());
    if (std::abs(dist0 - 1.0) > 1e-9) {
        throw Error("rotation_cover: the line must be normalized to distance 1 from 0");
    }
    if (eps <= 0.0 || i_lo <= 0.0 || i_hi < i_lo) {
        throw Error("rotation_cover: bad parameters");
    }

    const double x_max = std::max({std::hypot(c_box.x_lo, c_box.y_lo),
                                   std::hypot(c_box.x_lo, c_box.y_hi),
                                   std::hypot(c_box.x_hi, c_box.y_lo),
                                   std::hypot(c_box.x_hi, c_box.y_hi)});
    CoverFamily fam;
    fam.eps = eps;
    fam.base_angle = std::atan2(v.offset()[1], v.offset()[0]);
    // Snapping a placement's rotation to the angle grid moves the offset by at
    // most |x| * angle_step / 2; the offset grid absorbs the remainder, so the
    // total (r, T) move stays within eps.
    fam.angle_step = eps / (1.0 + x_max);
    fam.n_angle = std::max(1, static_cast<int>(std::ceil(2.0 * kPi / fam.angle_step)));
    fam.angle_step = 2.0 * kPi / fam.n_angle;
    fam.offset_step = eps;
    fam.offset_lo = -x_max + i_lo;
    const double offset_hi = x_max + i_hi;
    fam.n_offset = 1 + std::max(0, static_cast<int>(std::ceil(
                                        (offset_hi - fam.offset_lo) / fam.offset_step)));

    fam.lines.reserve(static_cast<size_t>(fam.n_angle) * fam.n_offset);
    for (int a = 0; a < fam.n_angle; ++a) {
        const double alpha = 2.0 * kPi * a / fam.n_angle;
        for (int c = 0; c < fam.n_offset; ++c) {
            fam.lines.push_back({alpha, fam.offset_lo + c * fam.offset_step});
        }
    }

    Rng rng(seed);
    fam.report.samples = verify_samples;
    for (int s = 0; s < verify_samples; ++s) {
        const Point2 x{rng.uniform(c_box.x_lo, c_box.x_hi),
                       rng.uniform(c_box.y_lo, c_box.y_hi)};
        const double r = rng.uniform(i_lo, i_hi);
        const double theta = rng.uniform(0.0, 2.0 * kPi);
        const auto snap = snap_to_cover(fam, x, r, theta, i_lo, i_hi);
        if (!snap) {
            throw CoverVerificationFailed(
                "rotation_cover: no admissible grid line for x=(" +
                std::to_string(x.x) + "," + std::to_string(x.y) + ") r=" +
                std::to_string(r) + " theta=" + std::to_string(theta));
        }
        const double motion =
            std::max(std::abs(snap->r - r), angle_distance(snap->theta, theta));
        fam.report.worst_motion = std::max(fam.report.worst_motion, motion);
        // The moved placement must land exactly on the member line.
        const double alpha = fam.base_angle + snap->theta;
        const double achieved =
            x.x * std::cos(alpha) + x.y * std::sin(alpha) + snap->r;
        const double want = fam.lines[static_cast<size_t>(snap->line_index)].c;
        fam.report.worst_line_error =
            std::max(fam.report.worst_line_error, std::abs(achieved - want));
    }
    fam.report.pass = fam.report.worst_motion <= eps + 1e-9 &&
                      fam.report.worst_line_error <= 1e-9;
    return fam;
}

std::optional<CoverSnap> snap_to_cover(const CoverFamily& fam, Point2 x, double r,
                                       double theta, double i_lo, double i_hi) {
    // The placed line of (x, r, theta) is {p : <p, dir(alpha)> = <x, dir> + r}
    // with alpha = base_angle + theta. Snap alpha to the direction grid and
    // the resulting offset to the offset grid, preferring candidates that keep
    // r inside [i_lo, i_hi].
    const double tol = 1e-9;
    const double alpha_raw = fam.base_angle + theta;
    for (int da = 0; da <= 1; ++da) {
        const double a_base = std::floor(alpha_raw / fam.angle_step) + da;
        const double alpha_g = a_base * fam.angle_step;
        if (angle_distance(alpha_g, alpha_raw) > fam.eps + tol) continue;
        long long a_idx = static_cast<long long>(a_base) % fam.n_angle;
        if (a_idx < 0) a_idx += fam.n_angle;
        const double proj = x.x * std::cos(alpha_g) + x.y * std::sin(alpha_g);
        const double target = proj + r;
        for (int dc = 0; dc <= 1; ++dc) {
            const double c_base =
                std::floor((target - fam.offset_lo) / fam.offset_step) + dc;
            if (c_base < 0 || c_base >= fam.n_offset) continue;
            const double off_g = fam.offset_lo + c_base * fam.offset_step;
            const double r_new = off_g - proj;
            if (std::abs(r_new - r) > fam.eps + tol) continue;
            if (r_new < i_lo - tol || r_new > i_hi + tol) continue;
            CoverSnap snap;
            snap.r = r_new;
            snap.theta = alpha_g - fam.base_angle;
            snap.line_index =
                static_cast<int>(a_idx) * fam.n_offset + static_cast<int>(c_base);
            return snap;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Tangent families
// ---------------------------------------------------------------------------

std::vector<TangentResult> tangent_family(const std::vector<Placement>& placements,
                                          int k, int n,
                                          const std::vector<AffineSubspace>& hosts,
                                          double tol) {
    if (n != 2 && n != 3) throw Error("tangent_family: ambient must be 2 or 3");
    if (k < 0 || k >= n) throw Error("tangent_family: need 0 <= k < n");
    for (const auto& w : hosts) {
        if (w.ambient != n || w.dim != k + 1) {
            throw Error("tangent_family: host dimension mismatch");
        }
    }
    std::vector<TangentResult> out;
    out.reserve(placements.size());
    for (const auto& pl : placements) {
        const Vec3 x = pl.x;
        const double r = pl.r;
        int host_idx = -1;
        for (int i = 0; i < static_cast<int>(hosts.size()); ++i) {
            if (hosts[static_cast<size_t>(i)].distance_to(x) < r - tol) {
                host_idx = i;
                break;
            }
        }
        if (host_idx < 0) {
            throw NoIntersectingHost("tangent_family: no host meets the open ball");
        }
        const AffineSubspace& w = hosts[static_cast<size_t>(host_idx)];
        const Vec3 q = w.project(x);
        const double d = norm3(sub3(x, q));
        const double rho = std::sqrt(std::max(0.0, r * r - d * d));
        // Tangency point along the first basis direction; the tangent plane
        // inside the host is orthogonal to that direction.
        const Vec3 e = w.basis[0];
        const Vec3 p = add3(q, scale3(e, rho));
        AffineSubspace plane;
        plane.ambient = n;
        plane.dim = k;
        plane.anchor = p;
        for (size_t b = 1; b < w.basis.size(); ++b) plane.basis.push_back(w.basis[b]);
        out.push_back({plane, host_idx});
    }
    return out;
}

std::vector<AffineSubspace> default_host_family(int n, int dim, double box_half,
                                                int count, std::uint64_t seed) {
    std::vector<AffineSubspace> hosts;
    hosts.reserve(static_cast<size_t>(count));
    Rng rng(seed);
    const double phase = rng.uniform();
    for (int i = 0; i < count; ++i) {
        // R2 low-discrepancy sequence over the parameters.
        const double u1 = std::fmod(phase + 0.7548776662466927 * (i + 1), 1.0);
        const double u2 = std::fmod(phase + 0.5698402909980532 * (i + 1), 1.0);
        const double u3 = std::fmod(phase + 0.3540326840186856 * (i + 1), 1.0);
        const double off = (2.0 * u2 - 1.0) * box_half;
        if (n == 2) {
            const double ang = u1 * kPi;
            const Vec3 normal{std::cos(ang), std::sin(ang), 0.0};
            const Vec3 dir{-std::sin(ang), std::cos(ang), 0.0};
            hosts.push_back(make_line(scale3(normal, off), dir, 2));
        } else if (dim == 2) {
            const double z = 2.0 * u1 - 1.0;
            const double az = 2.0 * kPi * u3;
            const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
            const Vec3 normal{s * std::cos(az), s * std::sin(az), z};
            hosts.push_back(make_plane3(scale3(normal, off), normal));
        } else {
            const double z = 2.0 * u1 - 1.0;
            const double az = 2.0 * kPi * u3;
            const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
            const Vec3 dir{s * std::cos(az), s * std::sin(az), z};
            const Vec3 seedv = (std::abs(dir[0]) < 0.9) ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
            Vec3 perp = sub3(seedv, scale3(dir, dot3(seedv, dir)));
            perp = scale3(perp, 1.0 / norm3(perp));
            hosts.push_back(make_line(scale3(perp, off), dir, 3));
        }
    }
    return hosts;
}

// ---------------------------------------------------------------------------
// Frame normalization and the Nikodym patch
// ---------------------------------------------------------------------------

Point2 Frame::apply(Point2 p) const {
    const double c = std::cos(beta), s = std::sin(beta);
    return Point2{c * p.x - s * p.y, s * p.x + c * p.y} + shift;
}

Point2 Frame::invert(Point2 p) const {
    const Point2 q = p - shift;
    const double c = std::cos(beta), s = std::sin(beta);
    return {c * q.x + s * q.y, -s * q.x + c * q.y};
}

namespace {

struct FrameAttempt {
    bool ok = false;
    Frame frame;
    Point2 x0;
    double r_signed = 0.0;
    Disk ball;
};

FrameAttempt try_frame(Point2 x0, double r0, Point2 puncture, const Disk& b,
                       double beta, double r_signed) {
    FrameAttempt att;
    const double cb = std::cos(beta), sb = std::sin(beta);
    auto rot = [&](Point2 p) { return Point2{cb * p.x - sb * p.y, sb * p.x + cb * p.y}; };
    const Point2 delta = rot(b.center - puncture);  // ball center relative to puncture
    const double rb = b.radius;
    const double clearance = norm(b.center - puncture) - rb;
    if (clearance <= 0.0) return att;
    const double margin = std::min(0.1 * clearance, rb > 0.0 ? rb : 0.1 * clearance);

    // Choose the puncture height p > 0 subject to: ball below the origin when
    // it straddles the axis, and ball bottom above -4*rb.
    double p_lo = std::max(margin, -delta.y - 3.0 * rb);
    double p_hi = std::numeric_limits<double>::infinity();
    if (std::abs(delta.x) <= rb) {
        const double chord = std::sqrt(std::max(0.0, rb * rb - delta.x * delta.x));
        p_hi = -delta.y - chord - margin;
    }
    if (p_lo > p_hi) return att;
    double p = std::max({r0, 2.0 * rb, p_lo});
    p = std::min(p, p_hi);
    if (p < p_lo) return att;

    att.ok = true;
    att.frame.beta = beta;
    att.frame.shift = Point2{0.0, p} - rot(puncture);
    att.x0 = att.frame.apply(x0);
    att.r_signed = r_signed;
    att.ball = {att.frame.apply(b.center), rb};
    (void)x0;
    return att;
}

}  // namespace

NormalizedConfig normalize_frame(Point2 x0, double r0, double theta0, const Disk& b) {
    const Point2 puncture = x0 + Point2{std::cos(theta0), std::sin(theta0)} * r0;
    if (norm(puncture - b.center) <= b.radius) {
        throw PunctureInsideBall("normalize_frame: x0 + r0*T0(e1) lies inside the ball");
    }
    // Identity when the input already satisfies every requirement.
    {
        const bool t_ok = std::abs(theta0) <= 1e-15;
        const bool on_axis = std::abs(puncture.x) <= 1e-15 && puncture.y > 0.0;
        const double chord = (std::abs(b.center.x) <= b.radius)
                                 ? std::sqrt(std::max(0.0, b.radius * b.radius -
                                                               b.center.x * b.center.x))
                                 : -1.0;
        const bool ball_clear = chord < 0.0 || b.center.y + chord < 0.0;
        const bool ball_high = b.center.y - b.radius >= -4.0 * b.radius;
        if (t_ok && on_axis && ball_clear && ball_high) {
            NormalizedConfig cfg;
            cfg.frame = Frame{};
            cfg.x0 = x0;
            cfg.r_signed = r0;
            cfg.ball = b;
            return cfg;
        }
    }
    // Standard orientation: rotation becomes the identity and the witness
    // target is +r0. If the ball blocks the upper axis there, turn the whole
    // picture by pi; the witness target becomes -r0.
    FrameAttempt att = try_frame(x0, r0, puncture, b, -theta0, r0);
    if (!att.ok) {
        att = try_frame(x0, r0, puncture, b, kPi - theta0, -r0);
    }
    if (!att.ok) {
        throw Error("normalize_frame: no admissible frame (internal error)");
    }
    NormalizedConfig cfg;
    cfg.frame = att.frame;
    cfg.x0 = att.x0;
    cfg.r_signed = att.r_signed;
    cfg.ball = att.ball;
    return cfg;
}

bool NikodymPatch::in_neighborhood(Point2 y_norm, double r) const {
    const DoubleCone d{{0.0, 0.0}, -phi, phi};
    if (!dual_contains(d, y_norm, 0.0)) return false;
    const double d1 = signed_distance(y_norm, boundary_line_lo(d));
    const double d2 = signed_distance(y_norm, boundary_line_hi(d));
    if (!(d1 < r_signed - rho && r_signed + rho < d2)) return false;
    return std::abs(r - r_signed) < rho;
}

NikodymPatch nikodym_patch(Point2 x0, double r0, double theta0, const Disk& b,
                           double eta, double eps, const PatchOptions& opts) {
    if (eta <= 0.0 || eps <= 0.0) throw Error("nikodym_patch: eta and eps must be positive");
    const NormalizedConfig cfg = normalize_frame(x0, r0, theta0, b);

    const Point2 xn = cfg.x0;
    const double rho_x = norm(xn);
    const double t_x = std::atan2(xn.x, xn.y);
    const Disk ball = cfg.ball;
    const double rb = ball.radius;

    double phi = 0.9 * eta;
    for (int halving = 0;; ++halving, phi *= 0.5) {
        if (halving > opts.max_aperture_halvings) {
            throw InfeasibleAperture("nikodym_patch: no feasible aperture below eta");
        }
        // The center must sit strictly inside the dual sector.
        if (std::abs(t_x) >= kPi / 2.0 - phi - 1e-6) continue;
        const DoubleCone d{{0.0, 0.0}, -phi, phi};

        // Ball clearance from the upper cone part.
        const double clearance = distance_to_upper_nappe(d, ball.center) - rb;
        if (clearance <= 0.0) continue;

        // Distance margins around the target.
        const double d_lo = rho_x * std::sin(-phi - t_x);
        const double d_hi = rho_x * std::sin(phi - t_x);
        const double m_lo = cfg.r_signed - d_lo;
        const double m_hi = d_hi - cfg.r_signed;
        if (m_lo <= 0.0 || m_hi <= 0.0) continue;
        const double rho = 0.45 * std::min(m_lo, m_hi);

        // Depth of the strip that must be small around the ball.
        const double r_strip = std::max(0.0, -(ball.center.y - rb));
        const double c_prime = 2.0 * unit_slice_area(d);
        const double r_build = std::max({r_strip, rb, 0.05 * rho_x});
        int n_gen = -1;
        for (int n = 1; n <= opts.max_generations; ++n) {
            const double delta = r_build / n;
            const double bound = c_prime * delta * (r_strip + delta);
            if (bound < 0.9 * eps) {
                n_gen = n;
                break;
            }
        }
        if (n_gen < 0) continue;  // aperture still too wide for the budget

        ConeForest forest;
        try {
            forest = iterate(d, r_build, n_gen, std::min(0.9 * clearance, 1.0),
                             opts.policy);
        } catch (const ConeBudgetExceeded&) {
            continue;
        }

        NikodymPatch patch;
        patch.frame = cfg.frame;
        patch.phi = phi;
        patch.rho = rho;
        patch.x0_norm = xn;
        patch.r_signed = cfg.r_signed;
        patch.ball_norm = ball;
        patch.requested_eps = eps;
        patch.ball_area =
            disk_intersection_area(forest, ball, opts.mc_samples, opts.seed);
        patch.forest = std::move(forest);
        if (patch.ball_area.estimate >= eps) continue;
        return patch;
    }
}

std::vector<WitnessRow> patch_witness_grid(const NikodymPatch& patch, int grid,
                                           double theta0, double tol) {
    std::vector<WitnessRow> rows;
    rows.reserve(static_cast<size_t>(grid) * grid);
    // Spatial offsets within the diamond-shaped safe box around the center.
    const double h = patch.rho / (2.0 * std::sqrt(2.0));
    const int side = std::max(2, static_cast<int>(std::ceil(std::sqrt(grid))));
    std::vector<Point2> spots;
    for (int i = 0; i < side && static_cast<int>(spots.size()) < grid; ++i) {
        for (int j = 0; j < side && static_cast<int>(spots.size()) < grid; ++j) {
            const double u = side == 1 ? 0.0 : -1.0 + 2.0 * i / (side - 1);
            const double w = side == 1 ? 0.0 : -1.0 + 2.0 * j / (side - 1);
            spots.push_back(patch.x0_norm + Point2{u * h, w * h});
        }
    }
    const double hyper_angle = -theta0;  // direction of T0(H), clockwise from y
    for (const Point2& y : spots) {
        for (int j = 0; j < grid; ++j) {
            const double r =
                patch.r_signed - 0.9 * patch.rho +
                (grid == 1 ? 0.0 : 1.8 * patch.rho * j / (grid - 1));
            if (!patch.in_neighborhood(y, r)) {
                throw Error("patch_witness_grid: grid point left the neighborhood");
            }
            const DirectedLine ell = witness_line(patch.forest, y, r, tol);
            WitnessRow row;
            row.x = patch.frame.invert(y);
            row.r = std::abs(r);
            row.achieved = signed_distance(y, ell);
            double ang = patch.frame.invert_angle(ell.theta);
            // Compare unoriented directions.
            double dev = angle_distance(ang, hyper_angle);
            dev = std::min(dev, kPi - dev);
            row.angle_to_hyperplane = dev;
            // Express the witness line in the original frame via two points.
            const Point2 p1{ell.offset * -std::cos(ell.theta),
                            ell.offset * std::sin(ell.theta)};
            const Point2 p2 = p1 + direction(ell.theta);
            const Point2 q1 = patch.frame.invert(p1);
            const Point2 q2 = patch.frame.invert(p2);
            double theta_orig = std::atan2(q2.x - q1.x, q2.y - q1.y);
            if (theta_orig > kPi / 2.0) theta_orig -= kPi;
            if (theta_orig < -kPi / 2.0) theta_orig += kPi;
            row.line_original_frame = line_through(q1, theta_orig);
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace coneforge
