#include "coneforge/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coneforge/errors.hpp"

namespace coneforge {

double placement_distance(const Placement& a, const Placement& b, BaseSpace tag,
                          int ambient) {
    double dx = a.x[0] - b.x[0];
    double dy = a.x[1] - b.x[1];
    double dz = (ambient == 3) ? a.x[2] - b.x[2] : 0.0;
    double d = std::sqrt(dx * dx + dy * dy + dz * dz);
    d = std::max(d, std::abs(a.r - b.r));
    if (tag != BaseSpace::kScaled) {
        d = std::max(d, angle_distance(a.theta, b.theta));
    }
    return d;
}

double directed_hausdorff(const PlacementSet& a, const PlacementSet& b) {
    if (a.tag != b.tag || a.ambient != b.ambient) {
        throw TagMismatch("hausdorff: placement sets live over different base spaces");
    }
    if (a.items.empty() || b.items.empty()) {
        throw Error("hausdorff: empty placement set");
    }
    double worst = 0.0;
    for (const auto& p : a.items) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : b.items) {
            best = std::min(best, placement_distance(p, q, a.tag, a.ambient));
            if (best == 0.0) break;
        }
        worst = std::max(worst, best);
    }
    return worst;
}

double hausdorff_distance(const PlacementSet& a, const PlacementSet& b) {
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

bool full_projection_check(const PlacementSet& k, const std::vector<Point2>& centers,
                           double tol) {
    for (const Point2& c : centers) {
        bool found = false;
        for (const auto& p : k.items) {
            const double dx = p.x[0] - c.x, dy = p.x[1] - c.y;
            if (std::sqrt(dx * dx + dy * dy) <= tol) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

namespace {

std::vector<double> axis_grid(double lo, double hi, double eps) {
    std::vector<double> out;
    if (hi <= lo) {
        out.push_back(lo);
        return out;
    }
    // Step eps with both endpoints present: covering radius <= eps/2.
    const int n = static_cast<int>(std::ceil((hi - lo) / eps));
    for (int i = 0; i <= n; ++i) {
        out.push_back(std::min(hi, lo + i * eps));
    }
    return out;
}

}  // namespace

PlacementSet epsilon_net(const NetBounds& bounds, double eps, BaseSpace tag,
                         int ambient) {
    if (eps <= 0.0) throw Error("epsilon_net: eps must be positive");
    PlacementSet net;
    net.tag = tag;
    net.ambient = ambient;
    const auto xs = axis_grid(bounds.x_lo, bounds.x_hi, eps);
    const auto ys = axis_grid(bounds.y_lo, bounds.y_hi, eps);
    const auto zs = (ambient == 3) ? axis_grid(bounds.z_lo, bounds.z_hi, eps)
                                   : std::vector<double>{0.0};
    const auto rs = axis_grid(bounds.r_lo, bounds.r_hi, eps);
    std::vector<double> angles{0.0};
    if (bounds.with_rotation) {
        angles.clear();
        const int n = std::max(1, static_cast<int>(std::ceil(2.0 * kPi / eps)));
        for (int i = 0; i < n; ++i) angles.push_back(2.0 * kPi * i / n);
    }
    for (double x : xs)
        for (double y : ys)
            for (double z : zs)
                for (double r : rs)
                    for (double th : angles) {
                        Placement p;
                        p.x = {x, y, z};
                        p.r = r;
                        p.theta = th;
                        net.items.push_back(p);
                    }
    return net;
}

}  // namespace coneforge
