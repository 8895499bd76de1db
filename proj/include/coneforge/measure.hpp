#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "coneforge/forest.hpp"
#include "coneforge/planar.hpp"

namespace coneforge {

// Per-cone cross-section: at height y the cone covers the interval
// [lo_b + lo_s*y, hi_b + hi_s*y]. Valid on a strip free of the apex.
struct CrossSection {
    double lo_b = 0.0, lo_s = 0.0;
    double hi_b = 0.0, hi_s = 0.0;

    double lo(double y) const { return lo_b + lo_s * y; }
    double hi(double y) const { return hi_b + hi_s * y; }
};

// Exact area of (union of cones) ∩ strip. Internally splits the strip at
// apex heights; each apex-free band is integrated event-exactly. Two engines:
// a generic all-pairs endpoint-crossing sweep for small inputs, and a fusion
// sweep for large forests whose cones tile an angular interval with strictly
// decreasing vertex abscissae (what iterate() produces).
enum class StripEngine { kAuto, kPairSweep, kFusion };

double strip_union_area(std::span<const DoubleCone> cones, const Strip& strip,
                        StripEngine engine = StripEngine::kAuto);
double strip_union_area(const ConeForest& forest, const Strip& strip,
                        StripEngine engine = StripEngine::kAuto);

// Union length of the cone cross-sections at a single height. Brute-force
// sort-and-merge; used as a test oracle and in diagnostics.
double union_length_at(std::span<const DoubleCone> cones, double y);

struct McResult {
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::int64_t hits = 0;
    std::int64_t samples = 0;
};

struct Box2 {
    double x_lo = 0.0, x_hi = 0.0;
    double y_lo = 0.0, y_hi = 0.0;

    double area() const { return (x_hi - x_lo) * (y_hi - y_lo); }
};

McResult monte_carlo_area(const std::function<bool(Point2)>& contains,
                          const Box2& box, std::int64_t n_samples,
                          std::uint64_t seed);

struct Disk {
    Point2 center;
    double radius = 0.0;
};

// Point-in-union queries against a fixed cone list, bucketed by height band
// for the query box.
class UnionLocator {
public:
    UnionLocator(std::span<const DoubleCone> cones, double y_lo, double y_hi,
                 int bands = 64);
    bool contains(Point2 p) const;

private:
    struct Entry {
        double x_lo, x_hi;
        int cone;
    };
    std::vector<DoubleCone> cones_;
    std::vector<std::vector<Entry>> bands_;      // sorted by x_lo
    std::vector<std::vector<double>> prefix_hi_; // running max of x_hi
    double y_lo_, y_hi_, band_h_;
};

struct DiskAreaResult {
    double estimate = 0.0;      // Monte Carlo
    double stderr_ = 0.0;
    double strip_upper_bound = 0.0;  // exact area of the union over the disk's y-extent
};

DiskAreaResult disk_intersection_area(const ConeForest& forest, const Disk& disk,
                                      std::int64_t n_samples, std::uint64_t seed);

// Geometry for box counting: exact points and segments.
struct Geometry {
    std::vector<Point2> points;
    std::vector<Segment2> segments;

    bool empty() const { return points.empty() && segments.empty(); }
};

struct BoxCountSeries {
    std::vector<double> scales;        // strictly decreasing dyadic side lengths
    std::vector<std::int64_t> counts;  // nonempty half-open boxes per scale
    double slope = 0.0;                // log2(count) vs log2(1/scale), least squares
    double residual = 0.0;             // rms residual of the fit
};

// Counts nonempty half-open dyadic boxes anchored at the origin for side
// lengths 2^-k, k = scale_pow_lo..scale_pow_hi. Segments are rasterized by
// exact cell traversal, not point sampling.
BoxCountSeries box_dimension_estimate(const Geometry& geometry, int scale_pow_lo,
                                      int scale_pow_hi);

}  // namespace coneforge
