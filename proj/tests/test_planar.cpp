#include <doctest.h>

#include <cmath>

#include "coneforge/planar.hpp"
#include "coneforge/rng.hpp"

using namespace coneforge;

namespace {

// Brute-force distance extremes over the line family, used as the oracle for
// distance_interval.
Interval sampled_interval(const DoubleCone& d, Point2 p, int n) {
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i <= n; ++i) {
        const double theta = d.angle_lo + (d.angle_hi - d.angle_lo) * i / n;
        const double v = signed_distance(p, line_through(d.vertex, theta));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

}  // namespace

TEST_CASE("signed distance sign convention") {
    const DirectedLine up_axis = line_through({0, 0}, 0.0);
    CHECK(signed_distance({-1, 0}, up_axis) == doctest::Approx(1.0));
    CHECK(signed_distance({0, 3}, up_axis) == doctest::Approx(0.0));

    // {y1 = 1} with theta = 0 has offset -1 in the canonical form.
    const DirectedLine right_line = line_through({1, 0}, 0.0);
    CHECK(right_line.offset == doctest::Approx(-1.0));
    CHECK(signed_distance({3, 4}, right_line) == doctest::Approx(-2.0));
}

TEST_CASE("cone membership") {
    const DoubleCone d{{0, 0}, -kPi / 4, kPi / 4};
    CHECK(cone_contains(d, {0, 5}));
    CHECK_FALSE(cone_contains(d, {5, 0}));
    CHECK(cone_contains(d, {-1, -1}));  // lower nappe, theta = pi/4 branch
    CHECK(cone_contains(d, {0, 0}));    // vertex
}

TEST_CASE("cone symmetry through the vertex") {
    Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
        const double lo = rng.uniform(-1.4, 1.3);
        const double hi = rng.uniform(lo + 0.01, 1.4);
        const DoubleCone d{{rng.uniform(-2, 2), rng.uniform(-2, 2)}, lo, hi};
        const Point2 p{rng.uniform(-5, 5), rng.uniform(-5, 5)};
        const Point2 q = d.vertex * 2.0 - p;
        CHECK(cone_contains(d, p) == cone_contains(d, q));
    }
}

TEST_CASE("dual sector membership") {
    const DoubleCone d{{0, 0}, -kPi / 4, kPi / 4};
    CHECK(dual_contains(d, {0, 2}));
    CHECK_FALSE(dual_contains(d, {0, -1}));
    CHECK(dual_contains(d, d.vertex));
}

TEST_CASE("lines in the cone pass through the vertex") {
    const DoubleCone d{{0, 0}, -kPi / 4, kPi / 4};
    const LineFamily fam = lines_in_cone(d);
    CHECK(fam.at(d.angle_lo).offset == doctest::Approx(boundary_line_lo(d).offset));
    CHECK(fam.at(d.angle_hi).offset == doctest::Approx(boundary_line_hi(d).offset));
    // A vertical line off the vertex is not contained in the cone: points near
    // the vertex level fall outside.
    CHECK_FALSE(cone_contains(d, {0.1, 0.01}));
}

TEST_CASE("distance interval") {
    const DoubleCone d{{0, 0}, -kPi / 4, kPi / 4};
    const Interval iv = distance_interval(d, {0, 2});
    CHECK(iv.lo == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
    CHECK(iv.hi == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    const Interval probe = sampled_interval(d, {0, 2}, 10000);
    CHECK(std::abs(iv.lo - probe.lo) < 1e-7);  // sampling resolution limited
    CHECK(std::abs(iv.hi - probe.hi) < 1e-7);

    const Interval at_vertex = distance_interval(d, d.vertex);
    CHECK(at_vertex.lo == doctest::Approx(0.0));
    CHECK(at_vertex.hi == doctest::Approx(0.0));

    CHECK_THROWS_AS(distance_interval(d, {0, -1}), PointNotInDualCone);
}

TEST_CASE("distance interval endpoints match brute force on random cones") {
    Rng rng(11);
    int done = 0;
    while (done < 200) {
        const double lo = rng.uniform(-1.3, 1.2);
        const double hi = rng.uniform(lo + 0.05, 1.3);
        const DoubleCone d{{rng.uniform(-1, 1), rng.uniform(-1, 1)}, lo, hi};
        const double ang = rng.uniform(hi - kPi / 2, lo + kPi / 2);
        const Point2 p = d.vertex + direction(ang) * rng.uniform(0.0, 4.0);
        if (!dual_contains(d, p)) continue;
        const Interval iv = distance_interval(d, p);
        const Interval probe = sampled_interval(d, p, 10000);
        CHECK(iv.lo <= probe.lo + 1e-9);
        CHECK(iv.hi >= probe.hi - 1e-9);
        CHECK(std::abs(iv.lo - probe.lo) < 1e-6);
        CHECK(std::abs(iv.hi - probe.hi) < 1e-6);
        ++done;
    }
}

TEST_CASE("distance map is monotone over the dual sector") {
    Rng rng(13);
    int done = 0;
    while (done < 1000) {
        const double lo = rng.uniform(-1.4, 1.3);
        const double hi = rng.uniform(lo + 0.01, 1.4);
        const DoubleCone d{{rng.uniform(-2, 2), rng.uniform(-2, 2)}, lo, hi};
        const double ang = rng.uniform(hi - kPi / 2, lo + kPi / 2);
        const Point2 p = d.vertex + direction(ang) * rng.uniform(0.0, 5.0);
        if (!dual_contains(d, p)) continue;
        double prev = -1e300;
        for (int i = 0; i <= 100; ++i) {
            const double theta = lo + (hi - lo) * i / 100.0;
            const double v = signed_distance(p, line_through(d.vertex, theta));
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
        ++done;
    }
}

TEST_CASE("line at a requested distance") {
    const DoubleCone d{{0, 0}, -kPi / 4, kPi / 4};
    const Point2 p{0, 2};

    // Solve 2 sin(theta) = 1.
    const DirectedLine ell = line_at_distance(d, p, 1.0);
    CHECK(ell.theta == doctest::Approx(kPi / 6).epsilon(1e-12));
    CHECK(signed_distance(p, ell) == doctest::Approx(1.0).epsilon(1e-12));

    const Interval iv = distance_interval(d, p);
    CHECK(line_at_distance(d, p, iv.lo).theta == doctest::Approx(d.angle_lo));
    CHECK(line_at_distance(d, p, iv.hi).theta == doctest::Approx(d.angle_hi));

    CHECK_THROWS_AS(line_at_distance(d, p, std::sqrt(2.0) + 0.01), DistanceOutOfRange);
}

TEST_CASE("line_at_distance round trip") {
    Rng rng(17);
    int done = 0;
    while (done < 1000) {
        const double lo = rng.uniform(-1.3, 1.2);
        const double hi = rng.uniform(lo + 0.05, 1.3);
        const DoubleCone d{{rng.uniform(-1, 1), rng.uniform(-1, 1)}, lo, hi};
        const double ang = rng.uniform(hi - kPi / 2, lo + kPi / 2);
        const Point2 p = d.vertex + direction(ang) * rng.uniform(1e-3, 4.0);
        if (!dual_contains(d, p)) continue;
        const Interval iv = distance_interval(d, p);
        const double t = rng.uniform(iv.lo, iv.hi);
        const DirectedLine ell = line_at_distance(d, p, t);
        CHECK(std::abs(signed_distance(p, ell) - t) <= 1e-9);
        ++done;
    }
}
