#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "coneforge/forest.hpp"
#include "coneforge/measure.hpp"
#include "coneforge/rng.hpp"

using namespace coneforge;

namespace {

// Independent oracle: Riemann integration of the union length with interval
// merging at every height.
double riemann_area(const std::vector<DoubleCone>& cones, const Strip& strip, int n) {
    double area = 0.0;
    const double h = (strip.y_hi - strip.y_lo) / n;
    for (int i = 0; i < n; ++i) {
        const double y = strip.y_lo + (i + 0.5) * h;
        area += union_length_at(std::span<const DoubleCone>(cones), y) * h;
    }
    return area;
}

std::vector<DoubleCone> random_cones(Rng& rng, int count) {
    std::vector<DoubleCone> cones;
    for (int i = 0; i < count; ++i) {
        const double lo = rng.uniform(-1.2, 1.1);
        const double hi = rng.uniform(lo + 0.02, std::min(1.2, lo + 1.0));
        cones.push_back({{rng.uniform(-1, 1), rng.uniform(-1.5, 0.5)}, lo, hi});
    }
    return cones;
}

}  // namespace

TEST_CASE("single cone strip area equals the triangle area") {
    const std::vector<DoubleCone> cones{{{0, 0}, -kPi / 4, kPi / 4}};
    const double a = strip_union_area(std::span<const DoubleCone>(cones), {0.0, 1.0});
    CHECK(a == doctest::Approx(1.0).epsilon(1e-12));  // (tan hi - tan lo)/2
}

TEST_CASE("strip area is additive over disjoint supports and idempotent") {
    const DoubleCone left{{-10, 0}, -0.2, 0.2};
    const DoubleCone right{{10, 0}, -0.2, 0.2};
    const std::vector<DoubleCone> both{left, right};
    const std::vector<DoubleCone> one{left};
    const std::vector<DoubleCone> twice{left, left};
    const Strip s{0.0, 1.0};
    const double a_one = strip_union_area(std::span<const DoubleCone>(one), s);
    const double a_both = strip_union_area(std::span<const DoubleCone>(both), s);
    const double a_twice = strip_union_area(std::span<const DoubleCone>(twice), s);
    CHECK(a_both == doctest::Approx(2.0 * a_one).epsilon(1e-12));
    CHECK(a_twice == doctest::Approx(a_one).epsilon(1e-12));
}

TEST_CASE("strip area handles apexes inside the strip and lower nappes") {
    const std::vector<DoubleCone> cones{{{0, 0.5}, -kPi / 4, kPi / 4}};
    // Both nappes clipped to [0, 1]: two triangles of height 0.5.
    const double a = strip_union_area(std::span<const DoubleCone>(cones), {0.0, 1.0});
    CHECK(a == doctest::Approx(2.0 * 0.25).epsilon(1e-12));
}

TEST_CASE("strip area matches the Riemann oracle on random families") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const auto cones = random_cones(rng, 3 + trial);
        const Strip strip{-1.0, 0.8};
        const double exact = strip_union_area(std::span<const DoubleCone>(cones), strip);
        const double probe = riemann_area(cones, strip, 20000);
        CHECK(exact == doctest::Approx(probe).epsilon(5e-4));
    }
}

TEST_CASE("strip area is monotone in the cone list and order invariant") {
    Rng rng(29);
    auto cones = random_cones(rng, 12);
    const Strip strip{-0.8, 0.6};
    double prev = 0.0;
    for (size_t n = 1; n <= cones.size(); ++n) {
        const double a = strip_union_area(
            std::span<const DoubleCone>(cones.data(), n), strip);
        CHECK(a >= prev - 1e-12);
        prev = a;
    }
    auto shuffled = cones;
    std::reverse(shuffled.begin(), shuffled.end());
    CHECK(strip_union_area(std::span<const DoubleCone>(shuffled), strip) ==
          doctest::Approx(prev).epsilon(1e-12));
}

TEST_CASE("strip area is additive across abutting strips") {
    Rng rng(31);
    const auto cones = random_cones(rng, 10);
    const double a = strip_union_area(std::span<const DoubleCone>(cones), {-1.0, -0.3});
    const double b = strip_union_area(std::span<const DoubleCone>(cones), {-0.3, 0.5});
    const double c = strip_union_area(std::span<const DoubleCone>(cones), {-1.0, 0.5});
    CHECK(a + b == doctest::Approx(c).epsilon(1e-9));
}

TEST_CASE("fusion engine agrees with the pair sweep on forest strips") {
    // Forests are the structured inputs the large-n engine is built for; force
    // both engines across sizes by measuring generations of varying width.
    for (int N : {2, 4, 6, 8}) {
        const ConeForest forest = iterate({{0, 0}, -kPi / 8, kPi / 8}, 1.0, N, 0.05);
        const auto fin = forest.final_cones();
        for (int j = 1; j <= N; ++j) {
            const Strip strip{-static_cast<double>(j) / N,
                              -static_cast<double>(j - 1) / N};
            const double exact =
                strip_union_area(std::span<const DoubleCone>(fin), strip);
            const double probe = riemann_area(fin, strip, 4000);
            CHECK(exact == doctest::Approx(probe).epsilon(2e-3));
        }
    }
}

TEST_CASE("monte carlo area: disk, determinism, forest cross-check") {
    const auto in_disk = [](Point2 p) { return p.x * p.x + p.y * p.y <= 1.0; };
    const Box2 box{-1, 1, -1, 1};
    const McResult mc = monte_carlo_area(in_disk, box, 1000000, 42);
    CHECK(std::abs(mc.estimate - kPi) <= 4.0 * mc.stderr_);

    const McResult again = monte_carlo_area(in_disk, box, 1000000, 42);
    CHECK(mc.estimate == again.estimate);

    Rng rng(37);
    const auto cones = random_cones(rng, 8);
    const Strip strip{-0.5, 0.5};
    const double exact = strip_union_area(std::span<const DoubleCone>(cones), strip);
    UnionLocator locator(std::span<const DoubleCone>(cones), strip.y_lo, strip.y_hi);
    double x_lo = 1e300, x_hi = -1e300;
    for (const auto& c : cones) {
        for (double y : {strip.y_lo, strip.y_hi}) {
            const double dy = y - c.vertex.y;
            x_lo = std::min({x_lo, c.vertex.x + dy * std::tan(c.angle_lo),
                             c.vertex.x + dy * std::tan(c.angle_hi), c.vertex.x});
            x_hi = std::max({x_hi, c.vertex.x + dy * std::tan(c.angle_lo),
                             c.vertex.x + dy * std::tan(c.angle_hi), c.vertex.x});
        }
    }
    const Box2 bbox{x_lo, x_hi, strip.y_lo, strip.y_hi};
    const McResult probe = monte_carlo_area(
        [&](Point2 p) { return locator.contains(p); }, bbox, 1000000, 5);
    CHECK(std::abs(probe.estimate - exact) <= 4.0 * probe.stderr_);
}

TEST_CASE("union locator agrees with direct membership") {
    Rng rng(41);
    const auto cones = random_cones(rng, 20);
    UnionLocator locator(std::span<const DoubleCone>(cones), -1.0, 1.0);
    for (int i = 0; i < 20000; ++i) {
        const Point2 p{rng.uniform(-3, 3), rng.uniform(-1, 1)};
        bool direct = false;
        for (const auto& c : cones) direct = direct || cone_contains(c, p, 0.0);
        CHECK(locator.contains(p) == direct);
    }
}

TEST_CASE("box dimension of a segment, a square and a Cantor stage") {
    Geometry segment;
    segment.segments.push_back({{0, 0}, {1, 0}});
    const BoxCountSeries s1 = box_dimension_estimate(segment, 4, 10);
    CHECK(std::abs(s1.slope - 1.0) <= 0.05);

    Geometry square;
    const int g = 1 << 11;
    for (int i = 0; i <= g; ++i)
        for (int j = 0; j <= g; ++j)
            square.points.push_back({static_cast<double>(i) / g,
                                     static_cast<double>(j) / g});
    const BoxCountSeries s2 = box_dimension_estimate(square, 4, 10);
    CHECK(std::abs(s2.slope - 2.0) <= 0.05);

    Geometry cantor;
    std::vector<std::pair<double, double>> iv{{0.0, 1.0}};
    for (int s = 0; s < 10; ++s) {
        std::vector<std::pair<double, double>> next;
        for (auto [a, b] : iv) {
            const double third = (b - a) / 3.0;
            next.push_back({a, a + third});
            next.push_back({b - third, b});
        }
        iv = std::move(next);
    }
    for (auto [a, b] : iv) cantor.segments.push_back({{a, 0.0}, {b, 0.0}});
    const BoxCountSeries s3 = box_dimension_estimate(cantor, 4, 10);
    CHECK(std::abs(s3.slope - std::log(2.0) / std::log(3.0)) <= 0.05);
}

TEST_CASE("box counts do not decrease as the scale shrinks") {
    Geometry geo;
    geo.segments.push_back({{-0.3, 0.2}, {0.9, 0.7}});
    geo.points.push_back({0.5, -0.4});
    const BoxCountSeries s = box_dimension_estimate(geo, 4, 10);
    for (size_t i = 0; i + 1 < s.counts.size(); ++i) {
        CHECK(s.counts[i] <= s.counts[i + 1]);
    }
}
