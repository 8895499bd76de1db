#include <doctest.h>

#include <cmath>

#include "coneforge/forest.hpp"
#include "coneforge/measure.hpp"
#include "coneforge/rng.hpp"
#include "coneforge/serialize.hpp"

using namespace coneforge;

TEST_CASE("equal-angle partition") {
    const DoubleCone d{{0, 0}, -kPi / 4, kPi / 4};
    const ConePartition p2 = partition_cone(d, 2);
    REQUIRE(p2.size() == 2);
    CHECK(p2.cuts[0] == -kPi / 4);
    CHECK(p2.cuts[1] == doctest::Approx(0.0));
    CHECK(p2.cuts[2] == kPi / 4);

    const ConePartition p1 = partition_cone(d, 1);
    CHECK(p1.size() == 1);
    CHECK(p1.sub_cone(0).angle_lo == d.angle_lo);
    CHECK(p1.sub_cone(0).angle_hi == d.angle_hi);

    const DoubleCone narrow{{0, 0}, -kPi / 8, kPi / 8};
    const ConePartition p4 = partition_cone(narrow, 4);
    for (int j = 0; j < 4; ++j) {
        CHECK(p4.sub_cone(j).width() == doctest::Approx(kPi / 16).epsilon(1e-12));
    }

    CHECK_THROWS_AS(partition_cone(d, 0), Error);
}

TEST_CASE("sub-cones share cut values exactly") {
    const DoubleCone d{{0.3, -0.2}, -kPi / 7, kPi / 5};
    const ConePartition p = partition_cone(d, 5);
    for (int j = 0; j + 1 < p.size(); ++j) {
        CHECK(p.sub_cone(j).angle_hi == p.sub_cone(j + 1).angle_lo);
    }
}

namespace {

// Independent oracle for the admissible segment: dense scan over the level
// line, classifying each point by the two membership predicates.
Segment2 scanned_segment(const DoubleCone& d, double delta, int n) {
    const double y = d.vertex.y - delta;
    const double span = 20.0 * delta;
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i <= n; ++i) {
        const double x = d.vertex.x - span + 2.0 * span * i / n;
        const Point2 p{x, y};
        const Point2 reflected = d.vertex * 2.0 - p;
        if (cone_contains(d, p, 1e-12) && dual_contains(d, reflected, 1e-12)) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }
    return {{lo, y}, {hi, y}};
}

}  // namespace

TEST_CASE("admissible vertex segment") {
    const DoubleCone sym{{0, 0}, -kPi / 4, kPi / 4};
    const Segment2 s1 = admissible_vertex_segment(sym, 0.1);
    CHECK(s1.a.x == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(s1.b.x == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(s1.a.y == doctest::Approx(-0.1));

    const DoubleCone asym{{0, 0}, 0.0, kPi / 4};
    const Segment2 s2 = admissible_vertex_segment(asym, 0.1);
    CHECK(s2.a.x == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(s2.b.x == doctest::Approx(0.0).epsilon(1e-10));

    // Doubling delta scales the segment about the vertical through the vertex.
    const Segment2 s3 = admissible_vertex_segment(sym, 0.2);
    CHECK(s3.a.x == doctest::Approx(2.0 * s1.a.x));
    CHECK(s3.b.x == doctest::Approx(2.0 * s1.b.x));
}

TEST_CASE("admissible segment matches the membership scan") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const double lo = rng.uniform(-1.2, 1.1);
        const double hi = rng.uniform(lo + 0.05, std::min(1.2, lo + 1.2));
        const DoubleCone d{{rng.uniform(-1, 1), rng.uniform(-1, 1)}, lo, hi};
        const double delta = rng.uniform(0.05, 0.5);
        const Segment2 seg = admissible_vertex_segment(d, delta);
        const Segment2 probe = scanned_segment(d, delta, 40000);
        const double res = 2.0 * 20.0 * delta / 40000;
        CHECK(std::abs(seg.a.x - probe.a.x) <= 2.0 * res);
        CHECK(std::abs(seg.b.x - probe.b.x) <= 2.0 * res);
    }
}

TEST_CASE("basic step satisfies the construction conditions") {
    const DoubleCone d{{0, 0}, -kPi / 4, kPi / 4};
    const double delta = 0.1;
    const ConeForest step = basic_step(d, delta, 0.05);
    const double c = unit_slice_area(d);
    CHECK(c == doctest::Approx(std::tan(kPi / 4)).epsilon(1e-12));

    // (1) strip measure bounded by c * delta^2.
    const auto cones = step.final_cones();
    const double area = strip_union_area(std::span<const DoubleCone>(cones),
                                         Strip{-delta, 0.0});
    CHECK(area <= c * delta * delta + 1e-12);

    // (3) every vertex sits exactly on the level line.
    for (int id : step.final_ids()) {
        CHECK(step.cones[static_cast<size_t>(id)].cone.vertex.y ==
              doctest::Approx(-delta).epsilon(1e-15));
    }

    // (4) sampled points of the dual sector stay inside every child's dual.
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        const double ang = rng.uniform(d.angle_hi - kPi / 2, d.angle_lo + kPi / 2);
        const Point2 p = direction(ang) * rng.uniform(0.0, 3.0);
        for (int id : step.final_ids()) {
            CHECK(dual_contains(step.cones[static_cast<size_t>(id)].cone, p, 1e-9));
        }
    }
}

TEST_CASE("iterate: degenerate N=1 equals a basic step") {
    const DoubleCone d{{0, 0}, -kPi / 8, kPi / 8};
    const ConeForest a = iterate(d, 0.1, 1, 0.05);
    const ConeForest b = basic_step(d, 0.1, 0.05);
    CHECK(forest_to_json(a) == forest_to_json(b));
}

TEST_CASE("iterate: strip measures shrink and stay below the bound") {
    const DoubleCone d{{0, 0}, -kPi / 8, kPi / 8};
    const double c_prime = 2.0 * unit_slice_area(d);
    double prev = 1e300;
    for (int N : {2, 4, 8}) {
        const ConeForest forest = iterate(d, 1.0, N, 0.05);
        const auto fin = forest.final_cones();
        const double area =
            strip_union_area(std::span<const DoubleCone>(fin), Strip{-1.0, 0.0});
        CHECK(area <= c_prime / N + 1e-9);
        CHECK(area < prev);
        prev = area;

        const double delta = 1.0 / N;
        for (int k = 1; k <= N; ++k) {
            const auto gen = forest.generation_cones(k);
            for (int j = 1; j <= k; ++j) {
                const double m = strip_union_area(
                    std::span<const DoubleCone>(gen),
                    Strip{-j * delta, -(j - 1) * delta});
                CHECK(m < c_prime * delta * delta + 1e-9);
            }
        }
    }
}

TEST_CASE("iterate: vertices reach the bottom level and duals nest") {
    const DoubleCone d{{0.2, 0.4}, -kPi / 8, kPi / 8};
    const ConeForest forest = iterate(d, 0.5, 4, 0.05);
    for (int id : forest.final_ids()) {
        CHECK(std::abs(forest.cones[static_cast<size_t>(id)].cone.vertex.y -
                       (0.4 - 0.5)) < 1e-12);
    }

    // Translating a sub-cone grows its distance interval: the interval of the
    // translated cone contains the interval of the same angular sub-cone left
    // at its parent's vertex.
    Rng rng(9);
    int checked = 0;
    while (checked < 50) {
        const double ang = rng.uniform(d.angle_hi - kPi / 2, d.angle_lo + kPi / 2);
        const Point2 p = d.vertex + direction(ang) * rng.uniform(0.0, 2.0);
        if (!dual_contains(d, p)) continue;
        for (const auto& tc : forest.cones) {
            if (tc.generation == 0) continue;
            DoubleCone untranslated = tc.cone;
            untranslated.vertex = untranslated.vertex - tc.translation;
            const Interval inner = distance_interval(untranslated, p, 1e-9);
            const Interval outer = distance_interval(tc.cone, p, 1e-9);
            CHECK(outer.lo <= inner.lo + 1e-12);
            CHECK(outer.hi >= inner.hi - 1e-12);
        }
        ++checked;
    }
}

TEST_CASE("iterate: upper containment of the original cone") {
    const DoubleCone d{{0, 0}, -kPi / 8, kPi / 8};
    const ConeForest forest = iterate(d, 1.0, 4, 0.05);
    const auto fin = forest.final_cones();
    Rng rng(15);
    for (int i = 0; i < 2000; ++i) {
        // Points of the original cone above the axis level.
        const double theta = rng.uniform(d.angle_lo, d.angle_hi);
        const double r = rng.uniform(0.0, 3.0);
        const Point2 p = d.vertex + direction(theta) * r;
        bool covered = false;
        for (const auto& c : fin) {
            if (cone_contains(c, p, 1e-9)) {
                covered = true;
                break;
            }
        }
        CHECK(covered);
    }
}

TEST_CASE("iterate is deterministic") {
    const DoubleCone d{{0, 0}, -kPi / 8, kPi / 8};
    const ConeForest a = iterate(d, 1.0, 4, 0.05);
    const ConeForest b = iterate(d, 1.0, 4, 0.05);
    CHECK(forest_to_json(a) == forest_to_json(b));
}

TEST_CASE("witness lines hit every requested distance") {
    const DoubleCone d{{0, 0}, -kPi / 4, kPi / 4};
    const ConeForest forest = iterate(d, 1.0, 4, 0.05);

    const DirectedLine ell = witness_line(forest, {0, 2}, 1.0);
    CHECK(std::abs(signed_distance({0, 2}, ell) - 1.0) <= 1e-9);

    // r = 0 with the point on the cone axis.
    const DirectedLine zero = witness_line(forest, {0, 2}, 0.0);
    CHECK(std::abs(signed_distance({0, 2}, zero)) <= 1e-9);

    CHECK_THROWS_AS(witness_line(forest, {0, 2}, 5.0), WitnessNotFound);
}

TEST_CASE("verify_conditions reports a clean forest and flags corruption") {
    const DoubleCone d{{0, 0}, -kPi / 8, kPi / 8};
    ConeForest forest = iterate(d, 1.0, 4, 0.05);
    const ConditionReport rep = verify_conditions(forest, 500, 77);
    CHECK(rep.all_pass());
    CHECK(rep.surjectivity_hits == rep.surjectivity_samples);
    CHECK(rep.neighborhood_max_excess <= rep.analytic_drift_bound + 1e-12);

    // Negative control: move one final vertex off its level.
    ConeForest corrupt = forest;
    const int victim = corrupt.final_ids().front();
    corrupt.cones[static_cast<size_t>(victim)].cone.vertex.y += forest.params.delta / 2;
    const ConditionReport bad = verify_conditions(corrupt, 100, 77);
    CHECK_FALSE(bad.vertex_pass);
}

TEST_CASE("forest JSON round trip") {
    const DoubleCone d{{0.1, -0.2}, -kPi / 8, kPi / 6};
    const ConeForest forest = iterate(d, 0.4, 3, 0.05);
    const std::string text = forest_to_json(forest);
    const ConeForest back = forest_from_json(text);
    CHECK(forest_to_json(back) == text);
}

TEST_CASE("cone budget is enforced") {
    FinenessPolicy tight;
    tight.cone_cap = 20;
    CHECK_THROWS_AS(iterate({{0, 0}, -kPi / 8, kPi / 8}, 1.0, 8, 0.05, tight),
                    ConeBudgetExceeded);
}
