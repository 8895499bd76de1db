#include "coneforge/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coneforge/errors.hpp"
#include "coneforge/measure.hpp"
#include "coneforge/rng.hpp"

namespace coneforge {

ConePartition partition_cone(const DoubleCone& d, int m) {
    if (m < 1) throw Error("partition_cone: m must be >= 1");
    ConePartition part;
    part.parent = d;
    part.cuts.resize(static_cast<size_t>(m) + 1);
    part.cuts.front() = d.angle_lo;
    part.cuts.back() = d.angle_hi;
    const double w = (d.angle_hi - d.angle_lo) / m;
    for (int j = 1; j < m; ++j) {
        part.cuts[static_cast<size_t>(j)] = d.angle_lo + j * w;
    }
    return part;
}

Segment2 admissible_vertex_segment(const DoubleCone& d, double delta) {
    if (delta <= 0.0) throw Error("admissible_vertex_segment: delta must be positive");
    const double lo = d.angle_lo, hi = d.angle_hi;
    // Lower-nappe constraint: w = -delta*(tan(theta), 1), theta in [lo, hi].
    double a = -delta * std::tan(hi);
    double b = -delta * std::tan(lo);
    // Reflected dual constraint: -w in the dual sector, i.e. w = -delta*(tan(theta), 1)
    // for theta in [hi - pi/2, lo + pi/2] intersected with (-pi/2, pi/2).
    const double inf = std::numeric_limits<double>::infinity();
    const double a2 = (lo < 0.0) ? -delta * std::tan(lo + kPi / 2.0) : -inf;
    const double b2 = (hi > 0.0) ? -delta * std::tan(hi - kPi / 2.0) : inf;
    const double left = std::max(a, a2);
    const double right = std::min(b, b2);
    if (left > right) {
        throw Error("admissible_vertex_segment: empty segment (internal error)");
    }
    return {{d.vertex.x + left, d.vertex.y - delta},
            {d.vertex.x + right, d.vertex.y - delta}};
}

std::vector<DoubleCone> ConeForest::generation_cones(int k) const {
    std::vector<DoubleCone> out;
    const auto& ids = generations[static_cast<size_t>(k)];
    out.reserve(ids.size());
    for (int id : ids) out.push_back(cones[static_cast<size_t>(id)].cone);
    return out;
}

double unit_slice_area(const DoubleCone& d) {
    return 0.5 * (std::tan(d.angle_hi) - std::tan(d.angle_lo));
}

namespace {

// Max distance of a translated cone's clipped upper boundary to a reference
// upper nappe. The clipped region is convex and the distance function is
// convex, so corners of the boundary rays suffice.
double clipped_excess(const DoubleCone& child, const DoubleCone& reference,
                      double y_bottom, double y_top) {
    double worst = 0.0;
    for (double theta : {child.angle_lo, child.angle_hi}) {
        const double c = std::cos(theta);
        const double s_lo = std::max(0.0, (y_bottom - child.vertex.y) / c);
        const double s_hi = (y_top - child.vertex.y) / c;
        if (s_hi < s_lo) continue;
        for (double s : {s_lo, s_hi}) {
            const Point2 q = child.vertex + direction(theta) * s;
            worst = std::max(worst, distance_to_upper_nappe(reference, q));
        }
    }
    return worst;
}

// Translate every sub-cone of the partition to the midpoint of its
// admissible segment.
void spawn_children(ConeForest& forest, int parent_id, int m, double delta) {
    const DoubleCone parent = forest.cones[static_cast<size_t>(parent_id)].cone;
    const ConePartition part = partition_cone(parent, m);
    const int gen = forest.cones[static_cast<size_t>(parent_id)].generation + 1;
    for (int j = 0; j < part.size(); ++j) {
        DoubleCone sub = part.sub_cone(j);
        const Segment2 seg = admissible_vertex_segment(sub, delta);
        const Point2 v{0.5 * (seg.a.x + seg.b.x), seg.a.y};
        const Vec2 w = v - sub.vertex;
        sub.vertex = v;
        const int id = static_cast<int>(forest.cones.size());
        forest.cones.push_back({sub, gen, parent_id, w});
        forest.children[static_cast<size_t>(parent_id)].push_back(id);
        forest.children.emplace_back();
        forest.generations.back().push_back(id);
    }
}

void drop_generation(ConeForest& forest) {
    const auto& ids = forest.generations.back();
    if (!ids.empty()) {
        const size_t first = static_cast<size_t>(ids.front());
        forest.cones.resize(first);
        forest.children.resize(first);
        for (auto& ch : forest.children) {
            while (!ch.empty() && static_cast<size_t>(ch.back()) >= first) ch.pop_back();
        }
    }
    forest.generations.pop_back();
}

}  // namespace

ConeForest iterate(const DoubleCone& d, double R, int N, double eps,
                   const FinenessPolicy& policy) {
    if (R <= 0.0 || N < 1) throw Error("iterate: need R > 0 and N >= 1");
    if (eps <= 0.0) throw Error("iterate: need eps > 0");
    const double delta = R / N;
    const double c_prime = 2.0 * unit_slice_area(d);

    ConeForest forest;
    forest.original = d;
    forest.params = {R, N, delta, eps};
    forest.cones.push_back({d, 0, -1, {0.0, 0.0}});
    forest.children.emplace_back();
    forest.generations.push_back({0});

    for (int k = 1; k <= N; ++k) {
        int m = policy.initial_m;
        for (int attempt = 0;; ++attempt) {
            const std::vector<int> parents = forest.generations[static_cast<size_t>(k) - 1];
            const std::int64_t projected =
                static_cast<std::int64_t>(forest.cones.size()) +
                static_cast<std::int64_t>(parents.size()) * m;
            if (projected > policy.cone_cap) {
                throw ConeBudgetExceeded("iterate: cone budget exceeded at generation " +
                                         std::to_string(k));
            }
            forest.generations.emplace_back();
            for (int pid : parents) spawn_children(forest, pid, m, delta);

            // Strip measures for every strip this generation meets, and the
            // neighborhood budget for this depth.
            const auto gen_cones = forest.generation_cones(k);
            bool ok = true;
            const double y0 = d.vertex.y;
            for (int j = 1; j <= k && ok; ++j) {
                const Strip strip{y0 - j * delta, y0 - (j - 1) * delta};
                const double measured =
                    strip_union_area(std::span<const DoubleCone>(gen_cones), strip);
                if (measured >= c_prime * delta * delta * (1.0 - 1e-9)) ok = false;
            }
            if (ok) {
                const double budget = eps * (1.0 - std::ldexp(1.0, -k));
                double excess = 0.0;
                for (const auto& c : gen_cones) {
                    excess = std::max(excess, clipped_excess(c, d, y0, y0 + 3.0 * R));
                    if (excess > budget) break;
                }
                if (excess > budget) ok = false;
            }
            if (ok) {
                forest.per_generation_m.push_back(m);
                break;
            }
            drop_generation(forest);
            if (attempt + 1 >= policy.max_doublings) {
                throw ConeBudgetExceeded(
                    "iterate: refinement exhausted at generation " + std::to_string(k));
            }
            m *= 2;
        }
    }
    return forest;
}

ConeForest basic_step(const DoubleCone& d, double delta, double eps,
                      const FinenessPolicy& policy) {
    if (delta <= 0.0) throw Error("basic_step: delta must be positive");
    return iterate(d, delta, 1, eps, policy);
}

DirectedLine witness_line(const ConeForest& forest, Point2 x, double r, double tol) {
    const DoubleCone& root = forest.original;
    if (!dual_contains(root, x, tol)) {
        throw WitnessNotFound("witness_line: point outside the original dual sector");
    }
    if (!distance_interval(root, x, tol).contains(r, tol)) {
        throw WitnessNotFound("witness_line: distance outside the original interval");
    }
    int node = 0;
    const int last_gen = static_cast<int>(forest.generations.size()) - 1;
    for (int g = 0; g < last_gen; ++g) {
        int next = -1;
        for (int cid : forest.children[static_cast<size_t>(node)]) {
            const DoubleCone& c = forest.cones[static_cast<size_t>(cid)].cone;
            if (dual_contains(c, x, tol) &&
                distance_interval(c, x, tol).contains(r, tol)) {
                next = cid;
                break;
            }
        }
        if (next < 0) {
            node = -1;
            break;
        }
        node = next;
    }
    if (node >= 0) {
        const DoubleCone& c = forest.cones[static_cast<size_t>(node)].cone;
        const Interval iv = distance_interval(c, x, tol);
        return line_at_distance(c, x, std::clamp(r, iv.lo, iv.hi), tol);
    }
    // Descent failed numerically; scan the final generation.
    for (int cid : forest.final_ids()) {
        const DoubleCone& c = forest.cones[static_cast<size_t>(cid)].cone;
        if (dual_contains(c, x, tol) && distance_interval(c, x, tol).contains(r, tol)) {
            const Interval iv = distance_interval(c, x, tol);
            return line_at_distance(c, x, std::clamp(r, iv.lo, iv.hi), tol);
        }
    }
    throw WitnessNotFound("witness_line: no final cone covers the requested distance");
}

double neighborhood_excess(const ConeForest& forest, double height, int generation) {
    const int gen = (generation < 0)
                        ? static_cast<int>(forest.generations.size()) - 1
                        : generation;
    const double y0 = forest.original.vertex.y;
    double worst = 0.0;
    for (int id : forest.generations[static_cast<size_t>(gen)]) {
        const auto& c = forest.cones[static_cast<size_t>(id)].cone;
        worst = std::max(worst, clipped_excess(c, forest.original, y0, y0 + height));
    }
    return worst;
}

ConditionReport verify_conditions(const ConeForest& forest, int samples,
                                  std::uint64_t seed, double tol) {
    ConditionReport rep;
    const DoubleCone& d = forest.original;
    const double y0 = d.vertex.y;
    const double delta = forest.params.delta;
    const double c_prime = 2.0 * unit_slice_area(d);
    const int N = static_cast<int>(forest.generations.size()) - 1;

    // (1) strip measures per generation and sub-strip.
    rep.strip_pass = true;
    for (int k = 1; k <= N; ++k) {
        const auto gen_cones = forest.generation_cones(k);
        for (int j = 1; j <= k; ++j) {
            StripMeasureRow row;
            row.generation = k;
            row.strip_index = j;
            row.bound = c_prime * delta * delta;
            row.measured = strip_union_area(
                std::span<const DoubleCone>(gen_cones),
                Strip{y0 - j * delta, y0 - (j - 1) * delta});
            row.pass = row.measured < row.bound + 1e-9;
            rep.strip_pass = rep.strip_pass && row.pass;
            rep.strip_rows.push_back(row);
        }
    }
    {
        const auto fin = forest.final_cones();
        rep.total_final_strip_area = strip_union_area(
            std::span<const DoubleCone>(fin), Strip{y0 - forest.params.R, y0});
        rep.total_final_strip_bound =
            c_prime * forest.params.R * forest.params.R / std::max(1, N);
        rep.strip_pass = rep.strip_pass &&
                         rep.total_final_strip_area < rep.total_final_strip_bound + 1e-9;
    }

    // (2) distance surjectivity on seeded samples.
    Rng rng(seed);
    const double sector_lo = d.angle_hi - kPi / 2.0;
    const double sector_hi = d.angle_lo + kPi / 2.0;
    rep.surjectivity_samples = samples;
    rep.surjectivity_hits = 0;
    rep.surjectivity_worst_error = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double ang = rng.uniform(sector_lo, sector_hi);
        const double rad = rng.uniform(0.0, 3.0 * forest.params.R);
        const Point2 p = d.vertex + direction(ang) * rad;
        const Interval iv = distance_interval(d, p, tol);
        const double t = rng.uniform(iv.lo, iv.hi);
        try {
            const DirectedLine ell = witness_line(forest, p, t, tol);
            const double err = std::abs(signed_distance(p, ell) - t);
            rep.surjectivity_worst_error = std::max(rep.surjectivity_worst_error, err);
            if (err <= tol) ++rep.surjectivity_hits;
        } catch (const WitnessNotFound&) {
        }
    }
    rep.surjectivity_pass = rep.surjectivity_hits == rep.surjectivity_samples;

    // (3) vertex levels.
    rep.vertex_level_max_deviation = 0.0;
    for (const auto& tc : forest.cones) {
        if (tc.generation == 0) continue;
        const double want = y0 - tc.generation * delta;
        rep.vertex_level_max_deviation = std::max(
            rep.vertex_level_max_deviation, std::abs(tc.cone.vertex.y - want));
    }
    rep.vertex_pass = rep.vertex_level_max_deviation <= 1e-9;

    // (4) dual containment: sampled points of the original dual sector belong
    // to every final cone's dual sector.
    rep.dual_samples = std::min(samples, 1000);
    rep.dual_pass = true;
    for (int i = 0; i < rep.dual_samples && rep.dual_pass; ++i) {
        const double ang = rng.uniform(sector_lo, sector_hi);
        const double rad = rng.uniform(0.0, 3.0 * forest.params.R);
        const Point2 p = d.vertex + direction(ang) * rad;
        for (int id : forest.final_ids()) {
            if (!dual_contains(forest.cones[static_cast<size_t>(id)].cone, p, tol)) {
                rep.dual_pass = false;
                break;
            }
        }
    }

    // (5) neighborhood of the original upper part.
    rep.neighborhood_budget = forest.params.eps;
    rep.neighborhood_max_excess = neighborhood_excess(forest, 3.0 * forest.params.R);
    double drift = 0.0;
    for (int id : forest.final_ids()) {
        double acc = 0.0;
        int cur = id;
        while (cur > 0) {
            const auto& tc = forest.cones[static_cast<size_t>(cur)];
            acc += norm(tc.translation) * tc.cone.width();
            cur = tc.parent;
        }
        drift = std::max(drift, acc);
    }
    rep.analytic_drift_bound = drift;
    rep.neighborhood_pass = rep.neighborhood_max_excess <= rep.neighborhood_budget;

    return rep;
}

}  // namespace coneforge
