#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coneforge/planar.hpp"

namespace coneforge {

// Partition of a double cone into equal-angle sub-cones sharing its vertex.
// Cut values are stored once so adjacent sub-cones share their boundary
// angle bit-for-bit.
struct ConePartition {
    DoubleCone parent;
    std::vector<double> cuts;  // cuts[0] = angle_lo, cuts[m] = angle_hi

    int size() const { return static_cast<int>(cuts.size()) - 1; }
    DoubleCone sub_cone(int j) const {
        return {parent.vertex, cuts[static_cast<size_t>(j)],
                cuts[static_cast<size_t>(j) + 1]};
    }
};

ConePartition partition_cone(const DoubleCone& d, int m);

struct Segment2 {
    Point2 a;
    Point2 b;
};

// The segment on {y2 = vertex_y - delta} of admissible translated vertices:
// points of the cone's lower nappe whose negative also lies in the dual
// sector. Nonempty for every cone in range; the reflected axis direction
// always qualifies.
Segment2 admissible_vertex_segment(const DoubleCone& d, double delta);

struct TranslatedCone {
    DoubleCone cone;
    int generation = 0;
    int parent = -1;       // index into ConeForest::cones, -1 for the root
    Vec2 translation;      // vertex displacement applied at this step
};

struct FinenessPolicy {
    int initial_m = 2;          // sub-cones per refinement step
    std::int64_t cone_cap = 1000000;  // total stored cones across generations
    int max_doublings = 8;      // per-generation refinement retries
};

struct ForestParams {
    double R = 0.0;
    int N = 0;
    double delta = 0.0;  // R / N
    double eps = 0.0;    // neighborhood budget for the whole iteration
};

// Generational forest of translated cones. cones[0] is the original cone
// (generation 0); generations[k] lists the cone ids of E_k.
struct ConeForest {
    DoubleCone original;
    ForestParams params;
    std::vector<TranslatedCone> cones;
    std::vector<std::vector<int>> generations;
    std::vector<std::vector<int>> children;
    std::vector<int> per_generation_m;  // partition fineness used per step

    const std::vector<int>& final_ids() const { return generations.back(); }
    std::vector<DoubleCone> generation_cones(int k) const;
    std::vector<DoubleCone> final_cones() const { return generation_cones(static_cast<int>(generations.size()) - 1); }
};

// One translation step: partition, translate each sub-cone to the midpoint of
// its admissible segment on {y2 = vertex_y - delta}. Refines the partition
// until the upper parts stay within eps of the input cone's upper nappe.
ConeForest basic_step(const DoubleCone& d, double delta, double eps,
                      const FinenessPolicy& policy = {});

// N-fold iteration with delta = R/N. Maintains, generation by generation,
// the strip measures |E_k ∩ {-j*delta <= y2 <= -(j-1)*delta}| < c' * delta^2
// (c' = 2|D ∩ {0 <= y2 <= 1}|) and the vertex level and neighborhood
// conditions, refining the offending generation as needed.
ConeForest iterate(const DoubleCone& d, double R, int N, double eps,
                   const FinenessPolicy& policy = {});

// Area of the cone's slice {0 <= y2 - vertex_y <= 1}; the constant c in the
// strip bounds.
double unit_slice_area(const DoubleCone& d);

struct StripMeasureRow {
    int generation = 0;
    int strip_index = 0;  // j: strip {-j*delta, -(j-1)*delta} below the original vertex
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct ConditionReport {
    // (1) strip measures, newest and older strips per generation
    std::vector<StripMeasureRow> strip_rows;
    double total_final_strip_area = 0.0;
    double total_final_strip_bound = 0.0;  // c' R^2 / N
    bool strip_pass = false;

    // (2) distance surjectivity sampling
    int surjectivity_samples = 0;
    int surjectivity_hits = 0;
    double surjectivity_worst_error = 0.0;
    bool surjectivity_pass = false;

    // (3) vertex levels
    double vertex_level_max_deviation = 0.0;
    bool vertex_pass = false;

    // (4) dual containment sampling
    int dual_samples = 0;
    bool dual_pass = false;

    // (5) neighborhood, measured on boundary rays within {0 <= y2' <= 3R}
    double neighborhood_max_excess = 0.0;
    double neighborhood_budget = 0.0;
    // Sliding bound covering the unbounded upper part: sum over steps of
    // |translation| * (sub-cone angular width).
    double analytic_drift_bound = 0.0;
    bool neighborhood_pass = false;

    bool all_pass() const {
        return strip_pass && surjectivity_pass && vertex_pass && dual_pass &&
               neighborhood_pass;
    }
};

ConditionReport verify_conditions(const ConeForest& forest, int samples,
                                  std::uint64_t seed, double tol = kDefaultTol);

// Line in some final-generation cone at signed distance r from x. Requires x
// in the original cone's dual sector and r in its distance interval; found by
// descending the construction tree (child intervals cover the parent's).
DirectedLine witness_line(const ConeForest& forest, Point2 x, double r,
                          double tol = kDefaultTol);

// Largest distance from any point of the translated upper parts (clipped to
// {0 <= y2 - original_vertex_y <= height}) to the original upper nappe.
double neighborhood_excess(const ConeForest& forest, double height, int generation = -1);

}  // namespace coneforge
