#pragma once

#include <string>
#include <vector>

#include "coneforge/arrange.hpp"
#include "coneforge/forest.hpp"
#include "coneforge/measure.hpp"
#include "coneforge/placements.hpp"

namespace coneforge {

// JSON documents use stable key order (insertion order) so byte-identical
// reruns are testable.
std::string forest_to_json(const ConeForest& forest);
ConeForest forest_from_json(const std::string& text);

std::string report_to_json(const ConditionReport& report);
std::string placements_to_json(const PlacementSet& set);
PlacementSet placements_from_json(const std::string& text);
std::string cover_to_json(const CoverFamily& family);
std::string boxcount_to_csv(const BoxCountSeries& series);

struct AreaRow {
    int generation = 0;
    double strip_lo = 0.0;
    double strip_hi = 0.0;
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
};
std::string areas_to_csv(const std::vector<AreaRow>& rows);

std::string witness_rows_to_csv(const std::vector<WitnessRow>& rows);

// Flat segment list, one "x1 y1 x2 y2" per line.
std::string segments_to_text(const std::vector<Segment2>& segments);
std::vector<Segment2> segments_from_text(const std::string& text);

// SVG drawing of a forest clipped to a viewport.
std::string forest_to_svg(const ConeForest& forest, double margin = 0.2);
std::string geometry_to_svg(const Geometry& geometry, const Box2& viewport);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace coneforge
