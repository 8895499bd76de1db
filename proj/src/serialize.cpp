#include "coneforge/serialize.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "coneforge/errors.hpp"

namespace coneforge {

using json = nlohmann::ordered_json;

namespace {

json vec2_json(Vec2 v) { return json::array({v.x, v.y}); }
Vec2 vec2_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

std::string csv_line(const std::vector<std::string>& fields) {
    std::string line;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += fields[i];
    }
    line += "\r\n";
    return line;
}

std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string forest_to_json(const ConeForest& forest) {
    json doc;
    doc["params"] = {{"vertex", vec2_json(forest.original.vertex)},
                     {"angle_lo", forest.original.angle_lo},
                     {"angle_hi", forest.original.angle_hi},
                     {"R", forest.params.R},
                     {"N", forest.params.N},
                     {"delta", forest.params.delta},
                     {"eps", forest.params.eps},
                     {"per_generation_m", forest.per_generation_m}};
    json cones = json::array();
    for (size_t i = 0; i < forest.cones.size(); ++i) {
        const auto& tc = forest.cones[i];
        cones.push_back({{"id", static_cast<int>(i)},
                         {"generation", tc.generation},
                         {"parent", tc.parent},
                         {"vertex", vec2_json(tc.cone.vertex)},
                         {"angle_lo", tc.cone.angle_lo},
                         {"angle_hi", tc.cone.angle_hi},
                         {"translation", vec2_json(tc.translation)}});
    }
    doc["cones"] = std::move(cones);
    doc["generations"] = forest.generations;
    return doc.dump(2) + "\n";
}

ConeForest forest_from_json(const std::string& text) {
    const json doc = json::parse(text);
    ConeForest forest;
    const auto& p = doc.at("params");
    forest.original = {vec2_from(p.at("vertex")), p.at("angle_lo").get<double>(),
                       p.at("angle_hi").get<double>()};
    forest.params.R = p.at("R").get<double>();
    forest.params.N = p.at("N").get<int>();
    forest.params.delta = p.at("delta").get<double>();
    forest.params.eps = p.at("eps").get<double>();
    if (p.contains("per_generation_m")) {
        forest.per_generation_m = p.at("per_generation_m").get<std::vector<int>>();
    }
    for (const auto& c : doc.at("cones")) {
        TranslatedCone tc;
        tc.cone = {vec2_from(c.at("vertex")), c.at("angle_lo").get<double>(),
                   c.at("angle_hi").get<double>()};
        tc.generation = c.at("generation").get<int>();
        tc.parent = c.at("parent").get<int>();
        tc.translation = vec2_from(c.at("translation"));
        forest.cones.push_back(tc);
    }
    forest.generations = doc.at("generations").get<std::vector<std::vector<int>>>();
    forest.children.assign(forest.cones.size(), {});
    for (size_t i = 0; i < forest.cones.size(); ++i) {
        const int parent = forest.cones[i].parent;
        if (parent >= 0) {
            forest.children[static_cast<size_t>(parent)].push_back(static_cast<int>(i));
        }
    }
    return forest;
}

std::string report_to_json(const ConditionReport& rep) {
    json doc;
    json rows = json::array();
    for (const auto& r : rep.strip_rows) {
        rows.push_back({{"generation", r.generation},
                        {"strip_index", r.strip_index},
                        {"measured", r.measured},
                        {"bound", r.bound},
                        {"pass", r.pass}});
    }
    doc["strip"] = {{"rows", std::move(rows)},
                    {"final_area", rep.total_final_strip_area},
                    {"final_bound", rep.total_final_strip_bound},
                    {"pass", rep.strip_pass}};
    doc["surjectivity"] = {{"samples", rep.surjectivity_samples},
                           {"hits", rep.surjectivity_hits},
                           {"worst_error", rep.surjectivity_worst_error},
                           {"pass", rep.surjectivity_pass}};
    doc["vertex_levels"] = {{"max_deviation", rep.vertex_level_max_deviation},
                            {"pass", rep.vertex_pass}};
    doc["dual_containment"] = {{"samples", rep.dual_samples}, {"pass", rep.dual_pass}};
    doc["neighborhood"] = {{"max_excess", rep.neighborhood_max_excess},
                           {"budget", rep.neighborhood_budget},
                           {"analytic_drift_bound", rep.analytic_drift_bound},
                           {"pass", rep.neighborhood_pass}};
    doc["all_pass"] = rep.all_pass();
    return doc.dump(2) + "\n";
}

std::string placements_to_json(const PlacementSet& set) {
    json doc;
    doc["tag"] = static_cast<int>(set.tag);
    doc["ambient"] = set.ambient;
    json items = json::array();
    for (const auto& p : set.items) {
        items.push_back({{"x", json::array({p.x[0], p.x[1], p.x[2]})},
                         {"r", p.r},
                         {"theta", p.theta}});
    }
    doc["items"] = std::move(items);
    return doc.dump(2) + "\n";
}

PlacementSet placements_from_json(const std::string& text) {
    const json doc = json::parse(text);
    PlacementSet set;
    set.tag = static_cast<BaseSpace>(doc.at("tag").get<int>());
    set.ambient = doc.at("ambient").get<int>();
    for (const auto& item : doc.at("items")) {
        Placement p;
        const auto& x = item.at("x");
        p.x = {x.at(0).get<double>(), x.at(1).get<double>(), x.at(2).get<double>()};
        p.r = item.at("r").get<double>();
        p.theta = item.at("theta").get<double>();
        set.items.push_back(p);
    }
    return set;
}

std::string cover_to_json(const CoverFamily& family) {
    json doc;
    doc["eps"] = family.eps;
    doc["base_angle"] = family.base_angle;
    doc["angle_step"] = family.angle_step;
    doc["offset_step"] = family.offset_step;
    doc["offset_lo"] = family.offset_lo;
    doc["n_angle"] = family.n_angle;
    doc["n_offset"] = family.n_offset;
    doc["report"] = {{"samples", family.report.samples},
                     {"worst_motion", family.report.worst_motion},
                     {"worst_line_error", family.report.worst_line_error},
                     {"pass", family.report.pass}};
    json lines = json::array();
    for (const auto& l : family.lines) {
        lines.push_back(json::array({l.alpha, l.c}));
    }
    doc["lines"] = std::move(lines);
    return doc.dump(2) + "\n";
}

std::string boxcount_to_csv(const BoxCountSeries& series) {
    std::string out = csv_line({"scale", "count"});
    for (size_t i = 0; i < series.scales.size(); ++i) {
        out += csv_line({fmt(series.scales[i]), std::to_string(series.counts[i])});
    }
    out += csv_line({"slope", fmt(series.slope)});
    out += csv_line({"residual", fmt(series.residual)});
    return out;
}

std::string areas_to_csv(const std::vector<AreaRow>& rows) {
    std::string out = csv_line({"generation", "strip_lo", "strip_hi", "area", "bound", "pass"});
    for (const auto& r : rows) {
        out += csv_line({std::to_string(r.generation), fmt(r.strip_lo), fmt(r.strip_hi),
                         fmt(r.measured), fmt(r.bound), r.pass ? "1" : "0"});
    }
    return out;
}

std::string witness_rows_to_csv(const std::vector<WitnessRow>& rows) {
    std::string out =
        csv_line({"x1", "x2", "r", "achieved", "angle_to_hyperplane"});
    for (const auto& row : rows) {
        out += csv_line({fmt(row.x.x), fmt(row.x.y), fmt(row.r), fmt(row.achieved),
                         fmt(row.angle_to_hyperplane)});
    }
    return out;
}

std::string segments_to_text(const std::vector<Segment2>& segments) {
    std::string out;
    for (const auto& s : segments) {
        out += fmt(s.a.x) + " " + fmt(s.a.y) + " " + fmt(s.b.x) + " " + fmt(s.b.y) + "\n";
    }
    return out;
}

std::vector<Segment2> segments_from_text(const std::string& text) {
    std::vector<Segment2> out;
    std::istringstream is(text);
    double x1, y1, x2, y2;
    while (is >> x1 >> y1 >> x2 >> y2) {
        out.push_back({{x1, y1}, {x2, y2}});
    }
    return out;
}

namespace {

void svg_header(std::ostringstream& os, const Box2& vp) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << vp.x_lo << " "
       << -vp.y_hi << " " << (vp.x_hi - vp.x_lo) << " " << (vp.y_hi - vp.y_lo)
       << "\">\n";
}

}  // namespace

std::string forest_to_svg(const ConeForest& forest, double margin) {
    const double R = forest.params.R;
    const double y0 = forest.original.vertex.y;
    const double half =
        (R > 0 ? 3.0 * R : 1.0) * std::max(std::abs(std::tan(forest.original.angle_lo)),
                                           std::abs(std::tan(forest.original.angle_hi))) +
        margin;
    const Box2 vp{forest.original.vertex.x - half, forest.original.vertex.x + half,
                  y0 - R - margin, y0 + 3.0 * R + margin};
    std::ostringstream os;
    os.precision(10);
    svg_header(os, vp);
    // Final cones as boundary rays clipped to the viewport; y flipped so the
    // strip appears below the original vertex.
    auto emit_ray = [&](Point2 v, double theta, const char* color) {
        for (double s : {-1.0, 1.0}) {
            const Vec2 u = direction(theta) * s;
            double t_max = 6.0 * (R > 0 ? R : 1.0);
            const Point2 q = v + u * t_max;
            os << "<line x1=\"" << v.x << "\" y1=\"" << -v.y << "\" x2=\"" << q.x
               << "\" y2=\"" << -q.y << "\" stroke=\"" << color
               << "\" stroke-width=\"0.002\"/>\n";
        }
    };
    for (int id : forest.final_ids()) {
        const auto& c = forest.cones[static_cast<size_t>(id)].cone;
        emit_ray(c.vertex, c.angle_lo, "#4477aa");
        emit_ray(c.vertex, c.angle_hi, "#4477aa");
    }
    emit_ray(forest.original.vertex, forest.original.angle_lo, "#cc3311");
    emit_ray(forest.original.vertex, forest.original.angle_hi, "#cc3311");
    os << "<!-- unbounded cones drawn clipped to the viewport -->\n";
    os << "</svg>\n";
    return os.str();
}

std::string geometry_to_svg(const Geometry& geometry, const Box2& vp) {
    std::ostringstream os;
    os.precision(10);
    svg_header(os, vp);
    for (const auto& s : geometry.segments) {
        os << "<line x1=\"" << s.a.x << "\" y1=\"" << -s.a.y << "\" x2=\"" << s.b.x
           << "\" y2=\"" << -s.b.y << "\" stroke=\"#4477aa\" stroke-width=\"0.003\"/>\n";
    }
    for (const auto& p : geometry.points) {
        os << "<circle cx=\"" << p.x << "\" cy=\"" << -p.y
           << "\" r=\"0.004\" fill=\"#cc3311\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open for writing: " + path);
    os << content;
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace coneforge
