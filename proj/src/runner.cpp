#include "coneforge/runner.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>

#include <json.hpp>

#include "coneforge/arrange.hpp"
#include "coneforge/errors.hpp"
#include "coneforge/forest.hpp"
#include "coneforge/hausdorff.hpp"
#include "coneforge/measure.hpp"
#include "coneforge/rng.hpp"
#include "coneforge/serialize.hpp"

namespace coneforge {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Ctx {
    json cfg;
    fs::path out;
    std::uint64_t seed = 1;
    double tol = kDefaultTol;
    std::int64_t cone_cap = 1000000;

    double num(const char* key) const { return cfg.at(key).get<double>(); }
    double num_or(const char* key, double fallback) const {
        return cfg.contains(key) ? cfg.at(key).get<double>() : fallback;
    }
    int integer_or(const char* key, int fallback) const {
        return cfg.contains(key) ? cfg.at(key).get<int>() : fallback;
    }
    void save(const std::string& name, const std::string& content) const {
        write_file((out / name).string(), content);
    }
};

DoubleCone cone_from(const json& cfg) {
    DoubleCone d;
    d.angle_lo = cfg.at("angle_lo").get<double>();
    d.angle_hi = cfg.at("angle_hi").get<double>();
    if (cfg.contains("vertex")) {
        d.vertex = {cfg.at("vertex").at(0).get<double>(),
                    cfg.at("vertex").at(1).get<double>()};
    }
    return d;
}

std::vector<AreaRow> forest_area_rows(const ConeForest& forest) {
    std::vector<AreaRow> rows;
    const double y0 = forest.original.vertex.y;
    const double delta = forest.params.delta;
    const double c_prime = 2.0 * unit_slice_area(forest.original);
    const int n = static_cast<int>(forest.generations.size()) - 1;
    for (int k = 1; k <= n; ++k) {
        const auto cones = forest.generation_cones(k);
        for (int j = 1; j <= k; ++j) {
            AreaRow row;
            row.generation = k;
            row.strip_lo = y0 - j * delta;
            row.strip_hi = y0 - (j - 1) * delta;
            row.measured = strip_union_area(std::span<const DoubleCone>(cones),
                                            Strip{row.strip_lo, row.strip_hi});
            row.bound = c_prime * delta * delta;
            row.pass = row.measured < row.bound + 1e-9;
            rows.push_back(row);
        }
    }
    AreaRow total;
    total.generation = n;
    total.strip_lo = y0 - forest.params.R;
    total.strip_hi = y0;
    const auto fin = forest.final_cones();
    total.measured = strip_union_area(std::span<const DoubleCone>(fin),
                                      Strip{total.strip_lo, total.strip_hi});
    total.bound = c_prime * forest.params.R * forest.params.R / std::max(1, n);
    total.pass = total.measured < total.bound + 1e-9;
    rows.push_back(total);
    return rows;
}

int cmd_construct(const Ctx& ctx) {
    const DoubleCone d = cone_from(ctx.cfg);
    FinenessPolicy policy;
    policy.initial_m = ctx.integer_or("initial_m", 2);
    policy.cone_cap = ctx.cone_cap;
    const ConeForest forest =
        iterate(d, ctx.num("R"), ctx.cfg.at("N").get<int>(), ctx.num_or("eps", 0.05),
                policy);
    const auto rows = forest_area_rows(forest);
    ctx.save("forest.json", forest_to_json(forest));
    ctx.save("areas.csv", areas_to_csv(rows));
    ctx.save("forest.svg", forest_to_svg(forest));
    bool pass = true;
    for (const auto& r : rows) pass = pass && r.pass;
    std::cout << "construct: " << forest.cones.size() << " cones, final strip area "
              << rows.back().measured << " (bound " << rows.back().bound << ")\n";
    return pass ? 0 : 1;
}

int cmd_verify(const Ctx& ctx) {
    const ConeForest forest =
        forest_from_json(read_file(ctx.cfg.at("forest").get<std::string>()));
    const int samples = ctx.integer_or("samples", 1000);
    const ConditionReport rep = verify_conditions(forest, samples, ctx.seed, ctx.tol);
    ctx.save("report.json", report_to_json(rep));
    std::cout << "verify: " << (rep.all_pass() ? "pass" : "FAIL") << "\n";
    return rep.all_pass() ? 0 : 1;
}

int cmd_measure(const Ctx& ctx) {
    const ConeForest forest =
        forest_from_json(read_file(ctx.cfg.at("forest").get<std::string>()));
    std::vector<AreaRow> rows;
    if (ctx.cfg.contains("strips")) {
        const auto fin = forest.final_cones();
        for (const auto& s : ctx.cfg.at("strips")) {
            AreaRow row;
            row.generation = static_cast<int>(forest.generations.size()) - 1;
            row.strip_lo = s.at(0).get<double>();
            row.strip_hi = s.at(1).get<double>();
            row.measured = strip_union_area(std::span<const DoubleCone>(fin),
                                            Strip{row.strip_lo, row.strip_hi});
            row.bound = 0.0;
            row.pass = true;
            rows.push_back(row);
        }
    } else {
        rows = forest_area_rows(forest);
    }
    ctx.save("areas.csv", areas_to_csv(rows));
    bool pass = true;
    for (const auto& r : rows) pass = pass && r.pass;
    return pass ? 0 : 1;
}

int cmd_nikodym(const Ctx& ctx) {
    const Point2 x0{ctx.cfg.at("x0").at(0).get<double>(),
                    ctx.cfg.at("x0").at(1).get<double>()};
    const Disk ball{{ctx.cfg.at("ball").at("center").at(0).get<double>(),
                     ctx.cfg.at("ball").at("center").at(1).get<double>()},
                    ctx.cfg.at("ball").at("radius").get<double>()};
    PatchOptions opts;
    opts.seed = ctx.seed;
    opts.mc_samples = static_cast<std::int64_t>(ctx.num_or("mc_samples", 1e6));
    opts.policy.cone_cap = ctx.cone_cap;
    const double eta = ctx.num("eta");
    const NikodymPatch patch = nikodym_patch(x0, ctx.num("r0"), ctx.num("theta0"),
                                             ball, eta, ctx.num("eps"), opts);
    const int grid = ctx.integer_or("grid", 20);
    const auto rows = patch_witness_grid(patch, grid, ctx.num("theta0"), ctx.tol);

    json doc;
    doc["phi"] = patch.phi;
    doc["rho"] = patch.rho;
    doc["r_signed"] = patch.r_signed;
    doc["x0_norm"] = json::array({patch.x0_norm.x, patch.x0_norm.y});
    doc["frame"] = {{"beta", patch.frame.beta},
                    {"shift", json::array({patch.frame.shift.x, patch.frame.shift.y})}};
    doc["ball_norm"] = {{"center", json::array({patch.ball_norm.center.x,
                                                patch.ball_norm.center.y})},
                        {"radius", patch.ball_norm.radius}};
    doc["ball_area"] = {{"estimate", patch.ball_area.estimate},
                        {"stderr", patch.ball_area.stderr_},
                        {"strip_upper_bound", patch.ball_area.strip_upper_bound}};
    doc["forest_cones"] = patch.forest.cones.size();
    doc["requested_eps"] = patch.requested_eps;
    ctx.save("patch.json", doc.dump(2) + "\n");
    ctx.save("witnesses.csv", witness_rows_to_csv(rows));
    ctx.save("patch.svg", forest_to_svg(patch.forest));

    bool pass = patch.ball_area.estimate < patch.requested_eps;
    for (const auto& row : rows) {
        pass = pass && std::abs(std::abs(row.achieved) - row.r) <= ctx.tol;
        pass = pass && row.angle_to_hyperplane <= eta + 1e-12;
    }
    std::cout << "nikodym: |B ∩ forest| ≈ " << patch.ball_area.estimate << " (< "
              << patch.requested_eps << (pass ? ", pass" : ", FAIL") << ")\n";
    return pass ? 0 : 1;
}

AffineSubspace subspace_from(const json& cfg) {
    AffineSubspace v;
    if (cfg.contains("point")) {
        return make_point_subspace({cfg.at("point").at(0).get<double>(),
                                    cfg.at("point").at(1).get<double>(), 0.0},
                                   2);
    }
    const Vec3 anchor{cfg.at("anchor").at(0).get<double>(),
                      cfg.at("anchor").at(1).get<double>(),
                      cfg.at("anchor").size() > 2 ? cfg.at("anchor").at(2).get<double>()
                                                  : 0.0};
    const Vec3 dir{cfg.at("dir").at(0).get<double>(), cfg.at("dir").at(1).get<double>(),
                   cfg.at("dir").size() > 2 ? cfg.at("dir").at(2).get<double>() : 0.0};
    return make_line(anchor, dir, cfg.contains("ambient") ? cfg.at("ambient").get<int>() : 2);
}

int cmd_snap(const Ctx& ctx) {
    PlacementSet l;
    if (ctx.cfg.contains("placements")) {
        l = placements_from_json(read_file(ctx.cfg.at("placements").get<std::string>()));
    } else {
        // Seeded random set over a box and scale interval.
        Rng rng(ctx.seed);
        const int count = ctx.integer_or("count", 100);
        l.tag = BaseSpace::kScaled;
        for (int i = 0; i < count; ++i) {
            Placement p;
            p.x = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), 0.0};
            p.r = rng.uniform(0.5, 2.0);
            l.items.push_back(p);
        }
    }
    const AffineSubspace v = subspace_from(ctx.cfg.at("subspace"));
    const double eps = ctx.num("eps");
    const PlacementSet k = snap_scaled(l, v, eps);
    const double dh = hausdorff_distance(k, l);
    const auto values = snap_values(k, v, eps);

    std::vector<Point2> centers;
    for (const auto& p : l.items) centers.push_back(p.xy());
    const bool proj_ok = full_projection_check(k, centers, 0.0);

    json doc;
    doc["eps"] = eps;
    doc["input_size"] = l.items.size();
    doc["snapped_size"] = k.items.size();
    doc["hausdorff_distance"] = dh;
    doc["value_count"] = values.size();
    doc["full_projection"] = proj_ok;
    doc["pass"] = dh <= eps + 1e-12 && proj_ok;
    ctx.save("snapped.json", placements_to_json(k));
    ctx.save("snap_report.json", doc.dump(2) + "\n");
    std::cout << "snap: d_H = " << dh << " (eps " << eps << "), " << values.size()
              << " grid values\n";
    return doc["pass"].get<bool>() ? 0 : 1;
}

int cmd_cover(const Ctx& ctx) {
    const Box2 c_box{ctx.num_or("x_lo", 0.0), ctx.num_or("x_hi", 1.0),
                     ctx.num_or("y_lo", 0.0), ctx.num_or("y_hi", 1.0)};
    const AffineSubspace v = make_line({1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, 2);
    const CoverFamily fam =
        rotation_cover(v, c_box, ctx.num_or("i_lo", 1.0), ctx.num_or("i_hi", 2.0),
                       ctx.num("eps"), ctx.integer_or("samples", 10000), ctx.seed);
    ctx.save("cover.json", cover_to_json(fam));
    std::cout << "cover: " << fam.lines.size() << " lines, worst motion "
              << fam.report.worst_motion << "\n";
    return fam.report.pass ? 0 : 1;
}

int cmd_tangent(const Ctx& ctx) {
    const int n = ctx.integer_or("n", 2);
    const int k = ctx.integer_or("k", 0);
    const int count = ctx.integer_or("count", 1000);
    Rng rng(ctx.seed);
    std::vector<Placement> placements;
    for (int i = 0; i < count; ++i) {
        Placement p;
        p.x = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
               n == 3 ? rng.uniform(-1.0, 1.0) : 0.0};
        p.r = rng.uniform(0.5, 1.0);
        placements.push_back(p);
    }
    const auto hosts =
        default_host_family(n, k + 1, 1.0, ctx.integer_or("hosts", 256), ctx.seed + 1);
    const auto results = tangent_family(placements, k, n, hosts, 1e-12);
    double worst = 0.0;
    for (size_t i = 0; i < results.size(); ++i) {
        const double dist = results[i].plane.distance_to(placements[i].x);
        worst = std::max(worst, std::abs(dist - placements[i].r));
    }
    json doc;
    doc["count"] = count;
    doc["worst_distance_error"] = worst;
    doc["pass"] = worst <= 1e-12;
    ctx.save("tangent.json", doc.dump(2) + "\n");
    std::cout << "tangent: worst |dist - r| = " << worst << "\n";
    return worst <= 1e-12 ? 0 : 1;
}

int cmd_dimension(const Ctx& ctx) {
    Geometry geo;
    const std::string source = ctx.cfg.at("source").get<std::string>();
    if (source == "segment") {
        geo.segments.push_back({{0.0, 0.0}, {1.0, 0.0}});
    } else if (source == "square") {
        const int g = 1 << 11;
        for (int i = 0; i <= g; ++i)
            for (int j = 0; j <= g; ++j)
                geo.points.push_back(
                    {static_cast<double>(i) / g, static_cast<double>(j) / g});
    } else if (source == "cantor") {
        const int stage = ctx.integer_or("stage", 10);
        std::vector<std::pair<double, double>> iv{{0.0, 1.0}};
        for (int s = 0; s < stage; ++s) {
            std::vector<std::pair<double, double>> next;
            for (auto [a, b] : iv) {
                const double third = (b - a) / 3.0;
                next.push_back({a, a + third});
                next.push_back({b - third, b});
            }
            iv = std::move(next);
        }
        for (auto [a, b] : iv) geo.segments.push_back({{a, 0.0}, {b, 0.0}});
    } else {
        geo.segments = segments_from_text(read_file(source));
    }
    const BoxCountSeries series = box_dimension_estimate(
        geo, ctx.integer_or("scale_lo", 4), ctx.integer_or("scale_hi", 10));
    ctx.save("boxcount.csv", boxcount_to_csv(series));
    std::cout << "dimension: slope " << series.slope << "\n";
    return 0;
}

}  // namespace

int run(const std::string& subcommand, const std::string& config_json,
        const RunOverrides& overrides) {
    Ctx ctx;
    try {
        ctx.cfg = json::parse(config_json);
        ctx.out = overrides.out_dir.value_or(
            ctx.cfg.contains("out") ? ctx.cfg.at("out").get<std::string>() : ".");
        fs::create_directories(ctx.out);
        if (overrides.seed) {
            ctx.seed = *overrides.seed;
        } else if (ctx.cfg.contains("seed")) {
            ctx.seed = ctx.cfg.at("seed").get<std::uint64_t>();
        }
        if (overrides.tol) {
            ctx.tol = *overrides.tol;
        } else if (ctx.cfg.contains("tol")) {
            ctx.tol = ctx.cfg.at("tol").get<double>();
        }
        if (overrides.cone_cap) {
            ctx.cone_cap = *overrides.cone_cap;
        } else if (ctx.cfg.contains("cone_cap")) {
            ctx.cone_cap = ctx.cfg.at("cone_cap").get<std::int64_t>();
        }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    try {
        if (subcommand == "construct") return cmd_construct(ctx);
        if (subcommand == "verify") return cmd_verify(ctx);
        if (subcommand == "measure") return cmd_measure(ctx);
        if (subcommand == "nikodym") return cmd_nikodym(ctx);
        if (subcommand == "snap") return cmd_snap(ctx);
        if (subcommand == "cover") return cmd_cover(ctx);
        if (subcommand == "tangent") return cmd_tangent(ctx);
        if (subcommand == "dimension") return cmd_dimension(ctx);
        std::cerr << "unknown subcommand: " << subcommand << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace coneforge
