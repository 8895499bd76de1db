#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "coneforge/arrange.hpp"
#include "coneforge/forest.hpp"
#include "coneforge/hausdorff.hpp"
#include "coneforge/measure.hpp"
#include "coneforge/serialize.hpp"

namespace py = pybind11;
using namespace coneforge;

namespace {

PlacementSet placements_from_list(const std::vector<std::tuple<double, double, double>>& xs,
                                  int tag) {
    PlacementSet set;
    set.tag = static_cast<BaseSpace>(tag);
    for (const auto& [x, y, r] : xs) {
        Placement p;
        p.x = {x, y, 0.0};
        p.r = r;
        set.items.push_back(p);
    }
    return set;
}

}  // namespace

PYBIND11_MODULE(_coneforge, m) {
    m.doc() = "Translated double-cone forests and related planar constructions";

    py::class_<DoubleCone>(m, "DoubleCone")
        .def(py::init([](double vx, double vy, double lo, double hi) {
                 return DoubleCone{{vx, vy}, lo, hi};
             }),
             py::arg("vx"), py::arg("vy"), py::arg("angle_lo"), py::arg("angle_hi"))
        .def_property_readonly("vertex",
                               [](const DoubleCone& d) {
                                   return py::make_tuple(d.vertex.x, d.vertex.y);
                               })
        .def_readonly("angle_lo", &DoubleCone::angle_lo)
        .def_readonly("angle_hi", &DoubleCone::angle_hi);

    m.def("signed_distance",
          [](double px, double py_, double theta, double offset) {
              return signed_distance({px, py_}, DirectedLine{theta, offset});
          });
    m.def("cone_contains", [](const DoubleCone& d, double x, double y, double tol) {
        return cone_contains(d, {x, y}, tol);
    }, py::arg("cone"), py::arg("x"), py::arg("y"), py::arg("tol") = kDefaultTol);
    m.def("dual_contains", [](const DoubleCone& d, double x, double y, double tol) {
        return dual_contains(d, {x, y}, tol);
    }, py::arg("cone"), py::arg("x"), py::arg("y"), py::arg("tol") = kDefaultTol);
    m.def("distance_interval", [](const DoubleCone& d, double x, double y) {
        const Interval iv = distance_interval(d, {x, y});
        return py::make_tuple(iv.lo, iv.hi);
    });
    m.def("line_at_distance", [](const DoubleCone& d, double x, double y, double t) {
        const DirectedLine ell = line_at_distance(d, {x, y}, t);
        return py::make_tuple(ell.theta, ell.offset);
    });

    py::class_<ConeForest>(m, "ConeForest")
        .def_property_readonly("cone_count",
                               [](const ConeForest& f) { return f.cones.size(); })
        .def_property_readonly("generations",
                               [](const ConeForest& f) { return f.generations.size() - 1; })
        .def("strip_area",
             [](const ConeForest& f, double lo, double hi) {
                 return strip_union_area(f, Strip{lo, hi});
             })
        .def("witness",
             [](const ConeForest& f, double x, double y, double r) {
                 const DirectedLine ell = witness_line(f, {x, y}, r);
                 return py::make_tuple(ell.theta, ell.offset,
                                       signed_distance({x, y}, ell));
             })
        .def("neighborhood_excess",
             [](const ConeForest& f, double height) {
                 return neighborhood_excess(f, height);
             })
        .def("to_json", [](const ConeForest& f) { return forest_to_json(f); });

    m.def(
        "iterate",
        [](const DoubleCone& d, double R, int N, double eps, std::int64_t cone_cap) {
            FinenessPolicy policy;
            policy.cone_cap = cone_cap;
            return iterate(d, R, N, eps, policy);
        },
        py::arg("cone"), py::arg("R"), py::arg("N"), py::arg("eps") = 0.05,
        py::arg("cone_cap") = 1000000);

    m.def("verify_conditions",
          [](const ConeForest& f, int samples, std::uint64_t seed) {
              const ConditionReport rep = verify_conditions(f, samples, seed);
              py::dict out;
              out["strip_pass"] = rep.strip_pass;
              out["final_strip_area"] = rep.total_final_strip_area;
              out["final_strip_bound"] = rep.total_final_strip_bound;
              out["surjectivity_pass"] = rep.surjectivity_pass;
              out["vertex_pass"] = rep.vertex_pass;
              out["dual_pass"] = rep.dual_pass;
              out["neighborhood_excess"] = rep.neighborhood_max_excess;
              out["neighborhood_pass"] = rep.neighborhood_pass;
              out["analytic_drift_bound"] = rep.analytic_drift_bound;
              out["all_pass"] = rep.all_pass();
              return out;
          },
          py::arg("forest"), py::arg("samples") = 1000, py::arg("seed") = 1);

    m.def("disk_intersection_area",
          [](const ConeForest& f, double cx, double cy, double radius,
             std::int64_t samples, std::uint64_t seed) {
              const DiskAreaResult r =
                  disk_intersection_area(f, Disk{{cx, cy}, radius}, samples, seed);
              return py::make_tuple(r.estimate, r.stderr_, r.strip_upper_bound);
          },
          py::arg("forest"), py::arg("cx"), py::arg("cy"), py::arg("radius"),
          py::arg("samples") = 200000, py::arg("seed") = 1);

    m.def("box_dimension",
          [](const std::vector<std::tuple<double, double, double, double>>& segs,
             int lo, int hi) {
              Geometry geo;
              for (const auto& [x1, y1, x2, y2] : segs) {
                  geo.segments.push_back({{x1, y1}, {x2, y2}});
              }
              const BoxCountSeries s = box_dimension_estimate(geo, lo, hi);
              return py::make_tuple(s.slope, s.counts);
          },
          py::arg("segments"), py::arg("scale_lo") = 4, py::arg("scale_hi") = 10);

    m.def("snap_scaled",
          [](const std::vector<std::tuple<double, double, double>>& items,
             std::tuple<double, double> anchor, std::tuple<double, double> dir,
             double eps) {
              const PlacementSet l = placements_from_list(items, 0);
              const AffineSubspace v =
                  make_line({std::get<0>(anchor), std::get<1>(anchor), 0.0},
                            {std::get<0>(dir), std::get<1>(dir), 0.0}, 2);
              const PlacementSet k = snap_scaled(l, v, eps);
              std::vector<std::tuple<double, double, double>> out;
              for (const auto& p : k.items) out.emplace_back(p.x[0], p.x[1], p.r);
              return py::make_tuple(out, hausdorff_distance(k, l));
          });

    m.def("hausdorff_distance",
          [](const std::vector<std::tuple<double, double, double>>& a,
             const std::vector<std::tuple<double, double, double>>& b) {
              return hausdorff_distance(placements_from_list(a, 0),
                                        placements_from_list(b, 0));
          });

    m.def("nikodym_patch",
          [](std::tuple<double, double> x0, double r0, double theta0,
             std::tuple<double, double> ball_center, double ball_radius, double eta,
             double eps, std::int64_t mc_samples, std::uint64_t seed) {
              PatchOptions opts;
              opts.mc_samples = mc_samples;
              opts.seed = seed;
              const NikodymPatch patch = nikodym_patch(
                  {std::get<0>(x0), std::get<1>(x0)}, r0, theta0,
                  Disk{{std::get<0>(ball_center), std::get<1>(ball_center)},
                       ball_radius},
                  eta, eps, opts);
              py::dict out;
              out["phi"] = patch.phi;
              out["rho"] = patch.rho;
              out["ball_area"] = patch.ball_area.estimate;
              out["ball_area_stderr"] = patch.ball_area.stderr_;
              out["strip_upper_bound"] = patch.ball_area.strip_upper_bound;
              out["forest_cones"] = patch.forest.cones.size();
              return out;
          },
          py::arg("x0"), py::arg("r0"), py::arg("theta0"), py::arg("ball_center"),
          py::arg("ball_radius"), py::arg("eta"), py::arg("eps"),
          py::arg("mc_samples") = 200000, py::arg("seed") = 1);
}
