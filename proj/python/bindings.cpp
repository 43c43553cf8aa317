#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hypflow/errors.hpp"
#include "hypflow/experiment.hpp"
#include "hypflow/flow.hpp"
#include "hypflow/io.hpp"

namespace py = pybind11;
using namespace hypflow;

namespace {

// Points cross the boundary as tuples: (edge, offset) on trees, (u, v) on
// the planar models.
Point to_point(const Space& space, const py::handle& obj) {
  auto seq = obj.cast<py::sequence>();
  if (seq.size() != 2) throw DomainError("a point is a pair");
  Point p;
  if (space.kind() == SpaceKind::Tree) {
    p = TreePoint{seq[0].cast<std::size_t>(), seq[1].cast<double>()};
  } else {
    p = PlanePoint{seq[0].cast<double>(), seq[1].cast<double>()};
  }
  space.validate(p);
  return p;
}

py::tuple from_point(const Point& p) {
  if (const auto* t = std::get_if<TreePoint>(&p)) return py::make_tuple(t->edge, t->offset);
  const auto& q = std::get<PlanePoint>(p);
  return py::make_tuple(q.u, q.v);
}

// Directions: tree end name, half-plane coordinate or "inf", heading angle.
BoundaryDirection to_direction(const Space& space, const py::handle& obj) {
  io::json j;
  if (py::isinstance<py::str>(obj)) {
    j = obj.cast<std::string>();
  } else {
    j = obj.cast<double>();
  }
  return io::direction_from_json(space, j);
}

py::object from_direction(const Space& space, const BoundaryDirection& d) {
  if (const auto* e = std::get_if<TreeEnd>(&d)) {
    return py::str(space.vertex_names()[space.edges()[space.end_edges()[e->index]].b]);
  }
  if (const auto* ip = std::get_if<IdealPoint>(&d)) {
    if (ip->at_infinity) return py::str("inf");
    return py::float_(ip->coordinate);
  }
  return py::float_(std::get<Heading>(d).angle);
}

py::dict step_dict(const ProxStep& s) {
  py::dict d;
  d["x"] = from_point(s.x);
  d["x_tau"] = from_point(s.x_tau);
  d["tau"] = s.tau;
  d["step_length"] = s.step_length;
  d["f_x"] = s.f_x;
  d["f_x_tau"] = s.f_x_tau;
  d["objective"] = s.objective;
  d["solver"] = to_string(s.solver);
  d["residual"] = s.residual;
  return d;
}

}  // namespace

PYBIND11_MODULE(_hypflow, m) {
  m.doc() = "Proximal point flows on hyperbolic model spaces";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ConvexityError>(m, "ConvexityError", PyExc_ArithmeticError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);

  py::class_<Space, std::shared_ptr<Space>>(m, "Space")
      .def_static("from_json", [](const std::string& text) {
        return std::const_pointer_cast<Space>(io::space_from_json(io::json::parse(text)));
      })
      .def_property_readonly("kind", [](const Space& s) { return to_string(s.kind()); })
      .def("distance", [](const Space& s, py::handle x, py::handle y) {
        return s.distance(to_point(s, x), to_point(s, y));
      })
      .def("geodesic_point", [](const Space& s, py::handle x, py::handle y, double t) {
        return from_point(s.geodesic_point(to_point(s, x), to_point(s, y), t));
      })
      .def("gromov_product", [](const Space& s, py::handle p, py::handle x, py::handle y) {
        return s.gromov_product(to_point(s, p), to_point(s, x), to_point(s, y));
      })
      .def("ray_point", [](const Space& s, py::handle base, py::handle dir, double t) {
        return from_point(s.ray_from(to_point(s, base), to_direction(s, dir)).at(t));
      })
      .def("boundary_directions", [](const Space& s) {
        py::list out;
        for (const auto& d : s.boundary_directions()) out.append(from_direction(s, d));
        return out;
      })
      .def("documented_delta", &Space::documented_delta)
      .def("vertex_point", [](const Space& s, const std::string& name) {
        const auto v = s.find_vertex(name);
        if (!v) throw DomainError("unknown vertex " + name);
        return from_point(s.vertex_point(*v));
      });

  py::class_<ConvexFunction>(m, "Function")
      .def_static("from_json", [](std::shared_ptr<Space> space, const std::string& text) {
        return io::function_from_json(space, io::json::parse(text));
      })
      .def("__call__", [](const ConvexFunction& f, py::handle x) { return f(to_point(*f.space(), x)); })
      .def_property_readonly("lipschitz", &ConvexFunction::lipschitz)
      .def_property_readonly("tag", &ConvexFunction::tag);

  m.def("estimate_delta",
        [](std::shared_ptr<Space> space, py::list points, bool exhaustive, std::uint64_t seed,
           std::uint64_t quadruples) {
          std::vector<Point> pts;
          for (auto p : points) pts.push_back(to_point(*space, p));
          const auto method = exhaustive ? DeltaMethod::exhaustive() : DeltaMethod::sampled(seed, quadruples);
          const auto est = estimate_delta(*space, pts, method);
          return py::make_tuple(est.delta_hat, est.quadruple_count);
        },
        py::arg("space"), py::arg("points"), py::arg("exhaustive") = true, py::arg("seed") = 1,
        py::arg("quadruples") = 1'000'000);

  m.def("slope_report", [](const ConvexFunction& f, py::handle base) {
    const Space& s = *f.space();
    const auto r = slope_report(f, to_point(s, base));
    py::dict d;
    py::list slopes;
    for (const auto& ds : r.slopes) slopes.append(py::make_tuple(from_direction(s, ds.direction), ds.value));
    d["slopes"] = slopes;
    d["alpha_hat"] = r.alpha_hat;
    d["v_star"] = r.v_star ? from_direction(s, *r.v_star) : py::none();
    return d;
  });

  m.def("descending_slope", [](const ConvexFunction& f, py::handle x, double h) {
    return descending_slope(f, to_point(*f.space(), x), h);
  }, py::arg("f"), py::arg("x"), py::arg("h") = 1e-4);

  m.def("prox", [](const ConvexFunction& f, py::handle x, double tau) {
    return step_dict(prox(f, to_point(*f.space(), x), tau));
  });

  m.def("run_flow", [](const ConvexFunction& f, py::handle x0, double tau, std::size_t K) {
    FlowConfig cfg;
    cfg.tau = tau;
    cfg.K = K;
    cfg.x0 = to_point(*f.space(), x0);
    const auto traj = run_ppa(f, cfg);
    py::list pts;
    for (const auto& p : traj.points) pts.append(from_point(p));
    return pts;
  });

  m.def("tau_threshold", [](double L, double alpha, double delta) {
    const auto t = tau_threshold(L, alpha, delta);
    return py::make_tuple(t.exact, t.sufficient);
  });

  m.def("run_experiment", [](const std::string& config_json) {
    const auto cfg = experiment_from_json(io::json::parse(config_json));
    const auto res = run_experiment(cfg);
    std::ostringstream csv;
    write_trajectory_csv(cfg, res, csv);
    return py::make_tuple(summary_json(cfg, res).dump(), csv.str());
  });
}
