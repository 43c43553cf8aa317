#include "hypflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hypflow/errors.hpp"

namespace hypflow::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

const json& member(const json& j, const char* key, const char* context) {
  if (!j.is_object() || !j.contains(key)) fail(std::string(context) + ": missing \"" + key + "\"");
  return j.at(key);
}

double number(const json& j, const char* context) {
  if (!j.is_number()) fail(std::string(context) + ": expected a number, got " + j.dump());
  return j.get<double>();
}

std::string text(const json& j, const char* context) {
  if (!j.is_string()) fail(std::string(context) + ": expected a string, got " + j.dump());
  return j.get<std::string>();
}

std::size_t tree_vertex(const Space& space, const json& j) {
  const auto name = text(j, "tree vertex");
  const auto v = space.find_vertex(name);
  if (!v) fail("unknown tree vertex \"" + name + "\"");
  return *v;
}

}  // namespace

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(path.string() + ": " + e.what());
  }
}

SpacePtr space_from_json(const json& j) {
  const auto kind = text(member(j, "kind", "space"), "space kind");
  if (kind == "half_plane") return Space::make_half_plane();
  if (kind == "euclid2") return Space::make_euclid2();
  if (kind != "tree") fail("unknown space kind \"" + kind + "\"");

  TreeSpec spec;
  for (const auto& v : member(j, "vertices", "tree")) spec.vertices.push_back(text(v, "tree vertex"));
  for (const auto& e : member(j, "edges", "tree")) {
    if (!e.is_array() || e.size() != 3) fail("tree edge must be [a, b, length], got " + e.dump());
    spec.edges.push_back({text(e[0], "edge end"), text(e[1], "edge end"), number(e[2], "edge length")});
  }
  if (j.contains("ends")) {
    for (const auto& v : j.at("ends")) spec.ends.push_back(text(v, "tree end"));
  }
  return Space::make_tree(spec);
}

SampleSpec sample_from_json(const json& space_doc, SpaceKind kind) {
  SampleSpec s = SampleSpec::default_for(kind);
  if (!space_doc.is_object() || !space_doc.contains("sample")) return s;
  const json& j = space_doc.at("sample");
  const auto k = text(member(j, "kind", "sample"), "sample kind");
  if (k == "vertices") {
    s.kind = SampleSpec::Kind::TreeVertices;
  } else if (k == "grid") {
    s.kind = SampleSpec::Kind::Grid;
  } else if (k == "uniform") {
    s.kind = SampleSpec::Kind::Uniform;
  } else {
    fail("unknown sample kind \"" + k + "\"");
  }
  auto opt = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
  };
  opt("n", s.n);
  opt("side", s.side);
  opt("u0", s.u0);
  opt("y0", s.y0);
  opt("count", s.count);
  opt("u_lo", s.u_lo);
  opt("u_hi", s.u_hi);
  opt("y_lo", s.y_lo);
  opt("y_hi", s.y_hi);
  opt("end_extent", s.end_extent);
  opt("seed", s.seed);
  return s;
}

Point point_from_json(const Space& space, const json& j) {
  Point p;
  if (space.kind() == SpaceKind::Tree) {
    if (!j.is_object()) fail("tree point must be an object, got " + j.dump());
    if (j.contains("vertex")) {
      p = space.vertex_point(tree_vertex(space, j.at("vertex")));
    } else if (j.contains("edge")) {
      const json& e = j.at("edge");
      if (!e.is_number_unsigned()) fail("tree point edge must be an index, got " + e.dump());
      p = TreePoint{e.get<std::size_t>(), number(member(j, "offset", "tree point"), "offset")};
    } else if (j.contains("from")) {
      const std::size_t a = tree_vertex(space, j.at("from"));
      const std::size_t b = tree_vertex(space, member(j, "to", "tree point"));
      const double s = number(member(j, "offset", "tree point"), "offset");
      const auto& edges = space.edges();
      bool found = false;
      for (std::size_t ei = 0; ei < edges.size() && !found; ++ei) {
        const auto& e = edges[ei];
        if (e.a == a && e.b == b) {
          p = TreePoint{ei, s};
          found = true;
        } else if (e.a == b && e.b == a && !e.is_end) {
          p = TreePoint{ei, e.length - s};
          found = true;
        }
      }
      if (!found) fail("no edge runs from " + j.at("from").dump() + " to " + j.at("to").dump());
    } else {
      fail("tree point needs \"vertex\", \"edge\" or \"from\": " + j.dump());
    }
  } else if (j.is_array()) {
    if (j.size() != 2) fail("planar point must be [u, v], got " + j.dump());
    p = PlanePoint{number(j[0], "u"), number(j[1], "v")};
  } else {
    p = PlanePoint{number(member(j, "u", "point"), "u"), number(member(j, "v", "point"), "v")};
  }
  try {
    space.validate(p);
  } catch (const DomainError& e) {
    fail(std::string("invalid point ") + j.dump() + ": " + e.what());
  }
  return p;
}

BoundaryDirection direction_from_json(const Space& space, const json& j) {
  BoundaryDirection d;
  switch (space.kind()) {
    case SpaceKind::Tree: {
      const auto name = text(j, "tree end");
      const auto e = space.find_end(name);
      if (!e) fail("unknown tree end \"" + name + "\"");
      d = TreeEnd{*e};
      break;
    }
    case SpaceKind::HalfPlane:
      if (j.is_string() && (j == "inf" || j == "infinity")) {
        d = IdealPoint::infinity();
      } else {
        d = IdealPoint{number(j, "boundary coordinate"), false};
      }
      break;
    case SpaceKind::Euclid2:
      d = Heading{j.is_object() ? number(member(j, "angle", "heading"), "angle") : number(j, "angle")};
      break;
  }
  space.validate(d);
  return d;
}

Point default_base(const Space& space) {
  switch (space.kind()) {
    case SpaceKind::Tree:
      return space.vertex_point(space.core_vertices().front());
    case SpaceKind::HalfPlane:
      return PlanePoint{0.0, 1.0};
    case SpaceKind::Euclid2:
      return PlanePoint{0.0, 0.0};
  }
  return PlanePoint{};
}

ConvexFunction function_from_json(const SpacePtr& space, const json& j) {
  const auto type = text(member(j, "type", "function"), "function type");
  try {
    if (type == "busemann") {
      const auto dir = direction_from_json(*space, member(j, "direction", "busemann"));
      const Point base = j.contains("base") ? point_from_json(*space, j.at("base")) : default_base(*space);
      return busemann(space->ray_from(base, dir));
    }
    if (type == "distance_to") {
      const Point q = point_from_json(*space, member(j, "point", "distance_to"));
      const double scale = j.contains("scale") ? number(j.at("scale"), "scale") : 1.0;
      return distance_to(space, q, scale);
    }
    if (type == "constant") return constant(space, number(member(j, "value", "constant"), "value"));
    if (type == "sum" || type == "max") {
      std::vector<WeightedTerm> terms;
      for (const auto& t : member(j, "terms", "combination")) {
        const double w = t.contains("weight") ? number(t.at("weight"), "weight") : 1.0;
        terms.push_back({w, function_from_json(space, member(t, "fn", "term"))});
      }
      const bool unchecked = j.value("unchecked", false);
      return combine(terms, type == "sum" ? CombineMode::Sum : CombineMode::Max, unchecked);
    }
  } catch (const DomainError& e) {
    fail(type + " function: " + e.what());
  }
  fail("unknown function type \"" + type + "\"");
}

json point_to_json(const Space& space, const Point& p) {
  if (space.kind() == SpaceKind::Tree) {
    const auto& t = std::get<TreePoint>(p);
    return json{{"edge", t.edge}, {"offset", format_number(t.offset)}};
  }
  const auto& q = std::get<PlanePoint>(p);
  return json::array({format_number(q.u), format_number(q.v)});
}

json direction_to_json(const Space& space, const BoundaryDirection& d) {
  if (const auto* e = std::get_if<TreeEnd>(&d)) {
    const std::size_t leaf = space.edges()[space.end_edges()[e->index]].b;
    return space.vertex_names()[leaf];
  }
  if (const auto* ip = std::get_if<IdealPoint>(&d)) {
    return ip->at_infinity ? json("inf") : json(format_number(ip->coordinate));
  }
  return json{{"angle", format_number(std::get<Heading>(d).angle)}};
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace hypflow::io
