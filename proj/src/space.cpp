#include "hypflow/space.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "golden.hpp"
#include "hypflow/errors.hpp"
#include "plane_geometry.hpp"

namespace hypflow {

namespace {

constexpr std::size_t kNoEdge = static_cast<std::size_t>(-1);

// Half-plane four-point ceiling: ln 3 rounded up.
constexpr double kHalfPlaneDelta = 1.0987;

const TreePoint& as_tree(const Point& p) {
  const auto* tp = std::get_if<TreePoint>(&p);
  if (tp == nullptr) throw DomainError("expected a tree point");
  return *tp;
}

const PlanePoint& as_plane(const Point& p) {
  const auto* pp = std::get_if<PlanePoint>(&p);
  if (pp == nullptr) throw DomainError("expected a planar point");
  return *pp;
}

}  // namespace

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Tree:
      return "tree";
    case SpaceKind::HalfPlane:
      return "half_plane";
    case SpaceKind::Euclid2:
      return "euclid2";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Construction

SpacePtr Space::make_half_plane() { return SpacePtr(new Space(SpaceKind::HalfPlane)); }

SpacePtr Space::make_euclid2() { return SpacePtr(new Space(SpaceKind::Euclid2)); }

SpacePtr Space::make_tree(const TreeSpec& spec) {
  std::shared_ptr<Space> s(new Space(SpaceKind::Tree));
  const std::size_t n = spec.vertices.size();
  if (n < 2) throw DomainError("tree needs at least two vertices");

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) {
    if (!index.emplace(spec.vertices[i], i).second) {
      throw DomainError("duplicate tree vertex '" + spec.vertices[i] + "'");
    }
  }
  if (spec.edges.size() != n - 1) throw DomainError("a tree on n vertices has n - 1 edges");

  auto lookup = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) throw DomainError("unknown tree vertex '" + name + "'");
    return it->second;
  };

  std::vector<std::vector<std::size_t>> incident(n);
  s->edges_.reserve(spec.edges.size());
  for (const auto& e : spec.edges) {
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      throw DomainError("tree edge lengths must be positive and finite");
    }
    const std::size_t a = lookup(e.a);
    const std::size_t b = lookup(e.b);
    if (a == b) throw DomainError("tree edge is a loop");
    incident[a].push_back(s->edges_.size());
    incident[b].push_back(s->edges_.size());
    s->edges_.push_back({a, b, e.length, false});
  }

  // Connectivity; with n - 1 edges this also rules out cycles.
  {
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = true;
    std::size_t count = 1;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t ei : incident[u]) {
        const auto& e = s->edges_[ei];
        const std::size_t w = e.a == u ? e.b : e.a;
        if (!seen[w]) {
          seen[w] = true;
          ++count;
          q.push(w);
        }
      }
    }
    if (count != n) throw DomainError("tree is not connected");
  }

  s->is_end_leaf_.assign(n, false);
  for (const auto& name : spec.ends) {
    const std::size_t leaf = lookup(name);
    if (incident[leaf].size() != 1) throw DomainError("end '" + name + "' is not a leaf");
    if (s->is_end_leaf_[leaf]) throw DomainError("end '" + name + "' declared twice");
    s->is_end_leaf_[leaf] = true;
  }
  for (const auto& name : spec.ends) {
    const std::size_t leaf = lookup(name);
    const std::size_t ei = incident[leaf].front();
    auto& e = s->edges_[ei];
    if (e.a == leaf) std::swap(e.a, e.b);
    if (s->is_end_leaf_[e.a]) throw DomainError("an edge joining two ends has no interior vertex");
    e.is_end = true;
    s->end_edges_.push_back(ei);
    s->end_leaf_.push_back(leaf);
  }

  s->vertex_names_ = spec.vertices;
  for (std::size_t v = 0; v < n; ++v) {
    if (!s->is_end_leaf_[v]) s->core_vertices_.push_back(v);
  }

  // All-pairs distances and next hops restricted to the core (end leaves sit
  // at infinity and never appear on a finite path).
  s->vertex_distance_.assign(n, std::vector<double>(n, kInfinity));
  s->next_edge_.assign(n, std::vector<std::size_t>(n, kNoEdge));
  for (std::size_t root : s->core_vertices_) {
    auto& dist = s->vertex_distance_[root];
    std::vector<std::size_t> first(n, kNoEdge);
    dist[root] = 0.0;
    std::queue<std::size_t> q;
    q.push(root);
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t ei : incident[u]) {
        const auto& e = s->edges_[ei];
        if (e.is_end) continue;
        const std::size_t w = e.a == u ? e.b : e.a;
        if (dist[w] < kInfinity) continue;
        dist[w] = dist[u] + e.length;
        first[w] = u == root ? ei : first[u];
        q.push(w);
      }
    }
    for (std::size_t w : s->core_vertices_) {
      s->next_edge_[root][w] = first[w];
      s->core_diameter_ = std::max(s->core_diameter_, dist[w]);
    }
  }
  return s;
}

std::optional<std::size_t> Space::find_vertex(const std::string& name) const {
  for (std::size_t i = 0; i < vertex_names_.size(); ++i) {
    if (vertex_names_[i] == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Space::find_end(const std::string& name) const {
  for (std::size_t i = 0; i < end_leaf_.size(); ++i) {
    if (vertex_names_[end_leaf_[i]] == name) return i;
  }
  return std::nullopt;
}

TreePoint Space::vertex_point(std::size_t vertex) const {
  if (kind_ != SpaceKind::Tree) throw DomainError("vertex_point on a non-tree space");
  if (vertex >= vertex_names_.size() || is_end_leaf_[vertex]) {
    throw DomainError("vertex is not a core vertex");
  }
  for (std::size_t ei = 0; ei < edges_.size(); ++ei) {
    const auto& e = edges_[ei];
    if (e.a == vertex) return {ei, 0.0};
    if (e.b == vertex && !e.is_end) return {ei, e.length};
  }
  throw DomainError("isolated vertex");
}

std::optional<std::size_t> Space::vertex_at(const TreePoint& p) const {
  const auto& e = edges_.at(p.edge);
  if (p.offset == 0.0) return e.a;
  if (!e.is_end && p.offset == e.length) return e.b;
  return std::nullopt;
}

double Space::distance_to_core(const TreePoint& p) const {
  return edges_.at(p.edge).is_end ? p.offset : 0.0;
}

// ---------------------------------------------------------------------------
// Validation

void Space::validate(const Point& p) const {
  switch (kind_) {
    case SpaceKind::Tree: {
      const auto& tp = as_tree(p);
      if (tp.edge >= edges_.size()) throw DomainError("tree point on unknown edge");
      const auto& e = edges_[tp.edge];
      if (!std::isfinite(tp.offset) || tp.offset < 0.0 || (!e.is_end && tp.offset > e.length)) {
        throw DomainError("tree point offset out of range");
      }
      return;
    }
    case SpaceKind::HalfPlane: {
      const auto& pp = as_plane(p);
      if (!std::isfinite(pp.u) || !std::isfinite(pp.v) || !(pp.v > 0.0)) {
        throw DomainError("half-plane point needs finite u and v > 0");
      }
      return;
    }
    case SpaceKind::Euclid2: {
      const auto& pp = as_plane(p);
      if (!std::isfinite(pp.u) || !std::isfinite(pp.v)) throw DomainError("non-finite point");
      return;
    }
  }
}

void Space::validate(const BoundaryDirection& dir) const {
  switch (kind_) {
    case SpaceKind::Tree: {
      const auto* end = std::get_if<TreeEnd>(&dir);
      if (end == nullptr || end->index >= end_edges_.size()) {
        throw DomainError("direction is not a declared tree end");
      }
      return;
    }
    case SpaceKind::HalfPlane: {
      const auto* ideal = std::get_if<IdealPoint>(&dir);
      if (ideal == nullptr || (!ideal->at_infinity && !std::isfinite(ideal->coordinate))) {
        throw DomainError("direction is not a half-plane boundary point");
      }
      return;
    }
    case SpaceKind::Euclid2: {
      const auto* h = std::get_if<Heading>(&dir);
      if (h == nullptr || !std::isfinite(h->angle)) throw DomainError("direction is not a heading");
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// Metric

double Space::tree_distance(const TreePoint& x, const TreePoint& y) const {
  if (x.edge >= edges_.size() || y.edge >= edges_.size()) {
    throw DomainError("tree point on unknown edge");
  }
  if (x.edge == y.edge) return std::abs(x.offset - y.offset);
  const auto& ex = edges_[x.edge];
  const auto& ey = edges_[y.edge];
  double best = vertex_distance_[ex.a][ey.a] + x.offset + y.offset;
  if (!ey.is_end) best = std::min(best, x.offset + vertex_distance_[ex.a][ey.b] + (ey.length - y.offset));
  if (!ex.is_end) {
    const double xb = ex.length - x.offset;
    best = std::min(best, xb + vertex_distance_[ex.b][ey.a] + y.offset);
    if (!ey.is_end) best = std::min(best, xb + vertex_distance_[ex.b][ey.b] + (ey.length - y.offset));
  }
  return best;
}

double Space::distance(const Point& x, const Point& y) const {
  switch (kind_) {
    case SpaceKind::Tree:
      return tree_distance(as_tree(x), as_tree(y));
    case SpaceKind::HalfPlane:
      return plane::half_plane_distance(as_plane(x), as_plane(y));
    case SpaceKind::Euclid2: {
      const auto& a = as_plane(x);
      const auto& b = as_plane(y);
      return std::hypot(a.u - b.u, a.v - b.v);
    }
  }
  return 0.0;
}

double Space::gromov_product(const Point& p, const Point& x, const Point& y) const {
  const double g = 0.5 * (distance(p, x) + distance(p, y) - distance(x, y));
  return std::max(0.0, g);
}

// ---------------------------------------------------------------------------
// Geodesics

TreePoint Space::point_on_edge_from(std::size_t edge, std::size_t from_vertex, double s) const {
  const auto& e = edges_[edge];
  if (e.a == from_vertex) return {edge, e.is_end ? s : std::min(s, e.length)};
  return {edge, std::max(0.0, e.length - s)};
}

TreePoint Space::tree_geodesic_point(const TreePoint& x, const TreePoint& y, double t) const {
  if (x.edge == y.edge) {
    const double step = y.offset >= x.offset ? t : -t;
    return {x.edge, x.offset + step};
  }
  const auto& ex = edges_[x.edge];
  const auto& ey = edges_[y.edge];

  // Pick the exit vertex of x's edge and the entry vertex of y's edge along
  // the unique path, matching the order used by tree_distance.
  struct Route {
    std::size_t exit;
    double to_exit;
    std::size_t entry;
    double total;
  };
  Route best{ex.a, x.offset, ey.a, vertex_distance_[ex.a][ey.a] + x.offset + y.offset};
  auto consider = [&](std::size_t vx, double dx, std::size_t vy, double dy) {
    const double total = dx + vertex_distance_[vx][vy] + dy;
    if (total < best.total) best = {vx, dx, vy, total};
  };
  if (!ey.is_end) consider(ex.a, x.offset, ey.b, ey.length - y.offset);
  if (!ex.is_end) {
    consider(ex.b, ex.length - x.offset, ey.a, y.offset);
    if (!ey.is_end) consider(ex.b, ex.length - x.offset, ey.b, ey.length - y.offset);
  }

  if (t <= best.to_exit) {
    return {x.edge, best.exit == ex.a ? x.offset - t : x.offset + t};
  }
  double remaining = t - best.to_exit;
  std::size_t cur = best.exit;
  while (cur != best.entry) {
    const std::size_t ei = next_edge_[cur][best.entry];
    const auto& e = edges_[ei];
    if (remaining <= e.length) return point_on_edge_from(ei, cur, remaining);
    remaining -= e.length;
    cur = e.a == cur ? e.b : e.a;
  }
  return point_on_edge_from(y.edge, best.entry, remaining);
}

Point Space::geodesic_point(const Point& x, const Point& y, double t) const {
  const double d = distance(x, y);
  const double slack = 1e-12 * std::max(1.0, d);
  if (!(t >= -slack) || !(t <= d + slack)) {
    throw DomainError("geodesic parameter outside [0, d(x, y)]");
  }
  t = std::clamp(t, 0.0, d);
  if (t == 0.0) return x;
  if (t == d) return y;
  switch (kind_) {
    case SpaceKind::Tree:
      return tree_geodesic_point(as_tree(x), as_tree(y), t);
    case SpaceKind::HalfPlane:
      return plane::half_plane_towards(as_plane(x), as_plane(y), t);
    case SpaceKind::Euclid2: {
      const auto& a = as_plane(x);
      const auto& b = as_plane(y);
      const double s = t / d;
      return PlanePoint{a.u + s * (b.u - a.u), a.v + s * (b.v - a.v)};
    }
  }
  return x;
}

double Space::distance_to_geodesic(const Point& x, const Point& y, const Point& z) const {
  const double d = distance(y, z);
  if (d == 0.0) return distance(x, y);
  auto along = [&](double t) { return distance(x, geodesic_point(y, z, t)); };
  return detail::golden_section(along, 0.0, d, 1e-13 * std::max(1.0, d)).value;
}

Point Space::shoot(const Point& c, double angle, double s) const {
  switch (kind_) {
    case SpaceKind::Tree:
      throw DomainError("shoot is defined on planar spaces only");
    case SpaceKind::HalfPlane:
      return plane::half_plane_shoot(as_plane(c), angle, s);
    case SpaceKind::Euclid2: {
      const auto& p = as_plane(c);
      return PlanePoint{p.u + s * std::cos(angle), p.v + s * std::sin(angle)};
    }
  }
  return c;
}

double Space::direction_angle(const Point& c, const Point& y) const {
  switch (kind_) {
    case SpaceKind::Tree:
      throw DomainError("direction_angle is defined on planar spaces only");
    case SpaceKind::HalfPlane:
      return plane::half_plane_angle(as_plane(c), as_plane(y));
    case SpaceKind::Euclid2: {
      const auto& a = as_plane(c);
      const auto& b = as_plane(y);
      return std::atan2(b.v - a.v, b.u - a.u);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Rays and the boundary

Ray::Ray(SpacePtr space, Point base, BoundaryDirection direction)
    : space_(std::move(space)), base_(std::move(base)), direction_(direction) {
  space_->validate(base_);
  space_->validate(direction_);
  if (space_->kind() == SpaceKind::Tree) {
    const auto& tb = std::get<TreePoint>(base_);
    const std::size_t ei = space_->end_edges()[std::get<TreeEnd>(direction_).index];
    if (tb.edge == ei) {
      tree_lead_ = -1.0;
    } else {
      tree_lead_ = space_->distance(base_, space_->vertex_point(space_->edges()[ei].a));
    }
  }
}

Point Ray::at(double t) const {
  if (!(t >= 0.0)) throw DomainError("ray parameter must be nonnegative");
  switch (space_->kind()) {
    case SpaceKind::Tree: {
      const auto& tb = std::get<TreePoint>(base_);
      const std::size_t ei = space_->end_edges()[std::get<TreeEnd>(direction_).index];
      if (tree_lead_ < 0.0) return TreePoint{ei, tb.offset + t};
      if (t <= tree_lead_) {
        return space_->geodesic_point(base_, space_->vertex_point(space_->edges()[ei].a), t);
      }
      return TreePoint{ei, t - tree_lead_};
    }
    case SpaceKind::HalfPlane: {
      const auto& b = std::get<PlanePoint>(base_);
      const auto& ideal = std::get<IdealPoint>(direction_);
      if (ideal.at_infinity) return PlanePoint{b.u, b.v * std::exp(t)};
      return plane::half_plane_to_ideal(b, ideal.coordinate, t);
    }
    case SpaceKind::Euclid2: {
      const auto& b = std::get<PlanePoint>(base_);
      const double a = std::get<Heading>(direction_).angle;
      return PlanePoint{b.u + t * std::cos(a), b.v + t * std::sin(a)};
    }
  }
  return base_;
}

Ray Space::ray_from(const Point& base, const BoundaryDirection& dir) const {
  return Ray(shared_from_this(), base, dir);
}

std::vector<BoundaryDirection> Space::boundary_directions() const {
  std::vector<BoundaryDirection> out;
  switch (kind_) {
    case SpaceKind::Tree:
      for (std::size_t i = 0; i < end_edges_.size(); ++i) out.emplace_back(TreeEnd{i});
      break;
    case SpaceKind::HalfPlane: {
      std::vector<double> coords{0.0};
      for (int j = 0; j < 16; ++j) {
        const double mag = std::pow(10.0, -2.0 + 3.0 * j / 15.0);
        coords.push_back(mag);
        coords.push_back(-mag);
      }
      std::sort(coords.begin(), coords.end());
      for (double c : coords) out.emplace_back(IdealPoint{c, false});
      out.emplace_back(IdealPoint::infinity());
      break;
    }
    case SpaceKind::Euclid2:
      for (int j = 0; j < 64; ++j) out.emplace_back(Heading{2.0 * std::numbers::pi * j / 64.0});
      break;
  }
  return out;
}

double Space::documented_delta() const {
  switch (kind_) {
    case SpaceKind::Tree:
      return 0.0;
    case SpaceKind::HalfPlane:
      return kHalfPlaneDelta;
    case SpaceKind::Euclid2:
      return kInfinity;
  }
  return kInfinity;
}

// ---------------------------------------------------------------------------
// Geodesic stability: closed form against an independent evaluator.

double check_geodesic_stability(const Space& space, const Point& x, const Point& y, int samples) {
  if (samples < 1) throw DomainError("need at least one sample");
  const double d = space.distance(x, y);
  double worst = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double t = d * i / samples;
    const Point closed = space.geodesic_point(x, y, t);
    Point other;
    switch (space.kind()) {
      case SpaceKind::Tree:
      case SpaceKind::Euclid2:
        // Walk the same geodesic from the far end.
        other = space.geodesic_point(y, x, d - t);
        break;
      case SpaceKind::HalfPlane:
        other = plane::half_plane_numeric_geodesic(std::get<PlanePoint>(x), std::get<PlanePoint>(y), t);
        break;
    }
    worst = std::max(worst, space.distance(closed, other));
  }
  return worst;
}

// ---------------------------------------------------------------------------

std::string to_string(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  if (const auto* tp = std::get_if<TreePoint>(&p)) {
    os << "edge " << tp->edge << " @ " << tp->offset;
  } else {
    const auto& pp = std::get<PlanePoint>(p);
    os << "(" << pp.u << ", " << pp.v << ")";
  }
  return os.str();
}

std::string to_string(const BoundaryDirection& d) {
  std::ostringstream os;
  os.precision(17);
  if (const auto* e = std::get_if<TreeEnd>(&d)) {
    os << "end " << e->index;
  } else if (const auto* ip = std::get_if<IdealPoint>(&d)) {
    if (ip->at_infinity) {
      os << "inf";
    } else {
      os << ip->coordinate;
    }
  } else {
    os << "heading " << std::get<Heading>(d).angle;
  }
  return os.str();
}

}  // namespace hypflow
