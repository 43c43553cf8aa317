#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace hypflow {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Geodesic evaluation tolerance shared by the model spaces.
inline constexpr double kGeoTolerance = 1e-9;

/// A location on a metric tree: an edge and the arclength from the edge's
/// first vertex. On an end-edge the first vertex is the interior one and the
/// offset is unbounded.
struct TreePoint {
  std::size_t edge = 0;
  double offset = 0.0;

  friend bool operator==(const TreePoint&, const TreePoint&) = default;
};

/// A location in one of the planar models. For the half-plane `v > 0`.
struct PlanePoint {
  double u = 0.0;
  double v = 0.0;

  friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
};

using Point = std::variant<TreePoint, PlanePoint>;

/// Index into the declared ends of a tree.
struct TreeEnd {
  std::size_t index = 0;

  friend bool operator==(const TreeEnd&, const TreeEnd&) = default;
};

/// A point of the real line bounding the half-plane, or the point at infinity.
struct IdealPoint {
  double coordinate = 0.0;
  bool at_infinity = false;

  static IdealPoint infinity() { return {0.0, true}; }
  friend bool operator==(const IdealPoint& a, const IdealPoint& b) {
    return a.at_infinity == b.at_infinity && (a.at_infinity || a.coordinate == b.coordinate);
  }
};

/// A direction of the Euclidean plane, as an angle in radians.
struct Heading {
  double angle = 0.0;

  friend bool operator==(const Heading&, const Heading&) = default;
};

using BoundaryDirection = std::variant<TreeEnd, IdealPoint, Heading>;

enum class SpaceKind { Tree, HalfPlane, Euclid2 };

std::string to_string(SpaceKind kind);

class Space;
using SpacePtr = std::shared_ptr<const Space>;

/// Unit-speed geodesic ray t -> point, t >= 0.
class Ray {
 public:
  Ray(SpacePtr space, Point base, BoundaryDirection direction);

  Point at(double t) const;
  const Point& base() const { return base_; }
  const BoundaryDirection& direction() const { return direction_; }
  const SpacePtr& space() const { return space_; }

 private:
  SpacePtr space_;
  Point base_;
  BoundaryDirection direction_;
  // Tree: distance from base to the interior vertex of the end-edge, or a
  // negative value when the base already lies on that end-edge.
  double tree_lead_ = -1.0;
};

/// Input description of a metric tree. End leaves are vertices whose single
/// incident edge is extended to infinite length.
struct TreeSpec {
  std::vector<std::string> vertices;
  struct Edge {
    std::string a;
    std::string b;
    double length = 1.0;
  };
  std::vector<Edge> edges;
  std::vector<std::string> ends;
};

/// One of the three model spaces. Immutable after construction; every
/// operation is a pure function of its arguments.
class Space : public std::enable_shared_from_this<Space> {
 public:
  static SpacePtr make_tree(const TreeSpec& spec);
  static SpacePtr make_half_plane();
  static SpacePtr make_euclid2();

  SpaceKind kind() const { return kind_; }
  bool is_hyperbolic() const { return kind_ != SpaceKind::Euclid2; }

  /// Throws DomainError when `p` is not a valid point of this space.
  void validate(const Point& p) const;
  void validate(const BoundaryDirection& dir) const;

  double distance(const Point& x, const Point& y) const;

  /// Point at distance `t` from `x` on the geodesic towards `y`.
  Point geodesic_point(const Point& x, const Point& y, double t) const;

  /// (x|y)_p
  double gromov_product(const Point& p, const Point& x, const Point& y) const;

  /// min over the geodesic [y, z] of d(x, .)
  double distance_to_geodesic(const Point& x, const Point& y, const Point& z) const;

  Ray ray_from(const Point& base, const BoundaryDirection& dir) const;

  /// Planar spaces only: point reached from `c` after arclength `s` along the
  /// geodesic leaving `c` with tangent angle `angle` (radians, measured in the
  /// coordinate chart, 0 = +u axis).
  Point shoot(const Point& c, double angle, double s) const;

  /// Planar spaces only: tangent angle at `c` of the geodesic towards `y`.
  double direction_angle(const Point& c, const Point& y) const;

  /// Directions enumerated by slope reports: every tree end; for the
  /// half-plane 33 coordinates log-spaced in [-10, 10] plus infinity; for
  /// the Euclidean plane 64 equally spaced headings.
  std::vector<BoundaryDirection> boundary_directions() const;

  /// Hyperbolicity constant used by bound checks: 0 for trees, a pinned
  /// ceiling for the half-plane, infinity for the Euclidean plane.
  double documented_delta() const;

  // Tree accessors.
  struct Edge {
    std::size_t a = 0;  // interior vertex for end-edges
    std::size_t b = 0;
    double length = 0.0;
    bool is_end = false;
  };
  const std::vector<std::string>& vertex_names() const { return vertex_names_; }
  const std::vector<Edge>& edges() const { return edges_; }
  /// Edge index of each declared end, in declaration order.
  const std::vector<std::size_t>& end_edges() const { return end_edges_; }
  /// Vertices that are not end leaves.
  const std::vector<std::size_t>& core_vertices() const { return core_vertices_; }
  double core_diameter() const { return core_diameter_; }
  TreePoint vertex_point(std::size_t vertex) const;
  std::optional<std::size_t> find_vertex(const std::string& name) const;
  std::optional<std::size_t> find_end(const std::string& name) const;
  /// Vertex a tree point sits on, if it is at an edge endpoint.
  std::optional<std::size_t> vertex_at(const TreePoint& p) const;
  /// Distance from `p` to the nearest core vertex.
  double distance_to_core(const TreePoint& p) const;

 private:
  explicit Space(SpaceKind kind) : kind_(kind) {}

  double tree_distance(const TreePoint& x, const TreePoint& y) const;
  TreePoint tree_geodesic_point(const TreePoint& x, const TreePoint& y, double t) const;
  TreePoint point_on_edge_from(std::size_t edge, std::size_t from_vertex, double s) const;

  SpaceKind kind_;
  std::vector<std::string> vertex_names_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> end_edges_;
  std::vector<std::size_t> end_leaf_;
  std::vector<std::size_t> core_vertices_;
  std::vector<bool> is_end_leaf_;
  std::vector<std::vector<double>> vertex_distance_;
  // next_edge_[u][w]: edge leaving u on the path to w.
  std::vector<std::vector<std::size_t>> next_edge_;
  double core_diameter_ = 0.0;
};

/// Point-sample description used by hyperbolicity estimation.
struct SampleSpec {
  enum class Kind { TreeVertices, Grid, Uniform };
  Kind kind = Kind::Uniform;
  // Grid: n x n points on [u0, u0 + side] x [y0, y0 + side]; for the
  // half-plane the second coordinate is ln v.
  std::size_t n = 10;
  double side = 10.0;
  double u0 = 0.0;
  double y0 = 0.0;
  // Uniform: `count` points in [u_lo, u_hi] x [y_lo, y_hi] (ln v on the
  // half-plane); on trees a random edge and a random offset, end-edges
  // truncated to `end_extent`.
  std::size_t count = 200;
  double u_lo = -5.0;
  double u_hi = 5.0;
  double y_lo = -2.0;
  double y_hi = 2.0;
  double end_extent = 5.0;
  std::uint64_t seed = 1;

  /// Tree: all core vertices. Half-plane: 200 points in [-5,5] x [e^-2, e^2].
  /// Euclidean plane: 10 x 10 grid on a side-10 square.
  static SampleSpec default_for(SpaceKind kind);
};

std::vector<Point> sample_points(const Space& space, const SampleSpec& spec);

struct DeltaMethod {
  enum class Kind { Exhaustive, Sampled };
  Kind kind = Kind::Exhaustive;
  std::uint64_t seed = 1;
  std::uint64_t quadruples = 1'000'000;

  static DeltaMethod exhaustive() { return {}; }
  static DeltaMethod sampled(std::uint64_t seed, std::uint64_t quadruples = 1'000'000) {
    return {Kind::Sampled, seed, quadruples};
  }
};

/// Largest four-point defect observed on a finite sample. Sampling can only
/// witness violations, so `delta_hat` is a lower bound on the hyperbolicity
/// constant of the space, never a certificate.
struct HyperbolicityEstimate {
  double delta_hat = 0.0;
  std::uint64_t quadruple_count = 0;
  DeltaMethod method;
};

/// Four-point defect of one quadruple, maximised over all labelings.
double four_point_defect(double dpx, double dpy, double dpz, double dxy, double dxz, double dyz);

HyperbolicityEstimate estimate_delta(const Space& space, const std::vector<Point>& points,
                                     const DeltaMethod& method);
HyperbolicityEstimate estimate_delta(const Space& space, const SampleSpec& sample,
                                     const DeltaMethod& method);

/// Largest distance between the closed-form geodesic evaluator and an
/// independent numeric one, over `samples` evenly spaced parameters.
double check_geodesic_stability(const Space& space, const Point& x, const Point& y, int samples);

std::string to_string(const Point& p);
std::string to_string(const BoundaryDirection& d);

}  // namespace hypflow
