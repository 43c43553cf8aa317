#pragma once

// Brute-force references for tests. Everything here is deliberately naive
// and uses nothing from the library except Space::distance, Ray::at and
// function evaluation.

#include <cstddef>
#include <vector>

#include "hypflow/convex.hpp"

namespace hypflow::oracle {

struct GridSpec {
  // Trees: spacing of the offsets sampled on every edge. Planar spaces:
  // target cell size of the final refinement, in arclength.
  double resolution = 1e-3;
  // Planar spaces: polar grid around x, `radial` x `angular` nodes per round.
  std::size_t radial = 64;
  std::size_t angular = 64;
  // Planar spaces: searched radius; defaults to 2 tau L when <= 0.
  double radius = 0.0;
};

struct GridMinimum {
  Point point;
  double objective = 0.0;
  std::size_t evaluations = 0;
};

/// Grid minimum of f(y) + d(x, y)^2 / (2 tau). Trees sample every edge at
/// multiples of the resolution (end-edges out to 2 tau L past x). Planar
/// spaces sample a polar grid of geodesics around x and repeatedly zoom
/// into the best cell; the running minimum never increases.
GridMinimum prox_grid(const ConvexFunction& f, const Point& x, double tau, const GridSpec& grid);

/// Largest four-point defect over all labeled quadruples, clamped at 0.
double delta_exhaustive(const Space& space, const std::vector<Point>& points);

/// (f(ray(t)) - f(ray(0))) / t for each t.
std::vector<double> slope_quotient(const ConvexFunction& f, const Ray& ray, const std::vector<double>& ts);

/// Iterates of the flow of b(x) = -offset on a ray-shaped end-edge started
/// at `offset0`: offset0 + k tau.
std::vector<double> line_flow_offsets(double offset0, double tau, std::size_t K);

/// Iterates of the flow of -ln v on the half-plane: (u0, v0 e^{k tau}).
std::vector<PlanePoint> vertical_flow(const PlanePoint& x0, double tau, std::size_t K);

}  // namespace hypflow::oracle
