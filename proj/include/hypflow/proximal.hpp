#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "hypflow/bounds.hpp"
#include "hypflow/convex.hpp"

namespace hypflow {

enum class ProxSolver { ExactTree, Numeric2d };

std::string to_string(ProxSolver solver);

/// One application of the proximal operator
///   x_tau = argmin_y f(y) + d(x, y)^2 / (2 tau).
struct ProxStep {
  Point x;
  Point x_tau;
  double tau = 0.0;
  double step_length = 0.0;
  double f_x = 0.0;
  double f_x_tau = 0.0;
  double objective = 0.0;
  ProxSolver solver = ProxSolver::ExactTree;
  // Tree: parameter tolerance of the edge searches. Planar: radius of the
  // last search pattern that found no improvement.
  double residual = 0.0;
  std::size_t iterations = 0;
};

struct ProxOptions {
  double tree_tolerance = 1e-10;
  double planar_stop = 1e-9;
  std::size_t max_iterations = 100'000;
  int directions = 32;
};

/// Trees: every edge is searched by golden section (end-edges inside the
/// window allowed by d(x, x_tau) <= 2 tau L) and the best candidate wins,
/// ties going to the lowest edge index and then the smallest offset.
/// Planar spaces: geodesic pattern search from x over a rotating fan of
/// directions with exact line minimisation along each geodesic.
ProxStep prox(const ConvexFunction& f, const Point& x, double tau, const ProxOptions& options = {});

/// Objective f(y) + d(x, y)^2 / (2 tau).
double prox_objective(const ConvexFunction& f, const Point& x, double tau, const Point& y);

/// Step-size and decrease bounds for one step. `alpha` absent or <= 0 checks
/// only the upper step bound. Each entry uses tolerance tol + step.residual.
BoundReport check_step_bounds(const ProxStep& step, double lipschitz, std::optional<double> alpha, double tol,
                              std::size_t k = 0);

/// d(p, x_tau) <= d(p, x) - d(x, x_tau) + 4 sqrt(2 tau L delta) for p with
/// f(p) <= f(x_tau). Other p, and infinite delta, give an inapplicable entry.
BoundReport check_contraction(const ProxStep& step, const ConvexFunction& f, const Point& p, double delta,
                              double lipschitz, double tol, std::size_t k = 0);

}  // namespace hypflow
