#include "hypflow/proximal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "golden.hpp"
#include "hypflow/errors.hpp"

namespace hypflow {

std::string to_string(ProxSolver solver) {
  return solver == ProxSolver::ExactTree ? "exact_tree" : "numeric_2d";
}

double prox_objective(const ConvexFunction& f, const Point& x, double tau, const Point& y) {
  const double d = f.space()->distance(x, y);
  return f(y) + d * d / (2.0 * tau);
}

namespace {

ProxStep finish(const ConvexFunction& f, const Point& x, double tau, Point x_tau, ProxSolver solver,
                double residual, std::size_t iterations) {
  ProxStep step;
  step.x = x;
  step.x_tau = std::move(x_tau);
  step.tau = tau;
  step.step_length = f.space()->distance(step.x, step.x_tau);
  step.f_x = f(step.x);
  step.f_x_tau = f(step.x_tau);
  step.objective = step.f_x_tau + step.step_length * step.step_length / (2.0 * tau);
  step.solver = solver;
  step.residual = residual;
  step.iterations = iterations;
  return step;
}

// Along one edge, d(x, y(s))^2 = (s - c)^2 + const, where c is x's offset
// when x lies on the edge and otherwise the (virtual) offset of x seen
// through the endpoint the path enters by.
double edge_centre(const Space& space, const TreePoint& x, std::size_t ei) {
  const auto& e = space.edges()[ei];
  if (x.edge == ei) return x.offset;
  const double da = space.distance(x, TreePoint{ei, 0.0});
  if (e.is_end) return -da;
  const double db = space.distance(x, TreePoint{ei, e.length});
  return da <= db ? -da : e.length + db;
}

// Golden section pins the minimiser only to about sqrt(machine epsilon)
// because the objective is flat there. Every function built here is
// piecewise linear along an edge, so the slopes of f just left and right of
// the bracketed point, together with the exact quadratic distance term,
// locate the minimiser in closed form: the stationary point of one of the
// two linear pieces, or the kink between them.
double polish_on_edge(const ConvexFunction& f, const Point& x, double tau, std::size_t ei, double s, double hi,
                      double c) {
  constexpr double h = 1e-4;
  auto fe = [&](double t) { return f(TreePoint{ei, t}); };
  // One-sided probes are skipped when they would leave the edge; the
  // remaining side then models the whole window.
  const bool has_left = s - 2.0 * h >= 0.0;
  const bool has_right = s + 2.0 * h <= hi;
  if (!has_left && !has_right) return s;
  double xl1 = 0.0, fl1 = 0.0, fl = 0.0;
  double xr1 = 0.0, fr1 = 0.0, fr = 0.0;
  if (has_left) {
    xl1 = s - 2.0 * h;
    fl1 = fe(xl1);
    fl = (fe(s - h) - fl1) / h;
  }
  if (has_right) {
    xr1 = s + h;
    fr1 = fe(xr1);
    fr = (fe(s + 2.0 * h) - fr1) / h;
  }
  if (!has_left) fl = fr;
  if (!has_right) fr = fl;

  double candidate = s;
  if (std::abs(fr - fl) <= 1e-7 * std::max(1.0, std::abs(fl) + std::abs(fr))) {
    candidate = c - tau * 0.5 * (fl + fr);
  } else {
    const double kink = (fl1 - fr1 - fl * xl1 + fr * xr1) / (fr - fl);
    const double left = c - tau * fl;
    const double right = c - tau * fr;
    if (left <= kink) {
      candidate = left;
    } else if (right >= kink) {
      candidate = right;
    } else {
      candidate = kink;
    }
  }
  candidate = std::clamp(candidate, 0.0, hi);
  if (!(std::abs(candidate - s) <= 2.0 * h)) return s;
  const double g0 = prox_objective(f, x, tau, TreePoint{ei, s});
  const double g1 = prox_objective(f, x, tau, TreePoint{ei, candidate});
  return g1 <= g0 + 1e-12 * (1.0 + std::abs(g0)) ? candidate : s;
}

ProxStep prox_tree(const ConvexFunction& f, const TreePoint& x, double tau, const ProxOptions& opt) {
  const Space& space = *f.space();
  const double reach = 2.0 * tau * f.lipschitz();
  double best_value = prox_objective(f, x, tau, x);
  std::size_t best_edge = x.edge;
  double best_arg = x.offset;
  double best_hi = space.edges()[x.edge].is_end ? kInfinity : space.edges()[x.edge].length;
  std::size_t evaluations = 0;

  for (std::size_t ei = 0; ei < space.edges().size(); ++ei) {
    const auto& e = space.edges()[ei];
    double hi = e.length;
    if (e.is_end) {
      // Any minimiser lies within 2 tau L of x, which bounds its offset here.
      const double from = x.edge == ei ? x.offset : 0.0;
      hi = from + reach * (1.0 + 1e-12) + 1e-12;
    }
    auto g = [&](double s) {
      ++evaluations;
      return prox_objective(f, x, tau, TreePoint{ei, s});
    };
    const auto m = detail::golden_section(g, 0.0, hi, opt.tree_tolerance);
    if (m.value < best_value) {
      best_value = m.value;
      best_edge = ei;
      best_arg = m.arg;
      best_hi = hi;
    }
  }
  const double polished =
      polish_on_edge(f, x, tau, best_edge, best_arg, best_hi, edge_centre(space, x, best_edge));
  return finish(f, x, tau, TreePoint{best_edge, polished}, ProxSolver::ExactTree, opt.tree_tolerance, evaluations);
}

ProxStep prox_planar(const ConvexFunction& f, const Point& x, double tau, const ProxOptions& opt) {
  const Space& space = *f.space();
  const double reach = 2.0 * tau * f.lipschitz();
  const int n = std::max(opt.directions, 4);
  const double spacing = 2.0 * std::numbers::pi / n;
  // Rotating the fan by an irrational fraction of the spacing keeps the
  // directions dense over many iterations.
  const double rotation = spacing * (2.0 - std::numbers::phi);

  Point centre = x;
  double value = prox_objective(f, x, tau, x);
  double radius = reach;
  double offset = 0.0;
  std::optional<double> carry;
  std::size_t iterations = 0;

  while (radius >= opt.planar_stop) {
    if (++iterations > opt.max_iterations) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "prox did not converge in " << opt.max_iterations << " iterations from " << to_string(x)
          << " (tau = " << tau << ", current " << to_string(centre) << ", radius " << radius << ")";
      throw SolverError(msg.str());
    }
    double best_value = value;
    double best_step = 0.0;
    double best_angle = 0.0;
    auto try_angle = [&](double angle) {
      auto g = [&](double s) { return prox_objective(f, x, tau, space.shoot(centre, angle, s)); };
      const auto m = detail::golden_section(g, 0.0, radius, radius * 1e-3);
      if (m.value < best_value) {
        best_value = m.value;
        best_step = m.arg;
        best_angle = angle;
      }
    };
    if (carry) try_angle(*carry);
    for (int j = 0; j < n; ++j) try_angle(offset + spacing * j);
    offset = std::fmod(offset + rotation, spacing);

    if (best_step > 0.0) {
      const Point next = space.shoot(centre, best_angle, best_step);
      // Continue along the same geodesic: the heading at `next` pointing
      // away from the old centre.
      carry = space.direction_angle(next, centre) + std::numbers::pi;
      centre = next;
      value = best_value;
      radius = std::min(reach, std::max(2.0 * best_step, 0.5 * radius));
    } else {
      carry.reset();
      radius *= 0.25;
    }
  }
  return finish(f, x, tau, centre, ProxSolver::Numeric2d, radius, iterations);
}

}  // namespace

ProxStep prox(const ConvexFunction& f, const Point& x, double tau, const ProxOptions& options) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("prox needs tau > 0");
  f.space()->validate(x);
  if (f.lipschitz() == 0.0) {
    return finish(f, x, tau, x, f.space()->kind() == SpaceKind::Tree ? ProxSolver::ExactTree : ProxSolver::Numeric2d,
                  0.0, 0);
  }
  if (f.space()->kind() == SpaceKind::Tree) return prox_tree(f, std::get<TreePoint>(x), tau, options);
  return prox_planar(f, x, tau, options);
}

BoundReport check_step_bounds(const ProxStep& step, double lipschitz, std::optional<double> alpha, double tol,
                              std::size_t k) {
  namespace bn = bound_names;
  const double t = tol + step.residual;
  const double d = step.step_length;
  const double L = lipschitz;
  const double tau = step.tau;
  BoundReport r;
  const double upper = 2.0 * tau * L;
  r.add(make_entry(bn::kStepUpper, k, d, upper, upper - d, t));

  if (!alpha || !(*alpha > 0.0)) {
    r.add(inapplicable_entry(bn::kStepLower, k, "no negative asymptotic slope"));
    r.add(inapplicable_entry(bn::kStepLowerWeak, k, "no negative asymptotic slope"));
    r.add(inapplicable_entry(bn::kDecrease, k, "no negative asymptotic slope"));
    return r;
  }
  const double a = std::min(*alpha, L);
  const double lower = (L - std::sqrt(L * L - a * a)) * tau;
  r.add(make_entry(bn::kStepLower, k, d, lower, d - lower, t));
  const double weak = a * a * tau / (2.0 * L);
  r.add(make_entry(bn::kStepLowerWeak, k, d, weak, d - weak, t));
  const double drop = step.f_x - step.f_x_tau;
  const double need = std::pow(a, 4) * tau / (8.0 * L * L);
  r.add(make_entry(bn::kDecrease, k, drop, need, drop - need, t));
  return r;
}

BoundReport check_contraction(const ProxStep& step, const ConvexFunction& f, const Point& p, double delta,
                              double lipschitz, double tol, std::size_t k) {
  namespace bn = bound_names;
  BoundReport r;
  if (!std::isfinite(delta)) {
    r.add(inapplicable_entry(bn::kContraction, k, "space is not hyperbolic"));
    return r;
  }
  if (!(f(p) <= step.f_x_tau + 1e-9)) {
    r.add(inapplicable_entry(bn::kContraction, k, "f(p) > f(x_tau)"));
    return r;
  }
  const Space& space = *f.space();
  const double lhs = space.distance(p, step.x_tau);
  const double rhs =
      space.distance(p, step.x) - step.step_length + 4.0 * std::sqrt(2.0 * step.tau * lipschitz * delta);
  r.add(make_entry(bn::kContraction, k, lhs, rhs, rhs - lhs, tol + step.residual));
  return r;
}

}  // namespace hypflow
