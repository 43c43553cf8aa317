#include "hypflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hypflow/errors.hpp"
#include "plane_geometry.hpp"

namespace hypflow {

Trajectory run_ppa(const ConvexFunction& f, const FlowConfig& cfg) {
  if (!(cfg.tau > 0.0)) throw DomainError("flow needs tau > 0");
  if (cfg.K < 1) throw DomainError("flow needs K >= 1");
  f.space()->validate(cfg.x0);
  Trajectory traj;
  traj.points.reserve(cfg.K + 1);
  traj.steps.reserve(cfg.K);
  traj.points.push_back(cfg.x0);
  for (std::size_t k = 1; k <= cfg.K; ++k) {
    try {
      traj.steps.push_back(prox(f, traj.points.back(), cfg.tau, cfg.prox));
    } catch (const SolverError& e) {
      std::ostringstream msg;
      msg << "step k = " << k << ": " << e.what();
      throw SolverError(msg.str());
    }
    traj.points.push_back(traj.steps.back().x_tau);
  }
  return traj;
}

double locate_sublevel_time(const ConvexFunction& f, const Ray& ray, double level, double t_hi) {
  constexpr double kBisection = 1e-8;
  if (f(ray.at(0.0)) <= level) return 0.0;
  if (!(t_hi > 0.0) || !(f(ray.at(t_hi)) <= level)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "f stays above " << level << " on the ray up to t = " << t_hi << "; retry with t_hi = " << 2.0 * t_hi;
    throw RangeError(msg.str());
  }
  double lo = 0.0;
  double hi = t_hi;
  while (hi - lo > kBisection) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(ray.at(mid)) <= level) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

TauThreshold tau_threshold(double lipschitz, double alpha, double delta) {
  const double L = lipschitz;
  const double a = alpha;
  if (!(a > 0.0) || !(L > 0.0)) throw DomainError("tau_threshold needs L >= alpha > 0");
  if (a > L) throw DomainError("tau_threshold needs alpha <= L");
  if (!(delta >= 0.0)) throw DomainError("tau_threshold needs delta >= 0");
  const double L7 = std::pow(L, 7);
  const double s = 4.0 * L * L + a * a;
  TauThreshold t;
  t.exact = 2048.0 * L7 / (s * s * std::pow(a, 4)) * delta;
  t.sufficient = 82.0 * L7 / std::pow(a, 8) * delta;
  return t;
}

double divergence_rhs(std::size_t k, double tau, double lipschitz, double alpha, double delta) {
  const double L = lipschitz;
  const double a2 = alpha * alpha;
  const double rt = std::sqrt(tau);
  const double coeff = a2 / (4.0 * L) + a2 * a2 / (16.0 * L * L * L);
  return static_cast<double>(k) * rt * (coeff * rt - 2.0 * std::sqrt(2.0 * L * delta));
}

std::vector<GromovPair> gromov_schedule(const Space& space, const Trajectory& traj) {
  std::vector<GromovPair> out;
  const std::size_t K = traj.points.size() - 1;
  const Point& x0 = traj.points.front();
  auto product = [&](std::size_t i, std::size_t j) {
    return GromovPair{i, j, space.gromov_product(x0, traj.points[i], traj.points[j])};
  };
  for (std::size_t i = 1; 2 * i <= K; ++i) out.push_back(product(i, 2 * i));
  for (std::size_t k = 1; k <= K; ++k) out.push_back(product(k - 1, k));
  return out;
}

namespace {

// First t with f(ray(t)) <= level, growing the bracket from the decay rate
// alpha / 2 suggested by the asymptotic slope.
double sublevel_time(const ConvexFunction& f, const Ray& ray, double level, double alpha) {
  const double f0 = f(ray.at(0.0));
  double t_hi = std::max((f0 - level) / (0.5 * alpha), 1e-6);
  for (int i = 0; i < 200; ++i) {
    try {
      return locate_sublevel_time(f, ray, level, t_hi);
    } catch (const RangeError&) {
      t_hi *= 2.0;
    }
  }
  throw RangeError("sublevel set not reached along the steepest ray");
}

}  // namespace

Verification verify(const Trajectory& traj, const ConvexFunction& f, const SlopeReport& slopes,
                    const VerifyOptions& options) {
  namespace bn = bound_names;
  if (traj.steps.empty()) throw DomainError("verify needs at least one step");
  const Space& space = *f.space();
  const std::size_t K = traj.steps.size();
  const double L = f.lipschitz();
  const double tau = traj.steps.front().tau;
  const double tol = options.tol;
  const double delta = options.delta;
  const bool hyperbolic = std::isfinite(delta);
  const Point& x0 = traj.points.front();
  const double f0 = f(x0);

  Verification out;
  out.alpha = options.alpha.value_or(effective_alpha(f, slopes));
  out.delta = delta;
  out.v_star = slopes.v_star;
  const double alpha = std::min(out.alpha, L);
  const bool descending = out.alpha > 0.0 && L > 0.0;
  if (descending && hyperbolic) {
    out.threshold = tau_threshold(L, alpha, delta);
    out.below_threshold = delta > 0.0 && tau <= out.threshold->exact;
  }
  std::optional<Ray> xi;
  if (descending && out.v_star) xi.emplace(space.ray_from(x0, *out.v_star));

  const double a2 = alpha * alpha;
  const double a4 = a2 * a2;
  const double L3 = L * L * L;
  const double step_slack = hyperbolic ? 4.0 * std::sqrt(2.0 * tau * L * delta) : kInfinity;
  const std::optional<double> step_alpha = descending ? std::optional<double>(out.alpha) : std::nullopt;
  out.gromov = gromov_schedule(space, traj);

  double residual_sum = 0.0;
  for (std::size_t k = 0; k <= K; ++k) {
    const Point& xk = traj.points[k];
    const double kd = static_cast<double>(k);
    FlowRecord rec;
    rec.k = k;
    rec.d_x0_xk = space.distance(x0, xk);
    rec.f_xk = f(xk);
    if (k > 0) residual_sum += traj.steps[k - 1].residual;
    const double t_k_tol = tol + residual_sum;

    std::optional<Point> p;
    if (xi) {
      rec.t_k = sublevel_time(f, *xi, rec.f_xk, out.alpha);
      p = xi->at(rec.t_k);
      rec.gromov_xi_t = space.gromov_product(x0, *p, xk);
      rec.gromov_xi_2t = space.gromov_product(x0, xi->at(2.0 * rec.t_k), xk);
      if (hyperbolic) rec.divergence_rhs = divergence_rhs(k, tau, L, alpha, delta);
    }

    if (k > 0) {
      const ProxStep& step = traj.steps[k - 1];
      out.report.append(check_step_bounds(step, L, step_alpha, tol, k));
      // Without a steepest ray the last iterate serves as the comparison
      // point; it qualifies whenever f decreased along the run.
      out.report.append(check_contraction(step, f, p ? *p : traj.points.back(), delta, L, tol, k));

      const double upper = 2.0 * kd * tau * L;
      out.report.add(make_entry(bn::kDisplacementUpper, k, rec.d_x0_xk, upper, upper - rec.d_x0_xk, t_k_tol));
      if (descending) {
        const double lower = kd * a4 * tau / (8.0 * L3);
        out.report.add(make_entry(bn::kDisplacementLower, k, rec.d_x0_xk, lower, rec.d_x0_xk - lower, t_k_tol));
        const double bound = -a4 / (16.0 * L3);
        const double d = std::max(rec.d_x0_xk, tol);
        const double ratio = (rec.f_xk - f0) / d;
        out.report.add(make_entry(bn::kSlopeRatio, k, ratio, bound, bound - ratio, t_k_tol / d));
      } else {
        out.report.add(inapplicable_entry(bn::kDisplacementLower, k, "no negative asymptotic slope"));
        out.report.add(inapplicable_entry(bn::kSlopeRatio, k, "no negative asymptotic slope"));
      }
    }

    if (!xi) {
      const char* why = descending ? "no steepest direction" : "no negative asymptotic slope";
      for (const char* name : {bn::kRayDistance, bn::kTelescoped, bn::kDivergence, bn::kSandwichLower,
                               bn::kSandwichUpper}) {
        if (k > 0 || std::string(name) == bn::kDivergence) out.report.add(inapplicable_entry(name, k, why));
      }
      out.records.push_back(rec);
      continue;
    }

    const double t = rec.t_k;
    const double gp = rec.gromov_xi_t;
    if (k > 0) {
      const double d_xi_xk = space.distance(*p, xk);
      const double ray_rhs = t + kd * a4 * tau / (8.0 * L3) - 2.0 * gp;
      out.report.add(make_entry(bn::kRayDistance, k, d_xi_xk, ray_rhs, d_xi_xk - ray_rhs, t_k_tol));
      if (hyperbolic) {
        const double tele = t - kd * (a2 * tau / (2.0 * L) - step_slack);
        out.report.add(make_entry(bn::kTelescoped, k, d_xi_xk, tele, tele - d_xi_xk, t_k_tol));
      } else {
        out.report.add(inapplicable_entry(bn::kTelescoped, k, "space is not hyperbolic"));
      }
    }

    if (!hyperbolic) {
      out.report.add(inapplicable_entry(bn::kDivergence, k, "space is not hyperbolic"));
    } else if (out.below_threshold) {
      out.report.add(inapplicable_entry(bn::kDivergence, k, "tau at or below the threshold"));
    } else {
      out.report.add(make_entry(bn::kDivergence, k, gp, rec.divergence_rhs, gp - rec.divergence_rhs, t_k_tol));
    }

    if (k > 0) {
      const double dg = space.distance_to_geodesic(x0, *p, xk);
      out.report.add(make_entry(bn::kSandwichUpper, k, gp, dg, dg - gp, tol + kGeoTolerance));
      if (hyperbolic) {
        const double lower = dg - 2.0 * delta;
        out.report.add(make_entry(bn::kSandwichLower, k, lower, gp, gp - lower, tol + kGeoTolerance));
      } else {
        out.report.add(inapplicable_entry(bn::kSandwichLower, k, "space is not hyperbolic"));
      }
    }
    out.records.push_back(rec);
  }
  return out;
}

BoundaryLimit detect_boundary_limit(const Trajectory& traj, const Space& space) {
  if (traj.points.size() < 3) throw DomainError("boundary detection needs at least three points");
  const std::size_t K = traj.points.size() - 1;
  const auto pairs = gromov_schedule(space, traj);
  BoundaryLimit out;
  out.early = kInfinity;
  out.late = kInfinity;
  bool have_early = false;
  bool have_late = false;
  for (const auto& gp : pairs) {
    if (2 * gp.j <= K) {
      out.early = std::min(out.early, gp.product);
      have_early = true;
    }
    if (2 * gp.i >= K) {
      out.late = std::min(out.late, gp.product);
      have_late = true;
    }
  }
  if (!have_early || !have_late || !(out.late > out.early + kGeoTolerance)) {
    out.note = "scheduled Gromov products do not grow";
    return out;
  }

  const Point& x0 = traj.points.front();
  const Point& xK = traj.points.back();
  switch (space.kind()) {
    case SpaceKind::Tree: {
      const auto& t = std::get<TreePoint>(xK);
      const auto& ends = space.end_edges();
      const auto it = std::find(ends.begin(), ends.end(), t.edge);
      if (it == ends.end() || !(t.offset > 0.0)) {
        out.note = "final iterate is not on an end-edge";
        return out;
      }
      out.direction = TreeEnd{static_cast<std::size_t>(it - ends.begin())};
      break;
    }
    case SpaceKind::HalfPlane: {
      // Ideal endpoint of the geodesic from x_0 through x_K.
      const auto& a = std::get<PlanePoint>(x0);
      const auto z = plane::to_disk(a, std::get<PlanePoint>(xK));
      if (std::abs(z) == 0.0) {
        out.note = "final iterate equals the start";
        return out;
      }
      const auto dir = z / std::abs(z);
      const auto gap = 1.0 - dir;
      const double w = (plane::cplx{0.0, 1.0} * (1.0 + dir) / gap).real();
      if (std::abs(gap) < 1e-12 || std::abs(w) > 1e12) {
        out.direction = IdealPoint::infinity();
      } else {
        out.direction = IdealPoint{a.u + a.v * w, false};
      }
      break;
    }
    case SpaceKind::Euclid2: {
      const auto& a = std::get<PlanePoint>(x0);
      const auto& b = std::get<PlanePoint>(xK);
      out.direction = Heading{std::atan2(b.v - a.v, b.u - a.u)};
      break;
    }
  }
  out.note = "scheduled Gromov products grow";
  return out;
}

}  // namespace hypflow
