#include "hypflow/convex.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "golden.hpp"
#include "hypflow/errors.hpp"

namespace hypflow {

ConvexFunction::ConvexFunction(SpacePtr space, Evaluator eval, double lipschitz, std::string tag,
                               std::optional<double> declared_alpha, SlopeRule slope)
    : space_(std::move(space)),
      eval_(std::move(eval)),
      lipschitz_(lipschitz),
      tag_(std::move(tag)),
      declared_alpha_(declared_alpha),
      slope_(std::move(slope)) {
  if (!space_) throw DomainError("function needs a space");
  if (!(lipschitz_ >= 0.0) || !std::isfinite(lipschitz_)) {
    throw DomainError("Lipschitz bound must be finite and nonnegative");
  }
}

std::optional<double> ConvexFunction::limit_slope(const BoundaryDirection& dir) const {
  if (!slope_) return std::nullopt;
  return slope_(dir);
}

// ---------------------------------------------------------------------------
// Constructors

ConvexFunction busemann(const Ray& ray) {
  const SpacePtr& space = ray.space();
  const BoundaryDirection target = ray.direction();
  ConvexFunction::Evaluator eval;
  ConvexFunction::SlopeRule slope;

  switch (space->kind()) {
    case SpaceKind::Tree: {
      const std::size_t end_edge = space->end_edges()[std::get<TreeEnd>(target).index];
      const TreePoint base = std::get<TreePoint>(ray.base());
      // Past every point whose path merges into the ray, d(x, P) - d(base, P)
      // no longer depends on how far out P sits on the end-edge.
      eval = [space, end_edge, base](const Point& x) {
        const auto& tx = std::get<TreePoint>(x);
        double far = 0.0;
        if (tx.edge == end_edge) far = tx.offset;
        if (base.edge == end_edge) far = std::max(far, base.offset);
        const Point probe = TreePoint{end_edge, far + 1.0};
        return space->distance(x, probe) - space->distance(base, probe);
      };
      slope = [target](const BoundaryDirection& d) -> std::optional<double> {
        if (!std::holds_alternative<TreeEnd>(d)) return std::nullopt;
        return d == target ? -1.0 : 1.0;
      };
      break;
    }
    case SpaceKind::HalfPlane: {
      const auto base = std::get<PlanePoint>(ray.base());
      const auto ideal = std::get<IdealPoint>(target);
      if (ideal.at_infinity) {
        const double offset = std::log(base.v);
        eval = [offset](const Point& x) { return offset - std::log(std::get<PlanePoint>(x).v); };
      } else {
        const double p = ideal.coordinate;
        auto horo = [p](const PlanePoint& z) { return 2.0 * std::log(std::hypot(z.u - p, z.v)) - std::log(z.v); };
        const double offset = horo(base);
        eval = [horo, offset](const Point& x) { return horo(std::get<PlanePoint>(x)) - offset; };
      }
      slope = [target](const BoundaryDirection& d) -> std::optional<double> {
        if (!std::holds_alternative<IdealPoint>(d)) return std::nullopt;
        return d == target ? -1.0 : 1.0;
      };
      break;
    }
    case SpaceKind::Euclid2: {
      const auto base = std::get<PlanePoint>(ray.base());
      const double angle = std::get<Heading>(target).angle;
      const double cu = std::cos(angle);
      const double cv = std::sin(angle);
      eval = [base, cu, cv](const Point& x) {
        const auto& z = std::get<PlanePoint>(x);
        return -((z.u - base.u) * cu + (z.v - base.v) * cv);
      };
      slope = [angle](const BoundaryDirection& d) -> std::optional<double> {
        const auto* h = std::get_if<Heading>(&d);
        if (h == nullptr) return std::nullopt;
        return -std::cos(h->angle - angle);
      };
      break;
    }
  }
  return ConvexFunction(space, std::move(eval), 1.0, "busemann(" + to_string(target) + ")", 1.0,
                        std::move(slope));
}

ConvexFunction distance_to(SpacePtr space, const Point& q, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("distance_to needs a positive scale");
  space->validate(q);
  auto eval = [space, q, scale](const Point& x) { return scale * space->distance(q, x); };
  auto slope = [scale](const BoundaryDirection&) -> std::optional<double> { return scale; };
  std::ostringstream tag;
  tag << scale << "*dist(" << to_string(q) << ")";
  return ConvexFunction(space, std::move(eval), scale, tag.str(), std::nullopt, std::move(slope));
}

ConvexFunction constant(SpacePtr space, double value) {
  if (!std::isfinite(value)) throw DomainError("constant must be finite");
  auto eval = [value](const Point&) { return value; };
  auto slope = [](const BoundaryDirection&) -> std::optional<double> { return 0.0; };
  std::ostringstream tag;
  tag << "const(" << value << ")";
  return ConvexFunction(std::move(space), std::move(eval), 0.0, tag.str(), std::nullopt, std::move(slope));
}

ConvexFunction combine(const std::vector<WeightedTerm>& terms, CombineMode mode, bool allow_any_weights) {
  if (terms.empty()) throw DomainError("combine needs at least one term");
  const SpacePtr space = terms.front().fn.space();
  double lipschitz = 0.0;
  std::ostringstream tag;
  tag << (mode == CombineMode::Sum ? "sum(" : "max(");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    if (t.fn.space() != space) throw DomainError("combined functions live on different spaces");
    if (!std::isfinite(t.weight) || (!allow_any_weights && !(t.weight > 0.0))) {
      throw DomainError("combine weights must be positive");
    }
    const double wl = std::abs(t.weight) * t.fn.lipschitz();
    lipschitz = mode == CombineMode::Sum ? lipschitz + wl : std::max(lipschitz, wl);
    tag << (i ? ", " : "") << t.weight << "*" << t.fn.tag();
  }
  tag << ")";

  ConvexFunction::Evaluator eval;
  if (mode == CombineMode::Sum) {
    eval = [terms](const Point& x) {
      double s = 0.0;
      for (const auto& t : terms) s += t.weight * t.fn(x);
      return s;
    };
  } else {
    eval = [terms](const Point& x) {
      double m = -kInfinity;
      for (const auto& t : terms) m = std::max(m, t.weight * t.fn(x));
      return m;
    };
  }
  // Limits of f o ray / t add under sums and commute with finite maxima.
  auto slope = [terms, mode](const BoundaryDirection& d) -> std::optional<double> {
    double acc = mode == CombineMode::Sum ? 0.0 : -kInfinity;
    for (const auto& t : terms) {
      const auto s = t.fn.limit_slope(d);
      if (!s) return std::nullopt;
      const double ws = t.weight * *s;
      acc = mode == CombineMode::Sum ? acc + ws : std::max(acc, ws);
    }
    return acc;
  };
  return ConvexFunction(space, std::move(eval), lipschitz, tag.str(), std::nullopt, std::move(slope));
}

// ---------------------------------------------------------------------------
// Slopes

double descending_slope(const ConvexFunction& f, const Point& x, double h, int n_dir) {
  if (!(h > 0.0)) throw DomainError("descending_slope needs h > 0");
  const Space& space = *f.space();
  space.validate(x);
  const double fx = f(x);
  auto quotient = [&](const Point& y) {
    const double d = space.distance(x, y);
    if (d <= 0.0) return 0.0;
    return std::max(fx - f(y), 0.0) / d;
  };

  if (space.kind() == SpaceKind::Tree) {
    const auto& tx = std::get<TreePoint>(x);
    double best = 0.0;
    if (const auto v = space.vertex_at(tx)) {
      for (std::size_t ei = 0; ei < space.edges().size(); ++ei) {
        const auto& e = space.edges()[ei];
        if (e.a == *v) {
          best = std::max(best, quotient(TreePoint{ei, e.is_end ? h : std::min(h, e.length)}));
        } else if (e.b == *v && !e.is_end) {
          best = std::max(best, quotient(TreePoint{ei, std::max(0.0, e.length - h)}));
        }
      }
    } else {
      const auto& e = space.edges()[tx.edge];
      best = std::max(best, quotient(TreePoint{tx.edge, std::max(0.0, tx.offset - h)}));
      const double hi = e.is_end ? tx.offset + h : std::min(e.length, tx.offset + h);
      best = std::max(best, quotient(TreePoint{tx.edge, hi}));
    }
    return best;
  }

  if (n_dir < 4) throw DomainError("descending_slope needs at least four headings");
  const double step = 2.0 * std::numbers::pi / n_dir;
  double best = -1.0;
  double best_angle = 0.0;
  for (int j = 0; j < n_dir; ++j) {
    const double a = step * j;
    const double q = quotient(space.shoot(x, a, h));
    if (q > best) {
      best = q;
      best_angle = a;
    }
  }
  // The sampled maximum can miss the steepest heading by up to step / 2.
  auto neg = [&](double a) { return -quotient(space.shoot(x, a, h)); };
  const auto refined = detail::golden_section(neg, best_angle - step, best_angle + step, 1e-10);
  return std::max(best, -refined.value);
}

double asymptotic_slope(const ConvexFunction& f, const Ray& ray, double t_max, int n) {
  if (!(t_max > 0.0)) throw DomainError("asymptotic_slope needs T_max > 0");
  if (n < 2) throw DomainError("asymptotic_slope needs n >= 2");
  const double f0 = f(ray.at(0.0));
  double prev = -kInfinity;
  for (int i = 1; i <= n; ++i) {
    const double t = t_max * i / n;
    const double ft = f(ray.at(t));
    const double q = (ft - f0) / t;
    const double tol = kCvxTolerance * std::max(1.0, (std::abs(ft) + std::abs(f0)) / t);
    if (q < prev - tol) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "slope quotient of " << f.tag() << " decreases along the ray towards "
          << to_string(ray.direction()) << " at t = " << t << " (" << prev << " -> " << q << ")";
      throw ConvexityError(msg.str());
    }
    prev = std::max(prev, q);
  }
  const double chord = (f(ray.at(t_max)) - f(ray.at(0.5 * t_max))) / (0.5 * t_max);
  return std::min(chord, kSlopeInfinity);
}

double default_slope_horizon(const Space& space, const Point& base) {
  switch (space.kind()) {
    case SpaceKind::Tree:
      return 2.0 * (space.core_diameter() + space.distance_to_core(std::get<TreePoint>(base))) + 100.0;
    case SpaceKind::HalfPlane:
      // Longer rays towards finite boundary points lose the horocyclic
      // offset to cancellation in u - p.
      return 12.0;
    case SpaceKind::Euclid2:
      return 10.0;
  }
  return 10.0;
}

SlopeReport slope_report(const ConvexFunction& f, const Point& base, double t_max, int n) {
  const Space& space = *f.space();
  const auto directions = space.boundary_directions();
  if (directions.empty()) throw DomainError("space has no boundary directions");

  SlopeReport report;
  double lowest = kInfinity;
  for (const auto& dir : directions) {
    const Ray ray = space.ray_from(base, dir);
    DirectionSlope ds{dir, asymptotic_slope(f, ray, t_max, n), f.limit_slope(dir), 0.0};
    ds.value = ds.exact.value_or(ds.measured);
    if (ds.value < lowest) {
      lowest = ds.value;
      if (lowest < -kCvxTolerance) report.v_star = dir;
    }
    if (ds.value < -kCvxTolerance) report.negative_directions.push_back(dir);
    report.slopes.push_back(std::move(ds));
  }
  report.alpha_hat = -lowest;

  if (space.is_hyperbolic() && report.negative_directions.size() > 1) {
    std::ostringstream msg;
    msg << "function " << f.tag() << " has " << report.negative_directions.size()
        << " directions of negative asymptotic slope:";
    for (const auto& d : report.negative_directions) msg << " " << to_string(d);
    throw ConvexityError(msg.str());
  }
  return report;
}

SlopeReport slope_report(const ConvexFunction& f, const Point& base) {
  return slope_report(f, base, default_slope_horizon(*f.space(), base));
}

double effective_alpha(const ConvexFunction& f, const SlopeReport& report) {
  return f.declared_alpha().value_or(report.alpha_hat);
}

}  // namespace hypflow
