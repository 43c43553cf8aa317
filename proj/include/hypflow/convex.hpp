#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hypflow/space.hpp"

namespace hypflow {

/// Asymptotic slopes at or above this value stand for +infinity.
inline constexpr double kSlopeInfinity = 1e13;

/// Monotonicity tolerance for slope quotients along rays.
inline constexpr double kCvxTolerance = 1e-9;

/// A Lipschitz convex function on one of the model spaces.
///
/// Besides the evaluator it carries a certified Lipschitz bound and, when the
/// construction determines it, the exact asymptotic slope towards each
/// boundary direction (`limit_slope`). Sums and maxima propagate exact slopes
/// termwise; the quotient estimator in `asymptotic_slope` is independent of
/// it and is used to cross-check.
class ConvexFunction {
 public:
  using Evaluator = std::function<double(const Point&)>;
  using SlopeRule = std::function<std::optional<double>(const BoundaryDirection&)>;

  ConvexFunction(SpacePtr space, Evaluator eval, double lipschitz, std::string tag,
                 std::optional<double> declared_alpha = std::nullopt, SlopeRule slope = {});

  double operator()(const Point& x) const { return eval_(x); }

  const SpacePtr& space() const { return space_; }
  double lipschitz() const { return lipschitz_; }
  const std::optional<double>& declared_alpha() const { return declared_alpha_; }
  const std::string& tag() const { return tag_; }

  /// Exact asymptotic slope towards `dir`, if the construction knows it.
  std::optional<double> limit_slope(const BoundaryDirection& dir) const;

 private:
  SpacePtr space_;
  Evaluator eval_;
  double lipschitz_;
  std::string tag_;
  std::optional<double> declared_alpha_;
  SlopeRule slope_;
};

/// b(x) = lim d(x, ray(t)) - t, normalised so that b(ray(0)) = 0.
/// 1-Lipschitz with asymptotic slope -1 towards the ray's end.
ConvexFunction busemann(const Ray& ray);

/// x -> scale * d(q, x)
ConvexFunction distance_to(SpacePtr space, const Point& q, double scale);

ConvexFunction constant(SpacePtr space, double value);

enum class CombineMode { Sum, Max };

struct WeightedTerm {
  double weight = 1.0;
  ConvexFunction fn;
};

/// Positive sum or pointwise maximum of weighted terms. The result drops any
/// declared alpha. With `allow_any_weights` nonpositive weights are accepted;
/// the result is then generally not convex (used for guard-path fixtures).
ConvexFunction combine(const std::vector<WeightedTerm>& terms, CombineMode mode,
                       bool allow_any_weights = false);

/// Finite-difference descending slope: max over probes y at distance h of
/// max(f(x) - f(y), 0) / d(x, y). Trees probe every incident edge direction;
/// planar spaces probe `n_dir` headings and then refine the best heading.
double descending_slope(const ConvexFunction& f, const Point& x, double h = 1e-4, int n_dir = 64);

/// Estimate of the asymptotic slope along `ray`: the chord slope of f o ray
/// over [T_max / 2, T_max]. The quotient (f(ray(t)) - f(ray(0))) / t is
/// evaluated at n points of (0, T_max] and must be non-decreasing, otherwise
/// ConvexityError is thrown.
double asymptotic_slope(const ConvexFunction& f, const Ray& ray, double t_max, int n);

struct DirectionSlope {
  BoundaryDirection direction;
  double measured = 0.0;            // quotient estimator
  std::optional<double> exact;      // from the function's construction
  double value = 0.0;               // exact when available, otherwise measured
};

struct SlopeReport {
  std::vector<DirectionSlope> slopes;
  double alpha_hat = 0.0;  // -min value
  std::vector<BoundaryDirection> negative_directions;
  std::optional<BoundaryDirection> v_star;  // direction of steepest descent, if negative
};

/// Default ray length for slope quotients on `space` seen from `base`.
double default_slope_horizon(const Space& space, const Point& base);

/// Asymptotic slopes over `space.boundary_directions()`. On the hyperbolic
/// models more than one negative direction is impossible for a convex
/// function and raises ConvexityError; the Euclidean plane reports them all.
SlopeReport slope_report(const ConvexFunction& f, const Point& base, double t_max, int n = 16);
SlopeReport slope_report(const ConvexFunction& f, const Point& base);

/// Alpha used by bound checks: the declared value when present, else the
/// slope report's alpha_hat.
double effective_alpha(const ConvexFunction& f, const SlopeReport& report);

}  // namespace hypflow
