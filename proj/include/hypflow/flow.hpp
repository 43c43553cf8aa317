#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hypflow/bounds.hpp"
#include "hypflow/convex.hpp"
#include "hypflow/proximal.hpp"

namespace hypflow {

struct FlowConfig {
  double tau = 1.0;
  std::size_t K = 1;
  Point x0;
  std::uint64_t seed = 0;
  ProxOptions prox;
};

/// x_0, x_1 = J(x_0), ..., x_K together with the step diagnostics.
struct Trajectory {
  std::vector<Point> points;
  std::vector<ProxStep> steps;
};

/// Iterates the proximal operator K times. Solver failures are rethrown as
/// SolverError naming the failing k.
Trajectory run_ppa(const ConvexFunction& f, const FlowConfig& cfg);

/// Smallest t >= 0 with f(ray(t)) <= level, to within 1e-8. Returns 0 when
/// f(ray(0)) <= level; throws RangeError when f(ray(t_hi)) > level.
double locate_sublevel_time(const ConvexFunction& f, const Ray& ray, double level, double t_hi);

struct TauThreshold {
  double exact = 0.0;       // 2^11 L^7 / ((4L^2 + a^2)^2 a^4) * delta
  double sufficient = 0.0;  // 82 L^7 / a^8 * delta
};

/// Step size beyond which the divergence lower bound is positive.
TauThreshold tau_threshold(double lipschitz, double alpha, double delta);

/// k sqrt(tau) {(a^2 / 4L + a^4 / 16L^3) sqrt(tau) - 2 sqrt(2 L delta)}
double divergence_rhs(std::size_t k, double tau, double lipschitz, double alpha, double delta);

struct GromovPair {
  std::size_t i = 0;
  std::size_t j = 0;
  double product = 0.0;  // (x_i | x_j)_{x_0}
};

/// Pairs {(i, 2i) : 2i <= K} followed by {(k - 1, k) : 1 <= k <= K}.
std::vector<GromovPair> gromov_schedule(const Space& space, const Trajectory& traj);

/// Per-step quantities recorded alongside the bound entries.
struct FlowRecord {
  std::size_t k = 0;
  double d_x0_xk = 0.0;
  double f_xk = 0.0;
  double t_k = std::numeric_limits<double>::quiet_NaN();
  double gromov_xi_t = std::numeric_limits<double>::quiet_NaN();   // (xi(t_k) | x_k)_{x_0}
  double gromov_xi_2t = std::numeric_limits<double>::quiet_NaN();  // (xi(2 t_k) | x_k)_{x_0}
  double divergence_rhs = std::numeric_limits<double>::quiet_NaN();
};

struct VerifyOptions {
  double tol = 1e-6;
  double delta = 0.0;
  /// Overrides the alpha taken from the slope report.
  std::optional<double> alpha;
};

struct Verification {
  BoundReport report;
  std::vector<FlowRecord> records;
  std::vector<GromovPair> gromov;
  double alpha = 0.0;
  double delta = 0.0;
  std::optional<BoundaryDirection> v_star;
  std::optional<TauThreshold> threshold;
  /// True when the divergence bound was skipped because tau is at or below
  /// the exact threshold.
  bool below_threshold = false;
};

/// Checks every step and trajectory bound. When the slope report has a
/// negative direction v_*, the comparison ray is ray_from(x_0, v_*) and t_k
/// is the first time it reaches the sublevel set {f <= f(x_k)}.
Verification verify(const Trajectory& traj, const ConvexFunction& f, const SlopeReport& slopes,
                    const VerifyOptions& options);

struct BoundaryLimit {
  std::optional<BoundaryDirection> direction;  // empty when inconclusive
  double early = 0.0;  // min scheduled product with both indices <= K/2
  double late = 0.0;   // min scheduled product with both indices >= K/2
  std::string note;
};

/// Boundary point the trajectory heads to, accepted only when the scheduled
/// Gromov products grow from the first half of the run to the second.
BoundaryLimit detect_boundary_limit(const Trajectory& traj, const Space& space);

}  // namespace hypflow
