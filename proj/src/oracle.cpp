#include "hypflow/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "hypflow/errors.hpp"

namespace hypflow::oracle {

namespace {

double objective(const ConvexFunction& f, const Point& x, double tau, const Point& y) {
  const double d = f.space()->distance(x, y);
  return f(y) + d * d / (2.0 * tau);
}

// Point at arclength s from c leaving at angle phi. Half-plane: the upward
// vertical geodesic i e^s through i, turned by the elliptic Moebius map
// fixing i, then moved to c by z -> c.u + c.v z.
Point polar_point(SpaceKind kind, const PlanePoint& c, double s, double phi) {
  if (kind == SpaceKind::Euclid2) return PlanePoint{c.u + s * std::cos(phi), c.v + s * std::sin(phi)};
  const double turn = 0.5 * (phi - 0.5 * std::numbers::pi);
  const double ch = std::cos(turn);
  const double sh = std::sin(turn);
  const std::complex<double> w{0.0, std::exp(s)};
  const std::complex<double> z = (ch * w + sh) / (-sh * w + ch);
  return PlanePoint{c.u + c.v * z.real(), c.v * z.imag()};
}

GridMinimum tree_grid(const ConvexFunction& f, const TreePoint& x, double tau, const GridSpec& grid) {
  const Space& space = *f.space();
  const double reach = 2.0 * tau * f.lipschitz();
  GridMinimum best{x, objective(f, x, tau, x), 1};
  for (std::size_t ei = 0; ei < space.edges().size(); ++ei) {
    const auto& e = space.edges()[ei];
    const double hi = e.is_end ? (x.edge == ei ? x.offset : 0.0) + reach : e.length;
    const auto steps = static_cast<std::size_t>(std::floor(hi / grid.resolution));
    for (std::size_t j = 0; j <= steps + 1; ++j) {
      const double s = std::min(static_cast<double>(j) * grid.resolution, hi);
      const Point y = TreePoint{ei, s};
      const double g = objective(f, x, tau, y);
      ++best.evaluations;
      if (g < best.objective) {
        best.objective = g;
        best.point = y;
      }
    }
  }
  return best;
}

GridMinimum planar_grid(const ConvexFunction& f, const PlanePoint& x, double tau, const GridSpec& grid) {
  const SpaceKind kind = f.space()->kind();
  const double radius = grid.radius > 0.0 ? grid.radius : 2.0 * tau * f.lipschitz();
  if (radius + 1e-12 < 2.0 * tau * f.lipschitz()) {
    throw DomainError("grid radius does not cover the 2 tau L ball");
  }
  const std::size_t nr = std::max<std::size_t>(grid.radial, 8);
  const std::size_t na = std::max<std::size_t>(grid.angular, 8);
  GridMinimum best{x, objective(f, x, tau, x), 1};
  if (radius == 0.0) return best;

  double s_lo = 0.0;
  double s_hi = radius;
  double a_lo = 0.0;
  double a_hi = 2.0 * std::numbers::pi;
  for (int round = 0; round < 1000; ++round) {
    const double ds = (s_hi - s_lo) / static_cast<double>(nr - 1);
    const double da = (a_hi - a_lo) / static_cast<double>(na - 1);
    // Zoom into the best node of this round; the running minimum is kept
    // separately so refinement never loses ground.
    double round_value = kInfinity;
    double best_s = 0.0;
    double best_a = 0.0;
    for (std::size_t i = 0; i < nr; ++i) {
      const double s = s_lo + ds * static_cast<double>(i);
      for (std::size_t j = 0; j < na; ++j) {
        const double a = a_lo + da * static_cast<double>(j);
        const Point y = polar_point(kind, x, s, a);
        const double g = objective(f, x, tau, y);
        ++best.evaluations;
        if (g < round_value) {
          round_value = g;
          best_s = s;
          best_a = a;
        }
        if (g < best.objective) {
          best.objective = g;
          best.point = y;
        }
      }
    }
    // A best node on the window's edge means the minimiser may lie outside
    // it: shift the window there at the same size instead of shrinking.
    // Far from x one angular cell spans sinh(s) times its angle, so a coarse
    // round can pick the wrong arm of the grid; this walks it back.
    const bool s_edge = (best_s <= s_lo && s_lo > 0.0) || (best_s >= s_hi && s_hi < radius);
    const bool a_edge = best_a <= a_lo || best_a >= a_hi;
    const bool full_turn = a_hi - a_lo >= 2.0 * std::numbers::pi - 1e-12;
    if (s_edge || (a_edge && !full_turn)) {
      const double half_s = 0.5 * (s_hi - s_lo);
      const double half_a = 0.5 * (a_hi - a_lo);
      s_lo = std::max(0.0, best_s - half_s);
      s_hi = std::min(radius, best_s + half_s);
      if (!full_turn) {
        a_lo = best_a - half_a;
        a_hi = best_a + half_a;
      }
      continue;
    }
    if (std::max(ds, da * std::max(std::sinh(s_hi), 1.0)) < grid.resolution) break;
    s_lo = std::max(0.0, best_s - 4.0 * ds);
    s_hi = std::min(radius, best_s + 4.0 * ds);
    a_lo = best_a - 4.0 * da;
    a_hi = best_a + 4.0 * da;
  }
  return best;
}

}  // namespace

GridMinimum prox_grid(const ConvexFunction& f, const Point& x, double tau, const GridSpec& grid) {
  if (!(grid.resolution > 0.0)) throw DomainError("grid resolution must be positive");
  if (!(tau > 0.0)) throw DomainError("prox needs tau > 0");
  if (f.space()->kind() == SpaceKind::Tree) return tree_grid(f, std::get<TreePoint>(x), tau, grid);
  return planar_grid(f, std::get<PlanePoint>(x), tau, grid);
}

double delta_exhaustive(const Space& space, const std::vector<Point>& points) {
  const std::size_t n = points.size();
  if (n < 4) throw DomainError("need at least four points");
  auto gp = [&](const Point& p, const Point& a, const Point& b) {
    return 0.5 * (space.distance(p, a) + space.distance(p, b) - space.distance(a, b));
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        for (std::size_t l = k + 1; l < n; ++l) {
          const std::size_t q[4] = {i, j, k, l};
          for (int pi = 0; pi < 4; ++pi) {
            std::size_t rest[3];
            int r = 0;
            for (int t = 0; t < 4; ++t) {
              if (t != pi) rest[r++] = q[t];
            }
            const Point& p = points[q[pi]];
            // The middle point y ranges over the three remaining points.
            for (int m = 0; m < 3; ++m) {
              const Point& y = points[rest[m]];
              const Point& a = points[rest[(m + 1) % 3]];
              const Point& b = points[rest[(m + 2) % 3]];
              const double defect = std::min(gp(p, a, y), gp(p, y, b)) - gp(p, a, b);
              worst = std::max(worst, defect);
            }
          }
        }
      }
    }
  }
  return worst;
}

std::vector<double> slope_quotient(const ConvexFunction& f, const Ray& ray, const std::vector<double>& ts) {
  const double f0 = f(ray.at(0.0));
  std::vector<double> out;
  out.reserve(ts.size());
  for (double t : ts) out.push_back((f(ray.at(t)) - f0) / t);
  return out;
}

std::vector<double> line_flow_offsets(double offset0, double tau, std::size_t K) {
  std::vector<double> out;
  for (std::size_t k = 0; k <= K; ++k) out.push_back(offset0 + static_cast<double>(k) * tau);
  return out;
}

std::vector<PlanePoint> vertical_flow(const PlanePoint& x0, double tau, std::size_t K) {
  std::vector<PlanePoint> out;
  for (std::size_t k = 0; k <= K; ++k) out.push_back({x0.u, x0.v * std::exp(static_cast<double>(k) * tau)});
  return out;
}

}  // namespace hypflow::oracle
