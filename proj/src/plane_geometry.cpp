#include "plane_geometry.hpp"

#include <cmath>

namespace hypflow::plane {

namespace {
constexpr cplx kI{0.0, 1.0};
}

double half_plane_distance(const PlanePoint& a, const PlanePoint& b) {
  // 2 asinh(|a - b| / (2 sqrt(v_a v_b))), stable at both small and large scale.
  const double chord = std::hypot(a.u - b.u, a.v - b.v);
  return 2.0 * std::asinh(chord / (2.0 * std::sqrt(a.v) * std::sqrt(b.v)));
}

cplx to_disk(const PlanePoint& c, const PlanePoint& y) {
  const cplx w{(y.u - c.u) / c.v, y.v / c.v};
  return (w - kI) / (w + kI);
}

PlanePoint from_disk(const PlanePoint& c, cplx dir, double s) {
  // zeta = tanh(s/2) dir; w = i (1 + zeta) / (1 - zeta). The denominator is
  // assembled from 1 - dir and 1 - tanh(s/2) separately to avoid cancellation
  // far from c.
  const double th = std::tanh(0.5 * s);
  const double one_minus_th = 2.0 / (1.0 + std::exp(s));
  const cplx zeta = th * dir;
  const cplx denom = (1.0 - dir) + dir * one_minus_th;
  const cplx w = kI * (1.0 + zeta) / denom;
  return PlanePoint{c.u + c.v * w.real(), c.v * w.imag()};
}

PlanePoint half_plane_towards(const PlanePoint& x, const PlanePoint& y, double t) {
  if (x.u == y.u) {
    // Vertical geodesic, exact.
    return PlanePoint{x.u, y.v >= x.v ? x.v * std::exp(t) : x.v * std::exp(-t)};
  }
  const cplx z = to_disk(x, y);
  const double r = std::abs(z);
  if (r == 0.0) return x;
  return from_disk(x, z / r, t);
}

PlanePoint half_plane_shoot(const PlanePoint& c, double angle, double s) {
  // A tangent e^{i angle} at c corresponds to the disk direction -i e^{i angle}.
  const cplx dir = -kI * std::polar(1.0, angle);
  return from_disk(c, dir, s);
}

double half_plane_angle(const PlanePoint& c, const PlanePoint& y) {
  return std::arg(kI * to_disk(c, y));
}

PlanePoint half_plane_to_ideal(const PlanePoint& base, double coordinate, double t) {
  const double x = (coordinate - base.u) / base.v;
  const cplx dir = (cplx{x, 0.0} - kI) / (cplx{x, 0.0} + kI);
  return from_disk(base, dir, t);
}

PlanePoint half_plane_numeric_geodesic(const PlanePoint& x, const PlanePoint& y, double t) {
  const double target = t;
  if (std::abs(x.u - y.u) <= 1e-14 * (std::abs(x.u) + std::abs(y.u) + x.v + y.v)) {
    double lo = std::log(x.v);
    double hi = std::log(y.v);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (half_plane_distance(x, PlanePoint{x.u, std::exp(mid)}) < target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return PlanePoint{x.u, std::exp(0.5 * (lo + hi))};
  }
  // Circle orthogonal to the real axis through x and y.
  const double centre =
      ((y.u * y.u + y.v * y.v) - (x.u * x.u + x.v * x.v)) / (2.0 * (y.u - x.u));
  const double radius = std::hypot(x.u - centre, x.v);
  double lo = std::atan2(x.v, x.u - centre);
  double hi = std::atan2(y.v, y.u - centre);
  auto on_circle = [&](double phi) {
    return PlanePoint{centre + radius * std::cos(phi), radius * std::sin(phi)};
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (half_plane_distance(x, on_circle(mid)) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return on_circle(0.5 * (lo + hi));
}

}  // namespace hypflow::plane
