#pragma once

// Closed-form geometry of the upper half-plane. Geodesics through a point c
// are handled by moving c to i with a real affine map and then to the
// centre of the Poincare disk with the Cayley transform, where geodesics
// through the centre are diameters.

#include <complex>

#include "hypflow/space.hpp"

namespace hypflow::plane {

using cplx = std::complex<double>;

double half_plane_distance(const PlanePoint& a, const PlanePoint& b);

/// Disk coordinate of `y` as seen from `c` (c itself maps to 0).
cplx to_disk(const PlanePoint& c, const PlanePoint& y);

/// Point at distance `s` from `c` along the disk diameter with unit
/// direction `dir`.
PlanePoint from_disk(const PlanePoint& c, cplx dir, double s);

PlanePoint half_plane_towards(const PlanePoint& x, const PlanePoint& y, double t);
PlanePoint half_plane_shoot(const PlanePoint& c, double angle, double s);
double half_plane_angle(const PlanePoint& c, const PlanePoint& y);
PlanePoint half_plane_to_ideal(const PlanePoint& base, double coordinate, double t);

/// Point at distance t from x towards y located by bisection along the
/// Euclidean circle (or vertical line) carrying the geodesic.
PlanePoint half_plane_numeric_geodesic(const PlanePoint& x, const PlanePoint& y, double t);

}  // namespace hypflow::plane
