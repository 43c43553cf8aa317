#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "corpus.hpp"
#include "hypflow/errors.hpp"
#include "hypflow/space.hpp"

using namespace hypflow;
using hypflow::testing::Rng;

namespace {

SpacePtr tripod() {
  TreeSpec spec;
  spec.vertices = {"c", "a", "L", "R", "U"};
  spec.edges = {{"c", "a", 2.0}, {"c", "L", 1.0}, {"c", "R", 1.5}, {"a", "U", 1.0}};
  spec.ends = {"L", "R", "U"};
  return Space::make_tree(spec);
}

TreePoint on(const Space& s, const std::string& from, const std::string& to, double offset) {
  const auto a = *s.find_vertex(from);
  const auto b = *s.find_vertex(to);
  for (std::size_t ei = 0; ei < s.edges().size(); ++ei) {
    const auto& e = s.edges()[ei];
    if (e.a == a && e.b == b) return TreePoint{ei, offset};
    if (e.a == b && e.b == a) return TreePoint{ei, e.length - offset};
  }
  throw std::logic_error("no such edge");
}

}  // namespace

TEST(TreeSpace, DistancesFollowTheUniquePath) {
  const auto s = tripod();
  const auto c = s->vertex_point(*s->find_vertex("c"));
  const auto a = s->vertex_point(*s->find_vertex("a"));
  EXPECT_DOUBLE_EQ(s->distance(c, a), 2.0);
  const auto onL = on(*s, "c", "L", 3.0);  // end edge, 3 past c
  const auto onU = on(*s, "a", "U", 0.5);
  EXPECT_DOUBLE_EQ(s->distance(onL, onU), 3.0 + 2.0 + 0.5);
  EXPECT_DOUBLE_EQ(s->distance(onL, onL), 0.0);
  EXPECT_DOUBLE_EQ(s->distance(on(*s, "c", "a", 0.5), on(*s, "c", "a", 1.75)), 1.25);
}

TEST(TreeSpace, RejectsMalformedSpecs) {
  TreeSpec cycle;
  cycle.vertices = {"a", "b", "c"};
  cycle.edges = {{"a", "b", 1.0}, {"b", "c", 1.0}, {"c", "a", 1.0}};
  EXPECT_THROW(Space::make_tree(cycle), DomainError);

  TreeSpec bad_length;
  bad_length.vertices = {"a", "b"};
  bad_length.edges = {{"a", "b", -1.0}};
  EXPECT_THROW(Space::make_tree(bad_length), DomainError);

  TreeSpec inner_end;
  inner_end.vertices = {"a", "b", "c"};
  inner_end.edges = {{"a", "b", 1.0}, {"b", "c", 1.0}};
  inner_end.ends = {"b"};
  EXPECT_THROW(Space::make_tree(inner_end), DomainError);
}

TEST(TreeSpace, ValidatesPoints) {
  const auto s = tripod();
  EXPECT_THROW(s->validate(TreePoint{99, 0.0}), DomainError);
  EXPECT_THROW(s->validate(PlanePoint{0.0, 1.0}), DomainError);
  const auto endL = on(*s, "c", "L", 0.0);
  EXPECT_NO_THROW(s->validate(TreePoint{endL.edge, 1e6}));
}

TEST(TreeSpace, GeodesicPointsLieOnTheGeodesic) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = hypflow::testing::random_tree(rng);
    const auto x = hypflow::testing::random_point(*s, rng);
    const auto y = hypflow::testing::random_point(*s, rng);
    const double d = s->distance(x, y);
    for (double frac : {0.0, 0.3, 0.5, 1.0}) {
      const auto m = s->geodesic_point(x, y, frac * d);
      EXPECT_NEAR(s->distance(x, m), frac * d, 1e-9);
      EXPECT_NEAR(s->distance(m, y), (1.0 - frac) * d, 1e-9);
    }
  }
}

TEST(TreeSpace, GromovProductIsDistanceToGeodesic) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = hypflow::testing::random_tree(rng);
    const auto p = hypflow::testing::random_point(*s, rng);
    const auto x = hypflow::testing::random_point(*s, rng);
    const auto y = hypflow::testing::random_point(*s, rng);
    EXPECT_NEAR(s->gromov_product(p, x, y), s->distance_to_geodesic(p, x, y), 1e-7);
  }
}

TEST(TreeSpace, RaysHaveUnitSpeed) {
  const auto s = tripod();
  const auto base = on(*s, "c", "R", 0.7);
  const auto ray = s->ray_from(base, TreeEnd{*s->find_end("U")});
  for (double t : {0.0, 0.5, 3.0, 10.0}) EXPECT_NEAR(s->distance(base, ray.at(t)), t, 1e-12);
  EXPECT_NEAR(s->distance(ray.at(2.0), ray.at(9.0)), 7.0, 1e-12);
  EXPECT_THROW(ray.at(-1.0), DomainError);
}

TEST(HalfPlane, DistanceMatchesClosedForm) {
  const auto s = Space::make_half_plane();
  EXPECT_NEAR(s->distance(PlanePoint{0, 1}, PlanePoint{0, std::exp(2.0)}), 2.0, 1e-14);
  // cosh d = 1 + |x - y|^2 / (2 v1 v2)
  const PlanePoint x{0.3, 0.5};
  const PlanePoint y{-1.2, 2.5};
  const double expect = std::acosh(1.0 + (1.5 * 1.5 + 2.0 * 2.0) / (2.0 * 0.5 * 2.5));
  EXPECT_NEAR(s->distance(x, y), expect, 1e-12);
  EXPECT_THROW(s->validate(PlanePoint{0, 0}), DomainError);
}

TEST(HalfPlane, GeodesicsAreStableAgainstNumericIntegration) {
  const auto s = Space::make_half_plane();
  EXPECT_LT(check_geodesic_stability(*s, PlanePoint{-2, 0.3}, PlanePoint{3, 4}, 20), 1e-8);
  EXPECT_LT(check_geodesic_stability(*s, PlanePoint{0, 1}, PlanePoint{0, 50}, 20), 1e-8);
}

TEST(HalfPlane, ShootAndDirectionAngleAgree) {
  const auto s = Space::make_half_plane();
  const PlanePoint c{0.4, 1.3};
  for (double angle = -3.0; angle < 3.1; angle += 0.5) {
    const auto y = s->shoot(c, angle, 1.7);
    EXPECT_NEAR(s->distance(c, y), 1.7, 1e-10);
    EXPECT_NEAR(std::remainder(s->direction_angle(c, y) - angle, 2.0 * std::numbers::pi), 0.0, 1e-9);
  }
}

TEST(HalfPlane, RaysReachTheirIdealPoint) {
  const auto s = Space::make_half_plane();
  const auto up = s->ray_from(PlanePoint{1, 1}, IdealPoint::infinity());
  const auto p = std::get<PlanePoint>(up.at(3.0));
  EXPECT_NEAR(p.u, 1.0, 1e-12);
  EXPECT_NEAR(p.v, std::exp(3.0), 1e-9);

  const auto down = s->ray_from(PlanePoint{1, 1}, IdealPoint{-2.0, false});
  const auto q = std::get<PlanePoint>(down.at(25.0));
  EXPECT_NEAR(q.u, -2.0, 1e-6);
  EXPECT_LT(q.v, 1e-6);
  EXPECT_NEAR(s->distance(PlanePoint{1, 1}, down.at(4.0)), 4.0, 1e-9);
}

TEST(Euclid2, FlatGeometry) {
  const auto s = Space::make_euclid2();
  EXPECT_DOUBLE_EQ(s->distance(PlanePoint{0, 0}, PlanePoint{3, 4}), 5.0);
  const auto ray = s->ray_from(PlanePoint{1, 1}, Heading{std::numbers::pi / 2});
  const auto p = std::get<PlanePoint>(ray.at(2.0));
  EXPECT_NEAR(p.u, 1.0, 1e-15);
  EXPECT_NEAR(p.v, 3.0, 1e-15);
  EXPECT_FALSE(s->is_hyperbolic());
  EXPECT_TRUE(std::isinf(s->documented_delta()));
}

TEST(Space, BoundaryDirectionCounts) {
  EXPECT_EQ(tripod()->boundary_directions().size(), 3u);
  EXPECT_EQ(Space::make_half_plane()->boundary_directions().size(), 34u);
  EXPECT_EQ(Space::make_euclid2()->boundary_directions().size(), 64u);
}
