#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "corpus.hpp"
#include "hypflow/convex.hpp"
#include "hypflow/errors.hpp"
#include "hypflow/oracle.hpp"

using namespace hypflow;
using hypflow::testing::Rng;

TEST(Busemann, TreeDecreasesAtUnitRateTowardsItsEnd) {
  const auto s = hypflow::testing::line_tree();
  const auto o = s->vertex_point(*s->find_vertex("o"));
  const auto right = TreeEnd{*s->find_end("right")};
  const auto b = busemann(s->ray_from(o, right));
  const auto ray = s->ray_from(o, right);
  for (double t : {0.0, 0.5, 1.0, 7.0}) EXPECT_NEAR(b(ray.at(t)), -t, 1e-12);
  const auto back = s->ray_from(o, TreeEnd{*s->find_end("left")});
  EXPECT_NEAR(b(back.at(4.0)), 4.0, 1e-12);
}

TEST(Busemann, HalfPlaneClosedForms) {
  const auto s = Space::make_half_plane();
  const auto up = busemann(s->ray_from(PlanePoint{0, 1}, IdealPoint::infinity()));
  EXPECT_NEAR(up(PlanePoint{3, std::exp(2.0)}), -2.0, 1e-12);
  // Horocycles at a finite point are Euclidean circles tangent there.
  const auto at0 = busemann(s->ray_from(PlanePoint{0, 1}, IdealPoint{0.0, false}));
  EXPECT_NEAR(at0(PlanePoint{0, 2}), at0(PlanePoint{1, 1}), 1e-12);
  EXPECT_NEAR(at0(PlanePoint{0, 1}), 0.0, 1e-12);
}

TEST(Busemann, IsOneLipschitzAndNormalisedAtItsBase) {
  Rng rng(1);
  for (auto kind : {SpaceKind::Tree, SpaceKind::HalfPlane, SpaceKind::Euclid2}) {
    for (int trial = 0; trial < 30; ++trial) {
      const auto inst = hypflow::testing::random_instance(kind, rng, 0.5, 1.0);
      const auto b = hypflow::testing::random_busemann(inst.space, rng);
      const auto x = hypflow::testing::random_point(*inst.space, rng);
      const auto y = hypflow::testing::random_point(*inst.space, rng);
      EXPECT_LE(std::abs(b(x) - b(y)), inst.space->distance(x, y) + 1e-9);
      EXPECT_EQ(b.lipschitz(), 1.0);
    }
  }
}

TEST(Combine, SumsAndMaxes) {
  const auto s = Space::make_euclid2();
  const auto b0 = busemann(s->ray_from(PlanePoint{0, 0}, Heading{0.0}));
  const auto d = distance_to(s, PlanePoint{1, 1}, 2.0);
  const auto sum = combine({{1.0, b0}, {0.5, d}}, CombineMode::Sum);
  const auto mx = combine({{1.0, b0}, {0.5, d}}, CombineMode::Max);
  const PlanePoint x{2, 1};
  EXPECT_NEAR(sum(x), -2.0 + 0.5 * 2.0, 1e-12);
  EXPECT_NEAR(mx(x), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(sum.lipschitz(), 2.0);
  EXPECT_DOUBLE_EQ(mx.lipschitz(), 1.0);
}

TEST(Combine, RejectsNegativeWeightsAndMixedSpaces) {
  const auto e = Space::make_euclid2();
  const auto h = Space::make_half_plane();
  const auto b = busemann(e->ray_from(PlanePoint{0, 0}, Heading{0.0}));
  EXPECT_THROW(combine({{-1.0, b}}, CombineMode::Sum), DomainError);
  EXPECT_NO_THROW(combine({{-1.0, b}}, CombineMode::Sum, true));
  const auto c = constant(h, 1.0);
  EXPECT_THROW(combine({{1.0, b}, {1.0, c}}, CombineMode::Sum), DomainError);
  EXPECT_THROW(distance_to(e, PlanePoint{0, 0}, 0.0), DomainError);
}

TEST(AsymptoticSlope, MatchesTheQuotientOracle) {
  const auto s = Space::make_half_plane();
  const auto f = combine({{1.0, busemann(s->ray_from(PlanePoint{0, 1}, IdealPoint{2.0, false}))},
                          {0.3, distance_to(s, PlanePoint{1, 1}, 1.0)}},
                         CombineMode::Sum);
  const auto ray = s->ray_from(PlanePoint{0, 1}, IdealPoint{2.0, false});
  const double slope = asymptotic_slope(f, ray, 12.0, 16);
  const auto q = oracle::slope_quotient(f, ray, {6.0, 9.0, 12.0});
  EXPECT_NEAR(slope, -0.7, 2e-3);
  EXPECT_NEAR(q.back(), -0.7, 0.1);
  EXPECT_LE(q[0], q[2] + 1e-12);  // quotients of a convex function increase
}

TEST(AsymptoticSlope, FlagsConcaveFunctions) {
  const auto s = hypflow::testing::line_tree();
  const auto o = s->vertex_point(*s->find_vertex("o"));
  const auto right = s->ray_from(o, TreeEnd{*s->find_end("right")});
  const auto concave = combine({{-1.0, distance_to(s, right.at(3.0), 1.0)}}, CombineMode::Sum, true);
  EXPECT_THROW(asymptotic_slope(concave, right, 20.0, 16), ConvexityError);
}

TEST(SlopeReport, SingleNegativeDirectionOnTrees) {
  const auto s = hypflow::testing::line_tree();
  const auto o = s->vertex_point(*s->find_vertex("o"));
  const auto f = busemann(s->ray_from(o, TreeEnd{*s->find_end("right")}));
  const auto r = slope_report(f, o);
  ASSERT_EQ(r.slopes.size(), 2u);
  EXPECT_DOUBLE_EQ(r.alpha_hat, 1.0);
  ASSERT_TRUE(r.v_star.has_value());
  EXPECT_EQ(std::get<TreeEnd>(*r.v_star).index, *s->find_end("right"));
  for (const auto& d : r.slopes) EXPECT_NEAR(d.measured, d.exact.value(), 1e-6);
}

TEST(SlopeReport, RejectsTwoNegativeDirectionsOnHyperbolicSpaces) {
  const auto s = hypflow::testing::line_tree();
  const auto o = s->vertex_point(*s->find_vertex("o"));
  const auto f = combine({{-1.0, distance_to(s, o, 1.0)}}, CombineMode::Sum, true);
  EXPECT_THROW(slope_report(f, o), ConvexityError);
}

TEST(SlopeReport, ConstantHasNoNegativeDirection) {
  const auto s = Space::make_half_plane();
  const auto r = slope_report(constant(s, 4.0), PlanePoint{0, 1});
  EXPECT_DOUBLE_EQ(r.alpha_hat, 0.0);
  EXPECT_FALSE(r.v_star.has_value());
}

TEST(DescendingSlope, EuclideanGradientNorm) {
  const auto s = Space::make_euclid2();
  const auto f = combine({{1.0, busemann(s->ray_from(PlanePoint{0, 0}, Heading{0.0}))},
                          {1.0, busemann(s->ray_from(PlanePoint{0, 0}, Heading{std::numbers::pi / 2}))}},
                         CombineMode::Sum);
  EXPECT_NEAR(descending_slope(f, PlanePoint{0.3, -0.2}), std::sqrt(2.0), 1e-5);
}

TEST(DescendingSlope, BusemannHasUnitSlopeEverywhere) {
  Rng rng(21);
  for (auto kind : {SpaceKind::Tree, SpaceKind::HalfPlane, SpaceKind::Euclid2}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto inst = hypflow::testing::random_instance(kind, rng, 0.5, 1.0);
      const auto b = hypflow::testing::random_busemann(inst.space, rng);
      EXPECT_NEAR(descending_slope(b, hypflow::testing::random_point(*inst.space, rng)), 1.0, 1e-4);
    }
  }
}
