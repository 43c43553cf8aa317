#include <gtest/gtest.h>

#include <cmath>

#include "corpus.hpp"
#include "hypflow/errors.hpp"
#include "hypflow/oracle.hpp"
#include "hypflow/proximal.hpp"

using namespace hypflow;
using hypflow::testing::Rng;

TEST(ProxTree, UnitStepAlongTheLine) {
  const auto s = hypflow::testing::line_tree();
  const auto o = s->vertex_point(*s->find_vertex("o"));
  const auto ray = s->ray_from(o, TreeEnd{*s->find_end("right")});
  const auto f = busemann(ray);
  const auto step = prox(f, o, 1.0);
  EXPECT_EQ(step.solver, ProxSolver::ExactTree);
  EXPECT_NEAR(s->distance(step.x_tau, ray.at(1.0)), 0.0, 1e-10);
  EXPECT_NEAR(step.objective, -0.5, 1e-12);
}

TEST(ProxTree, StopsAtAMinimiser) {
  const auto s = hypflow::testing::line_tree();
  const auto o = s->vertex_point(*s->find_vertex("o"));
  const auto ray = s->ray_from(o, TreeEnd{*s->find_end("right")});
  // |x - 0.3| along the line, starting 0.2 past it: the prox lands on it.
  const auto f = distance_to(s, ray.at(0.3), 1.0);
  const auto step = prox(f, ray.at(0.5), 1.0);
  EXPECT_NEAR(s->distance(step.x_tau, ray.at(0.3)), 0.0, 1e-10);
}

TEST(ProxTree, AgreesWithTheGridOracle) {
  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = hypflow::testing::random_instance(SpaceKind::Tree, rng, 0.1, 5.0);
    const auto step = prox(inst.f, inst.x0, inst.tau);
    const auto grid = oracle::prox_grid(inst.f, inst.x0, inst.tau, {});
    EXPECT_LE(step.objective, grid.objective + 1e-9);
    EXPECT_LE(grid.objective - step.objective, 3.0 * inst.f.lipschitz() * 1e-3);
  }
}

TEST(ProxPlanar, VerticalStepInTheHalfPlane) {
  const auto s = Space::make_half_plane();
  const auto f = busemann(s->ray_from(PlanePoint{0, 1}, IdealPoint::infinity()));
  const auto step = prox(f, PlanePoint{0, 1}, 0.5);
  const auto p = std::get<PlanePoint>(step.x_tau);
  EXPECT_NEAR(p.u, 0.0, 1e-6);
  EXPECT_NEAR(p.v, std::exp(0.5), 1e-6);
  EXPECT_EQ(step.solver, ProxSolver::Numeric2d);
  EXPECT_LT(step.residual, 1e-8);
}

TEST(ProxPlanar, EuclideanClosedForm) {
  // For a linear function the prox moves tau * |grad| against the gradient.
  const auto s = Space::make_euclid2();
  const auto f = busemann(s->ray_from(PlanePoint{0, 0}, Heading{0.4}));
  const auto step = prox(f, PlanePoint{1, 1}, 2.0);
  const auto p = std::get<PlanePoint>(step.x_tau);
  EXPECT_NEAR(p.u, 1.0 + 2.0 * std::cos(0.4), 1e-7);
  EXPECT_NEAR(p.v, 1.0 + 2.0 * std::sin(0.4), 1e-7);
}

TEST(ProxPlanar, AgreesWithTheRefiningGrid) {
  Rng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = hypflow::testing::random_instance(SpaceKind::HalfPlane, rng, 0.1, 2.0);
    const auto step = prox(inst.f, inst.x0, inst.tau);
    oracle::GridSpec spec;
    spec.resolution = 1e-7;
    const auto grid = oracle::prox_grid(inst.f, inst.x0, inst.tau, spec);
    EXPECT_NEAR(step.objective, grid.objective, 1e-4);
  }
}

TEST(Prox, ConstantFunctionStaysPut) {
  const auto s = Space::make_euclid2();
  const auto step = prox(constant(s, 2.0), PlanePoint{1, 2}, 3.0);
  EXPECT_EQ(std::get<PlanePoint>(step.x_tau), (PlanePoint{1, 2}));
  EXPECT_DOUBLE_EQ(step.step_length, 0.0);
}

TEST(Prox, RejectsBadTau) {
  const auto s = Space::make_euclid2();
  const auto f = busemann(s->ray_from(PlanePoint{0, 0}, Heading{0.0}));
  EXPECT_THROW(prox(f, PlanePoint{0, 0}, 0.0), DomainError);
  EXPECT_THROW(prox(f, PlanePoint{0, 0}, -1.0), DomainError);
}

TEST(Prox, IterationCapRaisesSolverError) {
  const auto s = Space::make_half_plane();
  const auto f = busemann(s->ray_from(PlanePoint{0, 1}, IdealPoint::infinity()));
  ProxOptions opt;
  opt.max_iterations = 2;
  EXPECT_THROW(prox(f, PlanePoint{0, 1}, 1.0, opt), SolverError);
}

TEST(StepBounds, LineStepMeetsEveryBound) {
  const auto s = hypflow::testing::line_tree();
  const auto o = s->vertex_point(*s->find_vertex("o"));
  const auto f = busemann(s->ray_from(o, TreeEnd{*s->find_end("right")}));
  const auto step = prox(f, o, 1.0);
  const auto r = check_step_bounds(step, 1.0, 1.0, 1e-9, 1);
  EXPECT_TRUE(r.all_pass());
  EXPECT_EQ(r.counts().pass, 4u);
  EXPECT_NEAR(r.find(bound_names::kDecrease, 1)->margin, 1.0 - 0.125, 1e-9);
}

TEST(StepBounds, WithoutAlphaOnlyTheUpperBoundApplies) {
  ProxStep step;
  step.tau = 1.0;
  step.step_length = 0.5;
  const auto r = check_step_bounds(step, 1.0, std::nullopt, 1e-9, 1);
  EXPECT_EQ(r.counts().pass, 1u);
  EXPECT_EQ(r.counts().inapplicable, 3u);
}

TEST(StepBounds, ViolationsFail) {
  ProxStep step;
  step.tau = 1.0;
  step.step_length = 2.5;
  const auto r = check_step_bounds(step, 1.0, 1.0, 1e-9, 1);
  EXPECT_EQ(r.find(bound_names::kStepUpper, 1)->status, BoundStatus::Fail);
}
