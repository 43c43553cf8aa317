#include <gtest/gtest.h>

#include <cmath>

#include "corpus.hpp"
#include "hypflow/errors.hpp"
#include "hypflow/flow.hpp"
#include "hypflow/oracle.hpp"

using namespace hypflow;
using hypflow::testing::Rng;

namespace {

struct LineFlow {
  SpacePtr space = hypflow::testing::line_tree();
  Point o = space->vertex_point(*space->find_vertex("o"));
  Ray ray = space->ray_from(o, TreeEnd{*space->find_end("right")});
  ConvexFunction f = busemann(ray);
};

}  // namespace

TEST(RunPpa, LineFlowMatchesClosedForm) {
  LineFlow line;
  FlowConfig cfg;
  cfg.tau = 0.7;
  cfg.K = 12;
  cfg.x0 = line.o;
  const auto traj = run_ppa(line.f, cfg);
  ASSERT_EQ(traj.points.size(), 13u);
  ASSERT_EQ(traj.steps.size(), 12u);
  const auto expect = oracle::line_flow_offsets(0.0, 0.7, 12);
  for (std::size_t k = 0; k <= 12; ++k) {
    EXPECT_NEAR(line.space->distance(traj.points[k], line.ray.at(expect[k])), 0.0, 1e-9) << "k = " << k;
  }
}

TEST(RunPpa, HalfPlaneVerticalFlow) {
  const auto s = Space::make_half_plane();
  const auto f = busemann(s->ray_from(PlanePoint{0, 1}, IdealPoint::infinity()));
  FlowConfig cfg;
  cfg.tau = 0.5;
  cfg.K = 4;
  cfg.x0 = PlanePoint{0, 1};
  const auto traj = run_ppa(f, cfg);
  const auto expect = oracle::vertical_flow(PlanePoint{0, 1}, 0.5, 4);
  for (std::size_t k = 0; k <= 4; ++k) EXPECT_LT(s->distance(traj.points[k], expect[k]), 1e-6);
}

TEST(RunPpa, SolverFailureNamesTheStep) {
  const auto s = Space::make_half_plane();
  const auto f = busemann(s->ray_from(PlanePoint{0, 1}, IdealPoint::infinity()));
  FlowConfig cfg;
  cfg.K = 3;
  cfg.x0 = PlanePoint{0, 1};
  cfg.prox.max_iterations = 1;
  try {
    run_ppa(f, cfg);
    FAIL() << "expected a solver error";
  } catch (const SolverError& e) {
    EXPECT_NE(std::string(e.what()).find("step k = 1"), std::string::npos);
  }
}

TEST(TauThreshold, UnitConstants) {
  const auto t = tau_threshold(1.0, 1.0, 1.0);
  EXPECT_NEAR(t.exact, 81.92, 1e-12);
  EXPECT_NEAR(t.sufficient, 82.0, 1e-12);
  EXPECT_THROW(tau_threshold(1.0, 2.0, 1.0), DomainError);
  EXPECT_THROW(tau_threshold(1.0, 0.0, 1.0), DomainError);
  EXPECT_THROW(tau_threshold(1.0, 1.0, -1.0), DomainError);
}

TEST(LocateSublevelTime, BisectsAlongTheRay) {
  LineFlow line;
  EXPECT_NEAR(locate_sublevel_time(line.f, line.ray, -3.25, 10.0), 3.25, 1e-7);
  EXPECT_EQ(locate_sublevel_time(line.f, line.ray, 1.0, 10.0), 0.0);
  EXPECT_THROW(locate_sublevel_time(line.f, line.ray, -30.0, 10.0), RangeError);
}

TEST(Verify, LineFlowPassesWithExpectedMargins) {
  LineFlow line;
  FlowConfig cfg;
  cfg.tau = 1.0;
  cfg.K = 6;
  cfg.x0 = line.o;
  const auto traj = run_ppa(line.f, cfg);
  const auto v = verify(traj, line.f, slope_report(line.f, line.o), {1e-6, 0.0, {}});
  EXPECT_TRUE(v.report.all_pass());
  for (std::size_t k = 1; k <= 6; ++k) {
    EXPECT_NEAR(v.report.find(bound_names::kDivergence, k)->margin, 11.0 / 16.0 * k, 1e-6);
    EXPECT_NEAR(v.report.find(bound_names::kContraction, k)->margin, 0.0, 1e-7);
  }
}

TEST(Verify, EuclideanHyperbolicBoundsAreInapplicable) {
  const auto s = Space::make_euclid2();
  const auto f = busemann(s->ray_from(PlanePoint{0, 0}, Heading{1.0}));
  FlowConfig cfg;
  cfg.K = 3;
  cfg.x0 = PlanePoint{0, 0};
  const auto traj = run_ppa(f, cfg);
  const auto v = verify(traj, f, slope_report(f, cfg.x0), {1e-6, s->documented_delta(), {}});
  EXPECT_TRUE(v.report.all_pass());
  EXPECT_EQ(v.report.counts(bound_names::kContraction).pass, 0u);
  EXPECT_EQ(v.report.counts(bound_names::kDivergence).pass, 0u);
  EXPECT_GT(v.report.counts(bound_names::kStepLower).pass, 0u);
}

TEST(Verify, DivergenceIsGatedBelowTheThreshold) {
  const auto s = Space::make_half_plane();
  const auto f = busemann(s->ray_from(PlanePoint{0, 1}, IdealPoint::infinity()));
  FlowConfig cfg;
  cfg.tau = 0.5;
  cfg.K = 3;
  cfg.x0 = PlanePoint{0, 1};
  const auto traj = run_ppa(f, cfg);
  const auto v = verify(traj, f, slope_report(f, cfg.x0), {1e-5, s->documented_delta(), {}});
  EXPECT_TRUE(v.below_threshold);
  EXPECT_EQ(v.report.counts(bound_names::kDivergence).inapplicable, 4u);
}

TEST(GromovSchedule, DoublingPairsThenConsecutivePairs) {
  LineFlow line;
  FlowConfig cfg;
  cfg.K = 7;
  cfg.x0 = line.o;
  const auto traj = run_ppa(line.f, cfg);
  const auto pairs = gromov_schedule(*line.space, traj);
  ASSERT_EQ(pairs.size(), 3u + 7u);
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    const auto& p = pairs[n];
    if (n < 3) {
      EXPECT_EQ(p.j, 2 * p.i);
    } else {
      EXPECT_EQ(p.j, p.i + 1);
    }
    // on a ray out of x0 the product is the nearer distance
    EXPECT_NEAR(p.product, static_cast<double>(std::min(p.i, p.j)), 1e-9);
  }
}

TEST(BoundaryLimit, FindsTheTargetEnd) {
  Rng rng(41);
  int found = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = hypflow::testing::random_instance(SpaceKind::Tree, rng, 0.5, 2.0);
    FlowConfig cfg;
    cfg.tau = inst.tau;
    cfg.x0 = inst.x0;
    // enough steps to leave the core
    const double reach = inst.space->core_diameter() + inst.space->distance_to_core(std::get<TreePoint>(inst.x0)) + 1.0;
    const auto report = slope_report(inst.f, inst.x0);
    const double a = report.alpha_hat;
    const double L = inst.f.lipschitz();
    cfg.K = static_cast<std::size_t>(std::ceil(reach / ((L - std::sqrt(L * L - a * a)) * inst.tau))) + 2;
    const auto traj = run_ppa(inst.f, cfg);
    const auto limit = detect_boundary_limit(traj, *inst.space);
    ASSERT_TRUE(limit.direction.has_value()) << limit.note;
    if (*limit.direction == *report.v_star) ++found;
  }
  EXPECT_EQ(found, 20);
}

TEST(BoundaryLimit, NeedsThreePoints) {
  LineFlow line;
  FlowConfig cfg;
  cfg.K = 1;
  cfg.x0 = line.o;
  EXPECT_THROW(detect_boundary_limit(run_ppa(line.f, cfg), *line.space), DomainError);
}
