#include <cmath>
#include <memory>

#include <gtest/gtest.h>

#include "srgov/governor.h"
#include "srgov/harness/mdp.h"
#include "srgov/sac/agent.h"
#include "test_util.h"

namespace srgov::governor {
namespace {

using plant::VehicleState;
using test::ExpectCode;

Setpoint At(double x, double y, double z) {
  return Setpoint::AtPosition(Eigen::Vector3d(x, y, z));
}

control::SafetyMetric DefaultMetric() {
  return harness::BuildLoop(harness::RunConfig{}).metric;
}

control::SafetyMetric IdentityMetric(double rho_s, double rho_m) {
  return control::SafetyMetric::Make(numkit::SymPosDef::Identity(12), rho_s,
                                     rho_m, 1.0);
}

// An estimate whose P-norm from `sp` equals `norm`.
VehicleState EstimateAtNorm(const control::SafetyMetric& metric,
                            const Setpoint& sp, double norm) {
  VehicleState d = VehicleState::Zero();
  d(0) = 1.0;
  const double unit = std::sqrt(metric.NormSq(d, VehicleState::Zero()));
  return sp.state() + (norm / unit) * d;
}

TEST(Setpoint, IsAHoverState) {
  const Setpoint sp = At(1, 2, 3);
  EXPECT_EQ(sp.position(), Eigen::Vector3d(1, 2, 3));
  EXPECT_TRUE(sp.state().tail<9>().isZero(0.0));
  ExpectCode(ErrorCode::kNonFinite, [] { At(NAN, 0, 0); });
}

TEST(Mission, Validation) {
  Mission m;
  EXPECT_NO_THROW(m.Validate());
  EXPECT_NEAR(m.Length(), 4.0 * std::sqrt(3.0), 1e-12);
  m.waypoints = {Eigen::Vector3d(1, 1, 1)};
  ExpectCode(ErrorCode::kInvalidArgument, [&] { m.Validate(); });
  m.waypoints = {Eigen::Vector3d(1, 1, 1), Eigen::Vector3d(1, 1, 1)};
  ExpectCode(ErrorCode::kInvalidArgument, [&] { m.Validate(); });
  m = Mission{};
  m.goal_tol = 0.0;
  ExpectCode(ErrorCode::kInvalidArgument, [&] { m.Validate(); });
}

TEST(UnitDirection, MissionDiagonal) {
  const VehicleState v = UnitDirection(At(1, 1, 1), Eigen::Vector3d(5, 5, 5));
  const double c = 1.0 / std::sqrt(3.0);
  EXPECT_NEAR(v(0), c, 1e-15);
  EXPECT_NEAR(v(1), c, 1e-15);
  EXPECT_NEAR(v(2), c, 1e-15);
  EXPECT_TRUE(v.tail<9>().isZero(0.0));
}

TEST(UnitDirection, AxisAligned) {
  const VehicleState v = UnitDirection(At(0, 0, 0), Eigen::Vector3d(2, 0, 0));
  EXPECT_EQ(v.head<3>(), Eigen::Vector3d(1, 0, 0));
}

TEST(UnitDirection, UnitLengthForRandomPairs) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const Setpoint sp = At(rng.Uniform(-10, 10), rng.Uniform(-10, 10),
                           rng.Uniform(-10, 10));
    const Eigen::Vector3d w(rng.Uniform(-10, 10), rng.Uniform(-10, 10),
                            rng.Uniform(-10, 10));
    EXPECT_NEAR(UnitDirection(sp, w).norm(), 1.0, 1e-14);
  }
}

TEST(UnitDirection, DegenerateWhenCoincident) {
  ExpectCode(ErrorCode::kDegenerateDirection,
             [] { UnitDirection(At(1, 1, 1), Eigen::Vector3d(1, 1, 1)); });
  ExpectCode(ErrorCode::kDegenerateDirection, [] {
    UnitDirection(At(1, 1, 1), Eigen::Vector3d(1, 1, 1 + 1e-13));
  });
}

TEST(ConservativeAlpha, DefaultConstants) {
  EXPECT_NEAR(ConservativeAlpha(IdentityMetric(0.0012, 0.01)), 0.0653590,
              5e-8);
  EXPECT_NEAR(ConservativeAlpha(DefaultMetric()), 0.1 - std::sqrt(0.0012),
              1e-15);
}

TEST(ConservativeAlpha, OtherSizes) {
  EXPECT_NEAR(ConservativeAlpha(IdentityMetric(0.01, 0.04)), 0.1, 1e-15);
  ExpectCode(ErrorCode::kInvalidArgument, [] { IdentityMetric(0.01, 0.01); });
}

TEST(BaselineAlpha, Examples) {
  const control::SafetyMetric metric = DefaultMetric();
  const Setpoint sp = At(2, 3, 4);
  // On the recovery boundary, nudged inward so rounding keeps it inside.
  const double boundary = std::sqrt(0.0012) * (1.0 - 1e-12);
  EXPECT_NEAR(BaselineAlpha(EstimateAtNorm(metric, sp, boundary), sp, metric),
              0.0653590, 5e-8);
  EXPECT_NEAR(BaselineAlpha(sp.state(), sp, metric), 0.1, 1e-15);
  EXPECT_NEAR(BaselineAlpha(EstimateAtNorm(metric, sp, 0.02), sp, metric), 0.08,
              1e-12);
}

TEST(BaselineAlpha, RejectsEstimateOutsideRecovery) {
  const control::SafetyMetric metric = DefaultMetric();
  const Setpoint sp = At(0, 0, 0);
  ExpectCode(ErrorCode::kPreconditionViolated, [&] {
    BaselineAlpha(EstimateAtNorm(metric, sp, 0.035), sp, metric);
  });
}

TEST(BaselineAlpha, NeverBelowConservativeAndUpdateStaysSafe) {
  const control::SafetyMetric metric = DefaultMetric();
  const Mission mission;
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const Setpoint sp = At(rng.Uniform(1, 4.9), rng.Uniform(1, 4.9),
                           rng.Uniform(1, 4.9));
    VehicleState e = test::RandomMatrix(12, 1, rng);
    const double scale =
        std::sqrt(rng.Uniform(0.0, metric.rho_s()) / metric.NormSq(e, VehicleState::Zero()));
    const VehicleState xhat = sp.state() + scale * e;
    const double alpha = BaselineAlpha(xhat, sp, metric);
    EXPECT_GE(alpha, ConservativeAlpha(metric) - 1e-15);
    EXPECT_LE(alpha, std::sqrt(metric.rho_m()) + 1e-15);
    const Step step = StepToward(sp, alpha, UnitDirection(sp, mission.goal()),
                                 mission.goal());
    const double before = std::sqrt(metric.NormSq(xhat, sp.state()));
    const double after = std::sqrt(metric.NormSq(xhat, step.x_sp.state()));
    // ||v||_P <= 1 for a unit position step because of the metric scaling.
    EXPECT_LE(after, before + alpha + 1e-12);
    EXPECT_LE(after, std::sqrt(metric.rho_m()) + 1e-12);
  }
}

TEST(AlphaFromAction, Endpoints) {
  EXPECT_EQ(AlphaFromAction(1.0, 0.1), 0.1);
  EXPECT_EQ(AlphaFromAction(-1.0, 0.1), 0.0);
  EXPECT_NEAR(AlphaFromAction(0.0, 0.1), 0.05, 1e-17);
}

TEST(AlphaPolicy, RejectsNonPositiveAlphaMax) {
  ExpectCode(ErrorCode::kInvalidArgument, [] { AlphaPolicy::Baseline(0.0); });
  ExpectCode(ErrorCode::kInvalidArgument,
             [] { AlphaPolicy::Learned(nullptr, -1.0); });
}

TEST(LearnedAlpha, NeedsAModel) {
  Rng rng(3);
  const AlphaPolicy policy = AlphaPolicy::Learned(nullptr);
  ExpectCode(ErrorCode::kModelNotLoaded,
             [&] { LearnedAlpha(policy, VehicleState::Zero(), true, rng); });
  ExpectCode(ErrorCode::kInvalidArgument, [&] {
    LearnedAlpha(AlphaPolicy::Baseline(), VehicleState::Zero(), true, rng);
  });
}

TEST(LearnedAlpha, DeterministicIsRepeatableStochasticIsNot) {
  sac::SacConfig cfg;
  cfg.hidden = 16;
  Rng init(4);
  const auto agent =
      std::make_shared<const sac::Agent>(sac::Agent::Create(12, 1, cfg, init));
  const AlphaPolicy policy = AlphaPolicy::Learned(agent, 0.1);
  Rng state_rng(5);
  const VehicleState s = 0.01 * test::RandomMatrix(12, 1, state_rng);

  Rng a(6);
  Rng b(6);
  const LearnedChoice d1 = LearnedAlpha(policy, s, true, a);
  const LearnedChoice d2 = LearnedAlpha(policy, s, true, b);
  EXPECT_EQ(d1.alpha, d2.alpha);
  EXPECT_NEAR(d1.alpha, AlphaFromAction(d1.raw_action, 0.1), 1e-17);

  Rng c(7);
  const LearnedChoice s1 = LearnedAlpha(policy, s, false, c);
  const LearnedChoice s2 = LearnedAlpha(policy, s, false, c);
  EXPECT_NE(s1.alpha, s2.alpha);
  for (const LearnedChoice& ch : {d1, s1, s2}) {
    EXPECT_GE(ch.alpha, 0.0);
    EXPECT_LE(ch.alpha, 0.1);
  }
}

TEST(ChooseAlpha, AlwaysWithinBounds) {
  const control::SafetyMetric metric = DefaultMetric();
  const Setpoint sp = At(1, 1, 1);
  Rng rng(8);
  const AlphaPolicy tight = AlphaPolicy::Baseline(0.07);
  EXPECT_EQ(ChooseAlpha(tight, sp.state(), sp, metric, true, rng).alpha, 0.07);
  const AlphaPolicy cons = AlphaPolicy::Conservative();
  EXPECT_NEAR(ChooseAlpha(cons, sp.state(), sp, metric, true, rng).alpha,
              0.0653590, 5e-8);
}

TEST(StepToward, Examples) {
  const Setpoint sp = At(1, 1, 1);
  const Eigen::Vector3d goal(5, 5, 5);
  const VehicleState v = UnitDirection(sp, goal);
  const Step s1 = StepToward(sp, 0.0653590, v, goal);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(s1.x_sp.position()(i), 1.0377350, 5e-8);
  EXPECT_FALSE(s1.reached_waypoint);

  const Step s0 = StepToward(sp, 0.0, v, goal);
  EXPECT_TRUE(s0.x_sp == sp);

  const Eigen::Vector3d near = goal - 0.01 * v.head<3>();
  const Setpoint close = Setpoint::AtPosition(near);
  const Step snap = StepToward(close, 0.1, UnitDirection(close, goal), goal);
  EXPECT_TRUE(snap.reached_waypoint);
  EXPECT_EQ(snap.x_sp.position(), goal);
  ExpectCode(ErrorCode::kInvalidArgument, [&] { StepToward(sp, -0.1, v, goal); });
}

TEST(ApplySetpoint, ProgressIsMonotoneAndStopsAtGoal) {
  Mission mission;
  mission.waypoints = {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0),
                       Eigen::Vector3d(1, 1, 0)};
  Progress progress = StartProgress(mission);
  Rng rng(9);
  double travelled = 0.0;
  int reached = 0;
  for (int i = 0; i < 200 && !progress.AtGoal(mission); ++i) {
    const double alpha = rng.Uniform(0.0, 0.1);
    const Update u = ApplySetpoint(progress, alpha, mission);
    const double step = (u.next.x_sp.position() - progress.x_sp.position()).norm();
    EXPECT_LE(step, alpha + 1e-15);
    EXPECT_GE(u.next.target, progress.target);
    travelled += step;
    reached += u.reached_waypoint ? 1 : 0;
    progress = u.next;
  }
  EXPECT_TRUE(progress.AtGoal(mission));
  EXPECT_EQ(reached, 2);
  EXPECT_NEAR(travelled, mission.Length(), 1e-12);
  const Update after = ApplySetpoint(progress, 0.1, mission);
  EXPECT_TRUE(after.next.x_sp == progress.x_sp);
  EXPECT_FALSE(after.reached_waypoint);
}

TEST(ApplySetpoint, StaysOnTheSegment) {
  const Mission mission;
  Progress progress = StartProgress(mission);
  for (int i = 0; i < 50; ++i) {
    progress = ApplySetpoint(progress, 0.1, mission).next;
    const Eigen::Vector3d p = progress.x_sp.position();
    EXPECT_NEAR(p(0), p(1), 1e-12);
    EXPECT_NEAR(p(1), p(2), 1e-12);
  }
}

}  // namespace
}  // namespace srgov::governor
