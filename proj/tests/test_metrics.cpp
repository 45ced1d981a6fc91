#include "rightsim/metrics.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <functional>

namespace rightsim {
namespace {

using testing::kPi;

// Synthetic trajectory sampled `per_cycle` times per gait period.
Trajectory synthetic(int cycles, int per_cycle, const std::function<Vec3d(double)>& com,
                     const std::function<double(double)>& roll, double omega = kPi / 2) {
  Trajectory traj;
  traj.config.gait.omega = omega;
  const double T = traj.period();
  const int links = traj.config.model.link_count();
  for (int k = 0; k <= cycles * per_cycle; ++k) {
    TrajectorySample s;
    s.time = k * T / per_cycle;
    s.com = com(s.time / T);
    s.link_roll.assign(links, roll(s.time / T));
    traj.samples.push_back(s);
  }
  return traj;
}

Vec3d origin(double) { return Vec3d(0, 0, 0.0253); }
double no_roll(double) { return 0; }

TEST(Metrics, StationaryTrajectoryIsZero) {
  const Trajectory t = synthetic(3, 50, origin, no_roll);
  const TrialMetrics m = compute_metrics(t);
  EXPECT_EQ(m.dX, 0);
  EXPECT_EQ(m.theta_per_cycle, 0);
  EXPECT_EQ(m.theta_dot, 0);
  EXPECT_FALSE(m.righting.has_value());
}

TEST(Metrics, HalfBodyLengthPerCycle) {
  const double BL = RobotModel{}.body_length();
  const Trajectory t = synthetic(
      3, 40, [BL](double c) { return Vec3d(0.3 * BL * c, 0.4 * BL * c, 0.02); }, no_roll);
  EXPECT_NEAR(displacement_per_cycle(t), 0.5, 1e-12);
}

TEST(Metrics, FullTurnPerCycle) {
  const Trajectory t = synthetic(3, 40, origin, [](double c) { return -2 * kPi * c; });
  const AxialRotation r = axial_rotation(t);
  EXPECT_NEAR(r.per_cycle, -2 * kPi, 1e-12);
  EXPECT_NEAR(r.per_second, -kPi / 2, 1e-12);
}

TEST(Metrics, NetChangeIgnoresOscillation) {
  const Trajectory t = synthetic(
      2, 64, [](double c) { return Vec3d(0.1 * std::sin(2 * kPi * c), 0, 0); },
      [](double c) { return 0.8 * std::sin(2 * kPi * c); });
  const TrialMetrics m = compute_metrics(t);
  EXPECT_NEAR(m.dX, 0, 1e-12);
  EXPECT_NEAR(m.theta_per_cycle, 0, 1e-12);
}

TEST(Metrics, UsesWholeCyclesOnly) {
  Trajectory t = synthetic(2, 40, [](double c) { return Vec3d(0.0715 * c, 0, 0); }, no_roll);
  const double full = displacement_per_cycle(t);
  TrajectorySample extra = t.samples.back();
  extra.time += 0.5 * t.period();
  extra.com.x() += 5.0;
  t.samples.push_back(extra);
  EXPECT_NEAR(displacement_per_cycle(t), full, 1e-12);
  EXPECT_EQ(whole_cycles(t), 2);
}

TEST(Metrics, ShorterThanOneCycleThrows) {
  Trajectory t = synthetic(1, 40, origin, no_roll);
  t.samples.pop_back();
  EXPECT_THROW(whole_cycles(t), ValidationError);
  EXPECT_THROW(compute_metrics(t), ValidationError);
  Trajectory empty;
  EXPECT_THROW(whole_cycles(empty), ValidationError);
}

TEST(Metrics, DoublingOmegaKeepsPerCycleValues) {
  auto com = [](double c) { return Vec3d(0.05 * c, 0.01 * c * c, 0); };
  auto roll = [](double c) { return 1.3 * c + 0.2 * std::sin(2 * kPi * c); };
  const TrialMetrics a = compute_metrics(synthetic(3, 60, com, roll, kPi / 2));
  const TrialMetrics b = compute_metrics(synthetic(3, 60, com, roll, kPi));
  EXPECT_NEAR(a.dX, b.dX, 1e-12);
  EXPECT_NEAR(a.theta_per_cycle, b.theta_per_cycle, 1e-12);
  EXPECT_NEAR(2 * a.theta_dot, b.theta_dot, 1e-12);
}

TEST(Metrics, RotationIsAdditiveOverCycles) {
  auto roll = [](double c) { return c < 1 ? 1.0 * c : 1.0 + 3.0 * (c - 1); };
  const Trajectory one = synthetic(1, 50, origin, roll);
  const Trajectory two = synthetic(2, 50, origin, roll);
  const double first = axial_rotation(one).per_cycle;
  const double both = axial_rotation(two).per_cycle * 2;
  EXPECT_NEAR(first, 1.0, 1e-12);
  EXPECT_NEAR(both - first, 3.0, 1e-12);
}

TEST(LinkRollOracle, HelixMatchesQuaternionConstruction) {
  const RobotModel m;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const JointVectord q = rolling_gait(kPi / 3, kPi / 2, 9, 4.0 * (u(rng) + 1));
    const BodyShaped s = forward_kinematics(m, q);
    Posed pose = Posed::Identity();
    pose.linear() = Eigen::AngleAxisd(kPi * u(rng), Vec3d(u(rng), u(rng), u(rng)).normalized()).toRotationMatrix();
    for (int k = 0; k < s.link_count(); ++k) {
      const Eigen::Quaterniond quat(pose.linear() * s.link_frames[k].linear());
      const Vec3d t = quat * Vec3d::UnitX();
      const Vec3d d = quat * Vec3d::UnitZ();
      const Vec3d Z = Vec3d::UnitZ();
      const Vec3d ref = (Z - Z.dot(t) * t).normalized();
      const double oracle = std::atan2(ref.cross(d).dot(t), ref.dot(d));
      const auto got = link_roll(s, pose, k);
      ASSERT_TRUE(got.has_value());
      EXPECT_NEAR(wrap_angle(*got - oracle), 0.0, 1e-10);
    }
  }
}

Trajectory inverted(const std::function<double(double)>& roll) {
  Trajectory t = synthetic(3, 100, origin, roll);
  t.config.initial_roll = kPi;
  return t;
}

TEST(Righting, RightsWhenRollSettlesNearZero) {
  const Trajectory t = inverted([](double c) { return c < 1 ? kPi * (1 - c) : 0.0; });
  const TrialMetrics m = compute_metrics(t);
  ASSERT_TRUE(m.righting.has_value());
  EXPECT_TRUE(m.righting->righted);
  ASSERT_TRUE(m.righting->time_cycles.has_value());
  EXPECT_NEAR(*m.righting->time_cycles, 5.0 / 6.0, 0.011);
}

TEST(Righting, FullTurnCountsAsUpright) {
  const Trajectory t = inverted([](double c) { return c < 1 ? kPi * (1 + c) : 2 * kPi; });
  EXPECT_TRUE(righting_outcome(t).righted);
}

TEST(Righting, BriefPassThroughIsNotRighting) {
  // rolls continuously: each upright window lasts 1/6 cycle, shorter than the dwell
  const Trajectory t = inverted([](double c) { return kPi + 2 * kPi * c; });
  EXPECT_FALSE(righting_outcome(t).righted);
  RightingParams p;
  p.dwell_cycles = 0.1;
  EXPECT_TRUE(righting_outcome(t, p).righted);
}

TEST(Righting, StaysInvertedOrLate) {
  EXPECT_FALSE(righting_outcome(inverted([](double) { return kPi; })).righted);
  const Trajectory late = inverted([](double c) { return c < 2.9 ? kPi : 0.0; });
  EXPECT_FALSE(righting_outcome(late).righted);
  RightingParams p;
  p.deadline_cycles = 2.95;
  p.dwell_cycles = 0.05;
  EXPECT_TRUE(righting_outcome(late, p).righted);
}

TEST(EnergyBarrier, LimblessProfileIsFlat) {
  const RobotModel m;
  const EnergyProfile e = energy_barrier(m, testing::straight(m), 72);
  ASSERT_EQ(e.roll.size(), 72u);
  EXPECT_LT(e.barrier, 1e-9);
  EXPECT_FALSE(e.any_unresolved);
  for (double h : e.height) EXPECT_NEAR(h, m.link_radius, 1e-9);
  EXPECT_NEAR(e.start_height, m.link_radius, 1e-9);
}

TEST(EnergyBarrier, GrowsWithLegLength) {
  const RobotModel base;
  const LegLengthSet L = leg_lengths_from_ratios(base);
  double previous = 0;
  for (double len : {L.short_m, L.medium_m, L.long_m}) {
    const RobotModel m = testing::with_legs(len);
    const EnergyProfile e = energy_barrier(m, testing::straight(m), 72);
    EXPECT_GT(e.barrier, previous + 1e-4);
    previous = e.barrier;
  }
  const double w = base.segment_width();
  const RobotModel big = testing::with_legs(1.2 * w);
  const RobotModel small = testing::with_legs(0.5 * w);
  EXPECT_GT(energy_barrier(big, testing::straight(big)).barrier,
            energy_barrier(small, testing::straight(small)).barrier);
}

TEST(EnergyBarrier, ProfileIsSymmetricForSymmetricLegs) {
  const RobotModel m = testing::with_legs(0.0606);
  const EnergyProfile e = energy_barrier(m, testing::straight(m), 72);
  for (std::size_t i = 1; i < 72; ++i) EXPECT_NEAR(e.height[i], e.height[72 - i], 1e-9);
}

TEST(EnergyBarrier, ResolutionLowerBound) {
  const RobotModel m;
  EXPECT_THROW(energy_barrier(m, testing::straight(m), 35), ValidationError);
  EXPECT_NO_THROW(energy_barrier(m, testing::straight(m), 36));
}

}  // namespace
}  // namespace rightsim
