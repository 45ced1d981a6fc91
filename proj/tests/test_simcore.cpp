#include "rightsim/simcore.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

namespace rightsim {
namespace {

using testing::kPi;

BodyShaped shape_at(const Trajectory& traj, double t) {
  const TrialConfig& c = traj.config;
  JointVectord q = eval_gait(c.gait, t, phase_jitter(c.model.joint_count(), c.perturbation_seed, c.perturbation_scale));
  clamp_joints(q, c.model.joint_limit);
  return forward_kinematics(c.model, q, false);
}

TEST(InitialPlacement, StraightLimblessRestsOnVentralLine) {
  const RobotModel m;
  const BodyShaped s = forward_kinematics(m, testing::straight(m));
  const PlacementResult p = initial_placement(s, 0.0, m);
  ASSERT_TRUE(p.resolved);
  int ventral = 0;
  for (const auto& c : p.state.contact_set) {
    EXPECT_EQ(s.candidates[c.id].kind, CandidateKind::Ventral);
    ++ventral;
  }
  EXPECT_EQ(ventral, 20);
  EXPECT_NEAR((p.state.pose * s.com).z(), m.link_radius, 1e-12);
  const Vec3d axis = p.state.pose.linear() * backbone_axis(s);
  EXPECT_NEAR(axis.z(), 0.0, 1e-12);
}

TEST(InitialPlacement, InvertedLeggedRobotRestsOnDorsum) {
  const RobotModel m = testing::with_legs(0.0606);
  const BodyShaped s = forward_kinematics(m, testing::straight(m));
  const PlacementResult p = initial_placement(s, kPi, m);
  ASSERT_TRUE(p.resolved);
  const double com_z = (p.state.pose * s.com).z();
  for (const auto& leg : s.legs) EXPECT_GT((p.state.pose * leg.tip).z(), com_z);
  for (const auto& c : p.state.contact_set) EXPECT_EQ(s.candidates[c.id].kind, CandidateKind::Dorsal);
  EXPECT_FALSE(p.state.contact_set.empty());
}

TEST(InitialPlacement, PlanarArcRestsOnLowestPoints) {
  const RobotModel m;
  JointVectord q = testing::straight(m);
  for (int i = 1; i <= 9; ++i) q[yaw_joint_of(i) - 1] = kPi / 9;
  const BodyShaped s = forward_kinematics(m, q);
  const PlacementResult p = initial_placement(s, 0.0, m);
  ASSERT_TRUE(p.resolved);
  double low = 1e9;
  for (const auto& c : s.candidates) low = std::min(low, (p.state.pose * c.point).z());
  EXPECT_NEAR(low, 0.0, 1e-12);
  for (const auto& c : p.state.contact_set) EXPECT_EQ(s.candidates[c.id].kind, CandidateKind::Ventral);
  EXPECT_TRUE(statically_stable(candidate_geometry(s), p.state.pose, SupportParams{}));
}

TEST(ContactDetect, MatchesMinHeightScan) {
  const RobotModel m;
  GaitParamsd g;
  g.A_p = kPi / 3;
  g.n_y = g.n_p = 0;
  g.delta_d = kPi / 2;
  const BodyShaped s = forward_kinematics(m, eval_gait(g, 0.4));
  Posed pose = Posed::Identity();
  pose.linear() = Eigen::AngleAxisd(0.3, Vec3d(1, 1, 0).normalized()).toRotationMatrix();
  pose = drop_to_ground(candidate_geometry(s), pose);
  const double band = 1e-3;
  const ContactSet set = contact_detect(s, pose, band);
  std::vector<int> expect;
  for (std::size_t i = 0; i < s.candidates.size(); ++i) {
    if ((pose * s.candidates[i].point).z() < band) expect.push_back(static_cast<int>(i));
  }
  ASSERT_EQ(set.size(), expect.size());
  for (std::size_t i = 0; i < set.size(); ++i) EXPECT_EQ(set[i].id, expect[i]);
  EXPECT_FALSE(set.empty());
}

TEST(ContactDetect, ZeroBandStillReportsLowestPoint) {
  const RobotModel m;
  const BodyShaped s = forward_kinematics(m, testing::straight(m));
  Posed pose = Posed::Identity();
  pose.translation().z() = m.link_radius;
  EXPECT_GE(contact_detect(s, pose, 0.0).size(), 1u);
}

TEST(PlanarMotion, IdentityForUnchangedShape) {
  const RobotModel m;
  const BodyShaped s = forward_kinematics(m, testing::straight(m));
  const PlacementResult p = initial_placement(s, 0.0, m);
  const auto motion = resolve_planar_motion(p.state.contact_set, s, p.state.pose);
  EXPECT_NEAR(motion.dx, 0, 1e-12);
  EXPECT_NEAR(motion.dy, 0, 1e-12);
  EXPECT_NEAR(motion.dyaw, 0, 1e-12);
}

TEST(PlanarMotion, RigidCarryOfDisplacedContacts) {
  const RobotModel m;
  const BodyShaped s = forward_kinematics(m, testing::straight(m));
  BodyShaped moved = s;
  const double d = 0.013;
  for (auto& c : moved.candidates) c.point.x() -= d;
  const Posed pose = Posed::Identity();
  ContactSet prev;
  for (int id : {0, 20, 40, 72}) prev.push_back({id, pose * s.candidates[id].point});
  const auto motion = resolve_planar_motion(prev, moved, pose);
  EXPECT_NEAR(motion.dx, d, 1e-12);
  EXPECT_NEAR(motion.dy, 0, 1e-12);
  EXPECT_NEAR(motion.dyaw, 0, 1e-12);

  ContactSet single{{20, s.candidates[20].point}};
  const auto one = resolve_planar_motion(single, moved, pose);
  EXPECT_EQ(one.dyaw, 0);
  EXPECT_NEAR(one.dx, d, 1e-12);
}

TEST(ResolveSupport, StableTripodUnchanged) {
  SupportGeometry g;
  g.centers = {Vec3d(0, 0, 0), Vec3d(1, 0, 0), Vec3d(0, 1, 0), Vec3d(0.3, 0.3, 0.5)};
  g.radii = {0, 0, 0, 0};
  g.com = Vec3d(0.3, 0.3, 0.4);
  const SupportResult r = resolve_support(g, Posed::Identity(), SupportParams{});
  EXPECT_TRUE(r.resolved);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_TRUE(r.pose.isApprox(Posed::Identity(), 1e-15));
}

TEST(ResolveSupport, StableRestIsUnchanged) {
  const RobotModel m = testing::with_legs(0.0858, 2);
  const BodyShaped s = forward_kinematics(m, testing::straight(m));
  const PlacementResult p = initial_placement(s, 0.0, m);
  ASSERT_TRUE(p.resolved);
  const SupportResult r = resolve_support(s, p.state.pose, m);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_TRUE(r.pose.isApprox(p.state.pose, 1e-12));
}

TEST(ResolveSupport, TiltedStraightBodyRollsOntoFace) {
  // cross-section oracle: the four surface samples form a square of
  // circumradius r; lying on a corner off-centre it rolls onto the nearer face
  const RobotModel m;
  const BodyShaped s = forward_kinematics(m, testing::straight(m));
  for (double roll : {0.3, -0.5, 0.7}) {
    const SupportResult r = resolve_support(s, roll_about_backbone(s, roll), m);
    ASSERT_TRUE(r.resolved);
    EXPECT_NEAR((r.pose * s.com).z(), m.link_radius / std::sqrt(2.0), 1e-12);
    const auto final_roll = link_roll(s, r.pose, 4);
    ASSERT_TRUE(final_roll);
    EXPECT_NEAR(*final_roll, std::copysign(kPi / 4, roll), 1e-9);
    for (std::size_t i = 1; i < r.com_heights.size(); ++i) EXPECT_LE(r.com_heights[i], r.com_heights[i - 1] + 1e-15);
  }
}

TEST(ResolveSupport, ComHeightNeverIncreases) {
  const RobotModel m = testing::with_legs(0.0858);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 30; ++k) {
    JointVectord q(18);
    for (int j = 0; j < 18; ++j) q[j] = 1.2 * u(rng);
    const BodyShaped s = forward_kinematics(m, q);
    Posed pose = Posed::Identity();
    pose.linear() = Eigen::AngleAxisd(3 * u(rng), Vec3d(u(rng), u(rng), u(rng)).normalized()).toRotationMatrix();
    const SupportResult r = resolve_support(s, pose, m);
    for (std::size_t i = 1; i < r.com_heights.size(); ++i) EXPECT_LE(r.com_heights[i], r.com_heights[i - 1] + 1e-12);
    if (r.resolved) EXPECT_TRUE(statically_stable(candidate_geometry(s), r.pose, SupportParams{}));
    EXPECT_GE(lowest_height(candidate_geometry(s), r.pose), -1e-9);
  }
}

TEST(ResolveSupport, IterationCapFlagsUnresolved) {
  const RobotModel m;
  const BodyShaped s = forward_kinematics(m, testing::straight(m));
  SupportParams p;
  p.iteration_cap = 1;
  Posed pose = Posed::Identity();
  pose.linear() = Eigen::AngleAxisd(1.0, Vec3d(0.3, 1, 0.2).normalized()).toRotationMatrix();
  const SupportResult r = resolve_support(candidate_geometry(s), pose, p);
  EXPECT_FALSE(r.resolved);
  EXPECT_EQ(r.iterations, 1);
}

TEST(LinkRoll, AngleAboutTangentFromVertical) {
  const RobotModel m;
  const BodyShaped s = forward_kinematics(m, testing::straight(m));
  for (double r : {0.0, 0.4, -2.0, 3.0}) {
    Posed pose = Posed::Identity();
    pose.linear() = Eigen::AngleAxisd(r, Vec3d::UnitX()).toRotationMatrix();
    EXPECT_NEAR(*link_roll(s, pose, 3), r, 1e-12);
  }
  Posed up = Posed::Identity();
  up.linear() = Eigen::AngleAxisd(kPi / 2, Vec3d::UnitY()).toRotationMatrix();
  EXPECT_FALSE(link_roll(s, up, 0).has_value());
}

TEST(Simulate, ZeroAmplitudeIsExactlyStill) {
  TrialConfig t;
  t.gait.A_y = t.gait.A_p = 0;
  t.timestep = t.gait.period() / 200;
  const Trajectory traj = simulate(t);
  for (const auto& s : traj.samples) {
    EXPECT_EQ(s.com, traj.samples.front().com);
    EXPECT_EQ(s.link_roll, traj.samples.front().link_roll);
  }
}

TEST(Simulate, SampleTimesAndInvariants) {
  TrialConfig t;
  t.model = testing::with_legs(0.0606);
  t.gait.n_y = t.gait.n_p = 1.05;
  t.timestep = t.gait.period() / 100;
  t.duration_cycles = 1;
  const Trajectory traj = simulate(t);
  ASSERT_EQ(traj.samples.size(), 101u);
  const SupportParams params = t.support;
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const auto& s = traj.samples[k];
    EXPECT_NEAR(s.time, k * t.timestep, 1e-12);
    EXPECT_FALSE(s.state.contact_set.empty());
    const BodyShaped shape = shape_at(traj, s.time);
    const SupportGeometry geom = candidate_geometry(shape);
    EXPECT_GE(lowest_height(geom, s.state.pose), -1e-6);
    if (!s.unresolved) EXPECT_TRUE(statically_stable(geom, s.state.pose, params));
    if (k > 0) {
      for (std::size_t l = 0; l < s.link_roll.size(); ++l) {
        EXPECT_LT(std::abs(s.link_roll[l] - traj.samples[k - 1].link_roll[l]), kPi);
      }
    }
  }
}

TEST(Simulate, DeterministicAndTranslationInvariant) {
  TrialConfig t;
  t.model = testing::with_legs(0.0518);
  t.gait.n_y = t.gait.n_p = 0.9;
  t.timestep = t.gait.period() / 100;
  t.duration_cycles = 1;
  t.perturbation_seed = 99;
  const Trajectory a = simulate(t);
  const Trajectory b = simulate(t);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    EXPECT_EQ(a.samples[k].com, b.samples[k].com);
    EXPECT_EQ(a.samples[k].link_roll, b.samples[k].link_roll);
  }
  const Vec2d offset(3.0, -2.0);
  const Trajectory c = simulate(t, offset);
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    EXPECT_NEAR(c.samples[k].com.x() - a.samples[k].com.x(), offset.x(), 1e-9);
    EXPECT_NEAR(c.samples[k].com.y() - a.samples[k].com.y(), offset.y(), 1e-9);
    EXPECT_NEAR(c.samples[k].com.z(), a.samples[k].com.z(), 1e-9);
    for (std::size_t l = 0; l < a.samples[k].link_roll.size(); ++l) {
      EXPECT_NEAR(c.samples[k].link_roll[l], a.samples[k].link_roll[l], 1e-9);
    }
  }
}

TEST(Simulate, RejectsInvalidTrials) {
  TrialConfig t;
  t.timestep = t.gait.period() / 40;
  EXPECT_THROW(simulate(t), ValidationError);
  t.timestep = t.gait.period() / 200;
  t.gait.N = 8;
  EXPECT_THROW(simulate(t), ValidationError);
  t.gait.N = 9;
  t.duration_cycles = 0;
  EXPECT_THROW(simulate(t), ValidationError);
}

TEST(Simulate, PhaseJitterIsBoundedAndSeeded) {
  const JointVectord a = phase_jitter(18, 5, 0.02);
  const JointVectord b = phase_jitter(18, 5, 0.02);
  const JointVectord c = phase_jitter(18, 6, 0.02);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_LE(a.cwiseAbs().maxCoeff(), 0.02);
  EXPECT_EQ(phase_jitter(18, 5, 0.0).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Simulate, AmplitudeAtLimitIsNotSaturated) {
  TrialConfig t;
  t.gait.A_p = kPi / 2;
  t.gait.A_y = kPi / 2;
  t.timestep = t.gait.period() / 100;
  t.duration_cycles = 1;
  const Trajectory traj = simulate(t);
  EXPECT_EQ(traj.clamped_joint_samples, 0);
  EXPECT_FALSE(traj.flags.saturated);
  EXPECT_EQ(traj.joint_samples, 18 * 101);
}

}  // namespace
}  // namespace rightsim
