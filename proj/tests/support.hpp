#ifndef RIGHTSIM_TESTS_SUPPORT_HPP
#define RIGHTSIM_TESTS_SUPPORT_HPP

#include "rightsim/experiment.hpp"

#include <numbers>
#include <random>

namespace rightsim::testing {

constexpr double kPi = std::numbers::pi;

inline RobotModel limbless() { return RobotModel{}; }

inline RobotModel with_legs(double length, int pairs = 9) {
  RobotModel m;
  LegSpec legs;
  legs.length = length;
  legs.pair_count = pairs;
  legs.attachment_modules = evenly_spaced_modules(m.num_modules, pairs);
  m.legs = legs;
  return m;
}

inline JointVectord straight(const RobotModel& m) { return JointVectord::Zero(m.joint_count()); }

inline TrialConfig rolling_trial(double A = kPi / 3, double delta_d = -kPi / 2, int steps_per_cycle = 200) {
  TrialConfig t;
  t.gait = rolling_params(A, kPi / 2, 9);
  t.gait.delta_d = delta_d;
  t.timestep = t.gait.period() / steps_per_cycle;
  return t;
}

}  // namespace rightsim::testing

#endif  // RIGHTSIM_TESTS_SUPPORT_HPP
