#ifndef RIGHTSIM_METRICS_HPP
#define RIGHTSIM_METRICS_HPP

#include "rightsim/simcore.hpp"

#include <numbers>
#include <optional>
#include <vector>

namespace rightsim {

/// Largest whole number of gait cycles covered by the trajectory; throws
/// ValidationError when shorter than one cycle.
int whole_cycles(const Trajectory& traj);

/// |net horizontal CoM displacement| / (BL x cycles) over whole cycles.
double displacement_per_cycle(const Trajectory& traj);

struct AxialRotation {
  double per_cycle = 0;   // rad/cycle
  double per_second = 0;  // rad/s
};

/// Mean over links of the net unwrapped roll change per cycle.
AxialRotation axial_rotation(const Trajectory& traj);

struct RightingParams {
  double tolerance = std::numbers::pi / 6;
  double deadline_cycles = 3;
  double dwell_cycles = 0.25;
};

struct RightingOutcome {
  bool righted = false;
  std::optional<double> time_cycles;
};

/// Righted iff the mean link roll (mod 2 pi) enters [-tol, tol] no later
/// than the deadline and stays there for the dwell time.
RightingOutcome righting_outcome(const Trajectory& traj, const RightingParams& params = {});

struct TrialMetrics {
  double dX = 0;               // BL/cycle
  double theta_per_cycle = 0;  // rad/cycle
  double theta_dot = 0;        // rad/s
  std::optional<RightingOutcome> righting;  // only for trials started inverted
  TrialFlags flags;
};

TrialMetrics compute_metrics(const Trajectory& traj, const RightingParams& params = {});

struct EnergyProfile {
  std::vector<double> roll;    // uniform grid on [0, 2 pi)
  std::vector<double> height;  // resting CoM height, m
  std::vector<bool> unresolved;
  double start_height = 0;  // at roll = pi
  double barrier = 0;       // max over the roll path pi -> 0, minus start_height
  bool any_unresolved = false;
};

/// Resting CoM height over roll angle about the backbone axis, with the
/// roll held fixed at each grid angle (the body may still pitch).
EnergyProfile energy_barrier(const RobotModel& model, const JointVectord& posture, int resolution = 72,
                             const SupportParams& params = {});

}  // namespace rightsim

#endif  // RIGHTSIM_METRICS_HPP
