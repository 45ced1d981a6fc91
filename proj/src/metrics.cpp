#include "rightsim/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace rightsim {

namespace {

constexpr double kPi = std::numbers::pi;

// Linear interpolation of a per-sample quantity at time t.
template <typename Getter>
auto value_at(const Trajectory& traj, double t, Getter get) {
  const auto& s = traj.samples;
  auto it = std::lower_bound(s.begin(), s.end(), t,
                             [](const TrajectorySample& a, double time) { return a.time < time; });
  if (it == s.end()) return get(s.back());
  if (it == s.begin()) return get(s.front());
  const double tol = 1e-9 * std::max(1.0, std::abs(t));
  if (std::abs(it->time - t) <= tol) return get(*it);
  const auto prev = it - 1;
  if (std::abs(prev->time - t) <= tol) return get(*prev);
  const double u = (t - prev->time) / (it->time - prev->time);
  return decltype(get(*it))(get(*prev) * (1 - u) + get(*it) * u);
}

}  // namespace

int whole_cycles(const Trajectory& traj) {
  if (traj.samples.empty()) throw ValidationError("empty trajectory");
  const double span = traj.samples.back().time - traj.samples.front().time;
  const int cycles = static_cast<int>(std::floor(span / traj.period() + 1e-9));
  if (cycles < 1) throw ValidationError("trajectory shorter than one gait cycle");
  return cycles;
}

double displacement_per_cycle(const Trajectory& traj) {
  const int cycles = whole_cycles(traj);
  const double t0 = traj.samples.front().time;
  const double t1 = t0 + cycles * traj.period();
  const Vec3d start = traj.samples.front().com;
  const Vec3d end = value_at(traj, t1, [](const TrajectorySample& s) -> Vec3d { return s.com; });
  const double net = Vec2d(end.x() - start.x(), end.y() - start.y()).norm();
  return net / (traj.body_length() * cycles);
}

AxialRotation axial_rotation(const Trajectory& traj) {
  const int cycles = whole_cycles(traj);
  const double t0 = traj.samples.front().time;
  const double t1 = t0 + cycles * traj.period();
  const std::size_t links = traj.samples.front().link_roll.size();
  double sum = 0;
  for (std::size_t k = 0; k < links; ++k) {
    const double end = value_at(traj, t1, [k](const TrajectorySample& s) { return s.link_roll[k]; });
    sum += end - traj.samples.front().link_roll[k];
  }
  AxialRotation out;
  out.per_cycle = links ? sum / static_cast<double>(links) / cycles : 0.0;
  out.per_second = out.per_cycle * traj.config.gait.omega / (2 * kPi);
  return out;
}

RightingOutcome righting_outcome(const Trajectory& traj, const RightingParams& params) {
  RightingOutcome out;
  const double period = traj.period();
  const double deadline = traj.samples.front().time + params.deadline_cycles * period;
  const double dwell = params.dwell_cycles * period;
  const double eps = 1e-9 * period;
  const auto& s = traj.samples;
  auto upright = [&](const TrajectorySample& x) { return std::abs(wrap_angle(x.mean_roll())) <= params.tolerance; };

  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].time > deadline + eps) break;
    if (!upright(s[i])) continue;
    std::size_t j = i;
    while (j + 1 < s.size() && upright(s[j + 1]) && s[j].time - s[i].time < dwell - eps) ++j;
    if (s[j].time - s[i].time >= dwell - eps) {
      out.righted = true;
      out.time_cycles = (s[i].time - s.front().time) / period;
      return out;
    }
    i = j;
  }
  return out;
}

TrialMetrics compute_metrics(const Trajectory& traj, const RightingParams& params) {
  TrialMetrics m;
  m.dX = displacement_per_cycle(traj);
  const AxialRotation rot = axial_rotation(traj);
  m.theta_per_cycle = rot.per_cycle;
  m.theta_dot = rot.per_second;
  m.flags = traj.flags;
  if (std::abs(wrap_angle(traj.config.initial_roll - kPi)) < 1e-9) m.righting = righting_outcome(traj, params);
  return m;
}

EnergyProfile energy_barrier(const RobotModel& model, const JointVectord& posture, int resolution,
                             const SupportParams& params) {
  if (resolution < 36) throw ValidationError("energy barrier resolution must be at least 36");
  const BodyShaped shape = forward_kinematics(model, posture);
  const SupportGeometry geom = capsule_geometry(shape, model);
  const Vec3d axis = backbone_axis(shape);

  auto rest = [&](double roll, bool& unresolved) {
    const Posed pose = roll_about_backbone(shape, roll);
    const SupportResult sr = resolve_support(geom, pose, params, Vec3d(pose.linear() * axis));
    unresolved = !sr.resolved;
    return (sr.pose * geom.com).z();
  };

  EnergyProfile prof;
  prof.roll.reserve(resolution);
  for (int j = 0; j < resolution; ++j) {
    const double roll = 2 * kPi * j / resolution;
    bool unresolved = false;
    prof.roll.push_back(roll);
    prof.height.push_back(rest(roll, unresolved));
    prof.unresolved.push_back(unresolved);
    prof.any_unresolved = prof.any_unresolved || unresolved;
  }
  bool start_unresolved = false, end_unresolved = false;
  prof.start_height = rest(kPi, start_unresolved);
  double peak = std::max(prof.start_height, rest(0.0, end_unresolved));
  for (int j = 0; j < resolution; ++j) {
    if (prof.roll[j] <= kPi) peak = std::max(peak, prof.height[j]);
  }
  prof.any_unresolved = prof.any_unresolved || start_unresolved || end_unresolved;
  prof.barrier = std::max(0.0, peak - prof.start_height);
  return prof;
}

}  // namespace rightsim
