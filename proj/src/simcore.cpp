#include "rightsim/simcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rightsim {

namespace {

constexpr double kPi = std::numbers::pi;

Posed rotation_about(const Vec3d& point, const Vec3d& axis, double angle) {
  Posed t = Posed::Identity();
  t.linear() = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
  t.translation() = point - t.linear() * point;
  return t;
}

// Smallest angle in (min_angle, pi] at which a point at world height
// z(th) = pz + a cos(th) + b sin(th) reaches `target`; +inf when never.
double first_crossing(double pz, double a, double b, double target, double min_angle) {
  const double r = std::hypot(a, b);
  if (r < 1e-15) return std::numeric_limits<double>::infinity();
  const double k = (target - pz) / r;
  if (k > 1.0 || k < -1.0) return std::numeric_limits<double>::infinity();
  const double phi = std::atan2(b, a);
  const double spread = std::acos(std::clamp(k, -1.0, 1.0));
  double best = std::numeric_limits<double>::infinity();
  for (double root : {phi - spread, phi + spread}) {
    double th = std::fmod(root, 2 * kPi);
    if (th < 0) th += 2 * kPi;
    if (th > min_angle && th <= kPi && th < best) best = th;
  }
  return best;
}

Posed carry_pose(const BodyShaped& prev_shape, const Posed& prev_pose, const BodyShaped& new_shape,
                 const ContactSet& prev_contacts, const SupportParams& params) {
  const std::size_t n = new_shape.candidates.size();
  Points3<double> src, dst;
  src.reserve(n);
  dst.reserve(n);
  std::vector<double> w(n, prev_contacts.empty() ? 1.0 : params.free_point_weight);
  for (const ContactPoint& c : prev_contacts) w[c.id] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    src.push_back(new_shape.candidates[i].point);
    dst.push_back(prev_pose * prev_shape.candidates[i].point);
  }
  return register_rigid<double>(src, dst, w);
}

}  // namespace

SupportGeometry candidate_geometry(const BodyShaped& shape) {
  SupportGeometry g;
  g.centers.reserve(shape.candidates.size());
  for (const auto& c : shape.candidates) g.centers.push_back(c.point);
  g.radii.assign(shape.candidates.size(), 0.0);
  g.com = shape.com;
  return g;
}

SupportGeometry capsule_geometry(const BodyShaped& shape, const RobotModel& model) {
  SupportGeometry g;
  for (int k = 0; k < shape.link_count(); ++k) {
    g.centers.push_back(shape.link_start(k));
    g.radii.push_back(model.link_radius);
    g.centers.push_back(shape.link_end(k));
    g.radii.push_back(model.link_radius);
  }
  for (const auto& leg : shape.legs) {
    g.centers.push_back(leg.tip);
    g.radii.push_back(0.0);
  }
  g.com = shape.com;
  return g;
}

double lowest_height(const SupportGeometry& geom, const Posed& pose) {
  double low = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < geom.centers.size(); ++i) {
    low = std::min(low, (pose * geom.centers[i]).z() - geom.radii[i]);
  }
  return low;
}

Posed drop_to_ground(const SupportGeometry& geom, const Posed& pose) {
  Posed out = pose;
  out.translation().z() -= lowest_height(geom, pose);
  return out;
}

ContactSet contact_detect(const BodyShaped& shape, const Posed& pose, double band) {
  ContactSet set;
  double low = std::numeric_limits<double>::infinity();
  int low_id = -1;
  for (const auto& c : shape.candidates) {
    const Vec3d w = pose * c.point;
    if (w.z() < band) set.push_back({c.id, w});
    if (w.z() < low) {
      low = w.z();
      low_id = c.id;
    }
  }
  // band = 0 with the lowest point exactly on the plane still reports it
  if (set.empty() && low_id >= 0 && low <= band) set.push_back({low_id, pose * shape.candidates[low_id].point});
  return set;
}

PlanarMotion<double> resolve_planar_motion(const ContactSet& prev_contacts, const BodyShaped& new_shape,
                                           const Posed& pose) {
  Points2<double> src, dst;
  src.reserve(prev_contacts.size());
  dst.reserve(prev_contacts.size());
  for (const ContactPoint& c : prev_contacts) {
    const Vec3d now = pose * new_shape.candidates[c.id].point;
    src.emplace_back(now.x(), now.y());
    dst.emplace_back(c.world.x(), c.world.y());
  }
  return register_planar<double>(src, dst);
}

namespace {

struct SupportContacts {
  std::vector<int> indices;
  Points2<double> xy;
};

SupportContacts gather_contacts(const SupportGeometry& geom, const Posed& pose, double band) {
  SupportContacts out;
  double low = std::numeric_limits<double>::infinity();
  int low_i = -1;
  for (std::size_t i = 0; i < geom.centers.size(); ++i) {
    const Vec3d w = pose * geom.centers[i];
    const double z = w.z() - geom.radii[i];
    if (z < band) {
      out.indices.push_back(static_cast<int>(i));
      out.xy.emplace_back(w.x(), w.y());
    }
    if (z < low) {
      low = z;
      low_i = static_cast<int>(i);
    }
  }
  if (out.indices.empty() && low_i >= 0) {
    const Vec3d w = pose * geom.centers[low_i];
    out.indices.push_back(low_i);
    out.xy.emplace_back(w.x(), w.y());
  }
  return out;
}

struct TipAxis {
  bool stable = false;
  Vec3d point = Vec3d::Zero();
  Vec3d axis = Vec3d::UnitX();
};

TipAxis find_tip_axis(const SupportContacts& contacts, const Vec2d& com_xy, double pivot_z,
                      const SupportParams& params, const std::optional<Vec3d>& lock) {
  TipAxis out;
  if (lock) {
    Vec2d u(lock->x(), lock->y());
    if (u.norm() < 1e-9) {
      out.stable = true;
      return out;
    }
    u.normalize();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    int lo_i = 0, hi_i = 0;
    for (std::size_t i = 0; i < contacts.xy.size(); ++i) {
      const double s = u.dot(contacts.xy[i]);
      if (s < lo) {
        lo = s;
        lo_i = static_cast<int>(i);
      }
      if (s > hi) {
        hi = s;
        hi_i = static_cast<int>(i);
      }
    }
    const double sc = u.dot(com_xy);
    if (sc >= lo - params.hull_tolerance && sc <= hi + params.hull_tolerance) {
      out.stable = true;
      return out;
    }
    const Vec2d& pivot = sc < lo ? contacts.xy[lo_i] : contacts.xy[hi_i];
    out.point = Vec3d(pivot.x(), pivot.y(), pivot_z);
    out.axis = Vec3d(-u.y(), u.x(), 0.0);
    return out;
  }

  const Points2<double> hull = convex_hull<double>(contacts.xy);
  const HullQuery<double> q = query_hull<double>(hull, com_xy, params.hull_tolerance);
  if (q.inside) {
    out.stable = true;
    return out;
  }
  if (q.edge >= 0) {
    const Vec2d a = hull[q.edge];
    const Vec2d b = hull[(q.edge + 1) % hull.size()];
    const Vec2d d = (b - a).normalized();
    out.point = Vec3d(q.nearest.x(), q.nearest.y(), pivot_z);
    out.axis = Vec3d(d.x(), d.y(), 0.0);
  } else {
    const Vec2d v = hull[q.vertex];
    const Vec2d d = (com_xy - v).normalized();
    out.point = Vec3d(v.x(), v.y(), pivot_z);
    out.axis = Vec3d(-d.y(), d.x(), 0.0);
  }
  return out;
}

}  // namespace

bool statically_stable(const SupportGeometry& geom, const Posed& pose, const SupportParams& params) {
  const SupportContacts contacts = gather_contacts(geom, pose, params.contact_band);
  const Vec3d com = pose * geom.com;
  return find_tip_axis(contacts, Vec2d(com.x(), com.y()), 0.0, params, std::nullopt).stable;
}

SupportResult resolve_support(const SupportGeometry& geom, const Posed& pose, const SupportParams& params,
                              const std::optional<Vec3d>& roll_lock_axis) {
  SupportResult result;
  result.pose = drop_to_ground(geom, pose);
  result.com_heights.push_back((result.pose * geom.com).z());

  // the locked backbone direction turns with the body while it pitches
  std::optional<Vec3d> lock = roll_lock_axis;
  for (int iter = 0; iter < params.iteration_cap; ++iter) {
    const SupportContacts contacts = gather_contacts(geom, result.pose, params.contact_band);
    const Vec3d com = result.pose * geom.com;
    const TipAxis tip = find_tip_axis(contacts, Vec2d(com.x(), com.y()), 0.0, params, lock);
    if (tip.stable) {
      result.iterations = iter;
      return result;
    }

    Vec3d axis = tip.axis;
    if (axis.cross(com - tip.point).z() > 0) axis = -axis;

    // height about the axis: z(th) = pz + a cos(th) + b sin(th)
    auto coeffs = [&](const Vec3d& x) {
      const Vec3d v = x - tip.point;
      const Vec3d perp = v - v.dot(axis) * axis;
      return std::pair<double, double>{perp.z(), axis.cross(perp).z()};
    };
    // the CoM descends monotonically up to its minimum about this axis
    const auto [ca, cb] = coeffs(com);
    double angle = std::atan2(cb, ca) + kPi;
    if (angle <= 0) angle += 2 * kPi;
    angle = std::min(angle, kPi);

    std::vector<char> in_contact(geom.centers.size(), 0);
    for (int i : contacts.indices) in_contact[i] = 1;
    for (std::size_t i = 0; i < geom.centers.size(); ++i) {
      if (in_contact[i]) continue;
      const auto [a, b] = coeffs(result.pose * geom.centers[i]);
      angle = std::min(angle, first_crossing(tip.point.z(), a, b, geom.radii[i], 1e-12));
    }

    const Posed tip_motion = rotation_about(tip.point, axis, angle);
    if (lock) lock = tip_motion.linear() * *lock;
    result.pose = drop_to_ground(geom, tip_motion * result.pose);
    result.com_heights.push_back((result.pose * geom.com).z());
  }
  const SupportContacts contacts = gather_contacts(geom, result.pose, params.contact_band);
  const Vec3d com = result.pose * geom.com;
  result.resolved = find_tip_axis(contacts, Vec2d(com.x(), com.y()), 0.0, params, lock).stable;
  result.iterations = params.iteration_cap;
  return result;
}

SupportResult resolve_support(const BodyShaped& shape, const Posed& pose, const RobotModel& model,
                              const SupportParams& params) {
  (void)model;
  return resolve_support(candidate_geometry(shape), pose, params);
}

Posed roll_about_backbone(const BodyShaped& shape, double roll) {
  return rotation_about(shape.com, backbone_axis(shape), roll);
}

PlacementResult initial_placement(const BodyShaped& shape, double initial_roll, const RobotModel& model,
                                  const SupportParams& params) {
  const Posed rolled = roll_about_backbone(shape, initial_roll);
  const SupportResult sr = resolve_support(shape, rolled, model, params);
  PlacementResult out;
  out.resolved = sr.resolved;
  out.state.pose = sr.pose;
  out.state.time = 0;
  out.state.contact_set = contact_detect(shape, sr.pose, params.contact_band);
  return out;
}

std::optional<double> link_roll(const BodyShaped& shape, const Posed& pose, int link) {
  if (!(shape.link_lengths[link] > 0)) return std::nullopt;
  const Mat3d r = pose.linear() * shape.link_frames[link].linear();
  if (std::abs(r.col(0).z()) > 1.0 - 1e-9) return std::nullopt;
  return std::atan2(r.col(1).z(), r.col(2).z());
}

void validate_trial(const TrialConfig& trial) {
  validate_model(trial.model);
  validate_gait(trial.gait, trial.model.joint_limit);
  if (trial.gait.N != trial.model.num_modules) {
    throw ValidationError("gait N must equal the number of modules");
  }
  if (trial.duration_cycles < 1) throw ValidationError("duration_cycles must be at least 1");
  if (!(trial.timestep > 0)) throw ValidationError("timestep must be positive");
  if (trial.timestep > trial.gait.period() / 50 * (1 + 1e-12)) {
    throw ValidationError("timestep exceeds T/50");
  }
  if (!(trial.perturbation_scale >= 0)) throw ValidationError("perturbation_scale must be non-negative");
}

JointVectord phase_jitter(int joints, std::uint64_t seed, double scale) {
  // splitmix64: portable, so trajectories do not depend on the standard library
  std::uint64_t state = seed;
  auto next = [&state] {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  JointVectord out(joints);
  for (int j = 0; j < joints; ++j) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    out[j] = scale == 0 ? 0.0 : scale * (2 * u - 1);
  }
  return out;
}

double TrajectorySample::mean_roll() const {
  if (link_roll.empty()) return 0;
  double sum = 0;
  for (double r : link_roll) sum += r;
  return sum / static_cast<double>(link_roll.size());
}

Trajectory simulate(const TrialConfig& trial, const Vec2d& world_offset) {
  validate_trial(trial);
  const RobotModel& model = trial.model;
  const GaitParamsd& gait = trial.gait;
  const double period = gait.period();
  const long steps = static_cast<long>(std::floor(trial.duration_cycles * period / trial.timestep + 1e-9));
  const JointVectord jitter = phase_jitter(model.joint_count(), trial.perturbation_seed, trial.perturbation_scale);

  Trajectory traj;
  traj.config = trial;
  traj.samples.reserve(steps + 1);

  JointVectord q = eval_gait(gait, 0.0, jitter);
  int clamped = clamp_joints(q, model.joint_limit);
  BodyShaped shape = forward_kinematics(model, q, false);

  PlacementResult placement = initial_placement(shape, trial.initial_roll, model, trial.support);
  WorldState state = placement.state;
  state.pose.translation().x() += world_offset.x();
  state.pose.translation().y() += world_offset.y();
  for (auto& c : state.contact_set) c.world = state.pose * shape.candidates[c.id].point;

  traj.clamped_joint_samples += clamped;
  traj.joint_samples += q.size();
  state.clamp_fraction = static_cast<double>(traj.clamped_joint_samples) / static_cast<double>(traj.joint_samples);

  const int links = model.link_count();
  std::vector<double> rolls(links, trial.initial_roll);
  auto update_rolls = [&](const BodyShaped& s, const Posed& pose, bool first) {
    for (int k = 0; k < links; ++k) {
      if (auto raw = link_roll(s, pose, k)) {
        rolls[k] = unwrap_next(first ? trial.initial_roll : rolls[k], *raw);
      }
    }
  };

  auto record = [&](double t, const BodyShaped& s, bool was_clamped, bool unresolved) {
    TrajectorySample sample;
    sample.time = t;
    sample.state = state;
    sample.state.time = t;
    sample.link_roll = rolls;
    sample.com = state.pose * s.com;
    sample.clamped = was_clamped;
    sample.collision = !self_collision(s, model).empty();
    sample.unresolved = unresolved;
    traj.flags.collision = traj.flags.collision || sample.collision;
    traj.flags.unresolved = traj.flags.unresolved || unresolved;
    traj.samples.push_back(std::move(sample));
  };

  update_rolls(shape, state.pose, true);
  record(0.0, shape, clamped > 0, !placement.resolved);

  for (long k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * trial.timestep;
    JointVectord q_new = eval_gait(gait, t, jitter);
    clamped = clamp_joints(q_new, model.joint_limit);
    traj.clamped_joint_samples += clamped;
    traj.joint_samples += q_new.size();

    bool unresolved = false;
    if (q_new != q) {
      BodyShaped new_shape = forward_kinematics(model, q_new, false);
      Posed pose = carry_pose(shape, state.pose, new_shape, state.contact_set, trial.support);
      pose = resolve_planar_motion(state.contact_set, new_shape, pose).as_pose() * pose;
      const SupportResult sr = resolve_support(candidate_geometry(new_shape), pose, trial.support);
      unresolved = !sr.resolved;
      state.pose = sr.pose;
      state.contact_set = contact_detect(new_shape, state.pose, trial.support.contact_band);
      shape = std::move(new_shape);
      q = std::move(q_new);
      update_rolls(shape, state.pose, false);
    }
    state.time = t;
    state.clamp_fraction =
        static_cast<double>(traj.clamped_joint_samples) / static_cast<double>(traj.joint_samples);
    record(t, shape, clamped > 0, unresolved);
  }

  traj.flags.saturated = state.clamp_fraction >= 0.01;
  return traj;
}

}  // namespace rightsim
