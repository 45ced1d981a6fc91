#ifndef RIGHTSIM_SIMCORE_HPP
#define RIGHTSIM_SIMCORE_HPP

// Quasi-static contact simulation on a flat rigid ground plane (z = 0).
// Each step: carry the previous world pose onto the new body shape, remove
// horizontal slip of the persisting contacts, drop to contact, then tip
// about support-hull edges until the CoM projects inside the support hull.

#include "rightsim/gait.hpp"
#include "rightsim/geometry.hpp"
#include "rightsim/morphology.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace rightsim {

struct SupportParams {
  double contact_band = 1e-4;      // m; candidates below this height are in contact
  double hull_tolerance = 1e-6;    // m; CoM may sit this far outside the hull
  int iteration_cap = 100;
  double free_point_weight = 1e-3;  // weight of non-contact points in the pose carry-over
};

struct ContactPoint {
  int id = 0;
  Vec3d world = Vec3d::Zero();
};

using ContactSet = std::vector<ContactPoint>;

struct WorldState {
  Posed pose = Posed::Identity();
  double time = 0;
  ContactSet contact_set;
  double clamp_fraction = 0;
};

/// Spheres used for ground contact: a candidate point is a sphere of radius
/// zero. Lowest height of sphere i is (pose * center_i).z - radius_i.
struct SupportGeometry {
  Points3<double> centers;
  std::vector<double> radii;
  Vec3d com = Vec3d::Zero();
};

SupportGeometry candidate_geometry(const BodyShaped& shape);
/// Exact capsule geometry: both link end spheres (radius link_radius) plus leg tips.
SupportGeometry capsule_geometry(const BodyShaped& shape, const RobotModel& model);

double lowest_height(const SupportGeometry& geom, const Posed& pose);
/// Moves `pose` vertically so the lowest geometry point touches z = 0.
Posed drop_to_ground(const SupportGeometry& geom, const Posed& pose);

/// Candidates whose world height is below `band`.
ContactSet contact_detect(const BodyShaped& shape, const Posed& pose, double band = 1e-3);

/// Planar (dx, dy, dyaw) world motion minimizing the horizontal slip of the
/// persisting contacts: prev_contacts hold last step's world positions; the
/// same candidate ids are placed with `new_shape` at `pose`. A single
/// persisting contact yields a pure translation.
PlanarMotion<double> resolve_planar_motion(const ContactSet& prev_contacts, const BodyShaped& new_shape,
                                           const Posed& pose);

struct SupportResult {
  Posed pose = Posed::Identity();
  bool resolved = true;
  int iterations = 0;
  std::vector<double> com_heights;  // after the initial drop and after every tip
};

/// Tips the pose about the support-hull feature nearest the CoM projection
/// until static stability. With `roll_lock_axis` (world, body backbone) the
/// body may only pitch about the horizontal axis normal to that direction,
/// and stability is checked along it only.
SupportResult resolve_support(const SupportGeometry& geom, const Posed& pose, const SupportParams& params,
                              const std::optional<Vec3d>& roll_lock_axis = std::nullopt);

SupportResult resolve_support(const BodyShaped& shape, const Posed& pose, const RobotModel& model,
                              const SupportParams& params = {});

/// CoM inside (or within tolerance of) the hull of the current contacts.
bool statically_stable(const SupportGeometry& geom, const Posed& pose, const SupportParams& params);

/// Rotation by `roll` about the backbone axis through the CoM.
Posed roll_about_backbone(const BodyShaped& shape, double roll);

struct PlacementResult {
  WorldState state;
  bool resolved = true;
};

/// Rolls the shape, drops it onto the ground, and resolves support.
PlacementResult initial_placement(const BodyShaped& shape, double initial_roll, const RobotModel& model,
                                  const SupportParams& params = {});

/// Roll of link k about its tangent: angle of the link's dorsal axis from
/// world vertical. Empty when the tangent is (nearly) vertical.
std::optional<double> link_roll(const BodyShaped& shape, const Posed& pose, int link);

struct TrialConfig {
  RobotModel model;
  GaitParamsd gait;
  int duration_cycles = 3;
  double timestep = 0.02;  // s; defaults to T/200 for the default omega
  double initial_roll = 0;
  std::uint64_t perturbation_seed = 0;
  double perturbation_scale = 0.02;
  SupportParams support;
};

/// Throws ValidationError on an invalid trial (timestep > T/50, ...).
void validate_trial(const TrialConfig& trial);

/// Uniform per-joint phase jitter in [-scale, scale], drawn from `seed`.
JointVectord phase_jitter(int joints, std::uint64_t seed, double scale);

struct TrialFlags {
  bool saturated = false;
  bool collision = false;
  bool unresolved = false;

  bool any() const { return saturated || collision || unresolved; }
  bool operator==(const TrialFlags&) const = default;
};

struct TrajectorySample {
  double time = 0;
  WorldState state;
  std::vector<double> link_roll;  // unwrapped, one per link
  Vec3d com = Vec3d::Zero();
  bool clamped = false;
  bool collision = false;
  bool unresolved = false;

  double mean_roll() const;
  int contact_count() const { return static_cast<int>(state.contact_set.size()); }
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  TrialConfig config;
  TrialFlags flags;
  long clamped_joint_samples = 0;
  long joint_samples = 0;

  double period() const { return config.gait.period(); }
  double body_length() const { return config.model.body_length(); }
};

/// Runs one trial. Deterministic in the configuration; `world_offset`
/// shifts the initial placement horizontally.
Trajectory simulate(const TrialConfig& trial, const Vec2d& world_offset = Vec2d::Zero());

}  // namespace rightsim

#endif  // RIGHTSIM_SIMCORE_HPP
