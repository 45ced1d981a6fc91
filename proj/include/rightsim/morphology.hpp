#ifndef RIGHTSIM_MORPHOLOGY_HPP
#define RIGHTSIM_MORPHOLOGY_HPP

// Kinematic structure of the elongate robot: a chain of bi-axial modules
// (yaw joint then pitch joint at the same point), joined by rigid links,
// with optional rigid ventral legs. Joint indices are 1-based at every
// interface: joint 2i-1 is the yaw joint of module i, joint 2i its pitch.

#include "rightsim/errors.hpp"
#include "rightsim/geometry.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace rightsim {

template <typename Scalar> using JointVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using JointVectord = JointVector<double>;

inline constexpr bool is_yaw_joint(int joint) { return joint % 2 == 1; }
inline constexpr int module_of_joint(int joint) { return (joint + 1) / 2; }
inline constexpr int yaw_joint_of(int module) { return 2 * module - 1; }
inline constexpr int pitch_joint_of(int module) { return 2 * module; }

struct LegSpec {
  double length = 0.0;
  int pair_count = 0;
  std::vector<int> attachment_modules;  // 1-based, sorted
  double splay_angle = 0.0;
  double tip_radius = 0.005;
};

struct RobotModel {
  int num_modules = 9;
  double link_length = 0.0715;
  double link_radius = 0.0253;
  double link_mass = 0.109;
  double head_tail_length = 0.0715;
  double joint_limit = std::numbers::pi / 2;
  std::optional<LegSpec> legs;

  int joint_count() const { return 2 * num_modules; }
  // tail link, num_modules - 1 inter-module links, head link
  int link_count() const { return num_modules + 1; }
  double link_length_of(int link) const {
    return (link == 0 || link == num_modules) ? head_tail_length : link_length;
  }
  double body_length() const { return 2 * head_tail_length + (num_modules - 1) * link_length; }
  double segment_width() const { return 2 * link_radius; }
  double total_mass() const { return link_mass * link_count(); }
};

enum class LegPreset { Short, Medium, Long };
enum class LegAttachment { All, EvenlySpaced, Explicit };

std::string to_string(LegPreset preset);
std::string to_string(LegAttachment attachment);
LegPreset leg_preset_from_string(const std::string& name);

struct LegConfig {
  std::optional<double> length_m;
  std::optional<LegPreset> ratio_preset;
  int pair_count = 9;
  LegAttachment attachment = LegAttachment::All;
  std::vector<int> explicit_modules;
  double splay_rad = 0.0;
  double tip_radius_m = 0.005;

  bool operator==(const LegConfig&) const = default;
};

struct MorphologyConfig {
  int num_modules = 9;
  double link_length_m = 0.0715;
  double link_radius_m = 0.0253;
  double link_mass_kg = 0.109;
  double head_tail_length_m = 0.0715;
  double joint_limit_rad = std::numbers::pi / 2;
  std::optional<LegConfig> legs;

  bool operator==(const MorphologyConfig&) const = default;
};

/// Validates the configuration and resolves leg presets and attachment
/// layouts into a concrete model.
RobotModel build_model(const MorphologyConfig& config);

/// Throws ValidationError when the model violates a structural invariant.
void validate_model(const RobotModel& model);

struct LegLengthSet {
  double short_m = 0;
  double medium_m = 0;
  double long_m = 0;

  double of(LegPreset preset) const;
};

/// Leg lengths from the body-proportion ratios: BL/13.8, BL/11.8, and 1.2x
/// the spacing between adjacent leg pairs (one link).
LegLengthSet leg_lengths_from_ratios(const RobotModel& model);

/// Modules carrying leg pairs for `pairs` pairs spread along `num_modules`.
std::vector<int> evenly_spaced_modules(int num_modules, int pairs);

enum class CandidateKind { Ventral, Dorsal, Left, Right, LegTip };

template <typename Scalar>
struct ContactCandidate {
  int id = 0;  // equals the index in BodyShape::candidates
  CandidateKind kind = CandidateKind::Ventral;
  int link = -1;  // owning link, or -1 for leg tips
  int leg = -1;   // owning leg (index into BodyShape::legs), or -1
  Vec3<Scalar> point;
};

template <typename Scalar>
struct LegSegment {
  int module = 0;  // 1-based
  int side = 1;    // +1 left (+y), -1 right
  Vec3<Scalar> root;
  Vec3<Scalar> tip;
};

/// Body-frame geometry for one joint configuration. Link k spans
/// [link_frames[k] origin, + length * x-axis].
template <typename Scalar>
struct BodyShape {
  std::vector<Pose<Scalar>, Eigen::aligned_allocator<Pose<Scalar>>> link_frames;
  std::vector<Scalar> link_lengths;
  std::vector<Pose<Scalar>, Eigen::aligned_allocator<Pose<Scalar>>> module_frames;  // after yaw, before pitch
  Points3<Scalar> joint_origins;  // 2N entries, joint j at index j-1
  std::vector<LegSegment<Scalar>> legs;
  std::vector<ContactCandidate<Scalar>> candidates;
  Vec3<Scalar> com = Vec3<Scalar>::Zero();

  Vec3<Scalar> link_start(int k) const { return link_frames[k].translation(); }
  Vec3<Scalar> link_end(int k) const {
    return link_frames[k].translation() + link_lengths[k] * link_frames[k].linear().col(0);
  }
  Vec3<Scalar> link_center(int k) const {
    return link_frames[k].translation() + Scalar(0.5) * link_lengths[k] * link_frames[k].linear().col(0);
  }
  Vec3<Scalar> link_tangent(int k) const { return link_frames[k].linear().col(0); }
  int link_count() const { return static_cast<int>(link_frames.size()); }
};

using BodyShaped = BodyShape<double>;

/// Unit direction of the backbone's principal axis, oriented tail to head.
template <typename Scalar>
Vec3<Scalar> backbone_axis(const BodyShape<Scalar>& shape) {
  const int links = shape.link_count();
  Vec3<Scalar> mean = Vec3<Scalar>::Zero();
  for (int k = 0; k < links; ++k) mean += shape.link_center(k);
  mean /= Scalar(links);
  Mat3<Scalar> cov = Mat3<Scalar>::Zero();
  for (int k = 0; k < links; ++k) {
    const Vec3<Scalar> d = shape.link_center(k) - mean;
    cov.noalias() += d * d.transpose();
  }
  const Vec3<Scalar> chord = shape.link_end(links - 1) - shape.link_start(0);
  Vec3<Scalar> axis;
  if (cov.trace() <= Scalar(1e-18)) {
    axis = shape.link_tangent(0);
  } else {
    Eigen::SelfAdjointEigenSolver<Mat3<Scalar>> eig(cov);
    axis = eig.eigenvectors().col(2);
  }
  const Scalar orient = chord.squaredNorm() > Scalar(1e-18) ? chord.dot(axis) : shape.link_tangent(0).dot(axis);
  return orient < 0 ? Vec3<Scalar>(-axis) : axis;
}

/// Serial-chain kinematics in the body frame: tail link at the origin along
/// +x, yaw about the local +z, pitch about the local +y. Throws
/// JointLimitError (1-based index) when `check_limits` and some |angle|
/// exceeds the joint limit.
template <typename Scalar>
BodyShape<Scalar> forward_kinematics(const RobotModel& model, const JointVector<Scalar>& joints,
                                     bool check_limits = true) {
  const int n = model.num_modules;
  if (joints.size() != 2 * n) {
    throw ValidationError("joint vector has " + std::to_string(joints.size()) + " entries, expected " +
                          std::to_string(2 * n));
  }
  if (check_limits) {
    const Scalar limit = Scalar(model.joint_limit) * (1 + Scalar(1e-12));
    for (int j = 0; j < joints.size(); ++j) {
      if (!(std::abs(joints[j]) <= limit)) {
        throw JointLimitError(j + 1, static_cast<double>(joints[j]), model.joint_limit);
      }
    }
  }

  BodyShape<Scalar> shape;
  const int links = model.link_count();
  shape.link_frames.reserve(links);
  shape.link_lengths.reserve(links);
  shape.module_frames.reserve(n);
  shape.joint_origins.reserve(2 * n);

  Pose<Scalar> frame = Pose<Scalar>::Identity();
  shape.link_frames.push_back(frame);
  shape.link_lengths.push_back(Scalar(model.link_length_of(0)));
  for (int i = 1; i <= n; ++i) {
    const Scalar prev_len = shape.link_lengths.back();
    frame.translation() += prev_len * frame.linear().col(0);
    shape.joint_origins.push_back(frame.translation());
    shape.joint_origins.push_back(frame.translation());
    frame.linear() = frame.linear() *
                     Eigen::AngleAxis<Scalar>(joints[yaw_joint_of(i) - 1], Vec3<Scalar>::UnitZ()).toRotationMatrix();
    shape.module_frames.push_back(frame);
    frame.linear() = frame.linear() *
                     Eigen::AngleAxis<Scalar>(joints[pitch_joint_of(i) - 1], Vec3<Scalar>::UnitY()).toRotationMatrix();
    shape.link_frames.push_back(frame);
    shape.link_lengths.push_back(Scalar(model.link_length_of(i)));
  }

  const Scalar r = Scalar(model.link_radius);
  Scalar mass = 0;
  for (int k = 0; k < links; ++k) {
    shape.com += Scalar(model.link_mass) * shape.link_center(k);
    mass += Scalar(model.link_mass);
  }
  shape.com /= mass;

  if (model.legs) {
    const LegSpec& spec = *model.legs;
    const Scalar s = std::sin(Scalar(spec.splay_angle));
    const Scalar c = std::cos(Scalar(spec.splay_angle));
    // roots sit on the ventral surface, 30 degrees either side of the midline
    const Scalar root_y = r * Scalar(0.5);
    const Scalar root_z = -r * std::sqrt(Scalar(3)) / 2;
    for (int m : spec.attachment_modules) {
      const Pose<Scalar>& mf = shape.module_frames[m - 1];
      for (int side : {1, -1}) {
        const Vec3<Scalar> root_local(0, side * root_y, root_z);
        const Vec3<Scalar> dir_local(0, side * s, -c);
        LegSegment<Scalar> leg;
        leg.module = m;
        leg.side = side;
        leg.root = mf * root_local;
        leg.tip = mf * (root_local + Scalar(spec.length) * dir_local);
        shape.legs.push_back(leg);
      }
    }
  }

  // 8 surface samples per link: ventral, dorsal, left, right at both ends.
  shape.candidates.reserve(8 * links + shape.legs.size());
  const CandidateKind kinds[4] = {CandidateKind::Ventral, CandidateKind::Dorsal, CandidateKind::Left,
                                  CandidateKind::Right};
  const Vec3<Scalar> offsets[4] = {Vec3<Scalar>(0, 0, -r), Vec3<Scalar>(0, 0, r), Vec3<Scalar>(0, r, 0),
                                   Vec3<Scalar>(0, -r, 0)};
  for (int k = 0; k < links; ++k) {
    const Pose<Scalar>& lf = shape.link_frames[k];
    for (int end = 0; end < 2; ++end) {
      const Vec3<Scalar> along(end == 0 ? Scalar(0) : shape.link_lengths[k], 0, 0);
      for (int d = 0; d < 4; ++d) {
        ContactCandidate<Scalar> cand;
        cand.id = static_cast<int>(shape.candidates.size());
        cand.kind = kinds[d];
        cand.link = k;
        cand.point = lf * (along + offsets[d]);
        shape.candidates.push_back(cand);
      }
    }
  }
  for (std::size_t l = 0; l < shape.legs.size(); ++l) {
    ContactCandidate<Scalar> cand;
    cand.id = static_cast<int>(shape.candidates.size());
    cand.kind = CandidateKind::LegTip;
    cand.leg = static_cast<int>(l);
    cand.point = shape.legs[l].tip;
    shape.candidates.push_back(cand);
  }
  return shape;
}

enum class GeometryKind { Link, Leg };

struct GeometryRef {
  GeometryKind kind = GeometryKind::Link;
  int index = 0;  // link index, or leg index into BodyShape::legs

  bool operator==(const GeometryRef&) const = default;
  auto operator<=>(const GeometryRef&) const = default;
};

struct CollisionPair {
  GeometryRef a;
  GeometryRef b;
  double distance = 0;  // segment-to-segment distance
  double radius_sum = 0;
};

struct CollisionReport {
  std::vector<CollisionPair> pairs;
  bool empty() const { return pairs.empty(); }
};

/// Whether two geometry segments share a joint or attachment point and are
/// therefore exempt from collision checks.
bool geometry_adjacent(const RobotModel& model, const BodyShaped& shape, GeometryRef a, GeometryRef b);

/// All non-adjacent capsule pairs (links radius link_radius, legs radius
/// tip_radius) closer than the sum of their radii.
CollisionReport self_collision(const BodyShaped& shape, const RobotModel& model);

}  // namespace rightsim

#endif  // RIGHTSIM_MORPHOLOGY_HPP
