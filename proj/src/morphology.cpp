#include "rightsim/morphology.hpp"

#include <algorithm>
#include <set>

namespace rightsim {

std::string to_string(LegPreset preset) {
  switch (preset) {
    case LegPreset::Short:
      return "short";
    case LegPreset::Medium:
      return "medium";
    case LegPreset::Long:
      return "long";
  }
  return "?";
}

std::string to_string(LegAttachment attachment) {
  switch (attachment) {
    case LegAttachment::All:
      return "all";
    case LegAttachment::EvenlySpaced:
      return "evenly_spaced";
    case LegAttachment::Explicit:
      return "explicit";
  }
  return "?";
}

LegPreset leg_preset_from_string(const std::string& name) {
  if (name == "short") return LegPreset::Short;
  if (name == "medium") return LegPreset::Medium;
  if (name == "long") return LegPreset::Long;
  throw ValidationError("unknown leg ratio preset '" + name + "'");
}

double LegLengthSet::of(LegPreset preset) const {
  switch (preset) {
    case LegPreset::Short:
      return short_m;
    case LegPreset::Medium:
      return medium_m;
    case LegPreset::Long:
      return long_m;
  }
  return 0;
}

LegLengthSet leg_lengths_from_ratios(const RobotModel& model) {
  const double bl = model.body_length();
  if (!(bl > 0) || !(model.link_length > 0)) {
    throw ValidationError("leg ratios need a positive body length and link spacing");
  }
  return {bl / 13.8, bl / 11.8, 1.2 * model.link_length};
}

std::vector<int> evenly_spaced_modules(int num_modules, int pairs) {
  std::vector<int> out;
  out.reserve(pairs);
  for (int j = 0; j < pairs; ++j) {
    const double pos = (j + 0.5) * static_cast<double>(num_modules) / pairs + 0.5;
    out.push_back(std::clamp(static_cast<int>(std::lround(pos)), 1, num_modules));
  }
  return out;
}

void validate_model(const RobotModel& m) {
  auto positive = [](double v, const char* what) {
    if (!(v > 0) || !std::isfinite(v)) throw ValidationError(std::string(what) + " must be positive");
  };
  if (m.num_modules < 1) throw ValidationError("num_modules must be at least 1");
  positive(m.link_length, "link_length");
  positive(m.link_radius, "link_radius");
  positive(m.link_mass, "link_mass");
  positive(m.head_tail_length, "head_tail_length");
  if (!(m.joint_limit > 0) || m.joint_limit > std::numbers::pi) {
    throw ValidationError("joint_limit must lie in (0, pi]");
  }
  if (!m.legs) return;
  const LegSpec& legs = *m.legs;
  positive(legs.length, "leg length");
  positive(legs.tip_radius, "leg tip_radius");
  if (legs.pair_count < 1) throw ValidationError("leg pair_count must be at least 1");
  if (legs.pair_count > m.num_modules) throw ValidationError("leg pair_count exceeds num_modules");
  if (static_cast<int>(legs.attachment_modules.size()) != legs.pair_count) {
    throw ValidationError("leg pair_count does not match the number of attachment modules");
  }
  std::set<int> seen;
  for (int mod : legs.attachment_modules) {
    if (mod < 1 || mod > m.num_modules) {
      throw ValidationError("leg attachment module " + std::to_string(mod) + " out of range");
    }
    if (!seen.insert(mod).second) {
      throw ValidationError("duplicate leg attachment module " + std::to_string(mod));
    }
  }
}

RobotModel build_model(const MorphologyConfig& config) {
  RobotModel model;
  model.num_modules = config.num_modules;
  model.link_length = config.link_length_m;
  model.link_radius = config.link_radius_m;
  model.link_mass = config.link_mass_kg;
  model.head_tail_length = config.head_tail_length_m;
  model.joint_limit = config.joint_limit_rad;
  validate_model(model);

  if (config.legs) {
    const LegConfig& lc = *config.legs;
    LegSpec legs;
    if (lc.length_m && lc.ratio_preset) {
      throw ValidationError("legs: give either length_m or ratio_preset, not both");
    }
    if (lc.length_m) {
      legs.length = *lc.length_m;
    } else if (lc.ratio_preset) {
      legs.length = leg_lengths_from_ratios(model).of(*lc.ratio_preset);
    } else {
      throw ValidationError("legs: length_m or ratio_preset required");
    }
    legs.splay_angle = lc.splay_rad;
    legs.tip_radius = lc.tip_radius_m;
    switch (lc.attachment) {
      case LegAttachment::All:
        legs.pair_count = model.num_modules;
        for (int i = 1; i <= model.num_modules; ++i) legs.attachment_modules.push_back(i);
        if (lc.pair_count != model.num_modules) {
          throw ValidationError("legs: attachment 'all' requires pair_count == num_modules");
        }
        break;
      case LegAttachment::EvenlySpaced:
        if (lc.pair_count < 1 || lc.pair_count > model.num_modules) {
          throw ValidationError("legs: pair_count must lie in 1..num_modules");
        }
        legs.pair_count = lc.pair_count;
        legs.attachment_modules = evenly_spaced_modules(model.num_modules, lc.pair_count);
        break;
      case LegAttachment::Explicit:
        legs.pair_count = lc.pair_count;
        legs.attachment_modules = lc.explicit_modules;
        break;
    }
    model.legs = legs;
    validate_model(model);
    std::sort(model.legs->attachment_modules.begin(), model.legs->attachment_modules.end());
  }
  return model;
}

bool geometry_adjacent(const RobotModel& model, const BodyShaped& shape, GeometryRef a, GeometryRef b) {
  (void)model;
  if (a == b) return true;
  if (a.kind == GeometryKind::Link && b.kind == GeometryKind::Link) return std::abs(a.index - b.index) <= 1;
  if (a.kind == GeometryKind::Leg && b.kind == GeometryKind::Leg) {
    return shape.legs[a.index].module == shape.legs[b.index].module;
  }
  const GeometryRef leg = a.kind == GeometryKind::Leg ? a : b;
  const GeometryRef link = a.kind == GeometryKind::Leg ? b : a;
  const int m = shape.legs[leg.index].module;
  // module m joins link m-1 (incoming) and link m (outgoing)
  return link.index == m - 1 || link.index == m;
}

CollisionReport self_collision(const BodyShaped& shape, const RobotModel& model) {
  struct Capsule {
    GeometryRef ref;
    Vec3d p0, p1;
    double radius;
  };
  std::vector<Capsule> caps;
  caps.reserve(shape.link_count() + shape.legs.size());
  for (int k = 0; k < shape.link_count(); ++k) {
    caps.push_back({{GeometryKind::Link, k}, shape.link_start(k), shape.link_end(k), model.link_radius});
  }
  const double tip_r = model.legs ? model.legs->tip_radius : 0.0;
  for (std::size_t l = 0; l < shape.legs.size(); ++l) {
    caps.push_back({{GeometryKind::Leg, static_cast<int>(l)}, shape.legs[l].root, shape.legs[l].tip, tip_r});
  }

  CollisionReport report;
  for (std::size_t i = 0; i < caps.size(); ++i) {
    for (std::size_t j = i + 1; j < caps.size(); ++j) {
      if (geometry_adjacent(model, shape, caps[i].ref, caps[j].ref)) continue;
      const double rsum = caps[i].radius + caps[j].radius;
      const double d = segment_distance<double>(caps[i].p0, caps[i].p1, caps[j].p0, caps[j].p1);
      if (d < rsum) report.pairs.push_back({caps[i].ref, caps[j].ref, d, rsum});
    }
  }
  return report;
}

}  // namespace rightsim
