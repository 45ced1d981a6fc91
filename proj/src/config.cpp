#include "rightsim/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace rightsim {

using nlohmann::json;

namespace {

// Reads the keys of one JSON object, remembering which ones were used so
// that leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (!j_.contains(key)) return;
    used_.insert(key);
    out = convert<T>(j_.at(key), key);
  }

  const json* child(const std::string& key) {
    if (!j_.contains(key)) return nullptr;
    used_.insert(key);
    return &j_.at(key);
  }

  std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) throw ConfigError("unknown key '" + path(it.key()) + "'");
    }
  }

 private:
  std::string where() const { return path_.empty() ? "config: " : path_ + ": "; }

  template <typename T>
  T convert(const json& v, const std::string& key) const {
    const std::string p = path(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(p + ": expected a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(p + ": expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned()) throw ConfigError(p + ": expected a non-negative integer");
      return v.get<std::uint64_t>();
    } else if constexpr (std::is_same_v<T, int>) {
      if (!v.is_number_integer()) throw ConfigError(p + ": expected an integer");
      const auto x = v.get<std::int64_t>();
      if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        throw ConfigError(p + ": integer out of range");
      }
      return static_cast<int>(x);
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError(p + ": expected a number");
      const double x = v.get<double>();
      if (!std::isfinite(x)) throw ConfigError(p + ": expected a finite number");
      return x;
    } else if constexpr (std::is_same_v<T, std::optional<double>>) {
      if (v.is_null()) return std::nullopt;
      return convert<double>(v, key);
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      if (!v.is_array()) throw ConfigError(p + ": expected an array of numbers");
      std::vector<double> out;
      for (const auto& e : v) out.push_back(convert<double>(e, key));
      return out;
    } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
      if (!v.is_array()) throw ConfigError(p + ": expected an array of strings");
      std::vector<std::string> out;
      for (const auto& e : v) out.push_back(convert<std::string>(e, key));
      return out;
    } else {
      static_assert(sizeof(T) == 0, "unsupported config type");
    }
  }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

LegConfig parse_legs(const json& j, const std::string& path) {
  Section s(j, path);
  LegConfig lc;
  s.read("length_m", lc.length_m);
  if (s.has("ratio_preset")) {
    std::string preset;
    s.read("ratio_preset", preset);
    try {
      lc.ratio_preset = leg_preset_from_string(preset);
    } catch (const ValidationError& e) {
      throw ConfigError(s.path("ratio_preset") + ": " + e.what());
    }
  }
  s.read("pair_count", lc.pair_count);
  lc.attachment = LegAttachment::EvenlySpaced;
  if (const json* a = s.child("attachment")) {
    if (a->is_string()) {
      const std::string name = a->get<std::string>();
      if (name == "all") {
        lc.attachment = LegAttachment::All;
      } else if (name == "evenly_spaced") {
        lc.attachment = LegAttachment::EvenlySpaced;
      } else {
        throw ConfigError(s.path("attachment") + ": expected 'all', 'evenly_spaced' or a module list");
      }
    } else if (a->is_array()) {
      lc.attachment = LegAttachment::Explicit;
      for (const auto& e : *a) {
        if (!e.is_number_integer()) throw ConfigError(s.path("attachment") + ": module indices must be integers");
        lc.explicit_modules.push_back(e.get<int>());
      }
    } else {
      throw ConfigError(s.path("attachment") + ": expected a string or an array");
    }
  }
  s.read("splay_rad", lc.splay_rad);
  s.read("tip_radius_m", lc.tip_radius_m);
  s.finish();
  if (lc.length_m && lc.ratio_preset) throw ConfigError(path + ": give either length_m or ratio_preset, not both");
  if (!lc.length_m && !lc.ratio_preset) throw ConfigError(path + ": length_m or ratio_preset required");
  return lc;
}

json legs_to_json(const LegConfig& lc) {
  json j = json::object();
  if (lc.length_m) j["length_m"] = *lc.length_m;
  if (lc.ratio_preset) j["ratio_preset"] = to_string(*lc.ratio_preset);
  j["pair_count"] = lc.pair_count;
  switch (lc.attachment) {
    case LegAttachment::All:
      j["attachment"] = "all";
      break;
    case LegAttachment::EvenlySpaced:
      j["attachment"] = "evenly_spaced";
      break;
    case LegAttachment::Explicit:
      j["attachment"] = lc.explicit_modules;
      break;
  }
  j["splay_rad"] = lc.splay_rad;
  j["tip_radius_m"] = lc.tip_radius_m;
  return j;
}

std::optional<LegConfig> parse_optional_legs(Section& s, const std::string& key) {
  const json* legs = s.child(key);
  if (!legs || legs->is_null()) return std::nullopt;
  return parse_legs(*legs, s.path(key));
}

RunConfig from_json(const json& root) {
  RunConfig c;
  Section top(root, "");

  if (const json* j = top.child("morphology")) {
    Section s(*j, "morphology");
    MorphologyConfig& m = c.morphology;
    s.read("num_modules", m.num_modules);
    s.read("link_length_m", m.link_length_m);
    s.read("link_radius_m", m.link_radius_m);
    s.read("link_mass_kg", m.link_mass_kg);
    s.read("head_tail_length_m", m.head_tail_length_m);
    s.read("joint_limit_rad", m.joint_limit_rad);
    m.legs = parse_optional_legs(s, "legs");
    s.finish();
  }

  if (const json* j = top.child("gait")) {
    Section s(*j, "gait");
    GaitConfig& g = c.gait;
    s.read("A_y_rad", g.A_y_rad);
    s.read("A_p_rad", g.A_p_rad);
    s.read("omega_rad_s", g.omega_rad_s);
    if (s.has("n") && (s.has("n_y") || s.has("n_p"))) {
      throw ConfigError("gait: 'n' cannot be combined with 'n_y' or 'n_p'");
    }
    if (s.has("n")) {
      s.read("n", g.n_y);
      g.n_p = g.n_y;
    }
    s.read("n_y", g.n_y);
    s.read("n_p", g.n_p);
    s.read("delta_d_rad", g.delta_d_rad);
    s.finish();
  }

  if (const json* j = top.child("grid")) {
    Section s(*j, "grid");
    GridSpec& g = c.grid;
    s.read("a_p_start_rad", g.a_p_start_rad);
    s.read("a_p_step_rad", g.a_p_step_rad);
    s.read("a_p_count", g.a_p_count);
    s.read("n_start", g.n_start);
    s.read("n_step", g.n_step);
    s.read("n_count", g.n_count);
    s.read("trials_per_cell", g.trials_per_cell);
    s.finish();
  }

  if (const json* j = top.child("simulation")) {
    Section s(*j, "simulation");
    SimulationConfig& m = c.simulation;
    if (s.has("steps_per_cycle") && s.has("timestep_s") && !j->at("timestep_s").is_null()) {
      throw ConfigError("simulation: give either steps_per_cycle or timestep_s, not both");
    }
    s.read("steps_per_cycle", m.steps_per_cycle);
    s.read("timestep_s", m.timestep_s);
    s.read("duration_cycles", m.duration_cycles);
    s.read("initial_roll_rad", m.initial_roll_rad);
    s.read("perturbation_seed", m.perturbation_seed);
    s.read("perturbation_scale_rad", m.perturbation_scale_rad);
    s.read("contact_band_m", m.contact_band_m);
    s.read("hull_tolerance_m", m.hull_tolerance_m);
    s.read("iteration_cap", m.iteration_cap);
    s.read("free_point_weight", m.free_point_weight);
    s.finish();
  }

  if (const json* j = top.child("output")) {
    Section s(*j, "output");
    s.read("directory", c.output.directory);
    s.read("formats", c.output.formats);
    s.read("per_link_roll", c.output.per_link_roll);
    s.finish();
  }

  if (const json* j = top.child("sweep")) {
    Section s(*j, "sweep");
    SweepConfig& w = c.sweep;
    s.read("seed", w.seed);
    s.read("workers", w.workers);
    s.read("delta_d_rad", w.delta_d_rad);
    s.read("initial_roll_rad", w.initial_roll_rad);
    if (const json* vs = s.child("variants")) {
      if (!vs->is_array()) throw ConfigError("sweep.variants: expected an array");
      for (std::size_t i = 0; i < vs->size(); ++i) {
        Section v((*vs)[i], "sweep.variants[" + std::to_string(i) + "]");
        VariantConfig vc;
        v.read("name", vc.name);
        vc.legs = parse_optional_legs(v, "legs");
        v.finish();
        w.variants.push_back(vc);
      }
    }
    s.finish();
  }

  if (const json* j = top.child("phase_sweep")) {
    Section s(*j, "phase_sweep");
    s.read("amplitude_rad", c.phase_sweep.amplitude_rad);
    s.read("n", c.phase_sweep.n);
    s.read("trials", c.phase_sweep.trials);
    s.read("initial_roll_rad", c.phase_sweep.initial_roll_rad);
    s.finish();
  }

  if (const json* j = top.child("energy")) {
    Section s(*j, "energy");
    s.read("resolution", c.energy.resolution);
    s.finish();
  }

  top.finish();
  return c;
}

json to_json(const RunConfig& c) {
  json root;
  const MorphologyConfig& m = c.morphology;
  root["morphology"] = {{"num_modules", m.num_modules},
                        {"link_length_m", m.link_length_m},
                        {"link_radius_m", m.link_radius_m},
                        {"link_mass_kg", m.link_mass_kg},
                        {"head_tail_length_m", m.head_tail_length_m},
                        {"joint_limit_rad", m.joint_limit_rad},
                        {"legs", m.legs ? legs_to_json(*m.legs) : json(nullptr)}};
  const GaitConfig& g = c.gait;
  root["gait"] = {{"A_y_rad", g.A_y_rad}, {"A_p_rad", g.A_p_rad}, {"omega_rad_s", g.omega_rad_s},
                  {"n_y", g.n_y},         {"n_p", g.n_p},         {"delta_d_rad", g.delta_d_rad}};
  const GridSpec& gr = c.grid;
  root["grid"] = {{"a_p_start_rad", gr.a_p_start_rad}, {"a_p_step_rad", gr.a_p_step_rad},
                  {"a_p_count", gr.a_p_count},         {"n_start", gr.n_start},
                  {"n_step", gr.n_step},               {"n_count", gr.n_count},
                  {"trials_per_cell", gr.trials_per_cell}};
  const SimulationConfig& s = c.simulation;
  json sim = {{"duration_cycles", s.duration_cycles},
              {"initial_roll_rad", s.initial_roll_rad},
              {"perturbation_seed", s.perturbation_seed},
              {"perturbation_scale_rad", s.perturbation_scale_rad},
              {"contact_band_m", s.contact_band_m},
              {"hull_tolerance_m", s.hull_tolerance_m},
              {"iteration_cap", s.iteration_cap},
              {"free_point_weight", s.free_point_weight}};
  if (s.timestep_s) {
    sim["timestep_s"] = *s.timestep_s;
  } else {
    sim["steps_per_cycle"] = s.steps_per_cycle;
  }
  root["simulation"] = sim;
  root["output"] = {{"directory", c.output.directory},
                    {"formats", c.output.formats},
                    {"per_link_roll", c.output.per_link_roll}};
  json variants = json::array();
  for (const auto& v : c.sweep.variants) {
    variants.push_back({{"name", v.name}, {"legs", v.legs ? legs_to_json(*v.legs) : json(nullptr)}});
  }
  root["sweep"] = {{"seed", c.sweep.seed},
                   {"workers", c.sweep.workers},
                   {"delta_d_rad", c.sweep.delta_d_rad},
                   {"initial_roll_rad", c.sweep.initial_roll_rad},
                   {"variants", variants}};
  root["phase_sweep"] = {{"amplitude_rad", c.phase_sweep.amplitude_rad},
                         {"n", c.phase_sweep.n},
                         {"trials", c.phase_sweep.trials},
                         {"initial_roll_rad", c.phase_sweep.initial_roll_rad}};
  root["energy"] = {{"resolution", c.energy.resolution}};
  return root;
}

void apply_override(json& root, const std::string& assignment) {
  const auto [path, text] = split_override(assignment);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;  // bare words are strings
  }
  json* node = &root;
  std::stringstream ss(path);
  std::string key;
  std::vector<std::string> keys;
  while (std::getline(ss, key, '.')) {
    if (key.empty()) throw ConfigError("override '" + assignment + "': empty key");
    keys.push_back(key);
  }
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    if (node->is_null()) *node = json::object();
    if (!node->is_object()) throw ConfigError("override '" + assignment + "': '" + keys[i] + "' is not a section");
    node = &(*node)[keys[i]];
  }
  if (node->is_null()) *node = json::object();
  if (!node->is_object()) throw ConfigError("override '" + assignment + "': parent is not a section");
  (*node)[keys.back()] = value;
  // a shared wave number replaces separate ones already in the document
  if (keys.size() == 2 && keys[0] == "gait" && keys[1] == "n") {
    node->erase("n_y");
    node->erase("n_p");
  }
}

}  // namespace

bool OutputConfig::has(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

std::pair<std::string, std::string> split_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  return {assignment.substr(0, eq), assignment.substr(eq + 1)};
}

void validate_config(const RunConfig& c) {
  try {
    const RobotModel model = model_of(c);
    const GaitParamsd gait = gait_of(c);
    validate_gait(gait, model.joint_limit);
    const SimulationConfig& s = c.simulation;
    if (s.timestep_s) {
      if (!(*s.timestep_s > 0)) throw ConfigError("simulation.timestep_s must be positive");
      if (*s.timestep_s > gait.period() / 50 * (1 + 1e-12)) throw ConfigError("simulation.timestep_s exceeds T/50");
    } else if (s.steps_per_cycle < 50) {
      throw ConfigError("simulation.steps_per_cycle must be at least 50");
    }
    if (s.duration_cycles < 1) throw ConfigError("simulation.duration_cycles must be at least 1");
    if (!(s.perturbation_scale_rad >= 0)) throw ConfigError("simulation.perturbation_scale_rad must be >= 0");
    if (!(s.contact_band_m >= 0)) throw ConfigError("simulation.contact_band_m must be >= 0");
    if (!(s.hull_tolerance_m >= 0)) throw ConfigError("simulation.hull_tolerance_m must be >= 0");
    if (s.iteration_cap < 1) throw ConfigError("simulation.iteration_cap must be at least 1");
    if (!(s.free_point_weight > 0)) throw ConfigError("simulation.free_point_weight must be positive");
    for (const auto& f : c.output.formats) {
      if (f != "csv" && f != "svg") throw ConfigError("output.formats: unknown format '" + f + "'");
    }
    if (c.output.directory.empty()) throw ConfigError("output.directory must not be empty");
    if (c.sweep.workers < 0) throw ConfigError("sweep.workers must be >= 0");
    if (c.sweep.delta_d_rad.empty()) throw ConfigError("sweep.delta_d_rad must not be empty");
    std::set<std::string> names;
    for (const auto& v : variants_of(c)) {
      if (v.name.empty()) throw ConfigError("sweep.variants: every variant needs a name");
      if (!names.insert(v.name).second) throw ConfigError("sweep.variants: duplicate name '" + v.name + "'");
      make_grid(c.grid, gait.A_y, gait.delta_d, v.model.joint_limit);
    }
    if (c.phase_sweep.trials < 1) throw ConfigError("phase_sweep.trials must be at least 1");
    if (c.phase_sweep.amplitude_rad < 0 || c.phase_sweep.amplitude_rad > model.joint_limit * (1 + 1e-12)) {
      throw ConfigError("phase_sweep.amplitude_rad outside joint limits");
    }
    if (c.energy.resolution < 36) throw ConfigError("energy.resolution must be at least 36");
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
}

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (root.is_null()) root = json::object();
  for (const auto& o : overrides) apply_override(root, o);
  RunConfig c = from_json(root);
  validate_config(c);
  return c;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

std::string serialize_config(const RunConfig& config) { return to_json(config).dump(2) + "\n"; }

RobotModel model_of(const RunConfig& config) {
  try {
    return build_model(config.morphology);
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("morphology: ") + e.what());
  }
}

GaitParamsd gait_of(const RunConfig& config) {
  GaitParamsd g;
  g.A_y = config.gait.A_y_rad;
  g.A_p = config.gait.A_p_rad;
  g.omega = config.gait.omega_rad_s;
  g.n_y = config.gait.n_y;
  g.n_p = config.gait.n_p;
  g.delta_d = config.gait.delta_d_rad;
  g.N = config.morphology.num_modules;
  return g;
}

namespace {

SupportParams support_of(const SimulationConfig& s) {
  SupportParams p;
  p.contact_band = s.contact_band_m;
  p.hull_tolerance = s.hull_tolerance_m;
  p.iteration_cap = s.iteration_cap;
  p.free_point_weight = s.free_point_weight;
  return p;
}

int steps_per_cycle_of(const RunConfig& c) {
  if (!c.simulation.timestep_s) return c.simulation.steps_per_cycle;
  const double period = 2 * std::numbers::pi / c.gait.omega_rad_s;
  return static_cast<int>(std::lround(period / *c.simulation.timestep_s));
}

}  // namespace

TrialConfig trial_of(const RunConfig& config) {
  TrialConfig t;
  t.model = model_of(config);
  t.gait = gait_of(config);
  t.duration_cycles = config.simulation.duration_cycles;
  t.timestep = config.simulation.timestep_s ? *config.simulation.timestep_s
                                            : t.gait.period() / config.simulation.steps_per_cycle;
  t.initial_roll = config.simulation.initial_roll_rad;
  t.perturbation_seed = config.simulation.perturbation_seed;
  t.perturbation_scale = config.simulation.perturbation_scale_rad;
  t.support = support_of(config.simulation);
  return t;
}

std::vector<MorphologyVariant> variants_of(const RunConfig& config) {
  const RobotModel base = model_of(config);
  if (config.sweep.variants.empty()) return leg_length_variants(base);
  std::vector<MorphologyVariant> out;
  for (const auto& v : config.sweep.variants) {
    MorphologyConfig mc = config.morphology;
    mc.legs = v.legs;
    try {
      out.push_back({v.name, build_model(mc)});
    } catch (const ValidationError& e) {
      throw ConfigError("sweep variant '" + v.name + "': " + e.what());
    }
  }
  return out;
}

SweepSpec sweep_of(const RunConfig& config) {
  SweepSpec spec;
  spec.grid = config.grid;
  spec.A_y = config.gait.A_y_rad;
  spec.omega = config.gait.omega_rad_s;
  spec.delta_d = config.sweep.delta_d_rad;
  spec.variants = variants_of(config);
  spec.seed = config.sweep.seed;
  spec.workers = config.sweep.workers;
  spec.sim.steps_per_cycle = steps_per_cycle_of(config);
  spec.sim.duration_cycles = config.simulation.duration_cycles;
  spec.sim.initial_roll = config.sweep.initial_roll_rad;
  spec.sim.perturbation_scale = config.simulation.perturbation_scale_rad;
  spec.sim.support = support_of(config.simulation);
  return spec;
}

PhaseSweepSpec phase_sweep_of(const RunConfig& config) {
  PhaseSweepSpec spec;
  spec.model = model_of(config);
  spec.amplitude = config.phase_sweep.amplitude_rad;
  spec.n = config.phase_sweep.n;
  spec.omega = config.gait.omega_rad_s;
  spec.trials = config.phase_sweep.trials;
  spec.seed = config.sweep.seed;
  spec.workers = config.sweep.workers;
  spec.sim.steps_per_cycle = steps_per_cycle_of(config);
  spec.sim.duration_cycles = config.simulation.duration_cycles;
  spec.sim.initial_roll = config.phase_sweep.initial_roll_rad;
  spec.sim.perturbation_scale = config.simulation.perturbation_scale_rad;
  spec.sim.support = support_of(config.simulation);
  return spec;
}

}  // namespace rightsim
