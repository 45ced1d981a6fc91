#ifndef RIGHTSIM_CONFIG_HPP
#define RIGHTSIM_CONFIG_HPP

// Run configuration: one JSON document with nested sections. Angles carry a
// _rad suffix, lengths _m, masses _kg, rates _rad_s, durations _s.

#include "rightsim/experiment.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rightsim {

struct GaitConfig {
  double A_y_rad = std::numbers::pi / 4;
  double A_p_rad = std::numbers::pi / 6;
  double omega_rad_s = std::numbers::pi / 2;
  double n_y = 0.6;
  double n_p = 0.6;
  double delta_d_rad = std::numbers::pi / 2;

  bool operator==(const GaitConfig&) const = default;
};

struct SimulationConfig {
  int steps_per_cycle = 200;
  std::optional<double> timestep_s;  // overrides steps_per_cycle when set
  int duration_cycles = 3;
  double initial_roll_rad = 0;
  std::uint64_t perturbation_seed = 0;
  double perturbation_scale_rad = 0.02;
  double contact_band_m = 1e-4;
  double hull_tolerance_m = 1e-6;
  int iteration_cap = 100;
  double free_point_weight = 1e-3;

  bool operator==(const SimulationConfig&) const = default;
};

struct OutputConfig {
  std::string directory = "out";
  std::vector<std::string> formats{"csv", "svg"};
  bool per_link_roll = false;

  bool has(const std::string& format) const;
  bool operator==(const OutputConfig&) const = default;
};

struct VariantConfig {
  std::string name;
  std::optional<LegConfig> legs;  // empty: limbless

  bool operator==(const VariantConfig&) const = default;
};

struct SweepConfig {
  std::uint64_t seed = 1;
  int workers = 0;
  std::vector<double> delta_d_rad{std::numbers::pi / 2};
  double initial_roll_rad = std::numbers::pi;
  std::vector<VariantConfig> variants;  // empty: limbless, short, medium, long

  bool operator==(const SweepConfig&) const = default;
};

struct PhaseSweepConfig {
  double amplitude_rad = std::numbers::pi / 3;
  double n = 0;
  int trials = 5;
  double initial_roll_rad = 0;

  bool operator==(const PhaseSweepConfig&) const = default;
};

struct EnergyConfig {
  int resolution = 72;

  bool operator==(const EnergyConfig&) const = default;
};

struct RunConfig {
  MorphologyConfig morphology;
  GaitConfig gait;
  GridSpec grid;
  SimulationConfig simulation;
  OutputConfig output;
  SweepConfig sweep;
  PhaseSweepConfig phase_sweep;
  EnergyConfig energy;

  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates a configuration document. Missing keys take their
/// defaults; unknown keys and ill-typed values throw ConfigError.
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
/// Reads a file; IoError when unreadable.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});
/// Canonical JSON (every key written); parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Raises ConfigError for semantically invalid combinations.
void validate_config(const RunConfig& config);

RobotModel model_of(const RunConfig& config);
GaitParamsd gait_of(const RunConfig& config);
TrialConfig trial_of(const RunConfig& config);
SweepSpec sweep_of(const RunConfig& config);
PhaseSweepSpec phase_sweep_of(const RunConfig& config);
std::vector<MorphologyVariant> variants_of(const RunConfig& config);

/// Splits "a.b.c=value" into path and value; ConfigError when malformed.
std::pair<std::string, std::string> split_override(const std::string& assignment);

}  // namespace rightsim

#endif  // RIGHTSIM_CONFIG_HPP
