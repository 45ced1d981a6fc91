#ifndef RIGHTSIM_EXPERIMENT_HPP
#define RIGHTSIM_EXPERIMENT_HPP

#include "rightsim/metrics.hpp"

#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace rightsim {

enum class Regime { InPlaceSpin, KinematicSaturation, PureSidewinding, RollingAssistedSidewinding };

std::string to_string(Regime regime);
/// Roman-numeral code: I spin, II pure sidewinding, III rolling-assisted, IV saturation.
std::string regime_code(Regime regime);

struct RegimeThresholds {
  double dX = 0.3;         // BL/cycle
  double theta_dot = 0.5;  // rad/s, compared against |theta_dot|
};

/// Threshold classification; dX == 0.3 counts as fast, |theta_dot| == 0.5 as
/// not rotating. Throws ValidationError on non-finite input or dX < 0.
Regime classify_regime(double dX, double theta_dot, const RegimeThresholds& thresholds = {});

/// Regimes with appreciable axial rotation (I and III).
inline bool spin_capable(Regime r) {
  return r == Regime::InPlaceSpin || r == Regime::RollingAssistedSidewinding;
}

struct Stats {
  double mean = 0;
  double sem = 0;
  bool operator==(const Stats&) const = default;
};

/// Mean and standard error (n - 1 denominator); SEM is 0 for one sample.
Stats aggregate_stats(const std::vector<double>& samples);

struct MorphologyVariant {
  std::string name;
  RobotModel model;
};

/// Limbless, short, medium and long legs with nine pairs each.
std::vector<MorphologyVariant> leg_length_variants(const RobotModel& base);
/// 9, 5 and 2 leg pairs of the given length.
std::vector<MorphologyVariant> leg_number_variants(const RobotModel& base, double leg_length);

struct SimulationSettings {
  int steps_per_cycle = 200;
  int duration_cycles = 3;
  double initial_roll = std::numbers::pi;
  double perturbation_scale = 0.02;
  SupportParams support;
};

struct SweepSpec {
  GridSpec grid;
  double A_y = std::numbers::pi / 4;
  double omega = std::numbers::pi / 2;
  std::vector<double> delta_d{std::numbers::pi / 2};
  std::vector<MorphologyVariant> variants;
  std::uint64_t seed = 1;
  SimulationSettings sim;
  int workers = 0;  // 0: hardware concurrency
  RightingParams righting;
  RegimeThresholds thresholds;
};

/// Seed of one trial; `cell` counts across the delta_d list so that distinct
/// phase offsets never share a seed.
std::uint64_t trial_seed(std::uint64_t global_seed, std::size_t cell, int trial);

struct TrialRecord {
  std::string variant;
  int variant_index = 0;
  int delta_index = 0;
  int cell_index = 0;
  int trial = 0;
  double leg_length = 0;
  int leg_pairs = 0;
  double A_y = 0, A_p = 0, n = 0, delta_d = 0, omega = 0;
  std::uint64_t seed = 0;
  TrialMetrics metrics;
  Regime regime = Regime::KinematicSaturation;
};

struct CellSummary {
  GridCell cell;
  Stats dX;
  Stats theta_dot;
  Stats theta_per_cycle;
  Regime regime = Regime::KinematicSaturation;
  int trials = 0;
  int saturated = 0;
  int collision = 0;
  int unresolved = 0;
  int righted = 0;
};

struct BehaviorDiagram {
  std::string variant;
  double leg_length = 0;
  int leg_pairs = 0;
  double A_y = 0;
  double delta_d = 0;
  std::vector<double> a_p_values;
  std::vector<double> n_values;
  std::vector<CellSummary> cells;  // row-major: A_p outer, n inner

  const CellSummary& cell(int a_p_index, int n_index) const {
    return cells[static_cast<std::size_t>(a_p_index) * n_values.size() + n_index];
  }
  int count(Regime regime) const;
  int spin_capable_count() const;
  int collision_cell_count() const;
};

struct SweepResult {
  std::vector<TrialRecord> trials;        // ordered by variant, delta, cell, trial
  std::vector<BehaviorDiagram> diagrams;  // one per variant and phase offset
};

/// Runs f(0..count-1) on `workers` threads (0: hardware concurrency).
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& f);

/// Grid sweep over every variant and phase offset. Trial failures are
/// recorded as flags.
SweepResult run_sweep(const SweepSpec& spec);

struct PhaseSweepSpec {
  RobotModel model;
  double amplitude = std::numbers::pi / 3;
  double n = 0;
  double omega = std::numbers::pi / 2;
  int trials = 5;
  std::uint64_t seed = 1;
  SimulationSettings sim{200, 3, 0.0, 0.02, {}};
  int workers = 0;
};

struct PhaseSweepRow {
  double delta_d = 0;
  Stats dX;
  Stats theta_per_cycle;
  Stats theta_dot;
  int flagged = 0;
};

struct PhaseSweepResult {
  std::vector<PhaseSweepRow> rows;
  std::vector<TrialRecord> trials;
};

/// Trials at every offset of phase_offset_set() with A_y = A_p = amplitude.
PhaseSweepResult phase_offset_sweep(const PhaseSweepSpec& spec);
PhaseSweepResult phase_offset_sweep(const RobotModel& model);

}  // namespace rightsim

#endif  // RIGHTSIM_EXPERIMENT_HPP
