#ifndef RIGHTSIM_RESULTS_IO_HPP
#define RIGHTSIM_RESULTS_IO_HPP

// CSV and JSON writers for trajectories, per-trial results and summaries.
// Numbers use a fixed round-trip format so identical runs give identical bytes.

#include "rightsim/experiment.hpp"

#include <string>
#include <vector>

namespace rightsim {

/// Shortest round-trip text for a double ("nan"/"inf" for non-finite).
std::string format_number(double value);

/// Writes `contents` through a temporary file and renames it into place;
/// IoError on failure.
void write_text_file(const std::string& path, const std::string& contents);

std::string trajectory_csv(const Trajectory& traj);
/// One column per link: t,roll_0,...,roll_{L-1}.
std::string link_roll_csv(const Trajectory& traj);
/// JSON echo of the full TrialConfig plus the trial flags.
std::string trajectory_sidecar(const Trajectory& traj);

/// Per-trial results with the documented column order.
std::string trials_csv(const std::vector<TrialRecord>& trials);
std::string cells_csv(const std::vector<BehaviorDiagram>& diagrams);
std::string phase_sweep_csv(const PhaseSweepResult& result);

struct EnergyRecord {
  std::string variant;
  double leg_length = 0;
  int leg_pairs = 0;
  EnergyProfile profile;
};

std::string energy_profile_csv(const std::vector<EnergyRecord>& records);
std::string energy_barrier_csv(const std::vector<EnergyRecord>& records);

}  // namespace rightsim

#endif  // RIGHTSIM_RESULTS_IO_HPP
