#ifndef RIGHTSIM_RENDER_HPP
#define RIGHTSIM_RENDER_HPP

// Standalone SVG figures: behavior-diagram heatmaps, regime maps, the
// phase-offset bar chart and energy profiles.

#include "rightsim/experiment.hpp"
#include "rightsim/results_io.hpp"

#include <array>
#include <string>
#include <vector>

namespace rightsim {

struct Rgb {
  int r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

std::string to_hex(const Rgb& c);

/// Linear map of [min, max] onto a perceptually ordered palette; a
/// degenerate range maps everything to the palette midpoint.
struct ColorScale {
  double min = 0;
  double max = 1;

  Rgb color(double value) const;
};

struct HeatmapDocument {
  std::string title;
  std::string x_label;  // n axis
  std::string y_label;  // A_p axis
  std::string legend_label;
  std::vector<double> x_values;
  std::vector<double> y_values;
  std::vector<double> values;  // row-major, y outer
  std::vector<Rgb> colors;
  ColorScale scale;
};

/// Scalar per cell selected from a diagram; legend bounds equal the data extremes.
HeatmapDocument make_heatmap(const BehaviorDiagram& diagram, double (*value)(const CellSummary&),
                             const std::string& title, const std::string& legend_label);

HeatmapDocument dx_heatmap(const BehaviorDiagram& diagram);
HeatmapDocument theta_dot_heatmap(const BehaviorDiagram& diagram);

std::string render_svg(const HeatmapDocument& doc);

Rgb regime_color(Regime regime);
std::string render_regime_map(const BehaviorDiagram& diagram);

std::string render_phase_sweep(const PhaseSweepResult& result);
std::string render_energy_profiles(const std::vector<EnergyRecord>& records);

}  // namespace rightsim

#endif  // RIGHTSIM_RENDER_HPP
