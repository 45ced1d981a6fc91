#include "rightsim/gait.hpp"

namespace rightsim {

ParameterGrid make_grid(const GridSpec& spec, double A_y, double delta_d, double joint_limit) {
  if (!(spec.a_p_start_rad > 0) || !(spec.a_p_step_rad > 0) || spec.a_p_count < 1) {
    throw ValidationError("grid: A_p start, step and count must be positive");
  }
  if (!(spec.n_start > 0) || !(spec.n_step > 0) || spec.n_count < 1) {
    throw ValidationError("grid: n start, step and count must be positive");
  }
  if (spec.trials_per_cell < 1) throw ValidationError("grid: trials_per_cell must be at least 1");

  ParameterGrid grid;
  grid.A_y = A_y;
  grid.delta_d = delta_d;
  grid.trials_per_cell = spec.trials_per_cell;
  for (int a = 0; a < spec.a_p_count; ++a) grid.a_p_values.push_back(spec.a_p_start_rad + a * spec.a_p_step_rad);
  for (int k = 0; k < spec.n_count; ++k) grid.n_values.push_back(spec.n_start + k * spec.n_step);

  const double tol = 1e-12 * joint_limit;
  if (grid.a_p_values.back() > joint_limit + tol) {
    throw ValidationError("grid: largest A_p " + std::to_string(grid.a_p_values.back()) +
                          " exceeds joint limit " + std::to_string(joint_limit));
  }
  if (A_y < 0 || A_y > joint_limit + tol) throw ValidationError("grid: A_y outside joint limits");

  for (int a = 0; a < spec.a_p_count; ++a) {
    for (int k = 0; k < spec.n_count; ++k) {
      grid.cells.push_back({a, k, grid.a_p_values[a], grid.n_values[k]});
    }
  }
  return grid;
}

std::vector<double> phase_offset_set() {
  std::vector<double> out;
  for (int k = -2; k <= 2; ++k) out.push_back(k * std::numbers::pi / 4);
  return out;
}

}  // namespace rightsim
