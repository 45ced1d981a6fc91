#ifndef RIGHTSIM_GAIT_HPP
#define RIGHTSIM_GAIT_HPP

// Superposed yaw/pitch traveling waves:
//   yaw_i(t)   = A_y sin(w t + 2 pi i n_y / N + dd)
//   pitch_i(t) = A_p sin(w t + 2 pi i n_p / N)
// for modules i = 1..N. With A_y = A_p, n_y = n_p = 0, dd = -pi/2 this is
// the rolling gait yaw = A sin(w t), pitch = A cos(w t).

#include "rightsim/errors.hpp"
#include "rightsim/morphology.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

namespace rightsim {

template <typename Scalar>
struct GaitParams {
  Scalar A_y = Scalar(std::numbers::pi / 4);
  Scalar A_p = Scalar(std::numbers::pi / 6);
  Scalar omega = Scalar(std::numbers::pi / 2);
  Scalar n_y = Scalar(0.6);
  Scalar n_p = Scalar(0.6);
  int N = 9;
  Scalar delta_d = Scalar(std::numbers::pi / 2);

  Scalar period() const { return Scalar(2 * std::numbers::pi) / omega; }
};

using GaitParamsd = GaitParams<double>;

/// Throws ValidationError unless amplitudes lie in [0, joint_limit],
/// omega > 0 and N >= 1.
template <typename Scalar>
void validate_gait(const GaitParams<Scalar>& p, double joint_limit) {
  auto finite = [](Scalar v) { return std::isfinite(static_cast<double>(v)); };
  if (!finite(p.A_y) || !finite(p.A_p) || !finite(p.omega) || !finite(p.n_y) || !finite(p.n_p) ||
      !finite(p.delta_d)) {
    throw ValidationError("gait parameters must be finite");
  }
  if (p.A_y < 0 || p.A_p < 0) throw ValidationError("gait amplitudes must be non-negative");
  const double tol = joint_limit * 1e-12;
  if (static_cast<double>(p.A_y) > joint_limit + tol || static_cast<double>(p.A_p) > joint_limit + tol) {
    throw ValidationError("gait amplitude exceeds joint limit");
  }
  if (!(p.omega > 0)) throw ValidationError("gait omega must be positive");
  if (p.N < 1) throw ValidationError("gait N must be at least 1");
}

/// Per-joint phase offsets added inside the sine arguments; empty means none.
template <typename Scalar>
JointVector<Scalar> eval_gait(const GaitParams<Scalar>& p, Scalar t, const JointVector<Scalar>& phase_jitter = {}) {
  JointVector<Scalar> q(2 * p.N);
  const Scalar two_pi = Scalar(2 * std::numbers::pi);
  const bool jitter = phase_jitter.size() == 2 * p.N;
  for (int i = 1; i <= p.N; ++i) {
    const Scalar base = p.omega * t;
    const Scalar yaw_phase = base + two_pi * Scalar(i) * p.n_y / Scalar(p.N) + p.delta_d +
                             (jitter ? phase_jitter[yaw_joint_of(i) - 1] : Scalar(0));
    const Scalar pitch_phase =
        base + two_pi * Scalar(i) * p.n_p / Scalar(p.N) + (jitter ? phase_jitter[pitch_joint_of(i) - 1] : Scalar(0));
    q[yaw_joint_of(i) - 1] = p.A_y * std::sin(yaw_phase);
    q[pitch_joint_of(i) - 1] = p.A_p * std::sin(pitch_phase);
  }
  return q;
}

template <typename Scalar>
JointVector<Scalar> rolling_gait(Scalar A, Scalar omega, int N, Scalar t) {
  if (A < 0) throw ValidationError("rolling amplitude must be non-negative");
  JointVector<Scalar> q(2 * N);
  const Scalar s = A * std::sin(omega * t);
  const Scalar c = A * std::cos(omega * t);
  for (int i = 1; i <= N; ++i) {
    q[yaw_joint_of(i) - 1] = s;
    q[pitch_joint_of(i) - 1] = c;
  }
  return q;
}

/// The rolling gait expressed as a member of the general family.
template <typename Scalar>
GaitParams<Scalar> rolling_params(Scalar A, Scalar omega, int N) {
  GaitParams<Scalar> p;
  p.A_y = A;
  p.A_p = A;
  p.omega = omega;
  p.n_y = 0;
  p.n_p = 0;
  p.N = N;
  p.delta_d = Scalar(-std::numbers::pi / 2);
  return p;
}

/// Clamps every angle to [-limit, limit]; returns the number clamped.
template <typename Scalar>
int clamp_joints(JointVector<Scalar>& q, double limit) {
  int clamped = 0;
  const Scalar lim = Scalar(limit);
  for (int j = 0; j < q.size(); ++j) {
    if (q[j] > lim) {
      q[j] = lim;
      ++clamped;
    } else if (q[j] < -lim) {
      q[j] = -lim;
      ++clamped;
    }
  }
  return clamped;
}

struct GridCell {
  int a_p_index = 0;
  int n_index = 0;
  double A_p = 0;
  double n = 0;
};

struct GridSpec {
  double a_p_start_rad = std::numbers::pi / 12;
  double a_p_step_rad = std::numbers::pi / 12;
  int a_p_count = 5;
  double n_start = 0.6;
  double n_step = 0.15;
  int n_count = 6;
  int trials_per_cell = 5;

  bool operator==(const GridSpec&) const = default;
};

struct ParameterGrid {
  std::vector<double> a_p_values;
  std::vector<double> n_values;
  std::vector<GridCell> cells;  // row-major: A_p outer, n inner
  double A_y = std::numbers::pi / 4;
  double delta_d = std::numbers::pi / 2;
  int trials_per_cell = 5;

  const GridCell& cell(int a_p_index, int n_index) const {
    return cells[static_cast<std::size_t>(a_p_index) * n_values.size() + n_index];
  }
};

/// Rectangular (A_p, n) lattice; rejects grids whose largest A_p (or the
/// fixed A_y) exceeds `joint_limit`.
ParameterGrid make_grid(const GridSpec& spec, double A_y, double delta_d, double joint_limit);

/// Yaw/pitch phase offsets -pi/2 .. pi/2 in steps of pi/4.
std::vector<double> phase_offset_set();

}  // namespace rightsim

#endif  // RIGHTSIM_GAIT_HPP
