#include "rightsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace rightsim {

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::InPlaceSpin:
      return "IN_PLACE_SPIN";
    case Regime::KinematicSaturation:
      return "KINEMATIC_SATURATION";
    case Regime::PureSidewinding:
      return "PURE_SIDEWINDING";
    case Regime::RollingAssistedSidewinding:
      return "ROLLING_ASSISTED_SIDEWINDING";
  }
  return "?";
}

std::string regime_code(Regime regime) {
  switch (regime) {
    case Regime::InPlaceSpin:
      return "I";
    case Regime::PureSidewinding:
      return "II";
    case Regime::RollingAssistedSidewinding:
      return "III";
    case Regime::KinematicSaturation:
      return "IV";
  }
  return "?";
}

Regime classify_regime(double dX, double theta_dot, const RegimeThresholds& th) {
  if (!std::isfinite(dX) || !std::isfinite(theta_dot)) throw ValidationError("classify_regime: non-finite input");
  if (dX < 0) throw ValidationError("classify_regime: dX must be non-negative");
  const bool fast = dX >= th.dX;
  const bool rotating = std::abs(theta_dot) > th.theta_dot;
  if (fast) return rotating ? Regime::RollingAssistedSidewinding : Regime::PureSidewinding;
  return rotating ? Regime::InPlaceSpin : Regime::KinematicSaturation;
}

Stats aggregate_stats(const std::vector<double>& samples) {
  if (samples.empty()) throw ValidationError("aggregate_stats: no samples");
  const double n = static_cast<double>(samples.size());
  double sum = 0;
  for (double v : samples) sum += v;
  Stats s;
  s.mean = sum / n;
  if (samples.size() > 1) {
    double ss = 0;
    for (double v : samples) ss += (v - s.mean) * (v - s.mean);
    s.sem = std::sqrt(ss / (n - 1)) / std::sqrt(n);
  }
  return s;
}

std::vector<MorphologyVariant> leg_length_variants(const RobotModel& base) {
  RobotModel limbless = base;
  limbless.legs.reset();
  std::vector<MorphologyVariant> out{{"limbless", limbless}};
  const LegLengthSet lengths = leg_lengths_from_ratios(limbless);
  for (LegPreset preset : {LegPreset::Short, LegPreset::Medium, LegPreset::Long}) {
    MorphologyConfig mc;
    mc.num_modules = base.num_modules;
    mc.link_length_m = base.link_length;
    mc.link_radius_m = base.link_radius;
    mc.link_mass_kg = base.link_mass;
    mc.head_tail_length_m = base.head_tail_length;
    mc.joint_limit_rad = base.joint_limit;
    LegConfig lc;
    lc.length_m = lengths.of(preset);
    lc.pair_count = base.num_modules;
    lc.attachment = LegAttachment::All;
    mc.legs = lc;
    out.push_back({to_string(preset), build_model(mc)});
  }
  return out;
}

std::vector<MorphologyVariant> leg_number_variants(const RobotModel& base, double leg_length) {
  std::vector<MorphologyVariant> out;
  for (int pairs : {9, 5, 2}) {
    if (pairs > base.num_modules) continue;
    RobotModel m = base;
    LegSpec legs;
    legs.length = leg_length;
    legs.pair_count = pairs;
    legs.attachment_modules = evenly_spaced_modules(base.num_modules, pairs);
    m.legs = legs;
    validate_model(m);
    out.push_back({std::to_string(pairs) + "_pairs", m});
  }
  return out;
}

std::uint64_t trial_seed(std::uint64_t global_seed, std::size_t cell, int trial) {
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(global_seed);
  h = mix(h ^ static_cast<std::uint64_t>(cell));
  h = mix(h ^ static_cast<std::uint64_t>(trial));
  return h;
}

int BehaviorDiagram::count(Regime regime) const {
  return static_cast<int>(std::count_if(cells.begin(), cells.end(), [&](const CellSummary& c) { return c.regime == regime; }));
}

int BehaviorDiagram::spin_capable_count() const {
  return static_cast<int>(std::count_if(cells.begin(), cells.end(), [](const CellSummary& c) { return spin_capable(c.regime); }));
}

int BehaviorDiagram::collision_cell_count() const {
  return static_cast<int>(std::count_if(cells.begin(), cells.end(), [](const CellSummary& c) { return c.collision > 0; }));
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& f) {
  if (count == 0) return;
  std::size_t threads = workers > 0 ? static_cast<std::size_t>(workers) : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, count);
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

namespace {

TrialConfig make_trial(const RobotModel& model, const GaitParamsd& gait, const SimulationSettings& sim,
                       std::uint64_t seed) {
  TrialConfig tc;
  tc.model = model;
  tc.gait = gait;
  tc.duration_cycles = sim.duration_cycles;
  tc.timestep = gait.period() / sim.steps_per_cycle;
  tc.initial_roll = sim.initial_roll;
  tc.perturbation_seed = seed;
  tc.perturbation_scale = sim.perturbation_scale;
  tc.support = sim.support;
  return tc;
}

double leg_length_of(const RobotModel& m) { return m.legs ? m.legs->length : 0.0; }
int leg_pairs_of(const RobotModel& m) { return m.legs ? m.legs->pair_count : 0; }

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.variants.empty()) throw ValidationError("sweep: at least one morphology variant required");
  if (spec.delta_d.empty()) throw ValidationError("sweep: at least one phase offset required");
  if (spec.sim.steps_per_cycle < 50) throw ValidationError("sweep: steps_per_cycle must be at least 50");

  std::vector<ParameterGrid> grids;
  for (const auto& v : spec.variants) {
    validate_model(v.model);
    for (double dd : spec.delta_d) grids.push_back(make_grid(spec.grid, spec.A_y, dd, v.model.joint_limit));
  }
  const std::size_t cells_per_grid = grids.front().cells.size();
  const int trials = spec.grid.trials_per_cell;
  const std::size_t per_variant = spec.delta_d.size() * cells_per_grid * trials;

  SweepResult result;
  result.trials.resize(spec.variants.size() * per_variant);
  for (std::size_t v = 0; v < spec.variants.size(); ++v) {
    for (std::size_t d = 0; d < spec.delta_d.size(); ++d) {
      const ParameterGrid& grid = grids[v * spec.delta_d.size() + d];
      for (std::size_t c = 0; c < cells_per_grid; ++c) {
        for (int t = 0; t < trials; ++t) {
          TrialRecord& r = result.trials[v * per_variant + (d * cells_per_grid + c) * trials + t];
          r.variant = spec.variants[v].name;
          r.variant_index = static_cast<int>(v);
          r.delta_index = static_cast<int>(d);
          r.cell_index = static_cast<int>(c);
          r.trial = t;
          r.leg_length = leg_length_of(spec.variants[v].model);
          r.leg_pairs = leg_pairs_of(spec.variants[v].model);
          r.A_y = spec.A_y;
          r.A_p = grid.cells[c].A_p;
          r.n = grid.cells[c].n;
          r.delta_d = spec.delta_d[d];
          r.omega = spec.omega;
          r.seed = trial_seed(spec.seed, d * cells_per_grid + c, t);
        }
      }
    }
  }

  parallel_for(result.trials.size(), spec.workers, [&](std::size_t i) {
    TrialRecord& r = result.trials[i];
    const RobotModel& model = spec.variants[r.variant_index].model;
    GaitParamsd gait;
    gait.A_y = r.A_y;
    gait.A_p = r.A_p;
    gait.n_y = r.n;
    gait.n_p = r.n;
    gait.omega = r.omega;
    gait.N = model.num_modules;
    gait.delta_d = r.delta_d;
    r.metrics = compute_metrics(simulate(make_trial(model, gait, spec.sim, r.seed)), spec.righting);
    r.regime = classify_regime(r.metrics.dX, r.metrics.theta_dot, spec.thresholds);
  });

  for (std::size_t v = 0; v < spec.variants.size(); ++v) {
    for (std::size_t d = 0; d < spec.delta_d.size(); ++d) {
      const ParameterGrid& grid = grids[v * spec.delta_d.size() + d];
      BehaviorDiagram diagram;
      diagram.variant = spec.variants[v].name;
      diagram.leg_length = leg_length_of(spec.variants[v].model);
      diagram.leg_pairs = leg_pairs_of(spec.variants[v].model);
      diagram.A_y = spec.A_y;
      diagram.delta_d = spec.delta_d[d];
      diagram.a_p_values = grid.a_p_values;
      diagram.n_values = grid.n_values;
      for (std::size_t c = 0; c < cells_per_grid; ++c) {
        CellSummary cs;
        cs.cell = grid.cells[c];
        std::vector<double> dx, td, tc;
        for (int t = 0; t < trials; ++t) {
          const TrialRecord& r = result.trials[v * per_variant + (d * cells_per_grid + c) * trials + t];
          dx.push_back(r.metrics.dX);
          td.push_back(r.metrics.theta_dot);
          tc.push_back(r.metrics.theta_per_cycle);
          cs.saturated += r.metrics.flags.saturated;
          cs.collision += r.metrics.flags.collision;
          cs.unresolved += r.metrics.flags.unresolved;
          cs.righted += r.metrics.righting && r.metrics.righting->righted;
        }
        cs.trials = trials;
        cs.dX = aggregate_stats(dx);
        cs.theta_dot = aggregate_stats(td);
        cs.theta_per_cycle = aggregate_stats(tc);
        cs.regime = classify_regime(cs.dX.mean, cs.theta_dot.mean, spec.thresholds);
        diagram.cells.push_back(cs);
      }
      result.diagrams.push_back(std::move(diagram));
    }
  }
  return result;
}

PhaseSweepResult phase_offset_sweep(const PhaseSweepSpec& spec) {
  validate_model(spec.model);
  if (spec.trials < 1) throw ValidationError("phase sweep: trials must be at least 1");
  if (spec.amplitude < 0 || spec.amplitude > spec.model.joint_limit * (1 + 1e-12)) {
    throw ValidationError("phase sweep: amplitude outside joint limits");
  }
  const std::vector<double> offsets = phase_offset_set();
  PhaseSweepResult out;
  out.trials.resize(offsets.size() * spec.trials);
  for (std::size_t d = 0; d < offsets.size(); ++d) {
    for (int t = 0; t < spec.trials; ++t) {
      TrialRecord& r = out.trials[d * spec.trials + t];
      r.variant = spec.model.legs ? "legged" : "limbless";
      r.delta_index = static_cast<int>(d);
      r.trial = t;
      r.leg_length = leg_length_of(spec.model);
      r.leg_pairs = leg_pairs_of(spec.model);
      r.A_y = r.A_p = spec.amplitude;
      r.n = spec.n;
      r.delta_d = offsets[d];
      r.omega = spec.omega;
      r.seed = trial_seed(spec.seed, d, t);
    }
  }
  parallel_for(out.trials.size(), spec.workers, [&](std::size_t i) {
    TrialRecord& r = out.trials[i];
    GaitParamsd gait;
    gait.A_y = gait.A_p = spec.amplitude;
    gait.n_y = gait.n_p = spec.n;
    gait.omega = spec.omega;
    gait.N = spec.model.num_modules;
    gait.delta_d = r.delta_d;
    r.metrics = compute_metrics(simulate(make_trial(spec.model, gait, spec.sim, r.seed)));
    r.regime = classify_regime(r.metrics.dX, r.metrics.theta_dot);
  });
  for (std::size_t d = 0; d < offsets.size(); ++d) {
    PhaseSweepRow row;
    row.delta_d = offsets[d];
    std::vector<double> dx, tc, td;
    for (int t = 0; t < spec.trials; ++t) {
      const TrialRecord& r = out.trials[d * spec.trials + t];
      dx.push_back(r.metrics.dX);
      tc.push_back(r.metrics.theta_per_cycle);
      td.push_back(r.metrics.theta_dot);
      row.flagged += r.metrics.flags.any();
    }
    row.dX = aggregate_stats(dx);
    row.theta_per_cycle = aggregate_stats(tc);
    row.theta_dot = aggregate_stats(td);
    out.rows.push_back(row);
  }
  return out;
}

PhaseSweepResult phase_offset_sweep(const RobotModel& model) {
  PhaseSweepSpec spec;
  spec.model = model;
  return phase_offset_sweep(spec);
}

}  // namespace rightsim
