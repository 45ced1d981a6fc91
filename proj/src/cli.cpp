#include "rightsim/cli.hpp"

#include "rightsim/config.hpp"
#include "rightsim/render.hpp"
#include "rightsim/results_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

namespace rightsim {

namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::vector<std::string> overrides;
};

RunConfig resolve_config(const GlobalOptions& g) {
  std::vector<std::string> overrides = g.overrides;
  if (g.out_dir) overrides.push_back("output.directory=" + nlohmann::json(*g.out_dir).dump());
  if (g.seed) {
    overrides.push_back("sweep.seed=" + std::to_string(*g.seed));
    overrides.push_back("simulation.perturbation_seed=" + std::to_string(*g.seed));
  }
  if (g.workers) overrides.push_back("sweep.workers=" + std::to_string(*g.workers));
  if (g.config_path.empty()) return parse_config("{}", overrides);
  try {
    return load_config(g.config_path, overrides);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
}

// Collects output files in memory so nothing is written when a run fails.
class OutputSet {
 public:
  explicit OutputSet(std::string dir) : dir_(std::move(dir)) {}
  void add(const std::string& name, std::string contents) { files_[name] = std::move(contents); }
  void commit(std::ostream& out) const {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory '" + dir_ + "': " + ec.message());
    for (const auto& [name, contents] : files_) write_text_file((fs::path(dir_) / name).string(), contents);
    out << "wrote " << files_.size() << " files to " << dir_ << "\n";
  }

 private:
  std::string dir_;
  std::map<std::string, std::string> files_;
};

std::string sanitize(const std::string& name) {
  std::string s;
  for (char c : name) s += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return s;
}

int cmd_simulate(const RunConfig& config, std::ostream& out) {
  const TrialConfig trial = trial_of(config);
  const Trajectory traj = simulate(trial);
  const TrialMetrics m = compute_metrics(traj);
  const Regime regime = classify_regime(m.dX, m.theta_dot);

  TrialRecord rec;
  rec.variant = trial.model.legs ? "legged" : "limbless";
  rec.leg_length = trial.model.legs ? trial.model.legs->length : 0.0;
  rec.leg_pairs = trial.model.legs ? trial.model.legs->pair_count : 0;
  rec.A_y = trial.gait.A_y;
  rec.A_p = trial.gait.A_p;
  rec.n = trial.gait.n_y;
  rec.delta_d = trial.gait.delta_d;
  rec.omega = trial.gait.omega;
  rec.seed = trial.perturbation_seed;
  rec.metrics = m;
  rec.regime = regime;

  OutputSet files(config.output.directory);
  if (config.output.has("csv")) {
    files.add("trajectory.csv", trajectory_csv(traj));
    files.add("metrics.csv", trials_csv({rec}));
    if (config.output.per_link_roll) files.add("trajectory_links.csv", link_roll_csv(traj));
  }
  files.add("trajectory.json", trajectory_sidecar(traj));
  files.commit(out);

  out << "dX=" << format_number(m.dX) << " BL/cycle theta_per_cycle=" << format_number(m.theta_per_cycle)
      << " rad theta_dot=" << format_number(m.theta_dot) << " rad/s regime=" << to_string(regime) << "\n";
  if (m.righting) out << "righted=" << (m.righting->righted ? "yes" : "no") << "\n";
  if (m.flags.any()) {
    out << "flags:" << (m.flags.saturated ? " saturated" : "") << (m.flags.collision ? " collision" : "")
        << (m.flags.unresolved ? " unresolved" : "") << "\n";
    return kExitFlagged;
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& config, std::ostream& out) {
  const SweepSpec spec = sweep_of(config);
  const SweepResult result = run_sweep(spec);
  OutputSet files(config.output.directory);
  if (config.output.has("csv")) {
    files.add("trials.csv", trials_csv(result.trials));
    files.add("cells.csv", cells_csv(result.diagrams));
  }
  if (config.output.has("svg")) {
    for (std::size_t i = 0; i < result.diagrams.size(); ++i) {
      const BehaviorDiagram& d = result.diagrams[i];
      std::string stem = sanitize(d.variant);
      if (spec.delta_d.size() > 1) stem += "_dd" + std::to_string(i % spec.delta_d.size());
      files.add(stem + "_dX.svg", render_svg(dx_heatmap(d)));
      files.add(stem + "_theta_dot.svg", render_svg(theta_dot_heatmap(d)));
      files.add(stem + "_regime.svg", render_regime_map(d));
    }
  }
  files.commit(out);

  int flagged = 0;
  for (const auto& t : result.trials) flagged += t.metrics.flags.any();
  for (const auto& d : result.diagrams) {
    out << d.variant << ": I=" << d.count(Regime::InPlaceSpin) << " II=" << d.count(Regime::PureSidewinding)
        << " III=" << d.count(Regime::RollingAssistedSidewinding) << " IV=" << d.count(Regime::KinematicSaturation)
        << " spin_capable=" << d.spin_capable_count() << " collision_cells=" << d.collision_cell_count() << "\n";
  }
  out << result.trials.size() << " trials, " << flagged << " flagged\n";
  return flagged ? kExitFlagged : kExitOk;
}

int cmd_phase_sweep(const RunConfig& config, std::ostream& out) {
  const PhaseSweepResult result = phase_offset_sweep(phase_sweep_of(config));
  OutputSet files(config.output.directory);
  if (config.output.has("csv")) {
    files.add("phase_sweep.csv", phase_sweep_csv(result));
    files.add("phase_trials.csv", trials_csv(result.trials));
  }
  if (config.output.has("svg")) files.add("phase_sweep.svg", render_phase_sweep(result));
  files.commit(out);
  int flagged = 0;
  for (const auto& r : result.rows) {
    out << "delta_d=" << format_number(r.delta_d) << " dX=" << format_number(r.dX.mean) << "+-"
        << format_number(r.dX.sem) << " theta_per_cycle=" << format_number(r.theta_per_cycle.mean) << "+-"
        << format_number(r.theta_per_cycle.sem) << "\n";
    flagged += r.flagged;
  }
  return flagged ? kExitFlagged : kExitOk;
}

int cmd_energy_barrier(const RunConfig& config, std::ostream& out) {
  SupportParams params;
  params.hull_tolerance = config.simulation.hull_tolerance_m;
  params.iteration_cap = config.simulation.iteration_cap;
  params.contact_band = config.simulation.contact_band_m;
  std::vector<EnergyRecord> records;
  for (const auto& v : variants_of(config)) {
    const JointVectord straight = JointVectord::Zero(v.model.joint_count());
    EnergyRecord r;
    r.variant = v.name;
    r.leg_length = v.model.legs ? v.model.legs->length : 0.0;
    r.leg_pairs = v.model.legs ? v.model.legs->pair_count : 0;
    r.profile = energy_barrier(v.model, straight, config.energy.resolution, params);
    records.push_back(std::move(r));
  }
  OutputSet files(config.output.directory);
  if (config.output.has("csv")) {
    files.add("energy_profile.csv", energy_profile_csv(records));
    files.add("energy_barrier.csv", energy_barrier_csv(records));
  }
  if (config.output.has("svg")) files.add("energy_profile.svg", render_energy_profiles(records));
  files.commit(out);
  bool unresolved = false;
  for (const auto& r : records) {
    out << r.variant << ": barrier=" << format_number(r.profile.barrier) << " m\n";
    unresolved = unresolved || r.profile.any_unresolved;
  }
  return unresolved ? kExitFlagged : kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasi-static simulator for self-righting and sidewinding of a legged elongate robot", "rightsim"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config_path, "Run configuration (JSON)");
  app.add_option("--out", g.out_dir, "Output directory (overrides output.directory)");
  app.add_option("--seed", g.seed, "Global seed (sweep.seed and simulation.perturbation_seed)");
  app.add_option("--workers", g.workers, "Worker threads for sweeps (0 = all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--set", g.overrides, "Override a config key, e.g. --set gait.A_p_rad=0.5");

  bool print_config = false;
  auto* sim = app.add_subcommand("simulate", "Run one trial and write its trajectory");
  auto* sweep = app.add_subcommand("sweep", "Grid sweep over (A_p, n) for every morphology variant");
  auto* phase = app.add_subcommand("phase-sweep", "Sweep the yaw/pitch phase offset");
  auto* energy = app.add_subcommand("energy-barrier", "Roll energy profiles for every variant");
  auto* validate = app.add_subcommand("validate-config", "Check a configuration and exit");
  validate->add_flag("--print", print_config, "Print the canonical configuration");
  for (auto* s : {sim, sweep, phase, energy, validate}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  RunConfig config;
  try {
    config = resolve_config(g);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (*validate) {
      if (print_config) out << serialize_config(config);
      out << "configuration ok\n";
      return kExitOk;
    }
    if (*sim) return cmd_simulate(config, out);
    if (*sweep) return cmd_sweep(config, out);
    if (*phase) return cmd_phase_sweep(config, out);
    if (*energy) return cmd_energy_barrier(config, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace rightsim
