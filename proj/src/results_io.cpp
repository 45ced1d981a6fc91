#include "rightsim/results_io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace rightsim {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_text_file(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot move '" + tmp.string() + "' to '" + path + "': " + ec.message());
}

namespace {

const char* flag(bool b) { return b ? "1" : "0"; }

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << "t,com_x,com_y,com_z,mean_roll,contact_count,clamped,collision\n";
  for (const auto& s : traj.samples) {
    os << format_number(s.time) << ',' << format_number(s.com.x()) << ',' << format_number(s.com.y()) << ','
       << format_number(s.com.z()) << ',' << format_number(s.mean_roll()) << ',' << s.contact_count() << ','
       << flag(s.clamped) << ',' << flag(s.collision) << '\n';
  }
  return os.str();
}

std::string link_roll_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << 't';
  const std::size_t links = traj.samples.empty() ? 0 : traj.samples.front().link_roll.size();
  for (std::size_t k = 0; k < links; ++k) os << ",roll_" << k;
  os << '\n';
  for (const auto& s : traj.samples) {
    os << format_number(s.time);
    for (double r : s.link_roll) os << ',' << format_number(r);
    os << '\n';
  }
  return os.str();
}

std::string trajectory_sidecar(const Trajectory& traj) {
  using nlohmann::json;
  const TrialConfig& c = traj.config;
  json model = {{"num_modules", c.model.num_modules},     {"link_length_m", c.model.link_length},
                {"link_radius_m", c.model.link_radius},   {"link_mass_kg", c.model.link_mass},
                {"head_tail_length_m", c.model.head_tail_length}, {"joint_limit_rad", c.model.joint_limit},
                {"body_length_m", c.model.body_length()}, {"legs", nullptr}};
  if (c.model.legs) {
    model["legs"] = {{"length_m", c.model.legs->length},
                     {"pair_count", c.model.legs->pair_count},
                     {"attachment_modules", c.model.legs->attachment_modules},
                     {"splay_rad", c.model.legs->splay_angle},
                     {"tip_radius_m", c.model.legs->tip_radius}};
  }
  json gait = {{"A_y_rad", c.gait.A_y}, {"A_p_rad", c.gait.A_p}, {"omega_rad_s", c.gait.omega},
               {"n_y", c.gait.n_y},     {"n_p", c.gait.n_p},     {"N", c.gait.N},
               {"delta_d_rad", c.gait.delta_d}};
  json support = {{"contact_band_m", c.support.contact_band},
                  {"hull_tolerance_m", c.support.hull_tolerance},
                  {"iteration_cap", c.support.iteration_cap},
                  {"free_point_weight", c.support.free_point_weight}};
  json doc = {{"model", model},
              {"gait", gait},
              {"duration_cycles", c.duration_cycles},
              {"timestep_s", c.timestep},
              {"initial_roll_rad", c.initial_roll},
              {"perturbation_seed", c.perturbation_seed},
              {"perturbation_scale_rad", c.perturbation_scale},
              {"support", support},
              {"samples", traj.samples.size()},
              {"clamped_joint_samples", traj.clamped_joint_samples},
              {"joint_samples", traj.joint_samples},
              {"flags",
               {{"saturated", traj.flags.saturated},
                {"collision", traj.flags.collision},
                {"unresolved", traj.flags.unresolved}}}};
  return doc.dump(2) + "\n";
}

std::string trials_csv(const std::vector<TrialRecord>& trials) {
  std::ostringstream os;
  os << "variant,leg_len_m,leg_pairs,A_y,A_p,n,delta_d,omega,seed,dX_bl_cyc,theta_rad_cyc,theta_dot_rad_s,"
        "righted,righting_cycles,saturated,collision,unresolved\n";
  for (const auto& r : trials) {
    const auto& m = r.metrics;
    std::string righted, righting_cycles;
    if (m.righting) {
      righted = flag(m.righting->righted);
      if (m.righting->time_cycles) righting_cycles = format_number(*m.righting->time_cycles);
    }
    os << r.variant << ',' << format_number(r.leg_length) << ',' << r.leg_pairs << ',' << format_number(r.A_y) << ','
       << format_number(r.A_p) << ',' << format_number(r.n) << ',' << format_number(r.delta_d) << ','
       << format_number(r.omega) << ',' << r.seed << ',' << format_number(m.dX) << ','
       << format_number(m.theta_per_cycle) << ',' << format_number(m.theta_dot) << ',' << righted << ','
       << righting_cycles << ',' << flag(m.flags.saturated) << ',' << flag(m.flags.collision) << ','
       << flag(m.flags.unresolved) << '\n';
  }
  return os.str();
}

std::string cells_csv(const std::vector<BehaviorDiagram>& diagrams) {
  std::ostringstream os;
  os << "variant,leg_len_m,leg_pairs,A_y,delta_d,A_p,n,trials,dX_mean,dX_sem,theta_dot_mean,theta_dot_sem,"
        "theta_cyc_mean,theta_cyc_sem,regime,saturated,collision,unresolved,righted\n";
  for (const auto& d : diagrams) {
    for (const auto& c : d.cells) {
      os << d.variant << ',' << format_number(d.leg_length) << ',' << d.leg_pairs << ',' << format_number(d.A_y)
         << ',' << format_number(d.delta_d) << ',' << format_number(c.cell.A_p) << ',' << format_number(c.cell.n)
         << ',' << c.trials << ',' << format_number(c.dX.mean) << ',' << format_number(c.dX.sem) << ','
         << format_number(c.theta_dot.mean) << ',' << format_number(c.theta_dot.sem) << ','
         << format_number(c.theta_per_cycle.mean) << ',' << format_number(c.theta_per_cycle.sem) << ','
         << to_string(c.regime) << ',' << c.saturated << ',' << c.collision << ',' << c.unresolved << ','
         << c.righted << '\n';
    }
  }
  return os.str();
}

std::string phase_sweep_csv(const PhaseSweepResult& result) {
  std::ostringstream os;
  os << "delta_d,dX_mean,dX_sem,theta_cyc_mean,theta_cyc_sem,theta_dot_mean,theta_dot_sem,flagged\n";
  for (const auto& r : result.rows) {
    os << format_number(r.delta_d) << ',' << format_number(r.dX.mean) << ',' << format_number(r.dX.sem) << ','
       << format_number(r.theta_per_cycle.mean) << ',' << format_number(r.theta_per_cycle.sem) << ','
       << format_number(r.theta_dot.mean) << ',' << format_number(r.theta_dot.sem) << ',' << r.flagged << '\n';
  }
  return os.str();
}

std::string energy_profile_csv(const std::vector<EnergyRecord>& records) {
  std::ostringstream os;
  os << "variant,roll_rad,com_height_m,unresolved\n";
  for (const auto& r : records) {
    for (std::size_t i = 0; i < r.profile.roll.size(); ++i) {
      os << r.variant << ',' << format_number(r.profile.roll[i]) << ',' << format_number(r.profile.height[i]) << ','
         << flag(r.profile.unresolved[i]) << '\n';
    }
  }
  return os.str();
}

std::string energy_barrier_csv(const std::vector<EnergyRecord>& records) {
  std::ostringstream os;
  os << "variant,leg_len_m,leg_pairs,start_height_m,barrier_m,unresolved\n";
  for (const auto& r : records) {
    os << r.variant << ',' << format_number(r.leg_length) << ',' << r.leg_pairs << ','
       << format_number(r.profile.start_height) << ',' << format_number(r.profile.barrier) << ','
       << flag(r.profile.any_unresolved) << '\n';
  }
  return os.str();
}

}  // namespace rightsim
