#include "rightsim/config.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace rightsim {
namespace {

using testing::kPi;

TEST(Config, EmptyDocumentGivesDefaults) {
  const RunConfig c = parse_config("{}");
  EXPECT_EQ(c, RunConfig{});
  const TrialConfig t = trial_of(c);
  EXPECT_NEAR(t.timestep, t.gait.period() / 200, 1e-15);
  EXPECT_EQ(t.duration_cycles, 3);
  EXPECT_FALSE(t.model.legs.has_value());
  EXPECT_EQ(t.support.contact_band, 1e-4);
}

TEST(Config, RoundTripIsExact) {
  RunConfig c;
  c.gait.A_p_rad = 0.123456789012345;
  c.gait.n_y = 1.05;
  c.gait.n_p = 0.75;
  LegConfig legs;
  legs.ratio_preset = LegPreset::Long;
  legs.pair_count = 5;
  legs.attachment = LegAttachment::EvenlySpaced;
  c.morphology.legs = legs;
  c.simulation.timestep_s = 0.01;
  c.sweep.delta_d_rad = {kPi / 2, -kPi / 2, 0.0};
  VariantConfig v;
  v.name = "custom";
  LegConfig vl;
  vl.length_m = 0.07;
  vl.pair_count = 2;
  vl.attachment = LegAttachment::Explicit;
  vl.explicit_modules = {2, 8};
  v.legs = vl;
  c.sweep.variants = {VariantConfig{"bare", std::nullopt}, v};
  c.output.formats = {"csv"};
  const std::string text = serialize_config(c);
  const RunConfig back = parse_config(text);
  EXPECT_EQ(back, c);
  EXPECT_EQ(serialize_config(back), text);
  EXPECT_EQ(parse_config(serialize_config(RunConfig{})), RunConfig{});
}

TEST(Config, UnknownKeysAndBadTypesAreRejected) {
  EXPECT_THROW(parse_config(R"({"gait": {"A_yy_rad": 0.1}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"extras": {}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"gait": {"A_p_rad": "big"}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"grid": {"a_p_count": 2.5}})"), ConfigError);
  EXPECT_THROW(parse_config("{not json"), ConfigError);
  EXPECT_THROW(parse_config("[1, 2]"), ConfigError);
}

TEST(Config, SemanticErrors) {
  EXPECT_THROW(parse_config(R"({"gait": {"A_p_rad": 2.0}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"gait": {"omega_rad_s": 0}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"grid": {"a_p_count": 7}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"grid": {"trials_per_cell": 0}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"energy": {"resolution": 30}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"output": {"formats": ["png"]}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"simulation": {"steps_per_cycle": 40}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"sweep": {"variants": [{"name": "a"}, {"name": "a"}]}})"), ConfigError);
}

TEST(Config, TimestepLimit) {
  const double T = 4.0;
  EXPECT_NO_THROW(parse_config(R"({"simulation": {"timestep_s": )" + std::to_string(T / 50) + "}}"));
  EXPECT_THROW(parse_config(R"({"simulation": {"timestep_s": 0.0801}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"simulation": {"timestep_s": 0.01, "steps_per_cycle": 100}})"), ConfigError);
  const RunConfig c = parse_config(R"({"simulation": {"timestep_s": 0.01}})");
  EXPECT_EQ(trial_of(c).timestep, 0.01);
}

TEST(Config, CombinedWaveNumber) {
  const RunConfig c = parse_config(R"({"gait": {"n": 0.9}})");
  EXPECT_EQ(c.gait.n_y, 0.9);
  EXPECT_EQ(c.gait.n_p, 0.9);
  EXPECT_THROW(parse_config(R"({"gait": {"n": 0.9, "n_y": 0.6}})"), ConfigError);
  const RunConfig o = parse_config(R"({"gait": {"n_y": 0.6, "n_p": 0.75}})", {"gait.n=1.2"});
  EXPECT_EQ(o.gait.n_y, 1.2);
  EXPECT_EQ(o.gait.n_p, 1.2);
}

TEST(Config, OverridesApplyOnTopOfFile) {
  const RunConfig c = parse_config(R"({"gait": {"A_p_rad": 0.2}})",
                                   {"gait.A_p_rad=0.4", "output.directory=results", "sweep.delta_d_rad=[0, 1.5]",
                                    "morphology.legs={\"ratio_preset\": \"short\"}"});
  EXPECT_EQ(c.gait.A_p_rad, 0.4);
  EXPECT_EQ(c.output.directory, "results");
  EXPECT_EQ(c.sweep.delta_d_rad, (std::vector<double>{0, 1.5}));
  ASSERT_TRUE(c.morphology.legs.has_value());
  EXPECT_EQ(c.morphology.legs->ratio_preset, LegPreset::Short);
  EXPECT_THROW(parse_config("{}", {"gait.bogus=1"}), ConfigError);
  EXPECT_THROW(parse_config("{}", {"noequals"}), ConfigError);
  EXPECT_THROW(parse_config("{}", {"gait.A_p_rad.x=1"}), ConfigError);
  EXPECT_EQ(split_override("a.b=c=d"), (std::pair<std::string, std::string>{"a.b", "c=d"}));
}

TEST(Config, LegSpecifications) {
  const RunConfig preset = parse_config(R"({"morphology": {"legs": {"ratio_preset": "medium", "pair_count": 5}}})");
  const RobotModel m = model_of(preset);
  ASSERT_TRUE(m.legs.has_value());
  EXPECT_EQ(m.legs->attachment_modules, (std::vector<int>{1, 3, 5, 7, 9}));
  EXPECT_NEAR(m.legs->length, 0.0606, 5e-4);

  const RobotModel list =
      model_of(parse_config(R"({"morphology": {"legs": {"length_m": 0.05, "pair_count": 3, "attachment": [2, 5, 8]}}})"));
  EXPECT_EQ(list.legs->attachment_modules, (std::vector<int>{2, 5, 8}));
  const RobotModel all =
      model_of(parse_config(R"({"morphology": {"legs": {"length_m": 0.05, "attachment": "all"}}})"));
  EXPECT_EQ(all.legs->attachment_modules.size(), 9u);

  EXPECT_THROW(parse_config(R"({"morphology": {"legs": {"length_m": 0.05, "ratio_preset": "long"}}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"morphology": {"legs": {"pair_count": 9}}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"morphology": {"legs": {"ratio_preset": "huge"}}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"morphology": {"legs": {"length_m": 0.05, "attachment": "random"}}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"morphology": {"legs": {"length_m": 0.05, "pair_count": 2, "attachment": [3, 3]}}})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"morphology": {"legs": {"length_m": 0.05, "pair_count": 5, "attachment": "all"}}})"),
               ConfigError);
}

TEST(Config, SweepAndPhaseViews) {
  const RunConfig c = parse_config(R"({"sweep": {"seed": 9, "workers": 2},
    "grid": {"a_p_count": 2, "n_count": 3, "trials_per_cell": 4},
    "phase_sweep": {"trials": 3, "n": 0.5}})");
  const SweepSpec s = sweep_of(c);
  EXPECT_EQ(s.seed, 9u);
  EXPECT_EQ(s.workers, 2);
  EXPECT_EQ(s.grid.trials_per_cell, 4);
  EXPECT_EQ(s.variants.size(), 4u);
  EXPECT_EQ(s.sim.initial_roll, kPi);
  const PhaseSweepSpec p = phase_sweep_of(c);
  EXPECT_EQ(p.trials, 3);
  EXPECT_EQ(p.n, 0.5);
  EXPECT_EQ(p.seed, 9u);
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "rightsim_config_test.json";
  {
    std::ofstream f(path);
    f << R"({"gait": {"A_p_rad": 0.3}})";
  }
  EXPECT_EQ(load_config(path.string()).gait.A_p_rad, 0.3);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path.string()), IoError);
}

}  // namespace
}  // namespace rightsim
