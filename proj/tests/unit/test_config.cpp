#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wavemap/config.hpp"
#include "wavemap/errors.hpp"

using namespace wavemap;

TEST(ParseNumber, Forms) {
  EXPECT_EQ(parse_number("0.25"), 0.25);
  EXPECT_EQ(parse_number(" 2^-9 "), 1.0 / 512);
  EXPECT_EQ(parse_number("1/512"), 1.0 / 512);
  EXPECT_EQ(parse_number("1e-6"), 1e-6);
  EXPECT_THROW(parse_number("abc"), ConfigError);
  EXPECT_THROW(parse_number(""), ConfigError);
  EXPECT_THROW(parse_number("2^"), ConfigError);
}

TEST(ParseConfig, KeysCommentsAndWhitespace) {
  std::istringstream in(R"(# bubble run
grid = 64
mode = adaptive   # trailing comment
strategy=updated
tol0 = 1e-6
tend = 0.17
tau_max = 2^-9

p_exp = inf
snapshots = 0, 0.05, 1/10
store_dt = 2^-10
dump_residuals = yes
data = rotation
out = /tmp/somewhere
)");
  RunConfig cfg;
  parse_config(in, cfg);
  EXPECT_EQ(cfg.grid_cells, 64);
  EXPECT_EQ(cfg.mode, RunMode::Adaptive);
  EXPECT_EQ(cfg.controller.strategy, Strategy::UpdatedTolerance);
  EXPECT_EQ(cfg.controller.tol0, 1e-6);
  EXPECT_EQ(cfg.t_end, 0.17);
  EXPECT_EQ(cfg.controller.tau_max, 1.0 / 512);
  EXPECT_TRUE(std::isinf(cfg.solver.p_exp));
  EXPECT_FALSE(cfg.default_snapshots);
  EXPECT_EQ(cfg.snapshot_times, (std::vector<double>{0.0, 0.05, 0.1}));
  EXPECT_EQ(cfg.store_dt, 1.0 / 1024);
  EXPECT_TRUE(cfg.dump_residuals);
  EXPECT_EQ(cfg.data, InitialData::Rotation);
  EXPECT_EQ(cfg.output_dir, std::filesystem::path("/tmp/somewhere"));
  EXPECT_NO_THROW(cfg.validate());
}

TEST(ParseConfig, ErrorsCarryLineNumbers) {
  RunConfig cfg;
  std::istringstream unknown("grid = 8\ncolour = blue\n");
  try {
    parse_config(unknown, cfg);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  std::istringstream no_eq("grid 8\n");
  EXPECT_THROW(parse_config(no_eq, cfg), ConfigError);
  std::istringstream bad_mode("mode = sometimes\n");
  EXPECT_THROW(parse_config(bad_mode, cfg), ConfigError);
  std::istringstream bad_strategy("strategy = greedy\n");
  EXPECT_THROW(parse_config(bad_strategy, cfg), ConfigError);
  std::istringstream bad_int("grid = 8.5\n");
  EXPECT_THROW(parse_config(bad_int, cfg), ConfigError);
}

TEST(LoadConfig, FileOverridesBase) {
  const auto path = std::filesystem::temp_directory_path() / "wavemap_config_test.cfg";
  {
    std::ofstream out(path);
    out << "tau = 2^-10\n";
  }
  RunConfig base;
  base.grid_cells = 48;
  const RunConfig cfg = load_config(path, base);
  EXPECT_EQ(cfg.grid_cells, 48);
  EXPECT_EQ(cfg.tau, 1.0 / 1024);
  EXPECT_THROW(load_config(path.string() + ".missing"), ConfigError);
}

TEST(RunConfigValidate, RejectsInvalid) {
  RunConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.grid_cells = 1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.t_end = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.tau = -1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.solver.p_exp = 1.5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.mode = RunMode::Adaptive;
  cfg.controller.grow = 0.9;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.default_snapshots = false;
  cfg.snapshot_times = {0.5};
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(RunConfig, DefaultSnapshotScheduleSpansInterval) {
  RunConfig cfg;
  cfg.t_end = 0.7;
  const auto times = cfg.resolved_snapshot_times();
  ASSERT_EQ(times.size(), 8u);
  EXPECT_EQ(times.front(), 0.0);
  EXPECT_EQ(times.back(), 0.7);
  for (std::size_t k = 1; k < times.size(); ++k) EXPECT_NEAR(times[k] - times[k - 1], 0.1, 1e-15);
}
