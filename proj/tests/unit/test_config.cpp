#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "sparselv/config.hpp"
#include "sparselv/errors.hpp"

using namespace sparselv;

TEST(Config, DefaultsAreValid) {
  SweepConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.degree(), 16u);
}

TEST(Config, ParsesKeysCommentsAndSeparators) {
  const auto cfg = parse_config(
      "# comment\n"
      "n = 500\n"
      "d: 5\n"
      "model = general_regular   # trailing\n"
      "kappa_grid = 1, 2.5, 4\n"
      "fix_pattern = false\n"
      "master_seed = 18446744073709551615\n"
      "snapshot_times = 0,10\n");
  EXPECT_EQ(cfg.n, 500u);
  EXPECT_EQ(cfg.d, 5u);
  EXPECT_EQ(cfg.model, PatternModel::GeneralRegular);
  EXPECT_EQ(cfg.kappa_grid, (std::vector<double>{1.0, 2.5, 4.0}));
  EXPECT_FALSE(cfg.fix_pattern);
  EXPECT_EQ(cfg.master_seed, 18446744073709551615ULL);
  EXPECT_EQ(cfg.snapshot_times, (std::vector<double>{0.0, 10.0}));
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(parse_config("bogus = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("n = ten\n"), ConfigError);
  EXPECT_THROW(parse_config("n 10\n"), ConfigError);
  EXPECT_THROW(parse_config("fix_pattern = maybe\n"), ConfigError);
}

TEST(Config, ValidationCatchesInconsistentSizes) {
  SweepConfig cfg;
  cfg.n = 10;
  cfg.d = 3;
  EXPECT_THROW(cfg.validate(), ConfigError);  // block model needs d | n
  cfg.model = PatternModel::GeneralRegular;
  EXPECT_NO_THROW(cfg.validate());
  cfg.d = 11;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = SweepConfig{};
  cfg.kappa_grid = {1.0, -1.0};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = SweepConfig{};
  cfg.format = "xml";
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Config, ProportionalDegreeFollowsBeta) {
  SweepConfig cfg;
  cfg.model = PatternModel::Proportional;
  cfg.n = 300;
  cfg.beta = 0.1;
  EXPECT_EQ(cfg.degree(), 30u);
  cfg.model = PatternModel::Full;
  EXPECT_EQ(cfg.degree(), 300u);
}

TEST(Config, RenderRoundTrips) {
  SweepConfig cfg;
  cfg.n = 777;
  cfg.model = PatternModel::GeneralRegular;
  cfg.kappa_grid = {0.1, 1.0 / 3.0};
  cfg.solve_tol = 3e-13;
  cfg.snapshot_times = {1.5};
  cfg.out_dir = "results/run";
  const auto text = render_config(cfg);
  const auto back = parse_config(text);
  EXPECT_EQ(render_config(back), text);
  EXPECT_EQ(back.kappa_grid, cfg.kappa_grid);
  EXPECT_EQ(back.solve_tol, cfg.solve_tol);
  EXPECT_EQ(back.out_dir, cfg.out_dir);
}

TEST(Config, LoadsFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "sparselv_config_test.cfg";
  {
    std::ofstream out(path);
    out << "n = 64\nd = 4\n";
  }
  const auto cfg = load_config_file(path);
  EXPECT_EQ(cfg.n, 64u);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config_file(path), ConfigError);
}
