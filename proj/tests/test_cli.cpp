#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mhdbl/driver.hpp"

using namespace mhdbl;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mhdbl_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string rejected_key(const std::string& json) {
  try {
    parse_config(json);
  } catch (const InvalidParameter& e) {
    return e.name();
  }
  return "";
}

RunConfig small_run(const fs::path& dir) {
  RunConfig c = parse_config(R"({"nx": 8, "ny": 64, "ymax": 8, "dt": 1e-3, "t_end": 0.02,
                                 "output_every": 5, "snapshot_every": 10})");
  c.outputDir = dir.string();
  return c;
}

}  // namespace

TEST(Config, DefaultsAreValid) {
  EXPECT_NO_THROW(validate_config(RunConfig{}));
  const RunConfig c = parse_config("{}");
  EXPECT_EQ(c.nx, 32u);
  EXPECT_EQ(c.seed, 12345u);
}

TEST(Config, OverridesApply) {
  const RunConfig c = parse_config(R"({"ny": 128, "mms_ny_list": [64, 128], "diffusion": "backward_euler"})");
  EXPECT_EQ(c.ny, 128u);
  EXPECT_EQ(c.mmsNyList, (std::vector<std::size_t>{64, 128}));
  EXPECT_EQ(c.solver.diffusion, DiffusionScheme::BackwardEuler);
}

TEST(Config, ErrorsNameTheKey) {
  EXPECT_EQ(rejected_key(R"({"ell": 0.4})"), "ell");
  EXPECT_EQ(rejected_key(R"({"no_such_key": 1})"), "no_such_key");
  EXPECT_EQ(rejected_key(R"({"nx": "32"})"), "nx");
  EXPECT_EQ(rejected_key(R"({"nx": -4})"), "nx");
  EXPECT_EQ(rejected_key(R"({"grid": {"nx": 32}})"), "grid");
  EXPECT_EQ(rejected_key(R"({"cfl": 1.5})"), "cfl");
  EXPECT_EQ(rejected_key(R"({"mms_ny_list": []})"), "mms_ny_list");
  EXPECT_EQ(rejected_key(R"({"diffusion": "rk4"})"), "diffusion");
  EXPECT_EQ(rejected_key("[1, 2]"), "config");
  EXPECT_EQ(rejected_key("{nx: 3"), "config");
  EXPECT_THROW(load_config("/nonexistent/cfg.json"), InvalidParameter);
}

TEST(Snapshot, RoundTrip) {
  const fs::path dir = scratch("snap");
  fs::create_directories(dir);
  const Grid g = build_grid(8, 32, 8.0, 1.0, 2.0);
  State s = make_initial_data({}, g);
  s.t = 0.125;
  const std::string path = (dir / "s.mhdbl").string();
  write_snapshot(path, s, g);
  const auto [h, r] = read_snapshot(path);
  EXPECT_EQ(h.nx, 8u);
  EXPECT_EQ(h.ny, 32u);
  EXPECT_EQ(h.t, 0.125);
  EXPECT_EQ(h.delta, 2.0);
  EXPECT_EQ(r.u.data(), s.u.data());
  EXPECT_EQ(r.f.data(), s.f.data());
  EXPECT_EQ(r.v.data(), s.v.data());
  EXPECT_EQ(r.g.data(), s.g.data());

  std::ofstream(dir / "bad.mhdbl") << "MHDBL1\n8 32 8 1 2 0\n";
  EXPECT_THROW(read_snapshot((dir / "bad.mhdbl").string()), Error);
  std::ofstream(dir / "junk.mhdbl") << "nope";
  EXPECT_THROW(read_snapshot((dir / "junk.mhdbl").string()), Error);
}

TEST(Driver, RunWritesTimeseries) {
  const fs::path dir = scratch("run");
  std::ostringstream log, err;
  ASSERT_EQ(cmd_run(small_run(dir), log, err), kExitOk) << err.str();
  std::istringstream ts(slurp(dir / "timeseries.csv"));
  std::string line;
  std::getline(ts, line);
  EXPECT_EQ(line, EnergyReport::csv_header());
  double last = -1.0;
  int rows = 0;
  while (std::getline(ts, line)) {
    std::istringstream row(line);
    std::string t, E, D;
    std::getline(row, t, ',');
    std::getline(row, E, ',');
    std::getline(row, D, ',');
    EXPECT_GT(std::stod(t), last);
    EXPECT_TRUE(std::isfinite(std::stod(E)) && std::isfinite(std::stod(D)));
    last = std::stod(t);
    ++rows;
  }
  EXPECT_EQ(rows, 5);  // t = 0 and every 5 of 20 steps
  EXPECT_NEAR(last, 0.02, 1e-14);
  EXPECT_TRUE(fs::exists(dir / "snapshot_00000010.mhdbl"));
  EXPECT_TRUE(fs::exists(dir / "final.mhdbl"));
  EXPECT_NE(slurp(dir / "run_report.txt").find("status completed"), std::string::npos);
}

TEST(Driver, RunIsDeterministic) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  std::ostringstream log, err;
  ASSERT_EQ(cmd_run(small_run(a), log, err), kExitOk);
  ASSERT_EQ(cmd_run(small_run(b), log, err), kExitOk);
  EXPECT_EQ(slurp(a / "timeseries.csv"), slurp(b / "timeseries.csv"));
  EXPECT_EQ(slurp(a / "final.mhdbl"), slurp(b / "final.mhdbl"));
}

TEST(Driver, PositivityLossStopsRun) {
  const fs::path dir = scratch("stop");
  RunConfig c = small_run(dir);
  c.solver.fFloor = 0.95;
  std::ostringstream log, err;
  EXPECT_EQ(cmd_run(c, log, err), kExitStopped);
  EXPECT_NE(slurp(dir / "run_report.txt").find("status stopped"), std::string::npos);
}

TEST(Driver, BadInputExitsOne) {
  std::ostringstream log, err;
  RunConfig c;
  c.outputDir = scratch("bad").string();
  c.ell = 0.4;
  EXPECT_EQ(cmd_run(c, log, err), kExitBadInput);
  EXPECT_NE(err.str().find("ell"), std::string::npos);
  EXPECT_EQ(cmd_verify("nonsense", RunConfig{}, log, err), kExitBadInput);
}

TEST(Driver, VerifyWritesReportsAndIsRepeatable) {
  RunConfig c = parse_config(R"({"commutator_nx_list": [32, 64], "commutator_trials": 10})");
  const fs::path a = scratch("ver_a"), b = scratch("ver_b");
  std::ostringstream log, err;
  c.outputDir = a.string();
  EXPECT_EQ(cmd_verify("commutator", c, log, err), kExitOk) << err.str();
  c.outputDir = b.string();
  EXPECT_EQ(cmd_verify("commutator", c, log, err), kExitOk);
  EXPECT_EQ(slurp(a / "commutator_report.csv"), slurp(b / "commutator_report.csv"));
  EXPECT_EQ(slurp(a / "commutator_report.txt"), slurp(b / "commutator_report.txt"));
  EXPECT_NE(log.str().find("PASS commutator"), std::string::npos);
}

TEST(Driver, SuiteNames) {
  EXPECT_EQ(expand_suite("mms"), (std::vector<std::string>{"mms-space", "mms-time"}));
  EXPECT_EQ(expand_suite("all").size(), suites().size());
  EXPECT_TRUE(expand_suite("bogus").empty());
}
