#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rydstirap/scenario.hpp"

namespace rydstirap {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("rydstirap_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string config_error(std::string_view text) {
  try {
    (void)parse_scenario(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
    return e.what();
  }
  ADD_FAILURE() << "no error for " << text;
  return {};
}

TEST(Parse, Defaults) {
  const Scenario s = parse_scenario(R"({"command": "two-atom-entangle"})");
  EXPECT_EQ(s, Scenario{});
  const ProtocolParameters p = s.parameters();
  EXPECT_NEAR(p.omega1, angular_from_mhz(10.0), 1e-12);
  EXPECT_NEAR(p.omega_r, angular_from_mhz(10.0), 1e-12);
  EXPECT_EQ(p.sigma, 1.5);
  EXPECT_EQ(p.delta_t, 1.1);
  EXPECT_NEAR(p.interaction, angular_from_mhz(100.0), 1e-12);
  EXPECT_NEAR(p.decay_rate, 0.01, 1e-15);
}

TEST(Parse, InfiniteLifetime) {
  const Scenario s = parse_scenario(R"({"command": "ghz", "N": 4, "tau_r_us": "inf"})");
  EXPECT_FALSE(s.tau_r_us.has_value());
  EXPECT_EQ(s.parameters().decay_rate, 0.0);
  EXPECT_EQ(s.atoms, 4);
}

TEST(Parse, AllKeys) {
  const Scenario s = parse_scenario(R"({
    "command": "fidelity-scan",
    "omega1_MHz": 12, "omega_r_MHz": 8, "sigma_us": 2, "delta_t_us": 1.5, "gap_us": 0.5,
    "E_MHz": 200, "tau_r_us": 50, "N": 3, "r_max": 2, "phase_between_rad": 0.25,
    "sigma_values_us": [1, 2], "E_values_MHz": [50, 100, 400],
    "integrator": {"method": "rk4", "abs_tol": 1e-12, "rel_tol": 1e-10, "max_step_us": 0.01, "sample_us": 0.02},
    "outputs": {"trajectory": "t.csv", "scan": "s.csv", "spectrum": "e.csv", "report": "r.json"}
  })");
  EXPECT_EQ(s.command, Command::kFidelityScan);
  EXPECT_EQ(s.omega1_mhz, 12.0);
  EXPECT_EQ(s.tau_r_us, 50.0);
  EXPECT_EQ(s.max_rydberg, 2);
  EXPECT_EQ(s.interaction_values_mhz.size(), 3u);
  EXPECT_EQ(s.integrator.method, IntegratorMethod::kClassicalRk4);
  EXPECT_EQ(s.integrator.max_step, 0.01);
  EXPECT_EQ(s.scan_csv, "s.csv");
}

TEST(Parse, ErrorsNameKeyAndLine) {
  const std::string negative = config_error("{\n  \"command\": \"two-atom-entangle\",\n  \"sigma_us\": -1\n}");
  EXPECT_NE(negative.find("sigma"), std::string::npos);
  EXPECT_NE(negative.find("line 3"), std::string::npos);

  const std::string unknown = config_error("{\"command\": \"spectrum\", \"N\": 2,\n\"bogus\": 1}");
  EXPECT_NE(unknown.find("bogus"), std::string::npos);
  EXPECT_NE(unknown.find("line 2"), std::string::npos);

  const std::string text = config_error(R"({"command": "two-atom-entangle", "E_MHz": "big"})");
  EXPECT_NE(text.find("E_MHz"), std::string::npos);

  EXPECT_NE(config_error(R"({"command": "ghz"})").find("\"N\""), std::string::npos);
  EXPECT_NE(config_error(R"({"command": "fidelity-scan", "E_values_MHz": [1]})").find("sigma_values_us"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"sigma_us": 1})").find("command"), std::string::npos);
  EXPECT_NE(config_error(R"({"command": "dance"})").find("command"), std::string::npos);
  EXPECT_NE(config_error(R"({"command": "jx-zero", "N": 2.5})").find("\"N\""), std::string::npos);
  EXPECT_NE(config_error(R"({"command": "jx-zero", "N": 4, "r_max": 3})").find("r_max"), std::string::npos);
  EXPECT_NE(config_error(R"({"command": "spectrum", "N": 2, "integrator": {"method": "euler"}})")
                .find("integrator.method"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"command": "spectrum", "N": 2, "outputs": {"plot": "x.png"}})").find("outputs.plot"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"command": "two-atom-entangle", "tau_r_us": "forever"})").find("tau_r_us"),
            std::string::npos);
  EXPECT_NE(config_error("{\"command\": \n}").find("line 2"), std::string::npos);
  EXPECT_NE(config_error("[1, 2]").find("object"), std::string::npos);
}

TEST(Parse, RoundTrip) {
  const char* cases[] = {
      R"({"command": "two-atom-entangle"})",
      R"({"command": "ghz", "N": 10, "r_max": 2, "E_MHz": 400, "sigma_us": 50, "tau_r_us": "inf"})",
      R"({"command": "fidelity-scan", "sigma_values_us": [0.5, 1.5], "E_values_MHz": [0.1, 100]})",
      R"({"command": "phase-gate", "gap_us": 2.5, "phase_between_rad": -0.3333333333333333,
          "integrator": {"method": "rk4", "max_step_us": 0.005}})",
  };
  for (const char* text : cases) {
    const Scenario s = parse_scenario(text);
    EXPECT_EQ(parse_scenario(to_json(s).dump()), s) << text;
    EXPECT_EQ(parse_scenario(to_json(s).dump(2)), s) << text;
  }
}

TEST(Format, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(1e-20), "1e-20");
  EXPECT_EQ(format_number(-1234567.891234567), "-1234567.89123");
}

TEST(Csv, Headers) {
  ScanResult scan;
  scan.points.push_back({1.5, angular_from_mhz(100.0), 0.25, ""});
  EXPECT_EQ(scan_csv(scan), "sigma_us,E_MHz,fidelity\n1.5,100,0.25\n");

  SpectrumScan spec;
  spec.times = {0.0};
  spec.eigenvalues.push_back(Eigen::VectorXd::LinSpaced(3, -kTwoPi, kTwoPi));
  EXPECT_EQ(spectrum_csv(spec), "t_us,ev1,ev2,ev3\n0,-1,0,1\n");
}

TEST(Run, SpectrumHasThirteenColumns) {
  const fs::path dir = scratch_dir("spectrum");
  Scenario s = parse_scenario(R"({"command": "spectrum", "N": 6})");
  std::ostringstream err;
  ASSERT_EQ(run_scenario(s, dir, err), 0) << err.str();
  const std::string csv = read_file(dir / "spectrum.csv");
  const std::string header = csv.substr(0, csv.find('\n'));
  EXPECT_EQ(header, "t_us,ev1,ev2,ev3,ev4,ev5,ev6,ev7,ev8,ev9,ev10,ev11,ev12,ev13");
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  const auto report = nlohmann::json::parse(read_file(dir / "report.json"));
  EXPECT_EQ(report["eigenvalue_count"], 13);
}

TEST(Run, TwoAtomTrajectoryAndDeterminism) {
  const Scenario s = parse_scenario(R"({"command": "two-atom-entangle"})");
  const fs::path a = scratch_dir("det_a"), b = scratch_dir("det_b");
  std::ostringstream err;
  ASSERT_EQ(run_scenario(s, a, err), 0) << err.str();
  ASSERT_EQ(run_scenario(s, b, err), 0) << err.str();
  const std::string csv = read_file(a / "trajectory.csv");
  EXPECT_EQ(csv, read_file(b / "trajectory.csv"));
  EXPECT_EQ(read_file(a / "report.json"), read_file(b / "report.json"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t_us,|11>,|1r+r1>,|12+21>,|rr>,|2r+r2>,|22>,norm");

  const auto report = nlohmann::json::parse(read_file(a / "report.json"));
  EXPECT_GE(report["fidelity"].get<double>(), 0.95);
  EXPECT_EQ(parse_scenario(report["parameters"].dump()), s);
}

TEST(Run, ScanAndGateReports) {
  const fs::path dir = scratch_dir("scan");
  std::ostringstream err;
  const Scenario scan =
      parse_scenario(R"({"command": "fidelity-scan", "sigma_values_us": [1.5], "E_values_MHz": [50, 100]})");
  ASSERT_EQ(run_scenario(scan, dir, err), 0) << err.str();
  const std::string csv = read_file(dir / "scan.csv");
  EXPECT_EQ(csv.rfind("sigma_us,E_MHz,fidelity\n1.5,50,", 0), 0u);

  const Scenario gate = parse_scenario(
      R"({"command": "phase-gate", "sigma_us": 3, "delta_t_us": 2.2, "gap_us": 1, "phase_between_rad": 0.5,
          "tau_r_us": "inf"})");
  ASSERT_EQ(run_scenario(gate, dir, err), 0) << err.str();
  const auto report = nlohmann::json::parse(read_file(dir / "report.json"));
  EXPECT_NEAR(report["controlled_phase_rad"].get<double>(), report["predicted_phase_rad"].get<double>(), 2e-2);
  EXPECT_EQ(parse_scenario(report["parameters"].dump()), gate);
}

TEST(Run, FailureIsReported) {
  // max_step above sigma / 50 fails inside the propagator
  const Scenario s = parse_scenario(R"({"command": "two-atom-entangle", "integrator": {"max_step_us": 1}})");
  std::ostringstream err;
  EXPECT_NE(run_scenario(s, scratch_dir("fail"), err), 0);
  EXPECT_NE(err.str().find("max_step"), std::string::npos);
}

TEST(Cli, EndToEnd) {
  const fs::path dir = scratch_dir("cli");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "ok.json") << R"({"command": "jx-zero", "N": 3, "sigma_us": 5, "delta_t_us": 3.6666666666666665,
                                          "tau_r_us": "inf"})";
    std::ofstream(dir / "bad.json") << "{\"command\": \"jx-zero\"}";
  }
  const std::string cli = RYDSTIRAP_CLI_PATH;
  const std::string quiet = " 2>" + (dir / "stderr.txt").string();
  EXPECT_EQ(std::system((cli + " --scenario " + (dir / "ok.json").string() + " --out " + (dir / "out").string() +
                         quiet)
                            .c_str()),
            0);
  const auto report = nlohmann::json::parse(read_file(dir / "out" / "report.json"));
  EXPECT_NEAR(report["rydberg_population"].get<double>(), 1.0, 0.05);
  EXPECT_TRUE(fs::exists(dir / "out" / "trajectory.csv"));

  EXPECT_NE(std::system((cli + " --scenario " + (dir / "bad.json").string() + " --out " +
                         (dir / "out2").string() + quiet)
                            .c_str()),
            0);
  EXPECT_NE(read_file(dir / "stderr.txt").find("\"N\""), std::string::npos);
  EXPECT_NE(std::system((cli + " --scenario " + (dir / "missing.json").string() + " --out " +
                         (dir / "out3").string() + quiet)
                            .c_str()),
            0);
}

}  // namespace
}  // namespace rydstirap
