// Scenario files for the batch CLI: parsing, validation, dispatch to the
// protocol drivers and CSV/JSON output.
//
// A scenario is a JSON object. All frequencies are ordinary frequencies in
// MHz and all times in microseconds; they are converted to angular units
// when the scenario is turned into ProtocolParameters.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rydstirap/propagator.hpp"
#include "rydstirap/protocols.hpp"

namespace rydstirap {

enum class Command { kTwoAtomEntangle, kFidelityScan, kSpectrum, kPhaseGate, kJxZero, kGhz };

std::string_view to_string(Command command);

struct Scenario {
  Command command = Command::kTwoAtomEntangle;
  double omega1_mhz = 10.0;
  double omega_r_mhz = 10.0;
  double sigma_us = 1.5;
  double delta_t_us = 1.1;
  double gap_us = 0.0;
  double interaction_mhz = 100.0;
  std::optional<double> tau_r_us = 100.0;  // nullopt: no decay
  int atoms = 2;
  int max_rydberg = 1;
  double phase_between_rad = 0.0;
  std::vector<double> sigma_values_us;
  std::vector<double> interaction_values_mhz;
  IntegratorConfig integrator;
  std::string trajectory_csv = "trajectory.csv";
  std::string scan_csv = "scan.csv";
  std::string spectrum_csv = "spectrum.csv";
  std::string report_json = "report.json";

  ProtocolParameters parameters() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parses and validates a scenario. Errors (kConfig) name the offending key
/// and the line it appears on.
Scenario parse_scenario(std::string_view text);

/// Parameter echo; parse_scenario(to_json(s).dump()) == s.
nlohmann::json to_json(const Scenario& scenario);

/// Runs the scenario and writes its outputs into `out_dir`. Returns the
/// process exit status; failures are reported on `err`.
int run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir, std::ostream& err);

/// Fixed 12-significant-digit formatting used by every CSV writer.
std::string format_number(double value);

std::string trajectory_csv(const Trajectory& trajectory);
std::string scan_csv(const ScanResult& scan);
/// Eigenvalues are written as ordinary frequencies (MHz).
std::string spectrum_csv(const SpectrumScan& scan);

}  // namespace rydstirap
