#include "rydstirap/scenario.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "rydstirap/models.hpp"

namespace rydstirap {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 6> kCommands{{
    {Command::kTwoAtomEntangle, "two-atom-entangle"},
    {Command::kFidelityScan, "fidelity-scan"},
    {Command::kSpectrum, "spectrum"},
    {Command::kPhaseGate, "phase-gate"},
    {Command::kJxZero, "jx-zero"},
    {Command::kGhz, "ghz"},
}};

constexpr std::array<std::string_view, 15> kTopLevelKeys{
    "command", "omega1_MHz", "omega_r_MHz", "sigma_us", "delta_t_us", "gap_us", "E_MHz", "tau_r_us",
    "N", "r_max", "phase_between_rad", "sigma_values_us", "E_values_MHz", "integrator", "outputs"};
constexpr std::array<std::string_view, 5> kIntegratorKeys{"method", "abs_tol", "rel_tol", "max_step_us",
                                                          "sample_us"};
constexpr std::array<std::string_view, 4> kOutputKeys{"trajectory", "scan", "spectrum", "report"};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& keys, std::string_view k) {
  return std::find(keys.begin(), keys.end(), k) != keys.end();
}

int line_at(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Reads typed values out of one JSON object, reporting errors by key and line.
class Reader {
 public:
  Reader(std::string_view text, const json& object, std::string prefix)
      : text_(text), object_(object), prefix_(std::move(prefix)) {}

  [[noreturn]] void fail(std::string_view key, const std::string& message) const {
    throw Error(ErrorCode::kConfig, "key \"" + prefix_ + std::string(key) + "\" (line " +
                                        std::to_string(line_of(key)) + "): " + message);
  }

  int line_of(std::string_view key) const {
    const auto pos = text_.find("\"" + std::string(key) + "\"");
    return pos == std::string_view::npos ? 1 : line_at(text_, pos);
  }

  bool has(std::string_view key) const { return object_.contains(std::string(key)); }

  template <std::size_t N>
  void reject_unknown(const std::array<std::string_view, N>& known) const {
    for (const auto& [key, value] : object_.items()) {
      if (!contains(known, key)) fail(key, "unknown key");
    }
  }

  void number(std::string_view key, double& out) const {
    if (!has(key)) return;
    const json& v = object_.at(std::string(key));
    if (!v.is_number()) fail(key, "expected a number");
    out = v.get<double>();
  }

  void integer(std::string_view key, int& out) const {
    if (!has(key)) return;
    const json& v = object_.at(std::string(key));
    if (!v.is_number_integer()) fail(key, "expected an integer");
    out = v.get<int>();
  }

  void text(std::string_view key, std::string& out) const {
    if (!has(key)) return;
    const json& v = object_.at(std::string(key));
    if (!v.is_string()) fail(key, "expected a string");
    out = v.get<std::string>();
  }

  void numbers(std::string_view key, std::vector<double>& out) const {
    if (!has(key)) return;
    const json& v = object_.at(std::string(key));
    if (!v.is_array()) fail(key, "expected an array of numbers");
    out.clear();
    for (const auto& x : v) {
      if (!x.is_number()) fail(key, "expected an array of numbers");
      out.push_back(x.get<double>());
    }
  }

  const json& object(std::string_view key) const {
    const json& v = object_.at(std::string(key));
    if (!v.is_object()) fail(key, "expected an object");
    return v;
  }

  const json& raw(std::string_view key) const { return object_.at(std::string(key)); }

 private:
  std::string_view text_;
  const json& object_;
  std::string prefix_;
};

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

json populations_json(const StateVector& state) {
  json p = json::object();
  for (Eigen::Index i = 0; i < state.size(); ++i) p[state.basis()[i].name()] = std::norm(state[i]);
  return p;
}

}  // namespace

std::string_view to_string(Command command) {
  for (const auto& [c, name] : kCommands) {
    if (c == command) return name;
  }
  return "?";
}

ProtocolParameters Scenario::parameters() const {
  ProtocolParameters p;
  p.omega1 = angular_from_mhz(omega1_mhz);
  p.omega_r = angular_from_mhz(omega_r_mhz);
  p.sigma = sigma_us;
  p.delta_t = delta_t_us;
  p.gap = gap_us;
  p.phase_between = phase_between_rad;
  p.interaction = angular_from_mhz(interaction_mhz);
  p.decay_rate = tau_r_us ? 1.0 / *tau_r_us : 0.0;
  p.max_rydberg = max_rydberg;
  p.integrator = integrator;
  return p;
}

Scenario parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfig, "malformed JSON at line " + std::to_string(line_at(text, e.byte)) + ": " +
                                        e.what());
  }
  if (!root.is_object()) throw Error(ErrorCode::kConfig, "scenario must be a JSON object (line 1)");

  const Reader top(text, root, "");
  top.reject_unknown(kTopLevelKeys);

  Scenario s;
  if (!top.has("command")) top.fail("command", "missing required key");
  std::string command;
  top.text("command", command);
  const auto it = std::find_if(kCommands.begin(), kCommands.end(), [&](const auto& c) { return c.second == command; });
  if (it == kCommands.end()) top.fail("command", "unknown command \"" + command + "\"");
  s.command = it->first;

  top.number("omega1_MHz", s.omega1_mhz);
  top.number("omega_r_MHz", s.omega_r_mhz);
  top.number("sigma_us", s.sigma_us);
  top.number("delta_t_us", s.delta_t_us);
  top.number("gap_us", s.gap_us);
  top.number("E_MHz", s.interaction_mhz);
  top.number("phase_between_rad", s.phase_between_rad);
  top.integer("N", s.atoms);
  top.integer("r_max", s.max_rydberg);
  top.numbers("sigma_values_us", s.sigma_values_us);
  top.numbers("E_values_MHz", s.interaction_values_mhz);
  if (top.has("tau_r_us")) {
    const json& tau = top.raw("tau_r_us");
    if (tau.is_string() && tau.get<std::string>() == "inf") {
      s.tau_r_us.reset();
    } else if (tau.is_number()) {
      s.tau_r_us = tau.get<double>();
    } else {
      top.fail("tau_r_us", "expected a number or \"inf\"");
    }
  }

  if (top.has("integrator")) {
    const Reader sub(text, top.object("integrator"), "integrator.");
    sub.reject_unknown(kIntegratorKeys);
    std::string method = "dopri45";
    sub.text("method", method);
    if (method == "dopri45") {
      s.integrator.method = IntegratorMethod::kDormandPrince45;
    } else if (method == "rk4") {
      s.integrator.method = IntegratorMethod::kClassicalRk4;
    } else {
      sub.fail("method", "expected \"dopri45\" or \"rk4\"");
    }
    sub.number("abs_tol", s.integrator.abs_tol);
    sub.number("rel_tol", s.integrator.rel_tol);
    sub.number("max_step_us", s.integrator.max_step);
    sub.number("sample_us", s.integrator.sample_interval);
    if (!(s.integrator.abs_tol > 0.0)) sub.fail("abs_tol", "must be positive");
    if (!(s.integrator.rel_tol > 0.0)) sub.fail("rel_tol", "must be positive");
    if (!(s.integrator.max_step >= 0.0)) sub.fail("max_step_us", "must be non-negative");
    if (!(s.integrator.sample_interval > 0.0)) sub.fail("sample_us", "must be positive");
  }
  if (top.has("outputs")) {
    const Reader sub(text, top.object("outputs"), "outputs.");
    sub.reject_unknown(kOutputKeys);
    sub.text("trajectory", s.trajectory_csv);
    sub.text("scan", s.scan_csv);
    sub.text("spectrum", s.spectrum_csv);
    sub.text("report", s.report_json);
  }

  // Validation.
  auto non_negative = [&](std::string_view key, double v) {
    if (!(v >= 0.0)) top.fail(key, "must be non-negative");
  };
  non_negative("omega1_MHz", s.omega1_mhz);
  non_negative("omega_r_MHz", s.omega_r_mhz);
  non_negative("delta_t_us", s.delta_t_us);
  non_negative("gap_us", s.gap_us);
  non_negative("E_MHz", s.interaction_mhz);
  if (!(s.sigma_us > 0.0)) top.fail("sigma_us", "must be positive");
  if (s.tau_r_us && !(*s.tau_r_us > 0.0)) top.fail("tau_r_us", "must be positive or \"inf\"");
  if (s.max_rydberg != 1 && s.max_rydberg != 2) top.fail("r_max", "must be 1 or 2");

  const bool needs_atoms = s.command == Command::kSpectrum || s.command == Command::kJxZero ||
                           s.command == Command::kGhz;
  if (needs_atoms && !top.has("N")) top.fail("N", "missing required key for " + command);
  const int min_atoms = (s.command == Command::kSpectrum) ? 1 : 2;
  if (needs_atoms && s.atoms < min_atoms) top.fail("N", "must be at least " + std::to_string(min_atoms));

  if (s.command == Command::kFidelityScan) {
    for (std::string_view key : {std::string_view("sigma_values_us"), std::string_view("E_values_MHz")}) {
      if (!top.has(key)) top.fail(key, "missing required key for fidelity-scan");
    }
    if (s.sigma_values_us.empty()) top.fail("sigma_values_us", "must be non-empty");
    if (s.interaction_values_mhz.empty()) top.fail("E_values_MHz", "must be non-empty");
    for (double v : s.sigma_values_us) {
      if (!(v > 0.0)) top.fail("sigma_values_us", "entries must be positive");
    }
    for (double v : s.interaction_values_mhz) {
      if (!(v >= 0.0)) top.fail("E_values_MHz", "entries must be non-negative");
    }
  }
  return s;
}

json to_json(const Scenario& s) {
  json j;
  j["command"] = std::string(to_string(s.command));
  j["omega1_MHz"] = s.omega1_mhz;
  j["omega_r_MHz"] = s.omega_r_mhz;
  j["sigma_us"] = s.sigma_us;
  j["delta_t_us"] = s.delta_t_us;
  j["gap_us"] = s.gap_us;
  j["E_MHz"] = s.interaction_mhz;
  j["tau_r_us"] = s.tau_r_us ? json(*s.tau_r_us) : json("inf");
  j["N"] = s.atoms;
  j["r_max"] = s.max_rydberg;
  j["phase_between_rad"] = s.phase_between_rad;
  if (!s.sigma_values_us.empty()) j["sigma_values_us"] = s.sigma_values_us;
  if (!s.interaction_values_mhz.empty()) j["E_values_MHz"] = s.interaction_values_mhz;
  j["integrator"] = {
      {"method", s.integrator.method == IntegratorMethod::kClassicalRk4 ? "rk4" : "dopri45"},
      {"abs_tol", s.integrator.abs_tol},
      {"rel_tol", s.integrator.rel_tol},
      {"max_step_us", s.integrator.max_step},
      {"sample_us", s.integrator.sample_interval},
  };
  j["outputs"] = {
      {"trajectory", s.trajectory_csv},
      {"scan", s.scan_csv},
      {"spectrum", s.spectrum_csv},
      {"report", s.report_json},
  };
  return j;
}

// ---------------------------------------------------------------------------

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::string out = "t_us";
  for (const auto& label : trajectory.basis) out += "," + label.name();
  out += ",norm\n";
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    out += format_number(trajectory.times[k]);
    for (Eigen::Index i = 0; i < trajectory.populations.cols(); ++i) {
      out += "," + format_number(trajectory.populations(Eigen::Index(k), i));
    }
    out += "," + format_number(trajectory.norms[k]) + "\n";
  }
  return out;
}

std::string scan_csv(const ScanResult& scan) {
  std::string out = "sigma_us,E_MHz,fidelity\n";
  for (const auto& p : scan.points) {
    out += format_number(p.sigma) + "," + format_number(mhz_from_angular(p.interaction)) + "," +
           format_number(p.fidelity) + "\n";
  }
  return out;
}

std::string spectrum_csv(const SpectrumScan& scan) {
  std::string out = "t_us";
  const Eigen::Index count = scan.eigenvalues.empty() ? 0 : scan.eigenvalues.front().size();
  for (Eigen::Index i = 1; i <= count; ++i) out += ",ev" + std::to_string(i);
  out += "\n";
  for (std::size_t k = 0; k < scan.times.size(); ++k) {
    out += format_number(scan.times[k]);
    for (Eigen::Index i = 0; i < count; ++i) out += "," + format_number(mhz_from_angular(scan.eigenvalues[k](i)));
    out += "\n";
  }
  return out;
}

int run_scenario(const Scenario& s, const std::filesystem::path& out_dir, std::ostream& err) {
  try {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create " + out_dir.string() + ": " + ec.message());

    const ProtocolParameters params = s.parameters();
    json report;
    report["command"] = std::string(to_string(s.command));

    switch (s.command) {
      case Command::kTwoAtomEntangle: {
        const auto r = entangle_two_atoms(params);
        write_file(out_dir / s.trajectory_csv, trajectory_csv(r.trajectory));
        report["fidelity"] = r.fidelity;
        report["settling_time_us"] = r.settling_time;
        report["final_populations"] = populations_json(r.final_state);
        report["final_norm"] = r.final_state.squared_norm();
        break;
      }
      case Command::kFidelityScan: {
        std::vector<double> energies;
        for (double e : s.interaction_values_mhz) energies.push_back(angular_from_mhz(e));
        const auto scan = fidelity_scan(s.sigma_values_us, energies, params);
        write_file(out_dir / s.scan_csv, scan_csv(scan));
        json failures = json::array();
        for (const auto& p : scan.points) {
          if (!p.error.empty()) {
            failures.push_back({{"sigma_us", p.sigma}, {"E_MHz", mhz_from_angular(p.interaction)}, {"error", p.error}});
          }
        }
        report["points"] = scan.points.size();
        report["failures"] = failures;
        break;
      }
      case Command::kSpectrum: {
        const HamiltonianModel model = make_model(
            CollectiveModel{s.atoms, s.max_rydberg, params.interaction, 0.0, params.single_process()});
        const auto spectrum = instantaneous_spectrum(model, params.integrator);
        write_file(out_dir / s.spectrum_csv, spectrum_csv(spectrum));
        report["eigenvalue_count"] = model.dimension();
        report["samples"] = spectrum.times.size();
        break;
      }
      case Command::kPhaseGate: {
        const auto g = phase_gate(params);
        report["phases_rad"] = {{"00", g.phases[0]}, {"01", g.phases[1]}, {"10", g.phases[2]}, {"11", g.phases[3]}};
        report["return_fidelity"] = {{"00", g.return_fidelity[0]},
                                     {"01", g.return_fidelity[1]},
                                     {"10", g.return_fidelity[2]},
                                     {"11", g.return_fidelity[3]}};
        report["controlled_phase_rad"] = g.controlled_phase;
        report["gamma1_rad"] = g.gamma1;
        report["gamma2_rad"] = g.gamma2;
        report["predicted_phase_rad"] = g.predicted_phase;
        break;
      }
      case Command::kJxZero: {
        const auto r = prepare_jx_zero(s.atoms, params);
        write_file(out_dir / s.trajectory_csv, trajectory_csv(r.trajectory));
        report["fidelity"] = r.fidelity;
        report["rydberg_population"] = r.rydberg_population;
        report["final_populations"] = populations_json(r.final_state);
        break;
      }
      case Command::kGhz: {
        const auto r = ghz_protocol(s.atoms, params);
        report["ghz_population"] = r.ghz_population;
        report["branch_plus_population"] = r.branch_plus;
        report["branch_minus_population"] = r.branch_minus;
        report["sector_return_population"] = r.sector_return;
        report["sector_phases_rad"] = r.sector_phases;
        break;
      }
    }
    report["parameters"] = to_json(s);
    write_file(out_dir / s.report_json, report.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace rydstirap
