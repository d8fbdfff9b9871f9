// Experiment drivers: two-atom entanglement and fidelity scans, geometric
// phases and the controlled phase gate, J_x = 0 preparation and GHZ states.
#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rydstirap/core.hpp"
#include "rydstirap/propagator.hpp"
#include "rydstirap/pulses.hpp"

namespace rydstirap {

/// Physical and numerical settings shared by all drivers (internal units).
struct ProtocolParameters {
  double omega1 = angular_from_mhz(10.0);       // peak Omega_1, rad/us
  double omega_r = angular_from_mhz(10.0);      // peak Omega_r, rad/us
  double sigma = 1.5;                           // us
  double delta_t = 1.1;                         // us
  double gap = 0.0;                             // Delta T between processes, us
  double phase_between = 0.0;                   // rad
  double interaction = angular_from_mhz(100.0); // E/hbar, rad/us
  double decay_rate = 1.0 / 100.0;              // 1/tau_r, 1/us
  int max_rydberg = 1;
  IntegratorConfig integrator;

  DriveSchedule single_process() const;
  DriveSchedule double_process() const;
};

// --- two-atom entanglement --------------------------------------------------

struct EntanglementResult {
  StateVector final_state;
  double fidelity;          // against the theta = pi/2 two-atom dark state
  double settling_time;     // first time after which fidelity stays within 1e-3 of final, us
  Trajectory trajectory;
};

EntanglementResult entangle_two_atoms(const ProtocolParameters& params);

/// Fidelity to `target` at each trajectory sample.
std::vector<double> fidelity_track(const Trajectory& trajectory, const StateVector& target);

struct ScanPoint {
  double sigma;        // us
  double interaction;  // rad/us
  double fidelity;     // NaN when the point failed
  std::string error;
};

struct ScanResult {
  std::vector<double> sigma_values;
  std::vector<double> interaction_values;
  std::vector<ScanPoint> points;  // sigma-major
  ProtocolParameters fixed;

  const ScanPoint& at(std::size_t sigma_index, std::size_t interaction_index) const {
    return points[sigma_index * interaction_values.size() + interaction_index];
  }
};

/// One entangle_two_atoms run per (sigma, E); delta_t/sigma is held at the
/// ratio of `fixed`. Failing points are recorded and the scan continues.
ScanResult fidelity_scan(std::span<const double> sigma_values, std::span<const double> interaction_values,
                         const ProtocolParameters& fixed);

// --- geometric phases and the phase gate ------------------------------------

using AngleFn = std::function<double(double)>;

/// -int sin^2(theta) d phi_r along the profile's ramps.
double gamma1(const AngleFn& theta, const PhaseProfile& phase);

/// -int cos^2 sin^2 / (cos^4 + 2 sin^4) d phi_r along the profile's ramps.
double gamma2(const AngleFn& theta, const PhaseProfile& phase);

struct GateReport {
  // Register order |00>, |01>, |10>, |11>.
  std::array<double, 4> phases{};
  std::array<double, 4> return_fidelity{};
  double controlled_phase = 0.0;  // phase(11) - phase(01) - phase(10) + phase(00)
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double predicted_phase = 0.0;   // gamma2 - 2 gamma1
};

/// Double STIRAP with params.gap and params.phase_between on each register state.
GateReport phase_gate(const ProtocolParameters& params);

// --- collective states ------------------------------------------------------

struct JxZeroResult {
  StateVector final_state;
  double fidelity;             // against final_dark_state(N)
  double rydberg_population;   // <n_r> of the final state
  Trajectory trajectory;
};

JxZeroResult prepare_jx_zero(int atoms, const ProtocolParameters& params);

/// e^{i eta(n1)} = (e^{i pi/4} + (-1)^{n1} e^{-i pi/4}) / sqrt(2)
std::complex<double> ghz_phase_factor(int n1);

/// (e^{i pi/4} (|0>+|1>)^N + e^{-i pi/4} (|0>-|1>)^N) / 2^{(N+1)/2} over the ground register.
StateVector ghz_target(int atoms);

/// (|0> + sign |1>)^N / 2^{N/2} over the ground register.
StateVector spin_coherent_state(int atoms, int sign);

struct GhzResult {
  StateVector final_state;                   // over Basis::ground_register(N)
  double ghz_population;                     // |<target|final>|^2
  double branch_plus;                        // population of (|0>+|1>)^N branch
  double branch_minus;                       // population of (|0>-|1>)^N branch
  double sector_return;                      // sum_n1 |c_n1|^2 |<n1,0,0|psi_n1>|^2
  std::vector<double> sector_phases;         // arg of the returned amplitude per n1, rad
};

/// Double STIRAP on every n1 sector of the spin-coherent state with an
/// instantaneous phase i on all Rydberg-excited components between the
/// processes; params.max_rydberg selects the blockade truncation.
GhzResult ghz_protocol(int atoms, const ProtocolParameters& params);

}  // namespace rydstirap
