// Time-dependent Schroedinger propagation, trajectory sampling, dark-state
// phase tracking and instantaneous spectra.
#pragma once

#include <optional>
#include <vector>

#include "rydstirap/core.hpp"
#include "rydstirap/models.hpp"

namespace rydstirap {

enum class IntegratorMethod {
  kClassicalRk4,      // fixed step
  kDormandPrince45,   // adaptive embedded pair with 4th-order dense output
};

struct IntegratorConfig {
  IntegratorMethod method = IntegratorMethod::kDormandPrince45;
  double abs_tol = 1e-11;
  double rel_tol = 1e-9;
  // 0 selects shortest sigma / 50. RK4 uses it as its step.
  double max_step = 0.0;
  double sample_interval = 0.01;

  friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

struct Trajectory {
  Basis basis;
  std::vector<double> times;
  std::vector<StateVector> states;
  Eigen::MatrixXd populations;     // samples x basis size
  std::vector<double> norms;       // squared norm per sample
  std::vector<double> dark_phases; // unwrapped arg<D|psi>, empty if not tracked

  std::size_t size() const { return times.size(); }
  const StateVector& final_state() const { return states.back(); }
};

struct SpectrumScan {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> eigenvalues;  // ascending, rad/us
};

/// Resolved step bound for a schedule; throws if the configured value
/// exceeds shortest sigma / 50.
double effective_max_step(const IntegratorConfig& config, const DriveSchedule& schedule);

/// Solves i d psi/dt = H(t) psi over the schedule span, sampling every
/// config.sample_interval plus exactly at the end. When `dark` is given the
/// trajectory also carries the unwrapped dark-state overlap phase.
Trajectory propagate(const HamiltonianModel& model, const StateVector& initial, const IntegratorConfig& config,
                     const DarkStateFn& dark = {});

/// As above over [t_begin, t_end] (a sub-span of the schedule).
Trajectory propagate(const HamiltonianModel& model, const StateVector& initial, const IntegratorConfig& config,
                     double t_begin, double t_end, const DarkStateFn& dark = {});

/// Eigenvalues of the decay-free H(t) on the sampling grid of the schedule.
SpectrumScan instantaneous_spectrum(const HamiltonianModel& model, const IntegratorConfig& config);

/// Per-sample unwrapped phase of <D(t)|psi(t)>. Throws kAdiabaticityLost if
/// |<D|psi>|^2 drops below 0.5 and kPhaseSampling if consecutive samples
/// differ by pi/4 or more.
std::vector<double> dark_phase_track(const Trajectory& trajectory, const DarkStateFn& dark);

/// Accumulated dark-state phase from the first to the last sample.
double dark_phase(const Trajectory& trajectory, const DarkStateFn& dark);

}  // namespace rydstirap
