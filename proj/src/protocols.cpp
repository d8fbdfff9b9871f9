#include "rydstirap/protocols.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "parallel.hpp"
#include "rydstirap/models.hpp"

namespace rydstirap {

namespace {

using cd = std::complex<double>;

// Trapezoid rule on [a, b], doubling the grid until successive estimates
// differ by less than `tol`.
template <typename Fn>
double refined_trapezoid(Fn&& f, double a, double b, double tol) {
  int n = 16;
  double h = (b - a) / n;
  double sum = 0.5 * (f(a) + f(b));
  for (int k = 1; k < n; ++k) sum += f(a + k * h);
  double estimate = sum * h;
  for (int level = 0; level < 20; ++level) {
    double odd = 0.0;
    for (int k = 1; k < 2 * n; k += 2) odd += f(a + k * 0.5 * h);
    sum += odd;
    n *= 2;
    h *= 0.5;
    const double refined = sum * h;
    const double change = std::abs(refined - estimate);
    estimate = refined;
    if (change < tol) break;
  }
  return estimate;
}

template <typename Integrand>
double geometric_phase(const AngleFn& theta, const PhaseProfile& phase, Integrand integrand) {
  double total = 0.0;
  for (const auto& ramp : phase.ramps()) {
    const auto f = [&](double t) { return integrand(theta(t)); };
    total += ramp.rate() * refined_trapezoid(f, ramp.t_begin, ramp.t_end, 1e-10);
  }
  return -total;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double coherent_weight(int atoms, int n1) {
  return std::sqrt(binomial(atoms, n1)) * std::pow(0.5, 0.5 * atoms);
}

double unwrapped_phase(const Trajectory& traj) { return traj.dark_phases.back() - traj.dark_phases.front(); }

}  // namespace

DriveSchedule ProtocolParameters::single_process() const {
  return stirap_schedule(omega1, omega_r, sigma, delta_t, 0.0, false);
}

DriveSchedule ProtocolParameters::double_process() const {
  return double_stirap(omega1, omega_r, sigma, delta_t, gap, phase_between);
}

// ---------------------------------------------------------------------------

std::vector<double> fidelity_track(const Trajectory& trajectory, const StateVector& target) {
  std::vector<double> f;
  f.reserve(trajectory.size());
  for (const auto& s : trajectory.states) f.push_back(fidelity(target, s));
  return f;
}

EntanglementResult entangle_two_atoms(const ProtocolParameters& params) {
  const DriveSchedule schedule = params.single_process();
  const HamiltonianModel model = make_model(TwoAtomModel{params.interaction, params.decay_rate, schedule});
  const StateVector initial = StateVector::basis_state(model.basis(), 0);
  Trajectory traj = propagate(model, initial, params.integrator);

  const StateVector target = two_atom_dark_state(std::numbers::pi / 2, schedule.phase(schedule.t_end()));
  const auto track = fidelity_track(traj, target);
  const double final_fidelity = track.back();
  std::size_t settled = track.size() - 1;
  while (settled > 0 && std::abs(track[settled - 1] - final_fidelity) <= 1e-3) --settled;

  StateVector final_state = traj.final_state();
  const double settling = traj.times[settled] - traj.times.front();
  return {std::move(final_state), final_fidelity, settling, std::move(traj)};
}

ScanResult fidelity_scan(std::span<const double> sigma_values, std::span<const double> interaction_values,
                         const ProtocolParameters& fixed) {
  if (sigma_values.empty() || interaction_values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "fidelity scan axes must be non-empty");
  }
  ScanResult result{{sigma_values.begin(), sigma_values.end()},
                    {interaction_values.begin(), interaction_values.end()},
                    {},
                    fixed};
  const double ratio = fixed.delta_t / fixed.sigma;
  const std::size_t n_e = interaction_values.size();
  result.points.resize(sigma_values.size() * n_e);
  detail::parallel_for(result.points.size(), [&](std::size_t k) {
    ScanPoint& point = result.points[k];
    point.sigma = sigma_values[k / n_e];
    point.interaction = interaction_values[k % n_e];
    point.fidelity = std::numeric_limits<double>::quiet_NaN();
    try {
      ProtocolParameters p = fixed;
      p.sigma = point.sigma;
      p.delta_t = ratio * point.sigma;
      p.interaction = point.interaction;
      point.fidelity = entangle_two_atoms(p).fidelity;
    } catch (const std::exception& e) {
      point.error = e.what();
    }
  });
  return result;
}

// ---------------------------------------------------------------------------

double gamma1(const AngleFn& theta, const PhaseProfile& phase) {
  return geometric_phase(theta, phase, [](double th) {
    const double s = std::sin(th);
    return s * s;
  });
}

double gamma2(const AngleFn& theta, const PhaseProfile& phase) {
  return geometric_phase(theta, phase, [](double th) {
    const double c2 = std::cos(th) * std::cos(th);
    const double s2 = std::sin(th) * std::sin(th);
    return c2 * s2 / (c2 * c2 + 2.0 * s2 * s2);
  });
}

GateReport phase_gate(const ProtocolParameters& params) {
  const DriveSchedule schedule = params.double_process();
  const HamiltonianModel single = single_atom_model(schedule, params.decay_rate);
  const HamiltonianModel pair = make_model(TwoAtomModel{params.interaction, params.decay_rate, schedule});

  GateReport report;
  report.phases[0] = 0.0;  // |00> is uncoupled
  report.return_fidelity[0] = 1.0;
  // Register states 1 and 2 (|01>, |10>) each carry one driven atom.
  detail::parallel_for(3, [&](std::size_t job) {
    if (job < 2) {
      const StateVector initial = StateVector::basis_state(single.basis(), 0);
      const Trajectory traj = propagate(single, initial, params.integrator, single_atom_dark_track(schedule));
      report.phases[job + 1] = unwrapped_phase(traj);
      report.return_fidelity[job + 1] = fidelity(initial, traj.final_state());
    } else {
      const StateVector initial = StateVector::basis_state(pair.basis(), 0);
      const Trajectory traj = propagate(pair, initial, params.integrator, two_atom_dark_track(schedule));
      report.phases[3] = unwrapped_phase(traj);
      report.return_fidelity[3] = fidelity(initial, traj.final_state());
    }
  });
  report.controlled_phase = report.phases[3] - report.phases[1] - report.phases[2] + report.phases[0];

  const AngleFn theta = [&schedule](double t) { return schedule.mixing_angle(t); };
  report.gamma1 = gamma1(theta, schedule.phase_profile());
  report.gamma2 = gamma2(theta, schedule.phase_profile());
  report.predicted_phase = report.gamma2 - 2.0 * report.gamma1;
  return report;
}

// ---------------------------------------------------------------------------

JxZeroResult prepare_jx_zero(int atoms, const ProtocolParameters& params) {
  if (atoms < 2) throw Error(ErrorCode::kInvalidArgument, "J_x = 0 preparation needs at least two atoms");
  const HamiltonianModel model = make_model(
      CollectiveModel{atoms, params.max_rydberg, params.interaction, params.decay_rate, params.single_process()});
  const StateVector initial =
      StateVector::basis_state(model.basis(), BasisLabel{BasisKind::kCollective, 0, atoms, 0, 0});
  Trajectory traj = propagate(model, initial, params.integrator);
  StateVector final_state = traj.final_state();
  const double f = fidelity(final_dark_state(atoms, params.max_rydberg), final_state);
  const double rydberg = final_state.rydberg_population();
  return {std::move(final_state), f, rydberg, std::move(traj)};
}

std::complex<double> ghz_phase_factor(int n1) {
  const cd plus = std::polar(1.0, std::numbers::pi / 4);
  const double sign = (n1 % 2 == 0) ? 1.0 : -1.0;
  return (plus + sign * std::conj(plus)) / std::sqrt(2.0);
}

StateVector ghz_target(int atoms) {
  Basis basis = Basis::ground_register(atoms);
  VectorXc v(atoms + 1);
  for (int n1 = 0; n1 <= atoms; ++n1) v(n1) = coherent_weight(atoms, n1) * ghz_phase_factor(n1);
  return StateVector::normalized(std::move(basis), std::move(v));
}

StateVector spin_coherent_state(int atoms, int sign) {
  Basis basis = Basis::ground_register(atoms);
  VectorXc v(atoms + 1);
  for (int n1 = 0; n1 <= atoms; ++n1) {
    v(n1) = coherent_weight(atoms, n1) * ((sign < 0 && n1 % 2 != 0) ? -1.0 : 1.0);
  }
  return StateVector::normalized(std::move(basis), std::move(v));
}

GhzResult ghz_protocol(int atoms, const ProtocolParameters& params) {
  if (atoms < 2) throw Error(ErrorCode::kInvalidArgument, "GHZ protocol needs at least two atoms");
  const DriveSchedule schedule = params.double_process();
  const auto timing = double_stirap_timing(params.sigma, params.delta_t, params.gap);
  const cd kick = std::polar(1.0, std::numbers::pi / 2);

  // Amplitude returned to |n1, 0, 0> for each sector; atoms in |0> are inert.
  std::vector<cd> returned(static_cast<std::size_t>(atoms) + 1, cd{1.0, 0.0});
  detail::parallel_for(static_cast<std::size_t>(atoms), [&](std::size_t job) {
    const int n1 = static_cast<int>(job) + 1;
    const HamiltonianModel model = make_model(
        CollectiveModel{n1, params.max_rydberg, params.interaction, params.decay_rate, schedule});
    const BasisLabel ground{BasisKind::kCollective, 0, n1, 0, 0};
    const StateVector initial = StateVector::basis_state(model.basis(), ground);

    const Trajectory first =
        propagate(model, initial, params.integrator, timing.first_begin, timing.gap_middle());
    VectorXc amps = first.final_state().amplitudes();
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
      if (model.basis()[i].nr >= 1) amps(i) *= kick;
    }
    const Trajectory second = propagate(model, StateVector(model.basis(), std::move(amps)), params.integrator,
                                        timing.gap_middle(), timing.second_end);
    returned[job + 1] = second.final_state().amplitude(ground);
  });

  VectorXc reg(atoms + 1);
  double sector_return = 0.0;
  std::vector<double> phases;
  for (int n1 = 0; n1 <= atoms; ++n1) {
    const cd a = returned[static_cast<std::size_t>(n1)];
    const double w = coherent_weight(atoms, n1);
    reg(n1) = w * a;
    sector_return += w * w * std::norm(a);
    phases.push_back(std::arg(a));
  }
  StateVector final_state(Basis::ground_register(atoms), std::move(reg));
  const double ghz = fidelity(ghz_target(atoms), final_state);
  const double plus = fidelity(spin_coherent_state(atoms, +1), final_state);
  const double minus = fidelity(spin_coherent_state(atoms, -1), final_state);
  return {std::move(final_state), ghz, plus, minus, sector_return, std::move(phases)};
}

}  // namespace rydstirap
