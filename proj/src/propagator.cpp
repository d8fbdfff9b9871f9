#include "rydstirap/propagator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace rydstirap {

namespace {

using cd = std::complex<double>;
constexpr cd kMinusI{0.0, -1.0};

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 5th minus embedded 4th order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Hairer, Norsett & Wanner).
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

std::vector<double> sample_grid(double t_begin, double t_end, double interval) {
  const double span = t_end - t_begin;
  const auto n = static_cast<long>(std::ceil(span / interval - 1e-9));
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(n) + 1);
  for (long k = 0; k < n; ++k) times.push_back(t_begin + double(k) * interval);
  times.push_back(t_end);
  return times;
}

std::string time_str(double t) {
  std::ostringstream os;
  os.precision(12);
  os << t;
  return os.str();
}

class Rhs {
 public:
  explicit Rhs(const HamiltonianModel& model) : model_(model), tmp_(model.dimension()) {}

  // out = -i H(t) y
  void operator()(double t, const VectorXc& y, VectorXc& out) {
    model_.apply(t, y, tmp_);
    out = kMinusI * tmp_;
  }

 private:
  const HamiltonianModel& model_;
  VectorXc tmp_;
};

class Recorder {
 public:
  Recorder(Trajectory& traj, const Basis& basis) : traj_(traj), basis_(basis) {}

  void record(std::size_t index, const VectorXc& y) {
    if (!y.allFinite()) {
      throw Error(ErrorCode::kNonFiniteAmplitude, "NaN amplitude at t = " + time_str(traj_.times[index]) + " us");
    }
    const double norm = y.squaredNorm();
    if (norm > 1.0 + StateVector::kNormSlack) {
      throw Error(ErrorCode::kIntegratorUnstable, "norm grew to " + time_str(norm) + " at t = " +
                                                      time_str(traj_.times[index]) + " us; reduce the step size");
    }
    traj_.states.emplace_back(basis_, y);
    traj_.populations.row(Eigen::Index(index)) = y.cwiseAbs2().transpose();
    traj_.norms.push_back(y.squaredNorm());
  }

 private:
  Trajectory& traj_;
  const Basis& basis_;
};

void check_finite(const VectorXc& y, double t) {
  if (!y.allFinite()) throw Error(ErrorCode::kNonFiniteAmplitude, "NaN amplitude at t = " + time_str(t) + " us");
}

void integrate_rk4(const HamiltonianModel& model, VectorXc y, double h_max, Trajectory& traj, Recorder& rec) {
  Rhs f(model);
  const Eigen::Index n = y.size();
  VectorXc k1(n), k2(n), k3(n), k4(n), tmp(n);
  rec.record(0, y);
  for (std::size_t s = 0; s + 1 < traj.times.size(); ++s) {
    const double t0 = traj.times[s];
    const double span = traj.times[s + 1] - t0;
    const auto steps = static_cast<long>(std::ceil(span / h_max - 1e-9));
    const double h = span / double(steps);
    for (long k = 0; k < steps; ++k) {
      const double t = t0 + double(k) * h;
      f(t, y, k1);
      tmp = y + (0.5 * h) * k1;
      f(t + 0.5 * h, tmp, k2);
      tmp = y + (0.5 * h) * k2;
      f(t + 0.5 * h, tmp, k3);
      tmp = y + h * k3;
      f(t + h, tmp, k4);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    check_finite(y, traj.times[s + 1]);
    rec.record(s + 1, y);
  }
}

void integrate_dopri(const HamiltonianModel& model, VectorXc y, const IntegratorConfig& cfg, double h_max,
                     Trajectory& traj, Recorder& rec) {
  Rhs f(model);
  const Eigen::Index n = y.size();
  VectorXc k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), stage(n), y_new(n), err(n);

  const double t_end = traj.times.back();
  double t = traj.times.front();
  double h = 1e-2 * h_max;
  std::size_t next = 1;
  rec.record(0, y);
  f(t, y, k1);

  while (next < traj.times.size()) {
    const bool last = h >= t_end - t;
    if (last) h = t_end - t;
    const double t_new = last ? t_end : t + h;

    stage = y + h * (a21 * k1);
    f(t + c2 * h, stage, k2);
    stage = y + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, stage, k3);
    stage = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, stage, k4);
    stage = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, stage, k5);
    stage = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t_new, stage, k6);
    y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f(t_new, y_new, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    // Max norm over components.
    double err_norm = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y(i)), std::abs(y_new(i)));
      err_norm = std::max(err_norm, std::abs(err(i)) / scale);
    }
    if (!y_new.allFinite() || std::isnan(err_norm)) {
      throw Error(ErrorCode::kNonFiniteAmplitude, "NaN amplitude at t = " + time_str(t_new) + " us");
    }

    if (err_norm <= 1.0) {
      // Dense output for every sample inside (t, t_new].
      const VectorXc ydiff = y_new - y;
      const VectorXc bspl = h * k1 - ydiff;
      const VectorXc r4 = ydiff - h * k7 - bspl;
      const VectorXc r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      while (next < traj.times.size() && traj.times[next] <= t_new) {
        if (traj.times[next] == t_new) {
          rec.record(next, y_new);
        } else {
          const double th = (traj.times[next] - t) / h;
          const double th1 = 1.0 - th;
          rec.record(next, y + th * (ydiff + th1 * (bspl + th * (r4 + th1 * r5))));
        }
        ++next;
      }
      t = t_new;
      y.swap(y_new);
      k1.swap(k7);
      const double grow = err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
      h = std::min(h * grow, h_max);
    } else {
      h *= std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 1.0);
    }
    if (next < traj.times.size() && h < 1e-14 * std::max(1.0, std::abs(t))) {
      throw Error(ErrorCode::kStepUnderflow, "step size underflow at t = " + time_str(t) + " us");
    }
  }
}

}  // namespace

double effective_max_step(const IntegratorConfig& config, const DriveSchedule& schedule) {
  const double bound = schedule.shortest_sigma() / 50.0;
  if (config.max_step < 0.0) throw Error(ErrorCode::kInvalidArgument, "max_step must be non-negative");
  if (config.max_step == 0.0) return bound;
  if (config.max_step > bound * (1.0 + 1e-12)) {
    throw Error(ErrorCode::kInvalidArgument,
                "max_step " + time_str(config.max_step) + " us exceeds sigma/50 = " + time_str(bound) + " us");
  }
  return config.max_step;
}

Trajectory propagate(const HamiltonianModel& model, const StateVector& initial, const IntegratorConfig& config,
                     const DarkStateFn& dark) {
  return propagate(model, initial, config, model.schedule().t_begin(), model.schedule().t_end(), dark);
}

Trajectory propagate(const HamiltonianModel& model, const StateVector& initial, const IntegratorConfig& config,
                     double t_begin, double t_end, const DarkStateFn& dark) {
  if (!(initial.basis() == model.basis())) {
    throw Error(ErrorCode::kBasisMismatch, "initial state is not in the model basis");
  }
  if (std::abs(initial.squared_norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "initial state must be normalized");
  }
  if (!(config.abs_tol > 0.0) || !(config.rel_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "integrator tolerances must be positive");
  }
  if (!(config.sample_interval > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sample interval must be positive");
  }
  if (!(t_end > t_begin)) throw Error(ErrorCode::kInvalidArgument, "propagation span must be non-empty");
  const double h_max = effective_max_step(config, model.schedule());

  Trajectory traj;
  traj.basis = model.basis();
  traj.times = sample_grid(t_begin, t_end, config.sample_interval);
  traj.states.reserve(traj.times.size());
  traj.norms.reserve(traj.times.size());
  traj.populations.resize(Eigen::Index(traj.times.size()), model.dimension());
  Recorder rec(traj, traj.basis);

  switch (config.method) {
    case IntegratorMethod::kClassicalRk4:
      integrate_rk4(model, initial.amplitudes(), h_max, traj, rec);
      break;
    case IntegratorMethod::kDormandPrince45:
      integrate_dopri(model, initial.amplitudes(), config, h_max, traj, rec);
      break;
  }
  if (dark) traj.dark_phases = dark_phase_track(traj, dark);
  return traj;
}

SpectrumScan instantaneous_spectrum(const HamiltonianModel& model, const IntegratorConfig& config) {
  if (!(config.sample_interval > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sample interval must be positive");
  }
  const HamiltonianModel hermitian = model.without_decay();
  SpectrumScan scan;
  scan.times = sample_grid(model.schedule().t_begin(), model.schedule().t_end(), config.sample_interval);
  scan.eigenvalues.reserve(scan.times.size());
  for (double t : scan.times) scan.eigenvalues.push_back(hermitian_eigensolve(hermitian.matrix(t)).eigenvalues);
  return scan;
}

std::vector<double> dark_phase_track(const Trajectory& trajectory, const DarkStateFn& dark) {
  std::vector<double> phases;
  phases.reserve(trajectory.size());
  double previous_raw = 0.0;
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const double t = trajectory.times[k];
    const cd overlap = inner_product(dark(t), trajectory.states[k]);
    if (std::norm(overlap) < 0.5) {
      throw Error(ErrorCode::kAdiabaticityLost,
                  "dark-state population " + time_str(std::norm(overlap)) + " at t = " + time_str(t) + " us");
    }
    const double raw = std::arg(overlap);
    if (k == 0) {
      phases.push_back(raw);
    } else {
      const double step = std::remainder(raw - previous_raw, 2.0 * std::numbers::pi);
      if (std::abs(step) >= std::numbers::pi / 4) {
        throw Error(ErrorCode::kPhaseSampling, "phase jumps by " + time_str(step) + " rad at t = " + time_str(t) +
                                                   " us; reduce the sample interval");
      }
      phases.push_back(phases.back() + step);
    }
    previous_raw = raw;
  }
  return phases;
}

double dark_phase(const Trajectory& trajectory, const DarkStateFn& dark) {
  const auto track = dark_phase_track(trajectory, dark);
  return track.back() - track.front();
}

}  // namespace rydstirap
