// sin^2 pulse envelopes, STIRAP drive schedules and the mixing angle.
#pragma once

#include <span>
#include <vector>

namespace rydstirap {

/// One sin^2 pulse, nonzero only on (t_start, t_start + 2 sigma).
struct PulseEnvelope {
  double peak = 0.0;     // rad/us
  double t_start = 0.0;  // us
  double sigma = 1.0;    // FWHM, us

  double t_end() const { return t_start + 2.0 * sigma; }
};

double envelope_value(const PulseEnvelope& pulse, double t);

/// theta = atan2(omega1, omega_r). Throws kUndefinedMixingAngle when both vanish.
double mixing_angle(double omega1, double omega_r);

/// Relative phase phi_r(t) of the Rydberg coupling: a start value followed by
/// non-overlapping linear ramps, constant in between. Continuous everywhere.
class PhaseProfile {
 public:
  struct Ramp {
    double t_begin;
    double t_end;
    double delta;  // phase change across the ramp, rad

    double rate() const { return delta / (t_end - t_begin); }
  };

  explicit PhaseProfile(double initial = 0.0) : initial_(initial) {}

  /// Appends a ramp; ramps must be added in time order and may not overlap.
  PhaseProfile& add_ramp(double t_begin, double t_end, double delta);

  double value(double t) const;
  double rate(double t) const;
  double initial() const { return initial_; }
  double final_value() const;
  std::span<const Ramp> ramps() const { return ramps_; }

 private:
  double initial_;
  std::vector<Ramp> ramps_;
};

/// Omega_1(t), Omega_r(t) and phi_r(t) over a finite span.
class DriveSchedule {
 public:
  DriveSchedule(std::vector<PulseEnvelope> lower, std::vector<PulseEnvelope> upper, PhaseProfile phase,
                double t_begin, double t_end);

  double omega1(double t) const;
  double omega_r(double t) const;
  double phase(double t) const { return phase_.value(t); }

  /// Mixing angle along the schedule. Where both couplings vanish the value
  /// is the limit at the nearest pulse edge, so theta(t) is defined on the
  /// whole span and constant across gaps.
  double mixing_angle(double t) const;

  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }
  double shortest_sigma() const;

  std::span<const PulseEnvelope> lower_pulses() const { return lower_; }
  std::span<const PulseEnvelope> upper_pulses() const { return upper_; }
  const PhaseProfile& phase_profile() const { return phase_; }

 private:
  std::vector<PulseEnvelope> lower_;
  std::vector<PulseEnvelope> upper_;
  PhaseProfile phase_;
  double t_begin_;
  double t_end_;
};

/// Single STIRAP process. Counterintuitive order (Omega_r first, theta 0 -> pi/2)
/// unless `reversed`, which swaps the pulse order (theta pi/2 -> 0).
/// Requires 0 < delta_t < 2 sigma; otherwise throws kNonAdiabaticSchedule.
DriveSchedule stirap_schedule(double peak1, double peak_r, double sigma, double delta_t, double t0,
                              bool reversed);

/// Times that delimit the two processes of a double STIRAP sequence.
struct DoubleStirapTiming {
  double first_begin;
  double first_end;     // end of the first process, start of the gap
  double second_begin;  // end of the gap
  double second_end;

  double gap_middle() const { return 0.5 * (first_end + second_begin); }
};

DoubleStirapTiming double_stirap_timing(double sigma, double delta_t, double gap, double t0 = 0.0);

/// Counterintuitive process at phi_r = 0, a gap of length `gap` over which phi_r
/// ramps linearly by `phase_between`, then the reversed process at constant
/// phi_r = phase_between.
DriveSchedule double_stirap(double peak1, double peak_r, double sigma, double delta_t, double gap,
                            double phase_between, double t0 = 0.0);

}  // namespace rydstirap
