#include "rydstirap/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rydstirap/core.hpp"

namespace rydstirap {

namespace {

void validate_pulse(const PulseEnvelope& p) {
  if (!(p.peak >= 0.0) || !std::isfinite(p.peak)) {
    throw Error(ErrorCode::kInvalidArgument, "pulse peak must be finite and non-negative");
  }
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) {
    throw Error(ErrorCode::kInvalidArgument, "pulse width sigma must be positive");
  }
}

double sum_envelopes(const std::vector<PulseEnvelope>& pulses, double t) {
  double total = 0.0;
  for (const auto& p : pulses) total += envelope_value(p, t);
  return total;
}

}  // namespace

double envelope_value(const PulseEnvelope& pulse, double t) {
  if (t <= pulse.t_start || t >= pulse.t_end()) return 0.0;
  const double s = std::sin(std::numbers::pi * (t - pulse.t_start) / (2.0 * pulse.sigma));
  return pulse.peak * s * s;
}

double mixing_angle(double omega1, double omega_r) {
  if (omega1 < 0.0 || omega_r < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "mixing angle needs non-negative Rabi frequencies");
  }
  if (omega1 == 0.0 && omega_r == 0.0) {
    throw Error(ErrorCode::kUndefinedMixingAngle, "both Rabi frequencies vanish");
  }
  return std::atan2(omega1, omega_r);
}

// ---------------------------------------------------------------------------

PhaseProfile& PhaseProfile::add_ramp(double t_begin, double t_end, double delta) {
  if (!(t_end > t_begin)) throw Error(ErrorCode::kInvalidArgument, "phase ramp needs t_end > t_begin");
  if (!ramps_.empty() && t_begin < ramps_.back().t_end) {
    throw Error(ErrorCode::kInvalidArgument, "phase ramps must be ordered and non-overlapping");
  }
  ramps_.push_back({t_begin, t_end, delta});
  return *this;
}

double PhaseProfile::value(double t) const {
  double v = initial_;
  for (const auto& r : ramps_) {
    if (t <= r.t_begin) break;
    if (t >= r.t_end) {
      v += r.delta;
    } else {
      v += r.delta * (t - r.t_begin) / (r.t_end - r.t_begin);
      break;
    }
  }
  return v;
}

double PhaseProfile::rate(double t) const {
  for (const auto& r : ramps_) {
    if (t > r.t_begin && t < r.t_end) return r.rate();
  }
  return 0.0;
}

double PhaseProfile::final_value() const {
  double v = initial_;
  for (const auto& r : ramps_) v += r.delta;
  return v;
}

// ---------------------------------------------------------------------------

DriveSchedule::DriveSchedule(std::vector<PulseEnvelope> lower, std::vector<PulseEnvelope> upper,
                             PhaseProfile phase, double t_begin, double t_end)
    : lower_(std::move(lower)), upper_(std::move(upper)), phase_(std::move(phase)), t_begin_(t_begin),
      t_end_(t_end) {
  for (const auto& p : lower_) validate_pulse(p);
  for (const auto& p : upper_) validate_pulse(p);
  if (!(t_end_ > t_begin_)) throw Error(ErrorCode::kInvalidArgument, "schedule span must be non-empty");
}

double DriveSchedule::omega1(double t) const { return sum_envelopes(lower_, t); }
double DriveSchedule::omega_r(double t) const { return sum_envelopes(upper_, t); }

double DriveSchedule::shortest_sigma() const {
  double s = std::numeric_limits<double>::infinity();
  for (const auto& p : lower_) s = std::min(s, p.sigma);
  for (const auto& p : upper_) s = std::min(s, p.sigma);
  return s;
}

double DriveSchedule::mixing_angle(double t) const {
  const double o1 = omega1(t);
  const double orr = omega_r(t);
  if (o1 > 0.0 || orr > 0.0) return rydstirap::mixing_angle(o1, orr);

  // Dark interval: take the one-sided limit at the nearest active pulse edge.
  double left_edge = -std::numeric_limits<double>::infinity();
  double right_edge = std::numeric_limits<double>::infinity();
  auto scan = [&](const std::vector<PulseEnvelope>& pulses) {
    for (const auto& p : pulses) {
      if (p.peak == 0.0) continue;
      if (p.t_end() <= t) left_edge = std::max(left_edge, p.t_end());
      if (p.t_start >= t) right_edge = std::min(right_edge, p.t_start);
    }
  };
  scan(lower_);
  scan(upper_);
  if (!std::isfinite(left_edge) && !std::isfinite(right_edge)) {
    throw Error(ErrorCode::kUndefinedMixingAngle, "schedule has no active pulse");
  }
  const double eps = 1e-6 * shortest_sigma();
  const bool use_left = std::isfinite(left_edge) && (t - left_edge <= right_edge - t);
  const double probe = use_left ? left_edge - eps : right_edge + eps;
  return rydstirap::mixing_angle(omega1(probe), omega_r(probe));
}

// ---------------------------------------------------------------------------

DriveSchedule stirap_schedule(double peak1, double peak_r, double sigma, double delta_t, double t0,
                              bool reversed) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma must be positive");
  if (!(delta_t > 0.0) || !(delta_t < 2.0 * sigma)) {
    throw Error(ErrorCode::kNonAdiabaticSchedule,
                "pulse delay must satisfy 0 < delta_t < 2 sigma (delta_t = " + std::to_string(delta_t) +
                    ", sigma = " + std::to_string(sigma) + ")");
  }
  PulseEnvelope first{reversed ? peak1 : peak_r, t0, sigma};
  PulseEnvelope second{reversed ? peak_r : peak1, t0 + delta_t, sigma};
  std::vector<PulseEnvelope> lower{reversed ? first : second};
  std::vector<PulseEnvelope> upper{reversed ? second : first};
  return DriveSchedule(std::move(lower), std::move(upper), PhaseProfile(), t0, t0 + delta_t + 2.0 * sigma);
}

DoubleStirapTiming double_stirap_timing(double sigma, double delta_t, double gap, double t0) {
  const double process = delta_t + 2.0 * sigma;
  return {t0, t0 + process, t0 + process + gap, t0 + 2.0 * process + gap};
}

DriveSchedule double_stirap(double peak1, double peak_r, double sigma, double delta_t, double gap,
                            double phase_between, double t0) {
  if (!(gap >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "gap between processes must be non-negative");
  if (gap == 0.0 && phase_between != 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "a phase change between processes needs a nonzero gap");
  }
  const auto timing = double_stirap_timing(sigma, delta_t, gap, t0);
  const DriveSchedule first = stirap_schedule(peak1, peak_r, sigma, delta_t, timing.first_begin, false);
  const DriveSchedule second = stirap_schedule(peak1, peak_r, sigma, delta_t, timing.second_begin, true);

  std::vector<PulseEnvelope> lower(first.lower_pulses().begin(), first.lower_pulses().end());
  lower.insert(lower.end(), second.lower_pulses().begin(), second.lower_pulses().end());
  std::vector<PulseEnvelope> upper(first.upper_pulses().begin(), first.upper_pulses().end());
  upper.insert(upper.end(), second.upper_pulses().begin(), second.upper_pulses().end());

  PhaseProfile phase;
  if (gap > 0.0 && phase_between != 0.0) phase.add_ramp(timing.first_end, timing.second_begin, phase_between);
  return DriveSchedule(std::move(lower), std::move(upper), std::move(phase), timing.first_begin,
                       timing.second_end);
}

}  // namespace rydstirap
