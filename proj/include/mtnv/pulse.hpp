#pragma once

// Time-dependent coupling envelopes in units of g0, time in units of 1/g0.

#include <vector>

namespace mtnv {

struct PulseSegment {
  double t_start = 0.0;
  double t_end = 0.0;
  double amplitude = 0.0;
};

/// A coupling envelope.
///   kConstant:  amplitude inside [window_start, window_end], else 0.
///   kGaussian:  amplitude * exp(-(t - center)^2 / width) inside the window.
///               `width` is the exponent denominator (30 and 6 in the
///               reference schedules), not a standard deviation.
///   kPiecewise: sum of boxcar segments; the window is ignored.
struct PulseSchedule {
  enum class Kind { kConstant, kGaussian, kPiecewise };

  Kind kind = Kind::kConstant;
  double amplitude = 0.0;
  double center = 0.0;
  double width = 1.0;
  double window_start = -1e300;
  double window_end = 1e300;
  std::vector<PulseSegment> segments;

  static PulseSchedule constant(double amplitude);
  static PulseSchedule gaussian(double amplitude, double center, double width);
  static PulseSchedule boxcar(double amplitude, double t_start, double t_end);
  static PulseSchedule piecewise(std::vector<PulseSegment> segments);

  double operator()(double t) const;

  /// Times in (t0, t1) where the envelope may jump.
  std::vector<double> breakpoints(double t0, double t1) const;

  /// True when the envelope is constant between breakpoints.
  bool is_piecewise_constant() const { return kind != Kind::kGaussian; }

  /// Envelope run `factor` times faster: s(t) = this(factor * t).
  PulseSchedule time_compressed(double factor) const;

  /// Throws std::invalid_argument on negative amplitude or non-positive width.
  void validate() const;
};

/// g(t) = exp(-(t - pi)^2 / 30), in units of g0.
PulseSchedule paper_dark_g_schedule();
/// lambda_e(t) = 1.5 exp(-t^2 / 6), in units of g0.
PulseSchedule paper_dark_lambda_schedule();

}  // namespace mtnv
