#include "mtnv/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mtnv {

PulseSchedule PulseSchedule::constant(double amplitude) {
  PulseSchedule s;
  s.kind = Kind::kConstant;
  s.amplitude = amplitude;
  return s;
}

PulseSchedule PulseSchedule::gaussian(double amplitude, double center,
                                      double width) {
  PulseSchedule s;
  s.kind = Kind::kGaussian;
  s.amplitude = amplitude;
  s.center = center;
  s.width = width;
  return s;
}

PulseSchedule PulseSchedule::boxcar(double amplitude, double t_start,
                                    double t_end) {
  PulseSchedule s = constant(amplitude);
  s.window_start = t_start;
  s.window_end = t_end;
  return s;
}

PulseSchedule PulseSchedule::piecewise(std::vector<PulseSegment> segments) {
  PulseSchedule s;
  s.kind = Kind::kPiecewise;
  s.segments = std::move(segments);
  return s;
}

double PulseSchedule::operator()(double t) const {
  switch (kind) {
    case Kind::kConstant:
      return (t >= window_start && t <= window_end) ? amplitude : 0.0;
    case Kind::kGaussian: {
      if (t < window_start || t > window_end) return 0.0;
      const double x = t - center;
      return amplitude * std::exp(-x * x / width);
    }
    case Kind::kPiecewise: {
      double v = 0.0;
      for (const auto& seg : segments) {
        if (t >= seg.t_start && t < seg.t_end) v += seg.amplitude;
      }
      return v;
    }
  }
  return 0.0;
}

std::vector<double> PulseSchedule::breakpoints(double t0, double t1) const {
  std::vector<double> pts;
  auto add = [&](double t) {
    if (t > t0 && t < t1) pts.push_back(t);
  };
  if (kind == Kind::kPiecewise) {
    for (const auto& seg : segments) {
      add(seg.t_start);
      add(seg.t_end);
    }
  } else {
    add(window_start);
    add(window_end);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

PulseSchedule PulseSchedule::time_compressed(double factor) const {
  if (!(factor > 0.0)) {
    throw std::invalid_argument("time_compressed: factor must be > 0");
  }
  PulseSchedule s = *this;
  s.center = center / factor;
  s.width = width / (factor * factor);
  s.window_start = window_start / factor;
  s.window_end = window_end / factor;
  for (auto& seg : s.segments) {
    seg.t_start /= factor;
    seg.t_end /= factor;
  }
  return s;
}

void PulseSchedule::validate() const {
  if (amplitude < 0.0) {
    throw std::invalid_argument("pulse amplitude must be >= 0");
  }
  if (kind == Kind::kGaussian && !(width > 0.0)) {
    throw std::invalid_argument("gaussian pulse width must be > 0");
  }
  for (const auto& seg : segments) {
    if (seg.amplitude < 0.0) {
      throw std::invalid_argument("pulse segment amplitude must be >= 0");
    }
    if (seg.t_end < seg.t_start) {
      throw std::invalid_argument("pulse segment ends before it starts");
    }
  }
}

PulseSchedule paper_dark_g_schedule() {
  return PulseSchedule::gaussian(1.0, std::numbers::pi, 30.0);
}

PulseSchedule paper_dark_lambda_schedule() {
  return PulseSchedule::gaussian(1.5, 0.0, 6.0);
}

}  // namespace mtnv
