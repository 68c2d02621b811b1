#include "dqmem/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dqmem/errors.hpp"

namespace dqmem {

ModeGrid ModeGrid::build(double volume, std::size_t mode_count) {
  if (!(volume > 0.0) || !std::isfinite(volume)) {
    throw Error(ErrorCode::NonPositiveVolume,
                "volume must be positive and finite, got " + std::to_string(volume));
  }
  if (mode_count == 0) {
    throw Error(ErrorCode::ZeroModeCount, "grid needs at least one mode");
  }
  std::vector<double> momenta(mode_count);
  for (std::size_t i = 0; i < mode_count; ++i) {
    momenta[i] = 2.0 * std::numbers::pi * static_cast<double>(i + 1) / volume;
  }
  return ModeGrid(volume, std::move(momenta));
}

FrequencySchedule FrequencySchedule::exp_decay(double time_constant) {
  if (!(time_constant > 0.0)) {
    throw Error(ErrorCode::InvalidSchedule,
                "ExpDecay time constant must be positive");
  }
  return {ScheduleKind::ExpDecay, time_constant};
}

Damping::Damping(double gamma) : gamma_(gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::NegativeDamping,
                "damping rate must be finite and >= 0, got " + std::to_string(gamma));
  }
}

double domain_size(double k) {
  if (!(k > 0.0)) {
    throw Error(ErrorCode::NonPositiveMomentum,
                "domain size needs k > 0, got " + std::to_string(k));
  }
  return 1.0 / k;
}

double frequency_at(const FrequencySchedule& schedule, double k, double t) {
  if (!(k > 0.0)) {
    throw Error(ErrorCode::NonPositiveMomentum,
                "frequency needs k > 0, got " + std::to_string(k));
  }
  if (!(t >= 0.0)) {
    throw Error(ErrorCode::NegativeTime,
                "frequency needs t >= 0, got " + std::to_string(t));
  }
  switch (schedule.kind) {
    case ScheduleKind::Constant:
      return k;
    case ScheduleKind::ExpDecay:
      return k * std::exp(-t / schedule.time_constant);
  }
  return k;
}

double competition_ratio(const Damping& damping, double omega) {
  if (!(omega > 0.0)) {
    throw Error(ErrorCode::NonPositiveFrequency,
                "competition ratio needs omega > 0, got " + std::to_string(omega));
  }
  return damping.gamma() / (2.0 * omega);
}

}  // namespace dqmem
