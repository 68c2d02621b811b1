#pragma once

// Momentum grid, frequency schedules and the frequency/dissipation balance
// of the dipole-wave modes. Natural units (hbar = c = 1) throughout.

#include <cstddef>
#include <span>
#include <vector>

namespace dqmem {

/// Finite-volume momentum grid k_i = 2*pi*i/L, i = 1..M. The zero mode is
/// excluded.
class ModeGrid {
 public:
  /// Throws NonPositiveVolume or ZeroModeCount.
  static ModeGrid build(double volume, std::size_t mode_count);

  double volume() const noexcept { return volume_; }
  std::size_t size() const noexcept { return momenta_.size(); }
  std::span<const double> momenta() const noexcept { return momenta_; }
  double momentum(std::size_t i) const { return momenta_.at(i); }

  friend bool operator==(const ModeGrid&, const ModeGrid&) = default;

 private:
  ModeGrid(double volume, std::vector<double> momenta)
      : volume_(volume), momenta_(std::move(momenta)) {}

  double volume_;
  std::vector<double> momenta_;
};

enum class ScheduleKind { Constant, ExpDecay };

/// Omega_k(t) = k for Constant, k * exp(-t / T) for ExpDecay.
struct FrequencySchedule {
  ScheduleKind kind = ScheduleKind::Constant;
  double time_constant = 0.0;  // ExpDecay only

  static FrequencySchedule constant() { return {}; }
  /// Throws InvalidSchedule unless T > 0.
  static FrequencySchedule exp_decay(double time_constant);
};

/// Damping rate Gamma >= 0; zero means the non-dissipative regime.
class Damping {
 public:
  Damping() = default;
  /// Throws NegativeDamping.
  explicit Damping(double gamma);

  double gamma() const noexcept { return gamma_; }
  bool dissipative() const noexcept { return gamma_ > 0.0; }

 private:
  double gamma_ = 0.0;
};

/// Linear size of the domain a mode of momentum k can order: exactly 1/k.
double domain_size(double k);

double frequency_at(const FrequencySchedule& schedule, double k, double t);

/// rho = Gamma / (2 Omega). rho > 1 is overdamped (dissipation dominates),
/// rho < 1 underdamped (frequency dominates).
double competition_ratio(const Damping& damping, double omega);

}  // namespace dqmem
