#pragma once

// Dissipative evolution of recorded memories.
//
// A mode's lifetime is the instant its frequency drops to Gamma/2, the point
// where the damped mode equation
//
//   u'' + Gamma u' + Omega_k(t)^2 u = 0
//
// turns overdamped. Condensates then decay as N_k -> N_k exp(-dt / tau_k).

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "dqmem/condensate.hpp"
#include "dqmem/spectrum.hpp"

namespace dqmem {

inline constexpr double kDefaultForgetThreshold = 1e-6;
inline constexpr double kInfiniteLifetime = std::numeric_limits<double>::infinity();

enum class LifetimeBackend { Analytic, Numeric };

struct LifetimeProfile {
  std::vector<double> lifetimes;
  LifetimeBackend backend = LifetimeBackend::Analytic;

  std::size_t size() const noexcept { return lifetimes.size(); }
};

/// Overdamping crossing time of one mode.
///
/// Analytic: closed form for the schedule (T ln(2k/Gamma) for ExpDecay,
/// 0 or +inf for Constant). Numeric: bisection on Omega_k(t) - Gamma/2 to
/// an absolute tolerance of 1e-10. Modes that start overdamped (2k <= Gamma)
/// have lifetime 0; modes that never cross get +inf.
///
/// Gamma = 0 gives +inf from the Analytic backend and throws
/// ZeroDampingFiniteLifetime from the Numeric one, which needs a root.
double mode_lifetime(double k, const Damping& damping,
                     const FrequencySchedule& schedule, LifetimeBackend backend);

LifetimeProfile lifetime_profile(const ModeGrid& grid, const Damping& damping,
                                 const FrequencySchedule& schedule,
                                 LifetimeBackend backend = LifetimeBackend::Analytic);

struct ModeTrajectory {
  std::vector<double> times;
  std::vector<double> u;
  std::vector<double> u_dot;
};

/// Classic RK4 integration of the damped mode equation from (u0, v0) at t=0.
/// Uses ceil(t_end/dt) uniform steps, so the last sample sits exactly at
/// t_end and no step exceeds dt. Throws NonPositiveStep / NonPositiveHorizon.
ModeTrajectory solve_dwq(double k, const Damping& damping,
                         const FrequencySchedule& schedule, double t_end,
                         double dt, double u0, double v0);

/// Default integrator step: one two-hundredth of the shortest initial period.
double default_integrator_step(const ModeGrid& grid, const FrequencySchedule& schedule);

enum class MemoryStatus { Alive, Forgotten };

std::string_view to_string(MemoryStatus status);

struct MemoryState {
  MemoryCode code0;    // occupations at recording time
  MemoryCode current;  // shares code_id/recorded_at with code0
  double t = 0.0;
  MemoryStatus status = MemoryStatus::Alive;

  const std::string& code_id() const noexcept { return code0.code_id; }
  double recorded_at() const noexcept { return code0.recorded_at; }
  SqueezeVector squeeze() const { return code_to_squeeze(current); }
};

/// Fresh state at code.recorded_at. An all-below-threshold code is born
/// Forgotten.
MemoryState make_memory_state(const MemoryCode& code,
                              double epsilon_forget = kDefaultForgetThreshold);

/// Advances the state by dt (> 0, else NonPositiveTimeStep). Each occupation
/// decays by exp(-dt / tau_k). A state whose largest occupation falls below
/// epsilon_forget is reduced to the empty vacuum and marked Forgotten.
MemoryState evolve(const MemoryState& state, double dt, const LifetimeProfile& profile,
                   double epsilon_forget = kDefaultForgetThreshold);

bool is_forgotten(const MemoryState& state, double epsilon_forget = kDefaultForgetThreshold);

/// The empty vacuum: all occupations exactly 0, status Forgotten.
MemoryState forget(const MemoryState& state);

/// Restores the recorded occupations without touching t. Throws
/// RefreshForgotten for a Forgotten state.
MemoryState refresh(const MemoryState& state);

struct SizeClass {
  double min_domain_size = 0.0;
  double max_domain_size = 0.0;
  std::size_t mode_count = 0;
  std::size_t surviving = 0;

  double surviving_fraction() const {
    return mode_count == 0 ? 0.0 : static_cast<double>(surviving) / mode_count;
  }
};

struct RegimeReport {
  double t = 0.0;
  std::vector<double> momenta;
  std::vector<double> domain_sizes;
  std::vector<double> ratios;  // Gamma / (2 Omega_k(t)), +inf once Omega vanishes
  std::vector<bool> overdamped;
  std::size_t overdamped_count = 0;
  std::size_t underdamped_count = 0;
  std::vector<SizeClass> size_classes;  // ordered small -> large domains
  double mean_domain_size = 0.0;
  double mean_surviving_domain_size = 0.0;  // 0 when nothing survives
};

/// Competition between frequency and damping across the grid at time t.
/// Underdamped modes are the surviving domains. Modes are split into up to
/// `class_count` quantile classes by domain size.
RegimeReport regime_report(const ModeGrid& grid, const Damping& damping,
                           const FrequencySchedule& schedule, double t,
                           std::size_t class_count = 4);

}  // namespace dqmem
