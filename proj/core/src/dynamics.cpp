#include "dqmem/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dqmem/errors.hpp"

namespace dqmem {
namespace {

constexpr double kBisectionTolerance = 1e-10;

double analytic_lifetime(double k, double gamma, const FrequencySchedule& schedule) {
  if (gamma == 0.0) return kInfiniteLifetime;
  const double threshold = 0.5 * gamma;
  if (k <= threshold) return 0.0;
  switch (schedule.kind) {
    case ScheduleKind::Constant:
      return kInfiniteLifetime;
    case ScheduleKind::ExpDecay:
      return schedule.time_constant * std::log(2.0 * k / gamma);
  }
  return kInfiniteLifetime;
}

double bisect_lifetime(double k, double gamma, const FrequencySchedule& schedule) {
  const double threshold = 0.5 * gamma;
  auto excess = [&](double t) { return frequency_at(schedule, k, t) - threshold; };
  if (excess(0.0) <= 0.0) return 0.0;

  double lo = 0.0;
  double hi = schedule.kind == ScheduleKind::ExpDecay ? schedule.time_constant : 1.0;
  while (excess(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) return kInfiniteLifetime;  // never crosses
  }
  while (hi - lo > kBisectionTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double mode_lifetime(double k, const Damping& damping,
                     const FrequencySchedule& schedule, LifetimeBackend backend) {
  if (!(k > 0.0)) {
    throw Error(ErrorCode::NonPositiveMomentum, "lifetime needs k > 0");
  }
  if (backend == LifetimeBackend::Analytic) {
    return analytic_lifetime(k, damping.gamma(), schedule);
  }
  if (!damping.dissipative()) {
    throw Error(ErrorCode::ZeroDampingFiniteLifetime,
                "numeric lifetimes need Gamma > 0; a non-dissipative mode never decays");
  }
  return bisect_lifetime(k, damping.gamma(), schedule);
}

LifetimeProfile lifetime_profile(const ModeGrid& grid, const Damping& damping,
                                 const FrequencySchedule& schedule,
                                 LifetimeBackend backend) {
  LifetimeProfile profile;
  profile.backend = backend;
  profile.lifetimes.reserve(grid.size());
  for (double k : grid.momenta()) {
    profile.lifetimes.push_back(mode_lifetime(k, damping, schedule, backend));
  }
  return profile;
}

ModeTrajectory solve_dwq(double k, const Damping& damping,
                         const FrequencySchedule& schedule, double t_end,
                         double dt, double u0, double v0) {
  if (!(dt > 0.0)) throw Error(ErrorCode::NonPositiveStep, "dt must be positive");
  if (!(t_end > 0.0)) throw Error(ErrorCode::NonPositiveHorizon, "t_end must be positive");

  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt * (1.0 - 1e-12)));
  const std::size_t n = std::max<std::size_t>(steps, 1);
  const double h = t_end / static_cast<double>(n);
  const double gamma = damping.gamma();

  // State (u, v); acceleration a(t, u, v) = -Gamma v - Omega(t)^2 u.
  auto accel = [&](double t, double u, double v) {
    const double w = frequency_at(schedule, k, t);
    return -gamma * v - w * w * u;
  };

  ModeTrajectory traj;
  traj.times.reserve(n + 1);
  traj.u.reserve(n + 1);
  traj.u_dot.reserve(n + 1);
  double u = u0;
  double v = v0;
  traj.times.push_back(0.0);
  traj.u.push_back(u);
  traj.u_dot.push_back(v);

  for (std::size_t i = 0; i < n; ++i) {
    const double t = h * static_cast<double>(i);
    const double k1u = v;
    const double k1v = accel(t, u, v);
    const double k2u = v + 0.5 * h * k1v;
    const double k2v = accel(t + 0.5 * h, u + 0.5 * h * k1u, k2u);
    const double k3u = v + 0.5 * h * k2v;
    const double k3v = accel(t + 0.5 * h, u + 0.5 * h * k2u, k3u);
    const double k4u = v + h * k3v;
    const double k4v = accel(t + h, u + h * k3u, k4u);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    traj.times.push_back(i + 1 == n ? t_end : h * static_cast<double>(i + 1));
    traj.u.push_back(u);
    traj.u_dot.push_back(v);
  }
  return traj;
}

double default_integrator_step(const ModeGrid& grid, const FrequencySchedule& schedule) {
  double shortest = kInfiniteLifetime;
  for (double k : grid.momenta()) {
    shortest = std::min(shortest, 2.0 * std::numbers::pi / frequency_at(schedule, k, 0.0));
  }
  return shortest / 200.0;
}

std::string_view to_string(MemoryStatus status) {
  return status == MemoryStatus::Alive ? "alive" : "forgotten";
}

MemoryState make_memory_state(const MemoryCode& code, double epsilon_forget) {
  validate_code(code);
  MemoryState state{code, code, code.recorded_at, MemoryStatus::Alive};
  if (is_forgotten(state, epsilon_forget)) return forget(state);
  return state;
}

MemoryState evolve(const MemoryState& state, double dt, const LifetimeProfile& profile,
                   double epsilon_forget) {
  if (!(dt > 0.0) || !(state.t + dt > state.t)) {
    throw Error(ErrorCode::NonPositiveTimeStep,
                "evolution only runs forward; got dt = " + std::to_string(dt));
  }
  if (profile.size() != state.current.size()) {
    throw Error(ErrorCode::GridMismatch, "lifetime profile and memory differ in mode count");
  }
  MemoryState next = state;
  next.t = state.t + dt;
  if (state.status == MemoryStatus::Forgotten) return next;

  for (std::size_t k = 0; k < next.current.size(); ++k) {
    const double tau = profile.lifetimes[k];
    double& n = next.current.occupations[k];
    if (tau == 0.0) {
      n = 0.0;
    } else if (std::isfinite(tau)) {
      n *= std::exp(-dt / tau);
    }
  }
  if (is_forgotten(next, epsilon_forget)) return forget(next);
  return next;
}

bool is_forgotten(const MemoryState& state, double epsilon_forget) {
  const auto& occ = state.current.occupations;
  return std::all_of(occ.begin(), occ.end(),
                     [&](double n) { return n < epsilon_forget; });
}

MemoryState forget(const MemoryState& state) {
  MemoryState out = state;
  std::fill(out.current.occupations.begin(), out.current.occupations.end(), 0.0);
  out.status = MemoryStatus::Forgotten;
  return out;
}

MemoryState refresh(const MemoryState& state) {
  if (state.status == MemoryStatus::Forgotten) {
    throw Error(ErrorCode::RefreshForgotten,
                "memory '" + state.code_id() + "' was reduced to the empty vacuum");
  }
  MemoryState out = state;
  out.current.occupations = state.code0.occupations;
  return out;
}

RegimeReport regime_report(const ModeGrid& grid, const Damping& damping,
                           const FrequencySchedule& schedule, double t,
                           std::size_t class_count) {
  RegimeReport report;
  report.t = t;
  const std::size_t m = grid.size();
  report.momenta.assign(grid.momenta().begin(), grid.momenta().end());
  report.domain_sizes.reserve(m);
  report.ratios.reserve(m);
  report.overdamped.reserve(m);

  double size_sum = 0.0;
  double surviving_size_sum = 0.0;
  for (double k : grid.momenta()) {
    const double omega = frequency_at(schedule, k, t);
    double ratio = 0.0;
    if (damping.dissipative()) {
      ratio = omega > 0.0 ? competition_ratio(damping, omega) : kInfiniteLifetime;
    }
    const bool over = ratio >= 1.0;
    const double size = domain_size(k);
    report.domain_sizes.push_back(size);
    report.ratios.push_back(ratio);
    report.overdamped.push_back(over);
    size_sum += size;
    if (over) {
      ++report.overdamped_count;
    } else {
      ++report.underdamped_count;
      surviving_size_sum += size;
    }
  }
  report.mean_domain_size = size_sum / static_cast<double>(m);
  if (report.underdamped_count > 0) {
    report.mean_surviving_domain_size =
        surviving_size_sum / static_cast<double>(report.underdamped_count);
  }

  // Momenta increase along the grid, so walking it backwards visits domains
  // from smallest to largest.
  const std::size_t classes = std::clamp<std::size_t>(class_count, 1, m);
  for (std::size_t c = 0; c < classes; ++c) {
    const std::size_t begin = c * m / classes;
    const std::size_t end = (c + 1) * m / classes;
    SizeClass sc;
    sc.min_domain_size = report.domain_sizes[m - begin - 1];
    sc.max_domain_size = report.domain_sizes[m - end];
    for (std::size_t j = begin; j < end; ++j) {
      const std::size_t i = m - j - 1;
      ++sc.mode_count;
      if (!report.overdamped[i]) ++sc.surviving;
    }
    report.size_classes.push_back(sc);
  }
  return report;
}

}  // namespace dqmem
