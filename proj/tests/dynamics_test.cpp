#include "dqmem/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace dqmem {
namespace {

using testing::error_of;

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

LifetimeProfile profile_of(std::vector<double> taus) {
  return LifetimeProfile{std::move(taus), LifetimeBackend::Analytic};
}

MemoryState state_of(std::vector<double> n, double t0 = 0.0) {
  return make_memory_state(MemoryCode{std::move(n), "m", t0});
}

// ---- lifetimes ----

TEST(Lifetime, Examples) {
  const Damping damping(2.0);
  const auto schedule = FrequencySchedule::exp_decay(1.0);
  for (auto backend : {LifetimeBackend::Analytic, LifetimeBackend::Numeric}) {
    EXPECT_EQ(mode_lifetime(1.0, damping, schedule, backend), 0.0);
    EXPECT_NEAR(mode_lifetime(kE, damping, schedule, backend), 1.0, 1e-9);
    EXPECT_EQ(mode_lifetime(0.5, damping, schedule, backend), 0.0);
  }
}

TEST(Lifetime, ZeroDamping) {
  const auto schedule = FrequencySchedule::exp_decay(1.0);
  EXPECT_TRUE(std::isinf(mode_lifetime(3.0, Damping(0.0), schedule, LifetimeBackend::Analytic)));
  EXPECT_EQ(error_of([&] {
              mode_lifetime(3.0, Damping(0.0), schedule, LifetimeBackend::Numeric);
            }),
            ErrorCode::ZeroDampingFiniteLifetime);
}

TEST(Lifetime, ConstantScheduleNeverCrosses) {
  const auto constant = FrequencySchedule::constant();
  for (auto backend : {LifetimeBackend::Analytic, LifetimeBackend::Numeric}) {
    EXPECT_TRUE(std::isinf(mode_lifetime(3.0, Damping(1.0), constant, backend)));
    EXPECT_EQ(mode_lifetime(0.4, Damping(1.0), constant, backend), 0.0);
  }
}

TEST(Lifetime, BackendsAgree) {
  for (double gamma : {0.1, 1.0, 2.0, 7.5}) {
    for (double T : {0.3, 1.0, 12.0}) {
      const Damping damping(gamma);
      const auto schedule = FrequencySchedule::exp_decay(T);
      for (double k = gamma / 2 + 0.01; k <= 100.0 * gamma; k *= 1.07) {
        const double a = mode_lifetime(k, damping, schedule, LifetimeBackend::Analytic);
        const double n = mode_lifetime(k, damping, schedule, LifetimeBackend::Numeric);
        ASSERT_NEAR(a, n, 1e-8) << "gamma=" << gamma << " T=" << T << " k=" << k;
      }
    }
  }
}

TEST(Lifetime, HierarchyOverGrid) {
  const auto grid = ModeGrid::build(4.0 * kPi, 100);  // k = 0.5 .. 50
  const Damping damping(2.0);
  const auto profile = lifetime_profile(grid, damping, FrequencySchedule::exp_decay(1.0));
  for (std::size_t i = 1; i < grid.size(); ++i) {
    EXPECT_GE(profile.lifetimes[i], profile.lifetimes[i - 1]);
    if (2.0 * grid.momentum(i - 1) > damping.gamma()) {
      EXPECT_GT(profile.lifetimes[i], profile.lifetimes[i - 1]);
    }
  }
}

// ---- mode equation ----

TEST(SolveDwq, UndampedReturnsAfterOnePeriod) {
  const auto traj = solve_dwq(1.0, Damping(0.0), FrequencySchedule::constant(), 2.0 * kPi,
                              2.0 * kPi / 200.0, 1.0, 0.0);
  EXPECT_EQ(traj.times.back(), 2.0 * kPi);
  EXPECT_NEAR(traj.u.back(), 1.0, 1e-6);
  EXPECT_NEAR(traj.u_dot.back(), 0.0, 1e-6);
  EXPECT_EQ(traj.times.size(), traj.u.size());
  EXPECT_EQ(traj.times.size(), traj.u_dot.size());
  for (std::size_t i = 1; i < traj.times.size(); ++i) EXPECT_GT(traj.times[i], traj.times[i - 1]);
}

TEST(SolveDwq, DampedEnvelope) {
  const double period = 2.0 * kPi;
  const auto traj = solve_dwq(1.0, Damping(0.2), FrequencySchedule::constant(), 1.5 * period,
                              period / 200.0, 1.0, 0.0);
  // Largest excursion in the second half of the run (around t = 2 pi).
  double peak = 0.0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    if (traj.times[i] > 0.75 * period) peak = std::max(peak, std::abs(traj.u[i]));
  }
  EXPECT_LE(peak, std::exp(-0.2 * kPi) + 1e-3);
}

TEST(SolveDwq, ZeroInitialDataStaysZero) {
  const auto traj = solve_dwq(3.0, Damping(0.7), FrequencySchedule::exp_decay(2.0), 10.0, 0.01,
                              0.0, 0.0);
  for (double u : traj.u) EXPECT_EQ(u, 0.0);
}

TEST(SolveDwq, RejectsBadSteps) {
  const auto c = FrequencySchedule::constant();
  EXPECT_EQ(error_of([&] { solve_dwq(1, Damping(0), c, 1.0, 0.0, 1, 0); }),
            ErrorCode::NonPositiveStep);
  EXPECT_EQ(error_of([&] { solve_dwq(1, Damping(0), c, 0.0, 0.1, 1, 0); }),
            ErrorCode::NonPositiveHorizon);
}

TEST(SolveDwq, EnergyConservedOverHundredPeriods) {
  const double omega = 1.7;
  const double period = 2.0 * kPi / omega;
  const auto traj = solve_dwq(omega, Damping(0.0), FrequencySchedule::constant(), 100.0 * period,
                              period / 200.0, 0.3, -1.1);
  auto energy = [&](std::size_t i) {
    return 0.5 * (traj.u_dot[i] * traj.u_dot[i] + omega * omega * traj.u[i] * traj.u[i]);
  };
  const double e0 = energy(0);
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.u.size(); ++i) {
    worst = std::max(worst, std::abs(energy(i) - e0) / e0);
  }
  EXPECT_LT(worst, 1e-6);
}

// Closed-form underdamped oscillator with u(0) = u0, u'(0) = v0.
double damped_closed_form(double omega, double gamma, double u0, double v0, double t) {
  const double wd = std::sqrt(omega * omega - 0.25 * gamma * gamma);
  const double b = (v0 + 0.5 * gamma * u0) / wd;
  return std::exp(-0.5 * gamma * t) * (u0 * std::cos(wd * t) + b * std::sin(wd * t));
}

TEST(SolveDwq, DampedMatchesClosedForm) {
  const double omega = 1.0;
  const double gamma = 0.2;
  const auto traj = solve_dwq(omega, Damping(gamma), FrequencySchedule::constant(), 20.0,
                              2.0 * kPi / 200.0, 1.0, 0.0);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    ASSERT_NEAR(traj.u[i], damped_closed_form(omega, gamma, 1.0, 0.0, traj.times[i]), 1e-6);
  }
}

TEST(SolveDwq, FourthOrderConvergence) {
  const double t_end = 10.0;
  const auto schedule = FrequencySchedule::constant();
  const double exact = damped_closed_form(2.0, 0.3, 1.0, 0.5, t_end);
  auto error = [&](double dt) {
    return std::abs(solve_dwq(2.0, Damping(0.3), schedule, t_end, dt, 1.0, 0.5).u.back() - exact);
  };
  const double ratio = error(0.05) / error(0.025);
  EXPECT_GE(ratio, 12.0);
  EXPECT_LE(ratio, 20.0);
}

// u'' + G u' + k^2 e^{-2t/T} u = 0 is solved by
//   u = e^{-G t / 2} [A J_nu(s) + B Y_nu(s)],  s = k T e^{-t/T},  nu = G T / 2.
TEST(SolveDwq, ExpDecayMatchesBesselSolution) {
  const double k = 3.0, gamma = 0.6, T = 2.0, u0 = 1.0, v0 = -0.4;
  const double nu = 0.5 * gamma * T;
  // Z'_nu = (nu/x) Z_nu - Z_{nu+1}; libstdc++ rejects negative orders.
  auto dj = [nu](double x) { return nu / x * std::cyl_bessel_j(nu, x) - std::cyl_bessel_j(nu + 1, x); };
  auto dy = [nu](double x) { return nu / x * std::cyl_neumann(nu, x) - std::cyl_neumann(nu + 1, x); };

  // Initial conditions: u(0) = A J + B Y; u'(0) = -G/2 u0 - (s0/T)(A J' + B Y').
  const double s0 = k * T;
  const double j0 = std::cyl_bessel_j(nu, s0), y0 = std::cyl_neumann(nu, s0);
  const double rhs2 = -(v0 + 0.5 * gamma * u0) * T / s0;
  const double det = j0 * dy(s0) - y0 * dj(s0);
  const double a = (u0 * dy(s0) - y0 * rhs2) / det;
  const double b = (j0 * rhs2 - u0 * dj(s0)) / det;

  const auto traj = solve_dwq(k, Damping(gamma), FrequencySchedule::exp_decay(T), 6.0, 1e-3, u0, v0);
  for (std::size_t i = 0; i < traj.times.size(); i += 50) {
    const double t = traj.times[i];
    const double s = s0 * std::exp(-t / T);
    const double exact = std::exp(-0.5 * gamma * t) *
                         (a * std::cyl_bessel_j(nu, s) + b * std::cyl_neumann(nu, s));
    ASSERT_NEAR(traj.u[i], exact, 1e-9) << "t = " << t;
  }
}

TEST(SolveDwq, DefaultStep) {
  const auto grid = ModeGrid::build(2.0 * kPi, 4);  // k = 1..4
  EXPECT_DOUBLE_EQ(default_integrator_step(grid, FrequencySchedule::constant()),
                   2.0 * kPi / 4.0 / 200.0);
}

// ---- evolution ----

TEST(Evolve, NonDissipativeKeepsCode) {
  const auto grid = ModeGrid::build(2.0 * kPi, 3);
  const auto profile = lifetime_profile(grid, Damping(0.0), FrequencySchedule::exp_decay(1.0));
  auto s = state_of({1.0, 2.0, 3.0});
  for (int i = 0; i < 10; ++i) s = evolve(s, 17.0, profile);
  EXPECT_EQ(s.current.occupations, s.code0.occupations);
  EXPECT_EQ(s.status, MemoryStatus::Alive);
  EXPECT_EQ(s.t, 170.0);
}

TEST(Evolve, ExponentialDecay) {
  const auto profile = profile_of({2.0});
  auto s = evolve(evolve(state_of({4.0}), 0.5, profile), 1.5, profile);
  // 4/e = 1.471517764685769286...
  EXPECT_NEAR(s.current.occupations[0], 1.47151776468576929, 1e-14);
  EXPECT_EQ(s.t, 2.0);
}

TEST(Evolve, RejectsNonForwardSteps) {
  const auto profile = profile_of({2.0});
  EXPECT_EQ(error_of([&] { evolve(state_of({4.0}), -1.0, profile); }),
            ErrorCode::NonPositiveTimeStep);
  EXPECT_EQ(error_of([&] { evolve(state_of({4.0}), 0.0, profile); }),
            ErrorCode::NonPositiveTimeStep);
  // A step too small to move the clock is no step at all.
  EXPECT_EQ(error_of([&] { evolve(state_of({4.0}, 1e20), 1.0, profile); }),
            ErrorCode::NonPositiveTimeStep);
}

TEST(Evolve, ZeroLifetimeModesVanishOnFirstStep) {
  const auto s = evolve(state_of({5.0, 5.0}), 1e-9, profile_of({0.0, 10.0}));
  EXPECT_EQ(s.current.occupations[0], 0.0);
  EXPECT_GT(s.current.occupations[1], 4.99);
}

TEST(Evolve, ForgottenStaysForgotten) {
  const auto profile = profile_of({1.0});
  auto s = evolve(state_of({1.0}), 20.0, profile);  // e^-20 < 1e-6
  EXPECT_EQ(s.status, MemoryStatus::Forgotten);
  EXPECT_EQ(s.current.occupations[0], 0.0);
  s = evolve(s, 5.0, profile);
  EXPECT_EQ(s.status, MemoryStatus::Forgotten);
  EXPECT_EQ(s.t, 25.0);
}

TEST(Evolve, EntropyArrowAndBalance) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> occ(0.0, 20.0), tau(0.5, 30.0), step(0.01, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> n(12), taus(12);
    for (double& x : n) x = occ(rng);
    for (double& x : taus) x = tau(rng);
    const auto profile = profile_of(taus);
    auto s = state_of(n);
    double prev_s = entropy(s.current);
    double prev_t = s.t;
    for (int i = 0; i < 100 && s.status == MemoryStatus::Alive; ++i) {
      const auto before = s;
      s = evolve(s, step(rng), profile);
      EXPECT_GT(s.t, prev_t);
      EXPECT_EQ(balance_residual(s.current).max_abs_residual, 0.0);
      const double now = entropy(s.current);
      EXPECT_LT(now, prev_s);
      EXPECT_NE(s.current.occupations, before.current.occupations);
      prev_s = now;
      prev_t = s.t;
    }
  }
}

TEST(Forget, Predicates) {
  EXPECT_TRUE(is_forgotten(state_of({0.0, 0.0}), 1e-6));
  EXPECT_TRUE(is_forgotten(state_of({1e-9}), 1e-6));
  EXPECT_FALSE(is_forgotten(state_of({0.5}), 1e-6));
  const auto f = forget(state_of({0.5, 3.0}));
  EXPECT_EQ(f.status, MemoryStatus::Forgotten);
  EXPECT_EQ(f.current.occupations, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(f.code0.occupations, (std::vector<double>{0.5, 3.0}));
  EXPECT_EQ(balance_residual(f.current).max_abs_residual, 0.0);
}

TEST(Refresh, RestoresCodeWithoutRewindingTime) {
  const auto fresh = state_of({4.0});
  EXPECT_EQ(refresh(fresh).current, fresh.current);

  auto decayed = evolve(fresh, 2.0, profile_of({2.0}));
  ASSERT_NEAR(decayed.current.occupations[0], 1.47, 0.01);
  const auto restored = refresh(decayed);
  EXPECT_EQ(restored.current.occupations, (std::vector<double>{4.0}));
  EXPECT_EQ(restored.t, 2.0);
  EXPECT_EQ(balance_residual(restored.current).max_abs_residual, 0.0);

  EXPECT_EQ(error_of([&] { refresh(forget(fresh)); }), ErrorCode::RefreshForgotten);
}

// ---- regimes ----

TEST(Regime, NoDissipationMeansNoOverdamping) {
  const auto grid = ModeGrid::build(2.0 * kPi, 5);
  for (double t : {0.0, 3.0, 1e6}) {
    const auto r = regime_report(grid, Damping(0.0), FrequencySchedule::exp_decay(1.0), t);
    EXPECT_EQ(r.overdamped_count, 0u);
    EXPECT_EQ(r.underdamped_count, 5u);
  }
}

TEST(Regime, ThresholdAtOnset) {
  const auto grid = ModeGrid::build(2.0 * kPi, 3);  // k = 1, 2, 3
  const auto r = regime_report(grid, Damping(2.0), FrequencySchedule::exp_decay(1.0), 0.0);
  EXPECT_EQ(r.overdamped, (std::vector<bool>{true, false, false}));
  EXPECT_EQ(r.overdamped_count, 1u);
  EXPECT_DOUBLE_EQ(r.ratios[1], 0.5);
}

TEST(Regime, LateTimesAreAllOverdamped) {
  const auto grid = ModeGrid::build(2.0 * kPi, 8);
  const auto r = regime_report(grid, Damping(2.0), FrequencySchedule::exp_decay(1.0), 1e6);
  EXPECT_EQ(r.overdamped_count, 8u);
  EXPECT_EQ(r.mean_surviving_domain_size, 0.0);
}

TEST(Regime, SurvivorsFavourSmallDomains) {
  const auto grid = ModeGrid::build(4.0 * kPi, 100);  // k = 0.5 .. 50
  const Damping damping(2.0);
  const auto schedule = FrequencySchedule::exp_decay(1.0);
  for (double t : {0.5, 1.5, 2.5}) {
    const auto r = regime_report(grid, damping, schedule, t);
    ASSERT_GT(r.overdamped_count, 0u);
    ASSERT_GT(r.underdamped_count, 0u);
    EXPECT_LT(r.mean_surviving_domain_size, r.mean_domain_size);
    // Smallest-domain class keeps at least the fraction of the largest one.
    EXPECT_GE(r.size_classes.front().surviving_fraction(),
              r.size_classes.back().surviving_fraction());
    std::size_t modes = 0;
    for (const auto& c : r.size_classes) {
      modes += c.mode_count;
      EXPECT_LE(c.min_domain_size, c.max_domain_size);
    }
    EXPECT_EQ(modes, 100u);
  }
}

}  // namespace
}  // namespace dqmem
