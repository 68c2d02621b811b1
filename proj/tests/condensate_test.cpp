#include "dqmem/condensate.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "dqmem/fock_oracle.hpp"
#include "test_util.hpp"

namespace dqmem {
namespace {

using testing::error_of;

// Reference values evaluated at 30 digits with mpmath.
constexpr double kAsinhOne = 0.881373587019543025;        // asinh(1) = ln(1 + sqrt 2)
constexpr double kSinhSqHalf = 0.271540317407621889;      // sinh^2(0.5)
constexpr double kSechHalf = 0.886818883970073909;        // 1/cosh(0.5)
constexpr double kSechHalfPow50 = 0.00246460100690360178; // (1/cosh 0.5)^50
constexpr double kTwoLn2 = 1.38629436111989061883;

MemoryCode code_of(std::vector<double> n, std::string id = "c") {
  return MemoryCode{std::move(n), std::move(id), 0.0};
}

TEST(CodeToSqueeze, Examples) {
  EXPECT_EQ(code_to_squeeze(code_of({0, 0})).thetas, (std::vector<double>{0, 0}));
  EXPECT_NEAR(code_to_squeeze(code_of({1})).thetas[0], kAsinhOne, 1e-15);
  // 0.271540 is sinh^2(0.5) to six places, so theta lands within ~3e-7 of 0.5.
  EXPECT_NEAR(code_to_squeeze(code_of({0.271540})).thetas[0], 0.5, 1e-6);
  EXPECT_EQ(error_of([] { code_to_squeeze(code_of({1.0, -0.1})); }),
            ErrorCode::NegativeOccupation);
}

TEST(SqueezeToCode, Examples) {
  EXPECT_EQ(squeeze_to_code({{0.0}}, "a", 0.0).occupations[0], 0.0);
  EXPECT_NEAR(squeeze_to_code({{0.5}}, "a", 0.0).occupations[0], kSinhSqHalf, 1e-15);
  // Six-place theta: dN = sinh(2 theta) dtheta ~ 1.2e-6.
  EXPECT_NEAR(squeeze_to_code({{0.881374}}, "a", 0.0).occupations[0], 1.0, 2e-6);
  EXPECT_EQ(error_of([] { squeeze_to_code({{-0.1}}, "a", 0.0); }), ErrorCode::NegativeSqueeze);
}

TEST(SqueezeToCode, AgreesWithFockOracle) {
  for (double theta : {0.1, 0.5, 1.0}) {
    const auto numbers = oracle_numbers(build_squeezed(theta, 64));
    EXPECT_NEAR(squeeze_to_code({{theta}}, "a", 0.0).occupations[0], numbers.n_a, 1e-8);
  }
}

TEST(CodeRoundTrip, PropertyOverRandomCodes) {
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> log_n(-12.0, 6.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> n(8);
    for (double& x : n) x = std::pow(10.0, log_n(rng));
    if (trial % 7 == 0) n[trial % 8] = 0.0;
    const auto code = code_of(n, "r");
    const auto back = squeeze_to_code(code_to_squeeze(code), "r", 0.0);
    for (std::size_t k = 0; k < n.size(); ++k) {
      // Relative for large occupations, absolute near zero.
      EXPECT_LE(std::abs(back.occupations[k] - n[k]), 1e-12 * std::max(1.0, n[k]))
          << "N = " << n[k];
    }
  }
}

TEST(Balance, ResidualIsExactlyZero) {
  for (const auto& n : {std::vector<double>{0, 0, 0}, {1, 2, 3}, {0.5}}) {
    const auto report = balance_residual(code_of(n));
    EXPECT_EQ(report.max_abs_residual, 0.0);
    for (double r : report.per_mode_residuals) EXPECT_EQ(r, 0.0);
  }
}

TEST(Overlap, Examples) {
  const auto a = code_of({1.0, 2.0, 0.0});
  EXPECT_EQ(overlap(a, a), 1.0);
  EXPECT_NEAR(overlap(code_of({0}), code_of({1})), std::numbers::sqrt2 / 2.0, 1e-15);
  // Cross-check against the truncated Fock inner product.
  EXPECT_NEAR(overlap(code_of({0}), code_of({1})), oracle_overlap(0.0, kAsinhOne, 64), 1e-12);
  EXPECT_EQ(error_of([] { overlap(code_of({1}), code_of({1, 1})); }), ErrorCode::GridMismatch);
}

TEST(Overlap, FiftyModesWithHalfSqueezeOffset) {
  const auto theta = SqueezeVector{std::vector<double>(50, 0.5)};
  const auto zero = SqueezeVector{std::vector<double>(50, 0.0)};
  const auto a = squeeze_to_code(zero, "a", 0.0);
  const auto b = squeeze_to_code(theta, "b", 0.0);
  EXPECT_NEAR(overlap(a, b), kSechHalfPow50, 1e-15);
  EXPECT_NEAR(overlap(a, b), 2.46e-3, 5e-6);
}

TEST(Overlap, SymmetryBoundsAndVolumeDecay) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> occ(0.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> na(6), nb(6);
    for (double& x : na) x = occ(rng);
    for (double& x : nb) x = occ(rng);
    const auto a = code_of(na);
    const auto b = code_of(nb);
    EXPECT_EQ(overlap(a, b), overlap(b, a));
    EXPECT_GT(overlap(a, b), 0.0);
    EXPECT_LT(overlap(a, b), 1.0);
  }

  // Appending modes with a fixed offset multiplies the overlap by sech(delta).
  for (double delta : {0.05, 0.5, 1.5}) {
    double prev = 1.0;
    for (std::size_t m = 1; m <= 64; ++m) {
      const auto a = squeeze_to_code({std::vector<double>(m, 0.2)}, "a", 0.0);
      const auto b = squeeze_to_code({std::vector<double>(m, 0.2 + delta)}, "b", 0.0);
      const double lo = log_overlap(a, b);
      EXPECT_NEAR(lo, static_cast<double>(m) * std::log(1.0 / std::cosh(delta)), 1e-9);
      EXPECT_LT(overlap(a, b), prev);
      prev = overlap(a, b);
    }
  }
}

TEST(Overlap, PerModeAgreesWithFockOracle) {
  for (double t1 : {0.1, 0.5, 1.0}) {
    for (double t2 : {0.1, 0.5, 1.0}) {
      const auto a = squeeze_to_code({{t1}}, "a", 0.0);
      const auto b = squeeze_to_code({{t2}}, "b", 0.0);
      EXPECT_NEAR(overlap(a, b), oracle_overlap(t1, t2, 64), 1e-8);
    }
  }
  EXPECT_NEAR(kSechHalf, oracle_overlap(0.2, 0.7, 64), 1e-8);
}

TEST(Entropy, Examples) {
  EXPECT_EQ(entropy(code_of({0, 0})), 0.0);
  EXPECT_NEAR(entropy(code_of({1})), kTwoLn2, 1e-15);
  EXPECT_NEAR(entropy(code_of({1, 1})), 2.0 * kTwoLn2, 1e-15);
}

TEST(Entropy, StrictlyIncreasingInEachOccupation) {
  for (double n = 0.0; n < 100.0; n = n * 1.5 + 1e-6) {
    const double next = n * 1.5 + 1e-6;
    EXPECT_LT(entropy(code_of({n, 0.3})), entropy(code_of({next, 0.3})));
    EXPECT_LT(entropy(code_of({0.3, n})), entropy(code_of({0.3, next})));
  }
  EXPECT_GT(entropy(code_of({0, 1e-9})), 0.0);
}

TEST(ThermalCode, Examples) {
  // Single mode at k = 1 (L = 2 pi).
  const auto grid = ModeGrid::build(2.0 * std::numbers::pi, 1);
  const auto constant = FrequencySchedule::constant();
  EXPECT_NEAR(thermal_code(std::log(2.0), grid, constant, 0.0).occupations[0], 1.0, 1e-14);
  EXPECT_NEAR(thermal_code(std::log(1.5), grid, constant, 0.0).occupations[0], 2.0, 1e-13);

  const auto wide = ModeGrid::build(2.0 * std::numbers::pi, 16);
  for (double n : thermal_code(701.0, wide, constant, 0.0).occupations) EXPECT_EQ(n, 0.0);
  EXPECT_EQ(error_of([&] { thermal_code(0.0, grid, constant, 0.0); }), ErrorCode::NonPositiveBeta);
}

TEST(ThermalCode, EntropyDecreasesWithInverseTemperature) {
  const auto grid = ModeGrid::build(10.0, 20);
  const auto schedule = FrequencySchedule::exp_decay(3.0);
  double prev = entropy(thermal_code(0.01, grid, schedule, 0.5));
  for (double beta = 0.02; beta < 200.0; beta *= 1.25) {
    const double s = entropy(thermal_code(beta, grid, schedule, 0.5));
    EXPECT_LT(s, prev) << "beta = " << beta;
    prev = s;
  }
}

}  // namespace
}  // namespace dqmem
