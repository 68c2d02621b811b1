#pragma once

// Brute-force check of the condensate formulas in a truncated Fock basis.
//
// One grid mode is the pair (A, tilde A). Its squeezed vacuum is built twice:
// from the analytic series c_n = tanh^n(theta) / cosh(theta) on |n, n>, and by
// exponentiating the pair generator theta (A^+ tildeA^+ - A tildeA) on the
// full two-mode space. Occupations and overlaps are then read off by direct
// summation over basis states.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace dqmem {

inline constexpr std::size_t kDefaultTruncation = 64;
inline constexpr double kMaxNormDeficit = 1e-4;

/// Amplitudes over the paired basis |n, n>, n < dim.
struct TruncatedState {
  std::size_t dim = 0;
  std::vector<std::complex<double>> coefficients;

  double norm() const;  // sum |c_n|^2
};

/// Amplitudes psi(n, m) over the full |n, m> basis, row-major in n.
struct TwoModeAmplitudes {
  std::size_t dim = 0;
  std::vector<std::complex<double>> amplitudes;

  std::complex<double> at(std::size_t n, std::size_t m) const {
    return amplitudes[n * dim + m];
  }
};

/// Series construction. Throws NegativeSqueeze for theta < 0 and
/// TruncationTooSmall for dim < 2 or a norm deficit above 1e-4.
TruncatedState build_squeezed(double theta, std::size_t dim);

TwoModeAmplitudes to_two_mode(const TruncatedState& state);

/// Generator construction on a (dim + guard)^2 space, projected onto dim^2.
/// The guard levels keep reflections off the truncation wall out of the
/// retained levels.
TwoModeAmplitudes squeeze_by_generator(double theta, std::size_t dim, std::size_t guard);
inline TwoModeAmplitudes squeeze_by_generator(double theta, std::size_t dim) {
  return squeeze_by_generator(theta, dim, dim);
}

struct OracleNumbers {
  double n_a = 0.0;
  double n_tilde = 0.0;
};

/// <N_A> from the A marginal and <N_tildeA> from the tilde marginal.
OracleNumbers oracle_numbers(const TwoModeAmplitudes& state);
OracleNumbers oracle_numbers(const TruncatedState& state);

/// sum_n c_n(theta1) c_n(theta2) over the truncated series.
double oracle_overlap(double theta1, double theta2, std::size_t dim);

struct ConstructionAgreement {
  double max_series_mismatch = 0.0;     // paired amplitudes, series vs generator
  double max_unpaired_amplitude = 0.0;  // generator amplitude on |n, m>, n != m
};

ConstructionAgreement compare_constructions(double theta, std::size_t dim,
                                            std::size_t guard);

/// One line of the verification suite.
struct OracleCheck {
  std::string name;
  double value = 0.0;
  double error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Occupation, balance, construction agreement and overlap checks over a
/// theta grid scaled to end at theta_max (1.2 gives 0.1, 0.3, 0.5, 0.8, 1.0,
/// 1.2), with all pairs for the overlap check.
std::vector<OracleCheck> run_oracle_suite(std::size_t dim = kDefaultTruncation,
                                          double theta_max = 1.2);

}  // namespace dqmem
