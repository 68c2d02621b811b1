#include "dqmem/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dqmem/errors.hpp"
#include "dqmem/matrix_exp.hpp"

namespace dqmem {
namespace {

std::vector<double> series_coefficients(double theta, std::size_t dim) {
  std::vector<double> c(dim);
  const double t = std::tanh(theta);
  double term = 1.0 / std::cosh(theta);
  for (std::size_t n = 0; n < dim; ++n) {
    c[n] = term;
    term *= t;
  }
  return c;
}

std::string format_theta(double theta) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", theta);
  return buf;
}

}  // namespace

double TruncatedState::norm() const {
  double s = 0.0;
  for (const auto& c : coefficients) s += std::norm(c);
  return s;
}

TruncatedState build_squeezed(double theta, std::size_t dim) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw Error(ErrorCode::NegativeSqueeze, "theta must be finite and >= 0");
  }
  if (dim < 2) {
    throw Error(ErrorCode::TruncationTooSmall, "truncation needs at least two levels");
  }
  TruncatedState state{dim, {}};
  state.coefficients.reserve(dim);
  for (double c : series_coefficients(theta, dim)) state.coefficients.emplace_back(c, 0.0);
  const double deficit = 1.0 - state.norm();
  if (deficit > kMaxNormDeficit) {
    throw Error(ErrorCode::TruncationTooSmall,
                "norm deficit " + std::to_string(deficit) + " at theta = " +
                    std::to_string(theta) + ", D = " + std::to_string(dim));
  }
  return state;
}

TwoModeAmplitudes to_two_mode(const TruncatedState& state) {
  TwoModeAmplitudes out{state.dim, std::vector<std::complex<double>>(state.dim * state.dim)};
  for (std::size_t n = 0; n < state.dim; ++n) {
    out.amplitudes[n * state.dim + n] = state.coefficients[n];
  }
  return out;
}

TwoModeAmplitudes squeeze_by_generator(double theta, std::size_t dim, std::size_t guard) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw Error(ErrorCode::NegativeSqueeze, "theta must be finite and >= 0");
  }
  if (dim < 2) {
    throw Error(ErrorCode::TruncationTooSmall, "truncation needs at least two levels");
  }
  const std::size_t w = dim + guard;
  const auto index = [w](std::size_t n, std::size_t m) {
    return static_cast<Eigen::Index>(n * w + m);
  };

  // theta (A^+ tildeA^+ - A tildeA) on |n, m>, n, m < w.
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(2 * w * w);
  for (std::size_t n = 0; n + 1 < w; ++n) {
    for (std::size_t m = 0; m + 1 < w; ++m) {
      const double amp = theta * std::sqrt(static_cast<double>((n + 1) * (m + 1)));
      entries.emplace_back(index(n + 1, m + 1), index(n, m), amp);
      entries.emplace_back(index(n, m), index(n + 1, m + 1), -amp);
    }
  }
  const auto size = static_cast<Eigen::Index>(w * w);
  Eigen::SparseMatrix<double> generator(size, size);
  generator.setFromTriplets(entries.begin(), entries.end());

  Eigen::VectorXd vacuum = Eigen::VectorXd::Zero(size);
  vacuum[index(0, 0)] = 1.0;
  const Eigen::VectorXd evolved = expm_times_vector(generator, vacuum);

  TwoModeAmplitudes out{dim, std::vector<std::complex<double>>(dim * dim)};
  for (std::size_t n = 0; n < dim; ++n) {
    for (std::size_t m = 0; m < dim; ++m) out.amplitudes[n * dim + m] = evolved[index(n, m)];
  }
  return out;
}

OracleNumbers oracle_numbers(const TwoModeAmplitudes& state) {
  const std::size_t d = state.dim;
  std::vector<double> marginal_a(d, 0.0);
  std::vector<double> marginal_tilde(d, 0.0);
  for (std::size_t n = 0; n < d; ++n) {
    for (std::size_t m = 0; m < d; ++m) marginal_a[n] += std::norm(state.at(n, m));
  }
  for (std::size_t m = 0; m < d; ++m) {
    for (std::size_t n = 0; n < d; ++n) marginal_tilde[m] += std::norm(state.at(n, m));
  }
  OracleNumbers out;
  for (std::size_t n = 0; n < d; ++n) {
    out.n_a += static_cast<double>(n) * marginal_a[n];
    out.n_tilde += static_cast<double>(n) * marginal_tilde[n];
  }
  return out;
}

OracleNumbers oracle_numbers(const TruncatedState& state) {
  return oracle_numbers(to_two_mode(state));
}

double oracle_overlap(double theta1, double theta2, std::size_t dim) {
  const auto a = build_squeezed(theta1, dim);
  const auto b = build_squeezed(theta2, dim);
  std::complex<double> sum = 0.0;
  for (std::size_t n = 0; n < dim; ++n) sum += std::conj(a.coefficients[n]) * b.coefficients[n];
  return sum.real();
}

ConstructionAgreement compare_constructions(double theta, std::size_t dim,
                                            std::size_t guard) {
  const auto series = to_two_mode(build_squeezed(theta, dim));
  const auto generated = squeeze_by_generator(theta, dim, guard);
  ConstructionAgreement out;
  for (std::size_t n = 0; n < dim; ++n) {
    for (std::size_t m = 0; m < dim; ++m) {
      const double diff = std::abs(series.at(n, m) - generated.at(n, m));
      out.max_series_mismatch = std::max(out.max_series_mismatch, diff);
      if (n != m) {
        out.max_unpaired_amplitude =
            std::max(out.max_unpaired_amplitude, std::abs(generated.at(n, m)));
      }
    }
  }
  return out;
}

std::vector<OracleCheck> run_oracle_suite(std::size_t dim, double theta_max) {
  const double scale = theta_max / 1.2;
  std::vector<double> thetas;
  for (double base : {0.1, 0.3, 0.5, 0.8, 1.0, 1.2}) thetas.push_back(base * scale);

  std::vector<OracleCheck> checks;
  auto add = [&checks](std::string name, double value, double error, double tol) {
    checks.push_back({std::move(name), value, error, tol, error <= tol});
  };

  for (double theta : thetas) {
    const std::string tag = "[theta=" + format_theta(theta) + "]";
    const auto state = build_squeezed(theta, dim);
    const auto numbers = oracle_numbers(state);
    const double expected = std::sinh(theta) * std::sinh(theta);
    add("occupation " + tag, numbers.n_a, std::abs(numbers.n_a - expected), 1e-8);
    add("balance " + tag, numbers.n_a - numbers.n_tilde,
        std::abs(numbers.n_a - numbers.n_tilde), 0.0);
    add("norm deficit " + tag, state.norm(), std::max(0.0, 1.0 - state.norm()), kMaxNormDeficit);
    const auto agreement = compare_constructions(theta, dim, dim);
    add("series vs generator " + tag, agreement.max_series_mismatch,
        agreement.max_series_mismatch, 1e-10);
    add("paired purity " + tag, agreement.max_unpaired_amplitude,
        agreement.max_unpaired_amplitude, 1e-12);
  }
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    for (std::size_t j = i + 1; j < thetas.size(); ++j) {
      const double value = oracle_overlap(thetas[i], thetas[j], dim);
      const double expected = 1.0 / std::cosh(thetas[i] - thetas[j]);
      add("overlap [" + format_theta(thetas[i]) + ", " + format_theta(thetas[j]) + "]",
          value, std::abs(value - expected), 1e-8);
    }
  }
  return checks;
}

}  // namespace dqmem
