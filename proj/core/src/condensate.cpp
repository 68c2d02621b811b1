#include "dqmem/condensate.hpp"

#include <algorithm>
#include <cmath>

#include "dqmem/errors.hpp"

namespace dqmem {
namespace {

void require_same_grid(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::GridMismatch, "codes have " + std::to_string(a) +
                                             " and " + std::to_string(b) + " modes");
  }
}

// log cosh(x) without overflow for large |x|.
double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
}

}  // namespace

void validate_code(const MemoryCode& code) {
  for (std::size_t k = 0; k < code.occupations.size(); ++k) {
    const double n = code.occupations[k];
    if (!(n >= 0.0) || !std::isfinite(n)) {
      throw Error(ErrorCode::NegativeOccupation,
                  "code '" + code.code_id + "' mode " + std::to_string(k) +
                      " has occupation " + std::to_string(n));
    }
  }
}

SqueezeVector code_to_squeeze(const MemoryCode& code) {
  validate_code(code);
  SqueezeVector out;
  out.thetas.reserve(code.size());
  for (double n : code.occupations) out.thetas.push_back(std::asinh(std::sqrt(n)));
  return out;
}

MemoryCode squeeze_to_code(const SqueezeVector& squeeze, std::string code_id,
                           double recorded_at) {
  MemoryCode code{{}, std::move(code_id), recorded_at};
  code.occupations.reserve(squeeze.thetas.size());
  for (double theta : squeeze.thetas) {
    if (!(theta >= 0.0) || !std::isfinite(theta)) {
      throw Error(ErrorCode::NegativeSqueeze,
                  "squeeze parameters must be finite and >= 0");
    }
    const double s = std::sinh(theta);
    code.occupations.push_back(s * s);
  }
  return code;
}

std::vector<double> tilde_occupations(const MemoryCode& code) {
  // Pairs are created together, so each tilde mode mirrors its partner.
  return code.occupations;
}

BalanceReport balance_residual(const MemoryCode& code) {
  const auto tilde = tilde_occupations(code);
  BalanceReport report;
  report.per_mode_residuals.resize(code.size());
  for (std::size_t k = 0; k < code.size(); ++k) {
    report.per_mode_residuals[k] = code.occupations[k] - tilde[k];
    report.max_abs_residual =
        std::max(report.max_abs_residual, std::abs(report.per_mode_residuals[k]));
  }
  return report;
}

double log_overlap(const SqueezeVector& a, const SqueezeVector& b) {
  require_same_grid(a.thetas.size(), b.thetas.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < a.thetas.size(); ++k) {
    sum -= log_cosh(a.thetas[k] - b.thetas[k]);
  }
  return sum;
}

double log_overlap(const MemoryCode& a, const MemoryCode& b) {
  require_same_grid(a.size(), b.size());
  return log_overlap(code_to_squeeze(a), code_to_squeeze(b));
}

double overlap(const MemoryCode& a, const MemoryCode& b) {
  require_same_grid(a.size(), b.size());
  const auto sa = code_to_squeeze(a);
  const auto sb = code_to_squeeze(b);
  double product = 1.0;
  for (std::size_t k = 0; k < sa.thetas.size(); ++k) {
    product /= std::cosh(sa.thetas[k] - sb.thetas[k]);
  }
  return product;
}

double entropy(std::span<const double> occupations) {
  double s = 0.0;
  for (double n : occupations) {
    if (n > 0.0) s += (n + 1.0) * std::log1p(n) - n * std::log(n);
  }
  return s;
}

MemoryCode thermal_code(double beta, const ModeGrid& grid,
                        const FrequencySchedule& schedule, double t,
                        std::string code_id) {
  if (!(beta > 0.0)) {
    throw Error(ErrorCode::NonPositiveBeta,
                "inverse temperature must be positive, got " + std::to_string(beta));
  }
  MemoryCode code{{}, std::move(code_id), t};
  code.occupations.reserve(grid.size());
  for (double k : grid.momenta()) {
    const double x = beta * frequency_at(schedule, k, t);
    code.occupations.push_back(x > 700.0 ? 0.0 : 1.0 / std::expm1(x));
  }
  return code;
}

}  // namespace dqmem
