#pragma once

// Code-labelled condensate vacua. Each grid mode carries a two-mode squeezed
// pair (A_k, tilde A_k) with squeeze parameter theta_k; the pair occupation
// N_k = sinh^2(theta_k) is shared by both members, so the code is the full
// vector {N_k}.

#include <span>
#include <string>
#include <vector>

#include "dqmem/spectrum.hpp"

namespace dqmem {

struct MemoryCode {
  std::vector<double> occupations;
  std::string code_id;
  double recorded_at = 0.0;

  std::size_t size() const noexcept { return occupations.size(); }
  friend bool operator==(const MemoryCode&, const MemoryCode&) = default;
};

struct SqueezeVector {
  std::vector<double> thetas;
  friend bool operator==(const SqueezeVector&, const SqueezeVector&) = default;
};

struct BalanceReport {
  std::vector<double> per_mode_residuals;
  double max_abs_residual = 0.0;
};

/// Throws NegativeOccupation on negative or non-finite N_k.
void validate_code(const MemoryCode& code);

/// theta_k = asinh(sqrt(N_k)).
SqueezeVector code_to_squeeze(const MemoryCode& code);

/// N_k = sinh^2(theta_k). Throws NegativeSqueeze.
MemoryCode squeeze_to_code(const SqueezeVector& squeeze, std::string code_id,
                           double recorded_at);

/// Occupations of the tilde (environment) members of each pair.
std::vector<double> tilde_occupations(const MemoryCode& code);

/// N_A,k - N_tildeA,k for every mode.
BalanceReport balance_residual(const MemoryCode& code);

/// Vacuum overlap prod_k 1/cosh(theta_k^A - theta_k^B). Throws GridMismatch.
double overlap(const MemoryCode& a, const MemoryCode& b);
/// sum_k -log cosh(dtheta_k); stays finite where the product underflows.
double log_overlap(const MemoryCode& a, const MemoryCode& b);
double log_overlap(const SqueezeVector& a, const SqueezeVector& b);

/// Bose entropy sum_k (N+1) ln(N+1) - N ln N, with 0 ln 0 = 0.
double entropy(std::span<const double> occupations);
inline double entropy(const MemoryCode& code) { return entropy(code.occupations); }

/// Bose occupations N_k = 1/(exp(beta Omega_k(t)) - 1); modes with
/// beta Omega > 700 are reported as exactly 0. Throws NonPositiveBeta.
MemoryCode thermal_code(double beta, const ModeGrid& grid,
                        const FrequencySchedule& schedule, double t,
                        std::string code_id = "thermal");

}  // namespace dqmem
