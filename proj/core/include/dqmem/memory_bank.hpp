#pragma once

// Registry of recorded memories.
//
// A dissipative bank lets every code occupy its own vacuum, so recordings
// coexist. A non-dissipative bank has a single vacuum: each new recording
// overprints whatever is alive.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dqmem/condensate.hpp"
#include "dqmem/dynamics.hpp"
#include "dqmem/spectrum.hpp"

namespace dqmem {

inline constexpr double kDefaultMatchThreshold = 0.9;
inline constexpr double kDefaultAssocThreshold = 0.3;

/// Finite-size recall threshold pi/L; vanishes as L grows.
double effective_mass(double volume);

struct BankConfig {
  ModeGrid grid;
  Damping damping;
  FrequencySchedule schedule;
  bool dissipative = true;
  std::optional<double> m_eff;  // defaults to effective_mass(grid.volume())
  double match_threshold = kDefaultMatchThreshold;
  double assoc_threshold = kDefaultAssocThreshold;
  double epsilon_forget = kDefaultForgetThreshold;
};

/// Replication signal: the tilde-mode pattern addressing a memory plus the
/// energy it delivers.
struct Stimulus {
  MemoryCode address;
  double energy = 0.0;
};

enum class RecallOutcome {
  Recalled,
  BelowEnergyThreshold,
  NoMatch,
  TargetForgotten,
  ContinuousFlow,
};

std::string_view to_string(RecallOutcome outcome);

struct RecallResult {
  RecallOutcome outcome = RecallOutcome::NoMatch;
  std::string code_id;             // Recalled / TargetForgotten
  double overlap = 0.0;            // best overlap found
  std::vector<std::string> flow;   // ContinuousFlow
};

struct AssociationResult {
  std::vector<std::string> path;
  bool confusion_warning = false;  // threshold <= 0 connects every pair
};

struct RecordResult {
  std::vector<std::string> overprinted;
  std::vector<std::string> forgotten;  // expired while advancing the clock
};

/// Greedy walk over an overlap matrix: from `start`, repeatedly hop to the
/// unvisited node of maximal overlap among those with overlap >= threshold,
/// breaking ties by smaller `rank`. Stops after `max_hops` hops or when no
/// neighbour qualifies. Returns node indices.
std::vector<std::size_t> greedy_association_path(
    const std::vector<std::vector<double>>& overlaps,
    const std::vector<double>& rank, double threshold, std::size_t start,
    std::size_t max_hops);

class MemoryBank {
 public:
  /// Throws InvalidThreshold unless 0 < match <= 1, 0 <= assoc < 1,
  /// match > assoc, m_eff >= 0 and epsilon_forget > 0.
  explicit MemoryBank(BankConfig config);

  /// Advances the clock to t, then records `code` (its recorded_at is set to
  /// t). Throws ClockRegression, GridMismatch, DuplicateCode.
  RecordResult record(MemoryCode code, double t);

  /// Evolves every state to t; returns ids that became Forgotten.
  std::vector<std::string> advance_to(double t);

  /// Read-only: states are projected to t before matching.
  RecallResult recall(const Stimulus& stimulus, double t) const;

  AssociationResult associate(const std::string& start_code_id,
                              std::size_t max_hops) const;

  /// Multiplicative noise N_k <- max(0, N_k (1 + amplitude xi_k)), xi_k
  /// uniform in [-1, 1] from a seeded mt19937_64. No-op below threshold.
  /// Returns ids that became Forgotten.
  std::vector<std::string> perturb(double amplitude, double threshold, std::uint64_t seed);

  /// Throws UnknownCode or RefreshForgotten.
  void refresh(const std::string& code_id);

  const std::vector<MemoryState>& states() const noexcept { return states_; }
  const MemoryState& state(const std::string& code_id) const;
  std::size_t alive_count() const;
  std::size_t overprint_count() const noexcept { return overprint_count_; }
  double clock() const noexcept { return clock_; }
  double m_eff() const noexcept { return m_eff_; }
  /// m_eff == 0: every stimulus triggers recall.
  bool continuous_flow_regime() const noexcept { return m_eff_ == 0.0; }
  const BankConfig& config() const noexcept { return config_; }
  const LifetimeProfile& lifetimes() const noexcept { return profile_; }

 private:
  std::size_t index_of(const std::string& code_id) const;
  std::vector<MemoryState> projected(double t) const;

  BankConfig config_;
  LifetimeProfile profile_;
  double m_eff_;
  double clock_ = 0.0;
  std::size_t overprint_count_ = 0;
  std::vector<MemoryState> states_;
};

}  // namespace dqmem
