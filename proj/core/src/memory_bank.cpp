#include "dqmem/memory_bank.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dqmem/errors.hpp"

namespace dqmem {

double effective_mass(double volume) {
  if (!(volume > 0.0)) {
    throw Error(ErrorCode::NonPositiveVolume, "effective mass needs L > 0");
  }
  return std::numbers::pi / volume;
}

std::string_view to_string(RecallOutcome outcome) {
  switch (outcome) {
    case RecallOutcome::Recalled: return "Recalled";
    case RecallOutcome::BelowEnergyThreshold: return "BelowEnergyThreshold";
    case RecallOutcome::NoMatch: return "NoMatch";
    case RecallOutcome::TargetForgotten: return "TargetForgotten";
    case RecallOutcome::ContinuousFlow: return "ContinuousFlow";
  }
  return "Unknown";
}

std::vector<std::size_t> greedy_association_path(
    const std::vector<std::vector<double>>& overlaps,
    const std::vector<double>& rank, double threshold, std::size_t start,
    std::size_t max_hops) {
  const std::size_t n = overlaps.size();
  std::vector<bool> visited(n, false);
  std::vector<std::size_t> path{start};
  visited[start] = true;
  std::size_t here = start;
  while (path.size() <= max_hops) {
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < n; ++j) {
      if (visited[j] || overlaps[here][j] < threshold) continue;
      if (!best || overlaps[here][j] > overlaps[here][*best] ||
          (overlaps[here][j] == overlaps[here][*best] && rank[j] < rank[*best])) {
        best = j;
      }
    }
    if (!best) break;
    visited[*best] = true;
    path.push_back(*best);
    here = *best;
  }
  return path;
}

MemoryBank::MemoryBank(BankConfig config)
    : config_(std::move(config)),
      profile_(lifetime_profile(config_.grid, config_.damping, config_.schedule)),
      m_eff_(config_.m_eff.value_or(effective_mass(config_.grid.volume()))) {
  const double match = config_.match_threshold;
  const double assoc = config_.assoc_threshold;
  if (!(match > 0.0 && match <= 1.0)) {
    throw Error(ErrorCode::InvalidThreshold, "match_threshold must lie in (0, 1]");
  }
  if (!(assoc >= 0.0 && assoc < 1.0)) {
    throw Error(ErrorCode::InvalidThreshold, "assoc_threshold must lie in [0, 1)");
  }
  if (!(match > assoc)) {
    throw Error(ErrorCode::InvalidThreshold,
                "match_threshold must exceed assoc_threshold");
  }
  if (!(m_eff_ >= 0.0) || !std::isfinite(m_eff_)) {
    throw Error(ErrorCode::InvalidThreshold, "m_eff must be finite and >= 0");
  }
  if (!(config_.epsilon_forget > 0.0)) {
    throw Error(ErrorCode::InvalidThreshold, "epsilon_forget must be positive");
  }
}

std::vector<std::string> MemoryBank::advance_to(double t) {
  if (t < clock_) {
    throw Error(ErrorCode::ClockRegression, "bank clock is at " + std::to_string(clock_) +
                                                ", cannot move to " + std::to_string(t));
  }
  std::vector<std::string> forgotten;
  if (t == clock_) return forgotten;
  for (auto& s : states_) {
    const bool was_alive = s.status == MemoryStatus::Alive;
    s = evolve(s, t - s.t, profile_, config_.epsilon_forget);
    if (was_alive && s.status == MemoryStatus::Forgotten) forgotten.push_back(s.code_id());
  }
  clock_ = t;
  return forgotten;
}

RecordResult MemoryBank::record(MemoryCode code, double t) {
  if (code.size() != config_.grid.size()) {
    throw Error(ErrorCode::GridMismatch, "code '" + code.code_id + "' has " +
                                             std::to_string(code.size()) + " modes, grid has " +
                                             std::to_string(config_.grid.size()));
  }
  validate_code(code);
  if (t < clock_) {
    throw Error(ErrorCode::ClockRegression, "cannot record at " + std::to_string(t) +
                                                " before clock " + std::to_string(clock_));
  }

  RecordResult result;
  result.forgotten = advance_to(t);

  if (!config_.dissipative) {
    // A single vacuum: whatever is alive is destroyed by the new recording.
    std::erase_if(states_, [&](const MemoryState& s) {
      if (s.status != MemoryStatus::Alive) return false;
      result.overprinted.push_back(s.code_id());
      return true;
    });
    overprint_count_ += result.overprinted.size();
  }
  // Forgotten slots hold only the empty vacuum and may be reused by id.
  std::erase_if(states_, [&](const MemoryState& s) {
    return s.code_id() == code.code_id && s.status == MemoryStatus::Forgotten;
  });
  if (std::any_of(states_.begin(), states_.end(),
                  [&](const MemoryState& s) { return s.code_id() == code.code_id; })) {
    throw Error(ErrorCode::DuplicateCode, "code '" + code.code_id + "' is already alive");
  }

  code.recorded_at = t;
  states_.push_back(make_memory_state(code, config_.epsilon_forget));
  return result;
}

std::vector<MemoryState> MemoryBank::projected(double t) const {
  if (t < clock_) {
    throw Error(ErrorCode::ClockRegression, "cannot query at " + std::to_string(t) +
                                                " before clock " + std::to_string(clock_));
  }
  std::vector<MemoryState> out = states_;
  if (t > clock_) {
    for (auto& s : out) s = evolve(s, t - s.t, profile_, config_.epsilon_forget);
  }
  return out;
}

RecallResult MemoryBank::recall(const Stimulus& stimulus, double t) const {
  if (stimulus.address.size() != config_.grid.size()) {
    throw Error(ErrorCode::GridMismatch, "stimulus address does not match the grid");
  }
  const auto now = projected(t);
  RecallResult result;

  if (continuous_flow_regime()) {
    result.outcome = RecallOutcome::ContinuousFlow;
    for (const auto& s : now) {
      if (s.status != MemoryStatus::Alive) continue;
      const double o = overlap(stimulus.address, s.current);
      result.overlap = std::max(result.overlap, o);
      if (o > config_.assoc_threshold) result.flow.push_back(s.code_id());
    }
    return result;
  }
  if (stimulus.energy < m_eff_) {
    result.outcome = RecallOutcome::BelowEnergyThreshold;
    return result;
  }

  const MemoryState* best_alive = nullptr;
  double best_alive_overlap = 0.0;
  const MemoryState* best_lost = nullptr;
  double best_lost_overlap = 0.0;
  for (const auto& s : now) {
    if (s.status == MemoryStatus::Alive) {
      const double o = overlap(stimulus.address, s.current);
      if (o > best_alive_overlap) {
        best_alive = &s;
        best_alive_overlap = o;
      }
    } else {
      // A forgotten slot only remembers which code it held.
      const double o = overlap(stimulus.address, s.code0);
      if (o > best_lost_overlap) {
        best_lost = &s;
        best_lost_overlap = o;
      }
    }
  }

  if (best_alive && best_alive_overlap >= config_.match_threshold) {
    result.outcome = RecallOutcome::Recalled;
    result.code_id = best_alive->code_id();
    result.overlap = best_alive_overlap;
  } else if (best_lost && best_lost_overlap >= config_.match_threshold &&
             best_lost_overlap > best_alive_overlap) {
    result.outcome = RecallOutcome::TargetForgotten;
    result.code_id = best_lost->code_id();
    result.overlap = best_lost_overlap;
  } else {
    result.outcome = RecallOutcome::NoMatch;
    result.overlap = best_alive_overlap;
  }
  return result;
}

AssociationResult MemoryBank::associate(const std::string& start_code_id,
                                        std::size_t max_hops) const {
  const std::size_t start_index = index_of(start_code_id);
  if (states_[start_index].status != MemoryStatus::Alive) {
    throw Error(ErrorCode::StartForgotten, "memory '" + start_code_id + "' is forgotten");
  }

  // Association only runs among alive memories.
  std::vector<std::size_t> alive;
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i].status == MemoryStatus::Alive) alive.push_back(i);
  }
  const std::size_t n = alive.size();
  std::vector<std::vector<double>> overlaps(n, std::vector<double>(n, 1.0));
  std::vector<double> rank(n);
  std::size_t start = 0;
  for (std::size_t a = 0; a < n; ++a) {
    const auto& sa = states_[alive[a]];
    // Earlier recording wins ties; equal times fall back to insertion order.
    rank[a] = sa.recorded_at();
    if (alive[a] == start_index) start = a;
    for (std::size_t b = a + 1; b < n; ++b) {
      const double o = overlap(sa.current, states_[alive[b]].current);
      overlaps[a][b] = overlaps[b][a] = o;
    }
  }

  AssociationResult result;
  result.confusion_warning = config_.assoc_threshold <= 0.0;
  for (std::size_t i : greedy_association_path(overlaps, rank, config_.assoc_threshold,
                                               start, max_hops)) {
    result.path.push_back(states_[alive[i]].code_id());
  }
  return result;
}

std::vector<std::string> MemoryBank::perturb(double amplitude, double threshold,
                                             std::uint64_t seed) {
  std::vector<std::string> forgotten;
  if (amplitude < threshold || amplitude <= 0.0) return forgotten;

  std::mt19937_64 rng(seed);
  // 53-bit uniform in [0, 1) mapped to [-1, 1]; spelled out so results do not
  // depend on the standard library's distribution implementation.
  auto xi = [&rng] {
    return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
  };
  for (auto& s : states_) {
    if (s.status != MemoryStatus::Alive) continue;
    for (double& n : s.current.occupations) {
      n = std::max(0.0, n * (1.0 + amplitude * xi()));
    }
    if (is_forgotten(s, config_.epsilon_forget)) {
      s = forget(s);
      forgotten.push_back(s.code_id());
    }
  }
  return forgotten;
}

void MemoryBank::refresh(const std::string& code_id) {
  auto& s = states_[index_of(code_id)];
  s = dqmem::refresh(s);
}

const MemoryState& MemoryBank::state(const std::string& code_id) const {
  return states_[index_of(code_id)];
}

std::size_t MemoryBank::alive_count() const {
  return static_cast<std::size_t>(std::count_if(
      states_.begin(), states_.end(),
      [](const MemoryState& s) { return s.status == MemoryStatus::Alive; }));
}

std::size_t MemoryBank::index_of(const std::string& code_id) const {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i].code_id() == code_id) return i;
  }
  throw Error(ErrorCode::UnknownCode, "no memory with id '" + code_id + "'");
}

}  // namespace dqmem
