#pragma once

// Declarative scenarios: a config file describing a grid, dynamics and a
// timeline of events, run against a MemoryBank. See docs/scenario-format.md
// for the grammar.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dqmem/dynamics.hpp"
#include "dqmem/errors.hpp"
#include "dqmem/memory_bank.hpp"
#include "dqmem/spectrum.hpp"

namespace dqmem {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, std::string reason);
  const std::string& field() const noexcept { return field_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string field_;
  std::string reason_;
};

/// A module error raised while applying events[event_index].
class EventError : public Error {
 public:
  EventError(std::size_t event_index, const Error& cause);
  std::size_t event_index() const noexcept { return event_index_; }

 private:
  std::size_t event_index_;
};

namespace event {
struct Record {
  std::string id;
  std::vector<double> code;
};
struct Stimulus {
  std::vector<double> address;
  double energy = 0.0;
};
struct Perturb {
  double amplitude = 0.0;
  std::uint64_t seed = 0;
};
struct Refresh {
  std::string id;
};
struct Associate {
  std::string id;
  std::size_t hops = 1;
};
struct Sample {};
}  // namespace event

using EventAction = std::variant<event::Record, event::Stimulus, event::Perturb,
                                 event::Refresh, event::Associate, event::Sample>;

struct ScenarioEvent {
  double t = 0.0;
  EventAction action;
  std::size_t line = 0;
};

struct ScenarioConfig {
  double volume = 0.0;
  std::size_t mode_count = 0;
  double gamma = 0.0;
  FrequencySchedule schedule;
  bool dissipative = true;
  double epsilon_forget = kDefaultForgetThreshold;
  double match_threshold = kDefaultMatchThreshold;
  double assoc_threshold = kDefaultAssocThreshold;
  double perturb_threshold = 0.0;
  std::optional<double> m_eff;
  double horizon = 0.0;
  double sample_dt = 0.0;
  std::vector<ScenarioEvent> events;

  ModeGrid grid() const { return ModeGrid::build(volume, mode_count); }
  BankConfig bank_config() const;
};

/// Parses and validates; defaults are applied for every optional key.
/// Throws ParseError, ValidationError, or Error(UnknownKey).
ScenarioConfig parse_scenario(std::string_view text);
/// Throws Error(IoError) when the file cannot be read.
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Replaces the seed of the j-th perturb event with seed + j.
void override_seeds(ScenarioConfig& config, std::uint64_t seed);

struct MemorySample {
  std::string code_id;
  MemoryStatus status = MemoryStatus::Alive;
  double entropy = 0.0;
  std::vector<double> occupations;
};

struct TimeSeriesRecord {
  double t = 0.0;
  std::vector<MemorySample> memories;
  std::size_t alive_count = 0;
  std::size_t overdamped_mode_count = 0;
};

struct LifetimeRow {
  double k = 0.0;
  double domain_size = 0.0;
  double lifetime = 0.0;
};

struct EventLogEntry {
  double t = 0.0;
  std::optional<std::size_t> event_index;  // empty for clock-driven entries
  std::string kind;  // record, overprint, forget, recall, refresh, perturb,
                     // association, confusion_warning
  std::string code_id;
  std::string detail;
};

struct ScenarioResults {
  std::size_t mode_count = 0;
  std::vector<TimeSeriesRecord> series;
  std::vector<LifetimeRow> lifetimes;
  RegimeReport regime;  // at the horizon
  std::vector<EventLogEntry> log;
};

std::vector<LifetimeRow> lifetime_table(const ScenarioConfig& config);

/// Deterministic run: at every time point the bank is evolved, events at that
/// time are applied in file order, then the sample (if any) is taken.
ScenarioResults run_scenario(const ScenarioConfig& config);

enum class OutputFormat { Csv, Json };

/// Csv: timeseries.csv, lifetimes.csv, regime.csv, events.csv.
/// Json: results.json. Throws Error(IoError).
std::vector<std::filesystem::path> emit(const ScenarioResults& results, OutputFormat format,
                                        const std::filesystem::path& out_dir);

/// The timeseries.csv payload.
std::string timeseries_csv(const ScenarioResults& results);

/// %.9g, with inf/-inf/nan spelled out.
std::string format_number(double value);

}  // namespace dqmem
