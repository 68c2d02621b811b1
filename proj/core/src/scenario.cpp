#include "dqmem/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace dqmem {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : Error(ErrorCode::ParseError,
            "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

ValidationError::ValidationError(std::string field, std::string reason)
    : Error(ErrorCode::ValidationError, field + ": " + reason),
      field_(std::move(field)),
      reason_(std::move(reason)) {}

EventError::EventError(std::size_t event_index, const Error& cause)
    : Error(cause.code(), "events[" + std::to_string(event_index) + "]: " + cause.what()),
      event_index_(event_index) {}

namespace {

// A whitespace-delimited token and its 1-based column.
struct Token {
  std::string_view text;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> to_double(std::string_view s) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

std::optional<std::uint64_t> to_uint(std::string_view s) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

struct Parser {
  std::size_t line_no = 0;

  [[noreturn]] void fail(std::size_t column, const std::string& what) const {
    throw ParseError(line_no, column, what);
  }

  double number(const Token& tok, std::string_view value, std::size_t offset) const {
    auto v = to_double(value);
    if (!v) fail(tok.column + offset, "expected a number, got '" + std::string(value) + "'");
    return *v;
  }

  std::uint64_t integer(const Token& tok, std::string_view value, std::size_t offset) const {
    auto v = to_uint(value);
    if (!v) {
      fail(tok.column + offset, "expected a non-negative integer, got '" + std::string(value) + "'");
    }
    return *v;
  }

  std::vector<double> list(const Token& tok, std::string_view value, std::size_t offset) const {
    std::vector<double> out;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = value.find(',', pos);
      const auto item = value.substr(pos, comma == std::string_view::npos ? value.npos : comma - pos);
      out.push_back(number(tok, item, offset + pos));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    return out;
  }
};

// Validated key/value settings; keeps the first line each key was seen on.
struct Settings {
  std::map<std::string, std::pair<std::string, std::size_t>, std::less<>> values;

  std::optional<std::string> get(std::string_view key) const {
    auto it = values.find(key);
    if (it == values.end()) return std::nullopt;
    return it->second.first;
  }
};

const std::set<std::string, std::less<>>& known_keys() {
  static const std::set<std::string, std::less<>> keys = {
      "grid.volume_L",
      "grid.mode_count_M",
      "damping.gamma",
      "schedule.kind",
      "schedule.T",
      "dissipative",
      "thresholds.epsilon_forget",
      "thresholds.match_threshold",
      "thresholds.assoc_threshold",
      "thresholds.perturb_threshold",
      "thresholds.m_eff",
      "horizon",
      "sample_dt",
  };
  return keys;
}

double require_number(const Settings& s, const std::string& key) {
  auto v = s.get(key);
  if (!v) throw ValidationError(key, "required");
  auto d = to_double(*v);
  if (!d || !std::isfinite(*d)) throw ValidationError(key, "not a finite number");
  return *d;
}

std::optional<double> optional_number(const Settings& s, const std::string& key) {
  if (!s.get(key)) return std::nullopt;
  return require_number(s, key);
}

ScenarioEvent parse_event(const Parser& p, const std::vector<Token>& tokens) {
  if (tokens.size() < 3) p.fail(tokens[0].column, "event needs a time and a kind");
  ScenarioEvent ev;
  ev.line = p.line_no;
  ev.t = p.number(tokens[1], tokens[1].text, 0);

  std::map<std::string, std::pair<std::string_view, std::size_t>, std::less<>> args;
  for (std::size_t i = 3; i < tokens.size(); ++i) {
    const auto& tok = tokens[i];
    const auto eq = tok.text.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      p.fail(tok.column, "expected name=value, got '" + std::string(tok.text) + "'");
    }
    auto [it, fresh] = args.emplace(std::string(tok.text.substr(0, eq)),
                                    std::pair{tok.text.substr(eq + 1), i});
    if (!fresh) p.fail(tok.column, "duplicate argument '" + it->first + "'");
  }

  std::set<std::string, std::less<>> allowed;
  auto take = [&](std::string_view name) -> std::optional<std::pair<Token, std::size_t>> {
    allowed.emplace(name);
    auto it = args.find(name);
    if (it == args.end()) return std::nullopt;
    const Token& tok = tokens[it->second.second];
    return std::pair{Token{it->second.first, tok.column}, name.size() + 1};
  };
  auto need = [&](std::string_view name) {
    auto v = take(name);
    if (!v) {
      p.fail(tokens[2].column, std::string(tokens[2].text) + " event needs '" +
                                   std::string(name) + "='");
    }
    return *v;
  };

  const std::string_view kind = tokens[2].text;
  if (kind == "record") {
    event::Record r;
    auto [code, off] = need("code");
    r.code = p.list(code, code.text, off);
    if (auto id = take("id")) r.id = std::string(id->first.text);
    ev.action = std::move(r);
  } else if (kind == "stimulus") {
    event::Stimulus s;
    auto [addr, off] = need("address");
    s.address = p.list(addr, addr.text, off);
    auto [energy, eoff] = need("energy");
    s.energy = p.number(energy, energy.text, eoff);
    ev.action = std::move(s);
  } else if (kind == "perturb") {
    event::Perturb pt;
    auto [amp, off] = need("amplitude");
    pt.amplitude = p.number(amp, amp.text, off);
    if (auto seed = take("seed")) pt.seed = p.integer(seed->first, seed->first.text, seed->second);
    ev.action = pt;
  } else if (kind == "refresh") {
    auto [id, off] = need("id");
    ev.action = event::Refresh{std::string(id.text)};
  } else if (kind == "associate") {
    event::Associate a;
    auto [id, off] = need("id");
    a.id = std::string(id.text);
    auto [hops, hoff] = need("hops");
    a.hops = static_cast<std::size_t>(p.integer(hops, hops.text, hoff));
    ev.action = std::move(a);
  } else if (kind == "sample") {
    ev.action = event::Sample{};
  } else {
    p.fail(tokens[2].column, "unknown event kind '" + std::string(kind) + "'");
  }

  for (const auto& [name, where] : args) {
    if (!allowed.contains(name)) {
      throw Error(ErrorCode::UnknownKey, "line " + std::to_string(p.line_no) + ", column " +
                                             std::to_string(tokens[where.second].column) +
                                             ": unknown event argument '" + name + "'");
    }
  }
  return ev;
}

void validate_events(ScenarioConfig& config) {
  std::size_t record_ordinal = 0;
  for (std::size_t i = 0; i < config.events.size(); ++i) {
    auto& ev = config.events[i];
    const std::string field = "events[" + std::to_string(i) + "]";
    if (i > 0 && ev.t < config.events[i - 1].t) {
      throw ValidationError("events", "not sorted by time");
    }
    if (!(ev.t >= 0.0 && ev.t <= config.horizon)) {
      throw ValidationError(field + ".t", "outside [0, horizon]");
    }
    auto check_occupations = [&](const std::vector<double>& v, const std::string& name) {
      if (v.size() != config.mode_count) throw ValidationError(field + "." + name, "length mismatch");
      for (double n : v) {
        if (!(n >= 0.0) || !std::isfinite(n)) {
          throw ValidationError(field + "." + name, "occupations must be finite and >= 0");
        }
      }
    };
    if (auto* r = std::get_if<event::Record>(&ev.action)) {
      ++record_ordinal;
      check_occupations(r->code, "code");
      if (r->id.empty()) r->id = "code" + std::to_string(record_ordinal);
    } else if (auto* s = std::get_if<event::Stimulus>(&ev.action)) {
      check_occupations(s->address, "address");
      if (!(s->energy >= 0.0)) throw ValidationError(field + ".energy", "must be >= 0");
    } else if (auto* pt = std::get_if<event::Perturb>(&ev.action)) {
      if (!(pt->amplitude >= 0.0) || !std::isfinite(pt->amplitude)) {
        throw ValidationError(field + ".amplitude", "must be finite and >= 0");
      }
    }
  }
}

}  // namespace

BankConfig ScenarioConfig::bank_config() const {
  return BankConfig{.grid = grid(),
                    .damping = Damping(gamma),
                    .schedule = schedule,
                    .dissipative = dissipative,
                    .m_eff = m_eff,
                    .match_threshold = match_threshold,
                    .assoc_threshold = assoc_threshold,
                    .epsilon_forget = epsilon_forget};
}

ScenarioConfig parse_scenario(std::string_view text) {
  Parser p;
  Settings settings;
  ScenarioConfig config;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++p.line_no;

    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (trim(raw).empty()) continue;

    const auto tokens = tokenize(raw);
    if (tokens.front().text == "event") {
      config.events.push_back(parse_event(p, tokens));
      continue;
    }

    const auto eq = raw.find('=');
    if (eq == std::string_view::npos) {
      p.fail(tokens.front().column, "expected 'key = value' or 'event ...'");
    }
    const auto key = trim(raw.substr(0, eq));
    const auto value = trim(raw.substr(eq + 1));
    const std::size_t key_col = tokens.front().column;
    if (key.empty()) p.fail(key_col, "missing key");
    if (value.empty()) p.fail(eq + 2, "missing value for '" + std::string(key) + "'");
    if (!known_keys().contains(key)) {
      throw Error(ErrorCode::UnknownKey, "line " + std::to_string(p.line_no) + ", column " +
                                             std::to_string(key_col) + ": unknown key '" +
                                             std::string(key) + "'");
    }
    auto [it, fresh] = settings.values.emplace(std::string(key),
                                               std::pair{std::string(value), p.line_no});
    if (!fresh) throw ValidationError(it->first, "duplicate key");
  }

  config.volume = require_number(settings, "grid.volume_L");
  if (!(config.volume > 0.0)) throw ValidationError("grid.volume_L", "must be positive");

  {
    auto m = settings.get("grid.mode_count_M");
    if (!m) throw ValidationError("grid.mode_count_M", "required");
    auto v = to_uint(*m);
    if (!v || *v == 0) throw ValidationError("grid.mode_count_M", "must be a positive integer");
    config.mode_count = static_cast<std::size_t>(*v);
  }

  config.gamma = require_number(settings, "damping.gamma");
  if (!(config.gamma >= 0.0)) throw ValidationError("damping.gamma", "must be >= 0");

  const std::string kind = settings.get("schedule.kind").value_or("constant");
  const auto T = optional_number(settings, "schedule.T");
  if (kind == "constant") {
    if (T) throw ValidationError("schedule.T", "only valid for exp_decay");
    config.schedule = FrequencySchedule::constant();
  } else if (kind == "exp_decay") {
    if (!T) throw ValidationError("schedule.T", "required for exp_decay");
    if (!(*T > 0.0)) throw ValidationError("schedule.T", "must be positive");
    config.schedule = FrequencySchedule::exp_decay(*T);
  } else {
    throw ValidationError("schedule.kind", "expected constant or exp_decay");
  }

  if (auto d = settings.get("dissipative")) {
    if (*d == "true") {
      config.dissipative = true;
    } else if (*d == "false") {
      config.dissipative = false;
    } else {
      throw ValidationError("dissipative", "expected true or false");
    }
  }

  config.epsilon_forget =
      optional_number(settings, "thresholds.epsilon_forget").value_or(kDefaultForgetThreshold);
  if (!(config.epsilon_forget > 0.0)) {
    throw ValidationError("thresholds.epsilon_forget", "must be positive");
  }
  config.match_threshold =
      optional_number(settings, "thresholds.match_threshold").value_or(kDefaultMatchThreshold);
  if (!(config.match_threshold > 0.0 && config.match_threshold <= 1.0)) {
    throw ValidationError("thresholds.match_threshold", "must lie in (0, 1]");
  }
  config.assoc_threshold =
      optional_number(settings, "thresholds.assoc_threshold").value_or(kDefaultAssocThreshold);
  if (!(config.assoc_threshold >= 0.0 && config.assoc_threshold < 1.0)) {
    throw ValidationError("thresholds.assoc_threshold", "must lie in [0, 1)");
  }
  if (!(config.match_threshold > config.assoc_threshold)) {
    throw ValidationError("thresholds.match_threshold", "must exceed assoc_threshold");
  }
  config.perturb_threshold =
      optional_number(settings, "thresholds.perturb_threshold").value_or(0.0);
  if (!(config.perturb_threshold >= 0.0)) {
    throw ValidationError("thresholds.perturb_threshold", "must be >= 0");
  }
  config.m_eff = optional_number(settings, "thresholds.m_eff");
  if (config.m_eff && !(*config.m_eff >= 0.0)) {
    throw ValidationError("thresholds.m_eff", "must be >= 0");
  }

  config.horizon = require_number(settings, "horizon");
  if (!(config.horizon > 0.0)) throw ValidationError("horizon", "must be positive");
  config.sample_dt = optional_number(settings, "sample_dt").value_or(config.horizon / 200.0);
  if (!(config.sample_dt > 0.0)) throw ValidationError("sample_dt", "must be positive");

  validate_events(config);
  return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

void override_seeds(ScenarioConfig& config, std::uint64_t seed) {
  std::uint64_t j = 0;
  for (auto& ev : config.events) {
    if (auto* pt = std::get_if<event::Perturb>(&ev.action)) pt->seed = seed + j++;
  }
}

std::vector<LifetimeRow> lifetime_table(const ScenarioConfig& config) {
  const auto grid = config.grid();
  const auto profile = lifetime_profile(grid, Damping(config.gamma), config.schedule);
  std::vector<LifetimeRow> rows;
  rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double k = grid.momentum(i);
    rows.push_back({k, domain_size(k), profile.lifetimes[i]});
  }
  return rows;
}

namespace {

class Runner {
 public:
  explicit Runner(const ScenarioConfig& config)
      : config_(config),
        grid_(config.grid()),
        damping_(config.gamma),
        bank_(config.bank_config()) {}

  ScenarioResults run() {
    ScenarioResults results;
    results.mode_count = grid_.size();
    results.lifetimes = lifetime_table(config_);

    const auto steps = static_cast<std::size_t>(
        std::floor(config_.horizon / config_.sample_dt + 1e-9));
    std::vector<double> sample_times;
    sample_times.reserve(steps + 1);
    for (std::size_t j = 0; j <= steps; ++j) {
      sample_times.push_back(std::min(static_cast<double>(j) * config_.sample_dt, config_.horizon));
    }

    const auto& events = config_.events;
    std::size_t ei = 0;
    std::size_t si = 0;
    while (ei < events.size() || si < sample_times.size()) {
      double t = kInfiniteLifetime;
      if (ei < events.size()) t = events[ei].t;
      if (si < sample_times.size()) t = std::min(t, sample_times[si]);

      log_forgotten(bank_.advance_to(t), t, std::nullopt);
      bool take_sample = false;
      while (ei < events.size() && events[ei].t == t) {
        try {
          take_sample |= apply(events[ei], ei);
        } catch (const EventError&) {
          throw;
        } catch (const Error& e) {
          throw EventError(ei, e);
        }
        ++ei;
      }
      while (si < sample_times.size() && sample_times[si] == t) {
        take_sample = true;
        ++si;
      }
      if (take_sample) results.series.push_back(sample(t));
    }

    results.regime = regime_report(grid_, damping_, config_.schedule, config_.horizon);
    results.log = std::move(log_);
    return results;
  }

 private:
  void log(double t, std::optional<std::size_t> index, std::string kind, std::string code_id,
           std::string detail) {
    log_.push_back({t, index, std::move(kind), std::move(code_id), std::move(detail)});
  }

  void log_forgotten(const std::vector<std::string>& ids, double t,
                     std::optional<std::size_t> index) {
    for (const auto& id : ids) log(t, index, "forget", id, "reduced to the empty vacuum");
  }

  // Returns true for sample events.
  bool apply(const ScenarioEvent& ev, std::size_t index) {
    const double t = ev.t;
    return std::visit(
        [&](const auto& action) -> bool {
          using A = std::decay_t<decltype(action)>;
          if constexpr (std::is_same_v<A, event::Record>) {
            const auto result = bank_.record(MemoryCode{action.code, action.id, t}, t);
            log_forgotten(result.forgotten, t, index);
            for (const auto& id : result.overprinted) {
              log(t, index, "overprint", id, "destroyed by recording '" + action.id + "'");
            }
            log(t, index, "record", action.id, "");
            if (bank_.state(action.id).status == MemoryStatus::Forgotten) {
              log(t, index, "forget", action.id, "recorded below epsilon_forget");
            }
          } else if constexpr (std::is_same_v<A, event::Stimulus>) {
            const auto r = bank_.recall({MemoryCode{action.address, "address", t}, action.energy}, t);
            std::string detail = "outcome=" + std::string(to_string(r.outcome)) +
                                 " overlap=" + format_number(r.overlap);
            if (r.outcome == RecallOutcome::ContinuousFlow) {
              detail += " flow=";
              for (std::size_t i = 0; i < r.flow.size(); ++i) {
                detail += (i ? ";" : "") + r.flow[i];
              }
            }
            log(t, index, "recall", r.code_id, std::move(detail));
          } else if constexpr (std::is_same_v<A, event::Perturb>) {
            const bool active = action.amplitude >= config_.perturb_threshold;
            const auto forgotten =
                bank_.perturb(action.amplitude, config_.perturb_threshold, action.seed);
            log(t, index, "perturb", "",
                "amplitude=" + format_number(action.amplitude) +
                    " seed=" + std::to_string(action.seed) +
                    (active ? " applied" : " below threshold"));
            log_forgotten(forgotten, t, index);
          } else if constexpr (std::is_same_v<A, event::Refresh>) {
            bank_.refresh(action.id);
            log(t, index, "refresh", action.id, "");
          } else if constexpr (std::is_same_v<A, event::Associate>) {
            const auto r = bank_.associate(action.id, action.hops);
            std::string path;
            for (std::size_t i = 0; i < r.path.size(); ++i) path += (i ? ">" : "") + r.path[i];
            log(t, index, "association", action.id, "path=" + path);
            if (r.confusion_warning) {
              log(t, index, "confusion_warning", action.id,
                  "assoc_threshold <= 0 connects every memory");
            }
          } else {
            return true;
          }
          return false;
        },
        ev.action);
  }

  TimeSeriesRecord sample(double t) const {
    TimeSeriesRecord rec;
    rec.t = t;
    for (const auto& s : bank_.states()) {
      rec.memories.push_back({s.code_id(), s.status, entropy(s.current), s.current.occupations});
      if (s.status == MemoryStatus::Alive) ++rec.alive_count;
    }
    rec.overdamped_mode_count =
        regime_report(grid_, damping_, config_.schedule, t, 1).overdamped_count;
    return rec;
  }

  const ScenarioConfig& config_;
  ModeGrid grid_;
  Damping damping_;
  MemoryBank bank_;
  std::vector<EventLogEntry> log_;
};

}  // namespace

ScenarioResults run_scenario(const ScenarioConfig& config) { return Runner(config).run(); }

}  // namespace dqmem
