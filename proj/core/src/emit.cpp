#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "dqmem/scenario.hpp"

namespace dqmem {
namespace {

using Json = nlohmann::ordered_json;

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

// JSON has no infinity; non-finite values are written as strings.
Json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

std::filesystem::path write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << body;
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
  return path;
}

std::string lifetimes_csv(const ScenarioResults& r) {
  std::string out = "k,domain_size,tau\n";
  for (const auto& row : r.lifetimes) {
    out += format_number(row.k) + ',' + format_number(row.domain_size) + ',' +
           format_number(row.lifetime) + '\n';
  }
  return out;
}

std::string regime_csv(const ScenarioResults& r) {
  const auto& g = r.regime;
  std::string out = "k,domain_size,competition_ratio,overdamped\n";
  for (std::size_t i = 0; i < g.momenta.size(); ++i) {
    out += format_number(g.momenta[i]) + ',' + format_number(g.domain_sizes[i]) + ',' +
           format_number(g.ratios[i]) + ',' + (g.overdamped[i] ? "1" : "0") + '\n';
  }
  return out;
}

std::string events_csv(const ScenarioResults& r) {
  std::string out = "t,event_index,kind,code_id,detail\n";
  for (const auto& e : r.log) {
    out += format_number(e.t) + ',' +
           (e.event_index ? std::to_string(*e.event_index) : std::string()) + ',' + e.kind +
           ',' + csv_quote(e.code_id) + ',' + csv_quote(e.detail) + '\n';
  }
  return out;
}

Json results_json(const ScenarioResults& r) {
  Json doc;
  doc["mode_count"] = r.mode_count;

  Json series = Json::array();
  for (const auto& rec : r.series) {
    Json row;
    row["t"] = rec.t;
    row["alive_count"] = rec.alive_count;
    row["overdamped_mode_count"] = rec.overdamped_mode_count;
    Json memories = Json::array();
    for (const auto& m : rec.memories) {
      Json jm;
      jm["code_id"] = m.code_id;
      jm["status"] = std::string(to_string(m.status));
      jm["entropy"] = m.entropy;
      jm["occupations"] = m.occupations;
      memories.push_back(std::move(jm));
    }
    row["memories"] = std::move(memories);
    series.push_back(std::move(row));
  }
  doc["series"] = std::move(series);

  Json lifetimes = Json::array();
  for (const auto& row : r.lifetimes) {
    lifetimes.push_back({{"k", row.k},
                         {"domain_size", row.domain_size},
                         {"tau", json_number(row.lifetime)}});
  }
  doc["lifetimes"] = std::move(lifetimes);

  const auto& g = r.regime;
  Json regime;
  regime["t"] = g.t;
  regime["overdamped_count"] = g.overdamped_count;
  regime["underdamped_count"] = g.underdamped_count;
  regime["mean_domain_size"] = g.mean_domain_size;
  regime["mean_surviving_domain_size"] = g.mean_surviving_domain_size;
  Json modes = Json::array();
  for (std::size_t i = 0; i < g.momenta.size(); ++i) {
    modes.push_back({{"k", g.momenta[i]},
                     {"domain_size", g.domain_sizes[i]},
                     {"competition_ratio", json_number(g.ratios[i])},
                     {"overdamped", static_cast<bool>(g.overdamped[i])}});
  }
  regime["modes"] = std::move(modes);
  Json classes = Json::array();
  for (const auto& c : g.size_classes) {
    classes.push_back({{"min_domain_size", c.min_domain_size},
                       {"max_domain_size", c.max_domain_size},
                       {"mode_count", c.mode_count},
                       {"surviving", c.surviving},
                       {"surviving_fraction", c.surviving_fraction()}});
  }
  regime["size_classes"] = std::move(classes);
  doc["regime"] = std::move(regime);

  Json events = Json::array();
  for (const auto& e : r.log) {
    Json je;
    je["t"] = e.t;
    je["event_index"] = e.event_index ? Json(*e.event_index) : Json(nullptr);
    je["kind"] = e.kind;
    je["code_id"] = e.code_id;
    je["detail"] = e.detail;
    events.push_back(std::move(je));
  }
  doc["events"] = std::move(events);
  return doc;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

std::string timeseries_csv(const ScenarioResults& results) {
  std::string out = "t,code_id,status,entropy";
  for (std::size_t k = 1; k <= results.mode_count; ++k) out += ",N_" + std::to_string(k);
  out += '\n';
  for (const auto& rec : results.series) {
    for (const auto& m : rec.memories) {
      out += format_number(rec.t) + ',' + m.code_id + ',' + std::string(to_string(m.status)) +
             ',' + format_number(m.entropy);
      for (double n : m.occupations) out += ',' + format_number(n);
      out += '\n';
    }
  }
  return out;
}

std::vector<std::filesystem::path> emit(const ScenarioResults& results, OutputFormat format,
                                        const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create '" + out_dir.string() + "': " + ec.message());

  std::vector<std::filesystem::path> paths;
  if (format == OutputFormat::Csv) {
    paths.push_back(write_file(out_dir / "timeseries.csv", timeseries_csv(results)));
    paths.push_back(write_file(out_dir / "lifetimes.csv", lifetimes_csv(results)));
    paths.push_back(write_file(out_dir / "regime.csv", regime_csv(results)));
    paths.push_back(write_file(out_dir / "events.csv", events_csv(results)));
  } else {
    paths.push_back(write_file(out_dir / "results.json", results_json(results).dump(2) + '\n'));
  }
  return paths;
}

}  // namespace dqmem
