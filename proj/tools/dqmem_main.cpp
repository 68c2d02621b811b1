// dqmem: scenario runner and oracle verification for the dissipative memory
// model.
//
//   dqmem run <config> --out <dir> --format csv|json
//   dqmem lifetimes <config>
//   dqmem verify-oracle [--dim D] [--theta-max X]
//
// Exit codes: 0 success, 1 parse/validation error, 2 runtime error.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dqmem/fock_oracle.hpp"
#include "dqmem/scenario.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

bool is_input_error(dqmem::ErrorCode code) {
  using dqmem::ErrorCode;
  return code == ErrorCode::ParseError || code == ErrorCode::ValidationError ||
         code == ErrorCode::UnknownKey;
}

dqmem::ScenarioConfig load(const std::string& path, std::optional<std::uint64_t> seed) {
  auto config = dqmem::load_scenario(path);
  if (seed) dqmem::override_seeds(config, *seed);
  return config;
}

int run_command(const std::string& config_path, const std::string& out_dir,
                const std::string& format, std::optional<std::uint64_t> seed, bool quiet) {
  const auto config = load(config_path, seed);
  const auto results = dqmem::run_scenario(config);
  const auto paths = dqmem::emit(
      results, format == "json" ? dqmem::OutputFormat::Json : dqmem::OutputFormat::Csv, out_dir);
  if (!quiet) {
    std::printf("%zu samples, %zu log entries\n", results.series.size(), results.log.size());
    for (const auto& p : paths) std::printf("wrote %s\n", p.string().c_str());
  }
  return 0;
}

int lifetimes_command(const std::string& config_path, std::optional<std::uint64_t> seed) {
  const auto config = load(config_path, seed);
  std::printf("%-16s %-16s %-16s\n", "k", "domain_size", "tau");
  for (const auto& row : dqmem::lifetime_table(config)) {
    std::printf("%-16s %-16s %-16s\n", dqmem::format_number(row.k).c_str(),
                dqmem::format_number(row.domain_size).c_str(),
                dqmem::format_number(row.lifetime).c_str());
  }
  return 0;
}

int verify_oracle_command(std::size_t dim, double theta_max, bool quiet) {
  const auto checks = dqmem::run_oracle_suite(dim, theta_max);
  std::size_t failed = 0;
  for (const auto& c : checks) {
    if (!c.passed) ++failed;
    if (!quiet || !c.passed) {
      std::printf("%s %-36s error=%.3e tol=%.0e\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                  c.error, c.tolerance);
    }
  }
  std::printf("%zu/%zu oracle checks passed (D=%zu, theta_max=%g)\n", checks.size() - failed,
              checks.size(), dim, theta_max);
  return failed == 0 ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dissipative quantum memory simulator"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  bool quiet = false;
  std::optional<std::uint64_t> seed;
  app.add_flag("--quiet", quiet, "Suppress progress output");
  app.add_option("--seed", seed, "Override every perturbation seed in the config");

  std::string config_path;
  std::string out_dir;
  std::string format = "csv";
  auto* run = app.add_subcommand("run", "Run a scenario and write its outputs");
  run->add_option("config", config_path, "Scenario file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* lifetimes = app.add_subcommand("lifetimes", "Print the lifetime table of a scenario");
  lifetimes->add_option("config", config_path, "Scenario file")->required();

  std::size_t dim = dqmem::kDefaultTruncation;
  double theta_max = 1.2;
  auto* verify = app.add_subcommand("verify-oracle", "Run the truncated Fock-space oracle suite");
  verify->add_option("--dim", dim, "Fock truncation per mode")->check(CLI::Range(2, 4096));
  verify->add_option("--theta-max", theta_max, "Largest squeeze parameter")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*run) return run_command(config_path, out_dir, format, seed, quiet);
    if (*lifetimes) return lifetimes_command(config_path, seed);
    if (*verify) return verify_oracle_command(dim, theta_max, quiet);
  } catch (const dqmem::Error& e) {
    std::fprintf(stderr, "dqmem: %s\n", e.what());
    return is_input_error(e.code()) ? kExitValidation : kExitRuntime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "dqmem: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
