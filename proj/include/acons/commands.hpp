#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "acons/analysis.hpp"
#include "acons/config.hpp"

namespace acons {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitInvalidInput = 2 };

struct CommandOptions {
  std::filesystem::path out_dir = "out";
  std::optional<std::uint64_t> seed;  ///< overrides the config seed
  unsigned jobs = 1;
  bool allow_unstable = false;
};

struct CommandResult {
  int exit_code = kExitOk;
  std::string summary;
  std::vector<std::string> warnings;
  Json report;
  std::vector<std::filesystem::path> files;
};

CommandResult cmd_analyze(const ScenarioConfig& config, const CommandOptions& options);
CommandResult cmd_simulate(const ScenarioConfig& config, TimeMode mode,
                           const CommandOptions& options);
CommandResult cmd_containment(const ScenarioConfig& config, const CommandOptions& options);
CommandResult cmd_certify(const ScenarioConfig& config, const CommandOptions& options);

/// Canned scenarios: "fig2" (continuous time, switching activity, one
/// departure) and "fig4" (containment with ten leaders).
ScenarioConfig demo_config(const std::string& name);
CommandResult cmd_demo(const std::string& name, const CommandOptions& options);

/// Schedules of the certificate fit family: the config's weight patterns with
/// epoch lengths drawn from the declared (or observed) dwell range. Seed i of
/// the family is derived from (base_seed, fit_seeds[i]).
std::vector<ModeSchedule> fit_family(const ScenarioConfig& config, std::uint64_t base_seed);

/// Certificate for `mode` fitted over fit_family, with the per-schedule
/// transition sampling spread over `jobs` threads.
StabilityCertificate fit_config_certificate(const ScenarioConfig& config, TimeMode mode,
                                            std::uint64_t base_seed, unsigned jobs);

std::string format_double(double v);

}  // namespace acons
