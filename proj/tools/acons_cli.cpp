// acons: dynamic active weighted average consensus toolkit.
#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "acons/commands.hpp"

namespace {

void configure_logging() {
  spdlog::set_pattern("[%l] %v");
  const char* level = std::getenv("ACONS_LOG");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::info);
}

int report(const acons::CommandResult& result) {
  for (const std::string& w : result.warnings) spdlog::warn("{}", w);
  for (const auto& f : result.files) spdlog::debug("wrote {}", f.string());
  if (result.exit_code == acons::kExitOk) {
    spdlog::info("{}", result.summary);
  } else {
    spdlog::error("{}", result.summary);
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Dynamic active weighted average consensus: analysis, simulation, certification"};
  app.require_subcommand(1);

  std::string config_path;
  acons::CommandOptions options;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string demo_name;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config_path, "Scenario config (JSON)");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory (default: config output.dir)");
    sub->add_option("--seed", seed, "Override the config seed");
    sub->add_option("--jobs", options.jobs, "Worker threads for certificate fitting")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--allow-unstable", options.allow_unstable,
                  "Run even when delta_c is not below the stable step bound");
  };

  auto* analyze = app.add_subcommand("analyze", "Subsystem spectra, Hurwitz/Schur verdicts, d_bar");
  auto* sim_ct = app.add_subcommand("simulate-ct", "Continuous-time simulation (RK4)");
  auto* sim_dt = app.add_subcommand("simulate-dt", "Discrete-time simulation");
  auto* contain = app.add_subcommand("containment", "Leader-follower containment run");
  auto* certify = app.add_subcommand("certify", "Fit envelope certificates and check bounds");
  auto* demo = app.add_subcommand("demo", "Run a canned scenario");
  for (auto* sub : {analyze, sim_ct, sim_dt, contain, certify}) add_common(sub, true);
  add_common(demo, false);
  demo->add_option("name", demo_name, "Scenario name")->required()->check(CLI::IsMember({"fig2", "fig4"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? acons::kExitOk : acons::kExitInvalidInput;
  }

  try {
    for (auto* sub : app.get_subcommands()) {
      for (auto* opt : sub->get_options()) {
        if (opt->get_name() == "--seed" && opt->count() > 0) options.seed = seed;
      }
    }
    if (demo->parsed()) {
      const acons::ScenarioConfig config = acons::demo_config(demo_name);
      options.out_dir = out_dir.empty() ? config.output_dir : out_dir;
      return report(acons::cmd_demo(demo_name, options));
    }
    const acons::ScenarioConfig config = acons::load_config(config_path);
    options.out_dir = out_dir.empty() ? config.output_dir : out_dir;
    spdlog::debug("loaded {} ({} agents)", config_path, config.agent_count());
    if (analyze->parsed()) return report(acons::cmd_analyze(config, options));
    if (sim_ct->parsed()) return report(acons::cmd_simulate(config, acons::TimeMode::kContinuous, options));
    if (sim_dt->parsed()) return report(acons::cmd_simulate(config, acons::TimeMode::kDiscrete, options));
    if (contain->parsed()) return report(acons::cmd_containment(config, options));
    if (certify->parsed()) return report(acons::cmd_certify(config, options));
  } catch (const acons::InvalidInput& e) {
    spdlog::error("invalid input: {}", e.what());
    return acons::kExitInvalidInput;
  } catch (const acons::NumericalError& e) {
    spdlog::error("numerical failure: {}", e.what());
    return acons::kExitCheckFailed;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return acons::kExitCheckFailed;
  }
  return acons::kExitOk;
}
