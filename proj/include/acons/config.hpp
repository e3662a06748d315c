#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "acons/containment.hpp"
#include "acons/graph.hpp"
#include "acons/scenario.hpp"
#include "acons/schedule.hpp"
#include "acons/signals.hpp"

namespace acons {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Either a named generator ("ring", "path", "complete") or an explicit
/// adjacency matrix.
struct TopologySpec {
  std::string generator;
  std::size_t n = 0;
  double weight = 1.0;
  std::optional<Matrix> adjacency;

  [[nodiscard]] Topology build() const;
};

struct ScheduleSpec {
  double horizon = 0.0;
  std::vector<Epoch> epochs;
  std::optional<DwellStats> dwell;

  [[nodiscard]] ModeSchedule build() const { return ModeSchedule(epochs, horizon); }
};

struct RatesSpec {
  double h = 1e-2;
  double delta_c = 0.1;
  double delta_s = 0.1;
  std::optional<std::size_t> steps;  ///< defaults to floor(horizon / delta_c)
};

struct CertificateSpec {
  double safety_factor = 1.25;
  double grid_step = 0.1;
  std::size_t max_origins = 160;
  std::vector<std::uint64_t> fit_seeds{1, 2, 3, 4, 5};
  std::optional<double> min_dwell;  ///< fit family epoch length range;
  std::optional<double> max_dwell;  ///< defaults to the config epochs' range
  bool evaluate_bound = false;      ///< simulate commands also emit the bound
  std::vector<std::string> modes{"ct", "dt"};
};

struct ContainmentSpec {
  std::vector<LeaderPath> paths;
  double displacement_bound = 0.0;
  std::vector<ObservationEpoch> observations;
  std::vector<Point2> initial_positions;
  double delta_s = 1.0;
  double delta_c = 0.2;
  std::size_t steps = 0;
};

struct ScenarioConfig {
  int schema_version = kSchemaVersion;
  TopologySpec topology;
  std::optional<ScheduleSpec> schedule;
  std::vector<ReferenceSignal> signals;
  std::optional<Vector> x0;  ///< defaults to zeros
  std::optional<Vector> v0;  ///< defaults to zeros
  std::vector<Departure> departures;
  RatesSpec rates;
  CertificateSpec certificate;
  std::optional<ContainmentSpec> containment;
  std::uint64_t seed = 0;
  std::string output_dir = "out";

  /// Cross-field checks: dimensions, departure times, dwell declaration when
  /// bounds are requested. Messages name the offending JSON pointer.
  void validate() const;

  [[nodiscard]] std::size_t agent_count() const { return topology.build().size(); }
  [[nodiscard]] CtScenario ct_scenario() const;
  [[nodiscard]] DtScenario dt_scenario() const;
  [[nodiscard]] Vector initial_x() const;
  [[nodiscard]] Vector initial_v() const;
  [[nodiscard]] ContainmentSetup containment_setup() const;
};

/// Parses and validates. Errors are InvalidInput prefixed with the JSON
/// pointer of the offending value, e.g. "/schedule/epochs/2/weights".
ScenarioConfig parse_config(const Json& document);
ScenarioConfig load_config(const std::filesystem::path& path);
Json to_json(const ScenarioConfig& config);
Json signal_to_json(const ReferenceSignal& signal);

}  // namespace acons
