#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "acons/dt_sim.hpp"
#include "acons/geometry.hpp"
#include "acons/graph.hpp"
#include "acons/scenario.hpp"

namespace acons {

/// Piecewise-linear path through timed waypoints; held at the first waypoint
/// before it and at the last waypoint after it.
struct LeaderPath {
  std::vector<double> times;
  std::vector<Point2> waypoints;

  [[nodiscard]] Point2 position(double t) const;
};

class LeaderEnsemble {
 public:
  /// `displacement_bound` caps the distance any leader may move between two
  /// consecutive observation samples.
  LeaderEnsemble(std::vector<LeaderPath> paths, double displacement_bound);

  [[nodiscard]] std::size_t size() const { return paths_.size(); }
  [[nodiscard]] const std::vector<LeaderPath>& paths() const { return paths_; }
  [[nodiscard]] double displacement_bound() const { return displacement_bound_; }
  [[nodiscard]] Point2 position(std::size_t j, double t) const { return paths_.at(j).position(t); }
  [[nodiscard]] std::vector<Point2> positions(double t) const;
  /// Throws InvalidInput when a leader moves farther than the bound between
  /// samples l * period and (l + 1) * period, for samples in [0, horizon].
  void check_displacement(double period, double horizon) const;

 private:
  std::vector<LeaderPath> paths_;
  double displacement_bound_;
};

/// Per-follower sets of observed leader indices, valid from `start` until the
/// next epoch.
struct ObservationEpoch {
  double start = 0.0;
  std::vector<std::vector<std::size_t>> observed;
};

class ObservationMap {
 public:
  ObservationMap(std::vector<ObservationEpoch> epochs, std::size_t leader_count);

  [[nodiscard]] std::size_t follower_count() const { return epochs_.front().observed.size(); }
  [[nodiscard]] const std::vector<ObservationEpoch>& epochs() const { return epochs_; }
  [[nodiscard]] const std::vector<std::vector<std::size_t>>& observed_at(double t) const;

 private:
  std::vector<ObservationEpoch> epochs_;
};

/// Mean of the leader positions follower i observes at sample l, or nullopt
/// when it observes none (inactive).
std::optional<Point2> local_centroid(const LeaderEnsemble& leaders, const ObservationMap& map,
                                     double delta_s, std::size_t l, std::size_t i);

struct ContainmentSetup {
  Topology topology;
  ObservationMap observations;
  LeaderEnsemble leaders;
  double delta_s = 1.0;
  double delta_c = 0.2;
  std::size_t steps = 0;
};

/// The two per-coordinate discrete-time scenarios the containment run drives:
/// references are zero-order-hold local centroids, weights are 1 for
/// followers that observe at least one leader.
std::array<DtScenario, 2> coordinate_scenarios(const ContainmentSetup& setup);

struct ContainmentReport {
  std::vector<double> times;
  std::vector<std::vector<Point2>> followers;  ///< [k][i]
  std::vector<Point2> target;                  ///< nested centroid of the observed leaders
  std::vector<Hull2D> hulls;                   ///< hull of the observed leaders
  std::vector<std::vector<double>> distances;  ///< [k][i] |x_i - target|
  std::vector<double> max_error;
  std::vector<bool> target_in_hull;
  std::vector<std::vector<bool>> follower_in_hull;
  std::size_t target_violations = 0;
  std::size_t follower_outside = 0;
  double peak_error = 0.0;
  double d_bar = 0.0;
  std::array<DtTrajectory, 2> coordinates;
  std::vector<std::string> warnings;
};

/// Runs the consensus algorithm per coordinate. Throws InvalidInput when the
/// step is not below the stable bound for the induced weight patterns unless
/// allow_unstable is set.
ContainmentReport run_containment(const ContainmentSetup& setup,
                                  const std::vector<Point2>& initial_positions,
                                  bool allow_unstable = false, double hull_tol = 1e-9);

}  // namespace acons
